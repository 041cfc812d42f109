#![allow(clippy::result_large_err)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use formal_hodge::commands::{self, CmdResult, Diagnostic};
use formal_hodge::generator::{GenProfile, Kind};
use formal_hodge::io::{read_object, Object};

#[derive(Parser)]
#[command(name = "fhs", version, about = "Formal Hodge structures and 1-motives over Q(i)")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a document.
    Validate { file: PathBuf },
    /// Etale part of an object, motive or morphism.
    Etale { file: PathBuf },
    /// The connected object pi(X).
    Connected { file: PathBuf },
    /// Connected part of a special object or motive.
    SpecialPart { file: PathBuf },
    /// Dual (FHS, morphism, MHS) or Cartier dual (motive).
    Dual { file: PathBuf },
    /// Formal realization of a motive or motive morphism.
    Realize { file: PathBuf },
    /// The motive of a free FHS (or the map of motives of a morphism).
    Arrow { file: PathBuf },
    /// Hodge realization of an etale motive.
    Hodge { file: PathBuf },
    /// Universal vector extension of an etale motive.
    UnivExt { file: PathBuf },
    /// Kernel embedding of a morphism.
    Kernel { file: PathBuf },
    /// Cokernel projection of a morphism.
    Cokernel { file: PathBuf },
    /// Exactness of a sequence at every node and component.
    CheckExact { file: PathBuf },
    /// Hom(X, Y) with generators.
    Hom { x: PathBuf, y: PathBuf },
    /// The comparison isomorphism of the equivalence for an FHS or motive.
    Roundtrip { file: PathBuf },
    /// Look for an isomorphism between two objects.
    CompareIso { x: PathBuf, y: PathBuf },
    /// Emit a random instance.
    Gen {
        #[arg(long)]
        profile: Kind,
        #[arg(long)]
        seed: u64,
        /// Use the reduced size bounds.
        #[arg(long)]
        small: bool,
    },
    /// Run the acceptance battery.
    Suite {
        #[arg(long, default_value_t = 1000)]
        seeds: u64,
        /// Run only this criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

fn load(path: &Path) -> Result<Object, Diagnostic> {
    Ok(read_object(path)?)
}

fn dispatch(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Validate { file } => commands::validate(&load(&file)?),
        Cmd::Etale { file } => commands::etale(load(&file)?),
        Cmd::Connected { file } => commands::connected(load(&file)?),
        Cmd::SpecialPart { file } => commands::special_part(load(&file)?),
        Cmd::Dual { file } => commands::dual(load(&file)?),
        Cmd::Realize { file } => commands::realize(load(&file)?),
        Cmd::Arrow { file } => commands::arrow(load(&file)?),
        Cmd::Hodge { file } => commands::hodge(load(&file)?),
        Cmd::UnivExt { file } => commands::univ_ext(load(&file)?),
        Cmd::Kernel { file } => commands::kernel(load(&file)?),
        Cmd::Cokernel { file } => commands::cokernel(load(&file)?),
        Cmd::CheckExact { file } => commands::check_exact_cmd(load(&file)?),
        Cmd::Hom { x, y } => commands::hom(load(&x)?, load(&y)?),
        Cmd::Roundtrip { file } => commands::roundtrip(load(&file)?),
        Cmd::CompareIso { x, y } => commands::compare_iso(load(&x)?, load(&y)?),
        Cmd::Gen { profile, seed, small } => {
            let p = if small { GenProfile::small(profile) } else { GenProfile::new(profile) };
            commands::generate(&p, seed)
        }
        Cmd::Suite { seeds, criterion } => commands::suite(seeds, criterion),
    }
}

fn emit(value: &serde_json::Value, output: Option<&Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    match output {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let (value, diag) = match dispatch(cli.cmd) {
        Ok(v) => (Some(v), None),
        Err(mut d) => (d.report.take(), Some(d)),
    };
    if let Some(v) = value {
        if let Err(e) = emit(&v, output.as_deref()) {
            eprintln!("{}", serde_json::json!({ "error": "Output", "message": e.to_string() }));
            return ExitCode::from(commands::EXIT_MALFORMED);
        }
    }
    match diag {
        None => ExitCode::from(commands::EXIT_OK),
        Some(d) => {
            eprintln!("{}", d.to_json());
            ExitCode::from(d.exit)
        }
    }
}
