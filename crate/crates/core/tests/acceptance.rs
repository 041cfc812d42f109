//! The acceptance battery at full size. Prints one line per criterion and
//! exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use formal_hodge::suite::{run_criterion, CriterionReport, CRITERIA};

const SEEDS: u64 = 1000;
const ROUNDTRIP_BUDGET: Duration = Duration::from_secs(120);

fn line(id: u8, name: &str, passed: bool, detail: &str) {
    println!("criterion {id} [{}] {name}: {detail}", if passed { "PASS" } else { "FAIL" });
}

fn describe(r: &CriterionReport) -> String {
    let mut s = format!("{} samples, {} failures", r.samples, r.failures);
    if let Some((case, msg)) = &r.first_failure {
        s.push_str(&format!("; first failure {case}: {msg}"));
    }
    s
}

fn suite_bytes() -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fhs"))
        .args(["suite", "--seeds", &SEEDS.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("suite exited with {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn main() -> ExitCode {
    let mut all = true;
    for (id, name) in CRITERIA {
        let start = Instant::now();
        let report = run_criterion(id, SEEDS);
        let elapsed = start.elapsed();
        let mut passed = report.passed;
        let mut detail = describe(&report);
        if id == 1 {
            passed &= elapsed < ROUNDTRIP_BUDGET;
            detail.push_str(&format!(
                "; wall time {:.1}s (budget {}s)",
                elapsed.as_secs_f64(),
                ROUNDTRIP_BUDGET.as_secs()
            ));
        }
        line(id, name, passed, &detail);
        all &= passed;
    }

    let (passed, detail) = match (suite_bytes(), suite_bytes()) {
        (Ok(a), Ok(b)) if a == b => (true, format!("two runs of `suite --seeds {SEEDS}` agree ({} bytes)", a.len())),
        (Ok(a), Ok(b)) => (false, format!("reports differ ({} vs {} bytes)", a.len(), b.len())),
        (Err(e), _) | (_, Err(e)) => (false, e),
    };
    line(9, "determinism", passed, &detail);
    all &= passed;

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
