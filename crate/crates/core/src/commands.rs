//! One function per command-line subcommand. Each takes parsed documents and
//! returns either a JSON value for stdout or a [`Diagnostic`].

#![allow(clippy::result_large_err)]

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::fhs::{check_exact, hom_group, FhsIso, FhsMorphism};
use crate::generator::{gen, GenProfile};
use crate::io::{IoError, Object};
use crate::mhs::MhsMorphism;
use crate::motive::MotiveIso;
use crate::realize;
use crate::suite::{instance_fingerprint, run_criterion, run_suite, SuiteReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_MALFORMED: u8 = 2;

/// A failure report, printed as JSON on stderr.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    #[serde(skip)]
    pub exit: u8,
    pub error: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
    /// Report to print on stdout alongside the diagnostic.
    #[serde(skip)]
    pub report: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Location {
    pub place: &'static str,
    pub index: usize,
    pub component: &'static str,
}

impl Diagnostic {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostic serializes")
    }

    fn wrong_kind(cmd: &str, obj: &Object) -> Diagnostic {
        Diagnostic {
            exit: EXIT_MALFORMED,
            error: "WrongKind".into(),
            message: format!("{cmd} does not accept a {} document", kind_name(obj)),
            location: None,
            report: None,
        }
    }
}

impl From<Error> for Diagnostic {
    fn from(e: Error) -> Self {
        Diagnostic { exit: EXIT_INVALID, error: e.code(), message: e.to_string(), location: None, report: None }
    }
}

impl From<IoError> for Diagnostic {
    fn from(e: IoError) -> Self {
        let exit = if matches!(e, IoError::Malformed(_)) { EXIT_MALFORMED } else { EXIT_INVALID };
        let location = match &e {
            IoError::InSequence { place, index, component, .. } => Some(Location { place, index: *index, component }),
            _ => None,
        };
        Diagnostic { exit, error: e.code(), message: e.to_string(), location, report: None }
    }
}

pub type CmdResult = Result<Value, Diagnostic>;

fn kind_name(obj: &Object) -> &'static str {
    match obj {
        Object::Mhs(_) => "mhs1",
        Object::Fhs(_) => "fhs1",
        Object::Motive(_) => "motive",
        Object::FhsMorphism(_) => "fhs1 morphism",
        Object::MotiveMorphism(_) => "motive morphism",
        Object::MhsMorphism(_) => "mhs1 morphism",
        Object::Sequence(_) => "sequence",
    }
}

fn doc(obj: Object) -> Value {
    serde_json::to_value(obj.to_document()).expect("documents serialize")
}

fn fhs_iso(iso: FhsIso) -> Value {
    json!({
        "verified": iso.verify().is_ok(),
        "forward": doc(Object::FhsMorphism(iso.forward)),
        "backward": doc(Object::FhsMorphism(iso.backward)),
    })
}

fn motive_iso(iso: MotiveIso) -> Value {
    json!({
        "verified": true,
        "forward": doc(Object::MotiveMorphism(iso.forward)),
        "backward": doc(Object::MotiveMorphism(iso.backward)),
    })
}

/// Parsing already validated the document; this reports what it is.
pub fn validate(obj: &Object) -> CmdResult {
    let summary = match obj {
        Object::Fhs(x) => json!({
            "invariants": x.invariants(),
            "free": x.is_free(),
            "etale": x.is_etale(),
            "connected": x.is_connected(),
            "special": x.is_special(),
        }),
        Object::Motive(m) => json!({
            "s": m.s(), "r": m.r(), "n": m.n(),
            "lattice_rank": m.lattice_rank(),
            "etale": m.is_etale(),
            "connected": m.is_connected(),
            "special": m.is_special(),
        }),
        Object::Mhs(h) => json!({ "graded_ranks": h.graded_ranks(), "free": h.is_free() }),
        Object::MhsMorphism(f) => json!({ "strict": f.is_strict() }),
        Object::FhsMorphism(phi) => json!({ "zero": phi.is_zero(), "identity": phi.is_identity() }),
        Object::MotiveMorphism(f) => json!({ "identity": f.is_identity() }),
        Object::Sequence(maps) => json!({ "length": maps.len() }),
    };
    Ok(json!({ "valid": true, "kind": kind_name(obj), "summary": summary }))
}

/// `X_et`, `M_et`, or the etale part of a map.
pub fn etale(obj: Object) -> CmdResult {
    Ok(doc(match obj {
        Object::Fhs(x) => Object::Fhs(x.etale_part()),
        Object::FhsMorphism(phi) => Object::FhsMorphism(phi.etale_part()),
        Object::Motive(m) => Object::Motive(m.etale_motive()),
        other => return Err(Diagnostic::wrong_kind("etale", &other)),
    }))
}

/// `pi(X)`: the connected object with the same `H0` and `V`.
pub fn connected(obj: Object) -> CmdResult {
    Ok(doc(match obj {
        Object::Fhs(x) => Object::Fhs(x.pi_connected()),
        Object::FhsMorphism(phi) => Object::FhsMorphism(phi.pi_connected()),
        other => return Err(Diagnostic::wrong_kind("connected", &other)),
    }))
}

/// `X0` or `M0` of a special object.
pub fn special_part(obj: Object) -> CmdResult {
    Ok(doc(match obj {
        Object::Fhs(x) => Object::Fhs(x.connected_part()?),
        Object::Motive(m) => Object::Motive(m.connected_part()?),
        other => return Err(Diagnostic::wrong_kind("special-part", &other)),
    }))
}

pub fn dual(obj: Object) -> CmdResult {
    Ok(doc(match obj {
        Object::Fhs(x) => Object::Fhs(x.dual()?),
        Object::FhsMorphism(phi) => Object::FhsMorphism(phi.dual()?),
        Object::Motive(m) => Object::Motive(realize::cartier_dual(&m)?),
        Object::Mhs(h) => Object::Mhs(h.ihom_tate()?),
        Object::MhsMorphism(f) => Object::MhsMorphism(f.ihom_tate()?),
        other => return Err(Diagnostic::wrong_kind("dual", &other)),
    }))
}

pub fn realize(obj: Object) -> CmdResult {
    Ok(doc(match obj {
        Object::Motive(m) => Object::Fhs(realize::t_formal(&m)?),
        Object::MotiveMorphism(f) => Object::FhsMorphism(realize::t_formal_morphism(&f)?),
        other => return Err(Diagnostic::wrong_kind("realize", &other)),
    }))
}

pub fn arrow(obj: Object) -> CmdResult {
    Ok(doc(match obj {
        Object::Fhs(x) => Object::Motive(realize::arrow(&x)?),
        Object::FhsMorphism(phi) => Object::MotiveMorphism(realize::arrow_morphism(&phi)?),
        other => return Err(Diagnostic::wrong_kind("arrow", &other)),
    }))
}

pub fn hodge(obj: Object) -> CmdResult {
    match obj {
        Object::Motive(m) => Ok(doc(Object::Mhs(realize::t_hodge(&m)?))),
        other => Err(Diagnostic::wrong_kind("hodge", &other)),
    }
}

pub fn univ_ext(obj: Object) -> CmdResult {
    match obj {
        Object::Motive(m) => Ok(doc(Object::Motive(m.universal_vector_extension()?))),
        other => Err(Diagnostic::wrong_kind("univ-ext", &other)),
    }
}

/// The kernel embedding of a morphism.
pub fn kernel(obj: Object) -> CmdResult {
    Ok(doc(match obj {
        Object::FhsMorphism(phi) => Object::FhsMorphism(phi.kernel()?),
        Object::MhsMorphism(f) => {
            let (k, emb) = f.kernel()?;
            Object::MhsMorphism(MhsMorphism::new(k, f.source().clone(), emb)?)
        }
        other => return Err(Diagnostic::wrong_kind("kernel", &other)),
    }))
}

/// The cokernel projection of a morphism.
pub fn cokernel(obj: Object) -> CmdResult {
    Ok(doc(match obj {
        Object::FhsMorphism(phi) => Object::FhsMorphism(phi.cokernel()?),
        Object::MhsMorphism(f) => {
            let (c, proj) = f.cokernel()?;
            Object::MhsMorphism(MhsMorphism::new(f.target().clone(), c, proj)?)
        }
        other => return Err(Diagnostic::wrong_kind("cokernel", &other)),
    }))
}

/// Exactness report; a non-exact sequence is a domain failure naming the
/// first failing node and component.
pub fn check_exact_cmd(obj: Object) -> CmdResult {
    let maps = match obj {
        Object::Sequence(maps) => maps,
        other => return Err(Diagnostic::wrong_kind("check-exact", &other)),
    };
    let report = check_exact(&maps)?;
    let value = serde_json::to_value(&report).expect("report serializes");
    match report.first_failure() {
        None => Ok(value),
        Some((node, component)) => Err(Diagnostic {
            exit: EXIT_INVALID,
            error: "NotExact".into(),
            message: format!("sequence is not exact at node {node}, component {component}"),
            location: Some(Location { place: "node", index: node, component }),
            report: Some(value),
        }),
    }
}

pub fn hom(x: Object, y: Object) -> CmdResult {
    let (x, y) = match (x, y) {
        (Object::Fhs(x), Object::Fhs(y)) => (x, y),
        (other, Object::Fhs(_)) | (_, other) => return Err(Diagnostic::wrong_kind("hom", &other)),
    };
    let h = hom_group(&x, &y)?;
    let maps = |v: Vec<FhsMorphism>| v.into_iter().map(|m| doc(Object::FhsMorphism(m))).collect::<Vec<_>>();
    Ok(json!({
        "linear_dim": h.linear_dim(),
        "lattice_rank": h.lattice_rank(),
        "dimension_obstruction": h.dimension_obstruction(),
        "linear_part": maps(h.linear_part),
        "lattice_part": maps(h.lattice_part),
    }))
}

/// `X -> T(arrow X)` or `M -> arrow(T M)`.
pub fn roundtrip(obj: Object) -> CmdResult {
    match obj {
        Object::Fhs(x) => Ok(fhs_iso(realize::roundtrip_fm(&x)?)),
        Object::Motive(m) => Ok(motive_iso(realize::roundtrip_mf(&m)?)),
        other => Err(Diagnostic::wrong_kind("roundtrip", &other)),
    }
}

/// Isomorphism test with transcript. Motives are compared through their
/// formal realizations.
pub fn compare_iso(x: Object, y: Object) -> CmdResult {
    let as_fhs = |o: Object| match o {
        Object::Fhs(x) => Ok(x),
        Object::Motive(m) => Ok(realize::t_formal(&m)?),
        other => Err(Diagnostic::wrong_kind("compare-iso", &other)),
    };
    let (x, y) = (as_fhs(x)?, as_fhs(y)?);
    let (transcript, iso) = realize::compare_iso(&x, &y)?;
    let found = iso.is_some();
    let mut value = json!({ "isomorphic": found, "transcript": transcript });
    if let Some(iso) = iso {
        value["iso"] = fhs_iso(iso);
    }
    if found {
        Ok(value)
    } else {
        Err(Diagnostic {
            exit: EXIT_INVALID,
            error: "NoIsomorphism".into(),
            message: "no isomorphism found".into(),
            location: None,
            report: Some(value),
        })
    }
}

pub fn generate(profile: &GenProfile, seed: u64) -> CmdResult {
    Ok(doc(gen(profile, seed).into()))
}

/// The acceptance battery, or a single criterion of it.
pub fn suite(seeds: u64, criterion: Option<u8>) -> CmdResult {
    let report = match criterion {
        Some(id) => {
            let c = run_criterion(id, seeds);
            let passed = c.passed;
            SuiteReport { seeds, instances: instance_fingerprint(seeds), criteria: vec![c], passed }
        }
        None => run_suite(seeds),
    };
    let value = serde_json::to_value(&report).expect("report serializes");
    if report.passed {
        Ok(value)
    } else {
        Err(Diagnostic {
            exit: EXIT_INVALID,
            error: "SuiteFailed".into(),
            message: "some acceptance criteria failed".into(),
            location: None,
            report: Some(value),
        })
    }
}
