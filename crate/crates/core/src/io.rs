//! JSON documents.
//!
//! Every file is `{"format_version": 1, "kind": ..., "payload": ..., "field":
//! "Q(i)"}`. Scalars are exact strings such as `"1/2-3/1*i"`, integers are
//! decimal strings, matrices are arrays of rows and subspaces are arrays of
//! basis vectors. Shapes are implied by the dimensions stored alongside, so
//! empty matrices need no extra annotation. Unknown fields are rejected.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::fhs::{Fhs, FhsMorphism};
use crate::generator::Generated;
use crate::lattice::{FgAbGroup, IntMat, LatticeMap};
use crate::linalg::{Mat, Subspace, Vector};
use crate::mhs::{Mhs, MhsMorphism};
use crate::motive::{Motive, MotiveMorphism};
use crate::scalar::Scalar;

pub const FORMAT_VERSION: u32 = 1;
pub const FIELD: &str = "Q(i)";

/// Reading a document fails either because it is not well formed or because
/// the data it describes violates an axiom.
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{0}")]
    Invalid(#[from] Error),
    /// A sequence element is invalid; `node` indexes objects, `map` indexes
    /// the arrows between them.
    #[error("{place} {index}, component {component}: {error}")]
    InSequence { place: &'static str, index: usize, component: &'static str, error: Error },
}

impl IoError {
    /// Short machine-readable name of the failure.
    pub fn code(&self) -> String {
        match self {
            IoError::Malformed(_) => "Malformed".into(),
            IoError::Invalid(e) | IoError::InSequence { error: e, .. } => e.code(),
        }
    }

    fn located(place: &'static str, index: usize, e: IoError) -> IoError {
        match e {
            IoError::Invalid(error) => IoError::InSequence { place, index, component: error.component(), error },
            other => other,
        }
    }
}

type IoResult<T> = std::result::Result<T, IoError>;

fn malformed(msg: impl Into<String>) -> IoError {
    IoError::Malformed(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DocKind {
    #[serde(rename = "mhs1")]
    Mhs,
    #[serde(rename = "fhs1")]
    Fhs,
    #[serde(rename = "motive")]
    Motive,
    #[serde(rename = "morphism")]
    Morphism,
    #[serde(rename = "sequence")]
    Sequence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format_version: u32,
    pub kind: DocKind,
    pub payload: Value,
    pub field: String,
}

/// A parsed document.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Mhs(Mhs),
    Fhs(Fhs),
    Motive(Motive),
    FhsMorphism(FhsMorphism),
    MotiveMorphism(MotiveMorphism),
    MhsMorphism(MhsMorphism),
    Sequence(Vec<FhsMorphism>),
}

// wire types

type WMat = Vec<Vec<String>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WLattice {
    rank: usize,
    torsion: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WMhs {
    lattice: WLattice,
    w_m1: WMat,
    w_m2: WMat,
    f0: WMat,
    tate_tag: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WFhs {
    h0_dim: usize,
    het: WMhs,
    v_dim: usize,
    v0: WMat,
    v1: WMat,
    v0_map: WMat,
    vz_map: WMat,
    sigma: WMat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WMotive {
    s: usize,
    r: usize,
    n: usize,
    add: WMat,
    toradd: WMat,
    lambda: WMat,
    ell: WMat,
    u0: WMat,
    polarization: Option<WMat>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WFhsMap {
    f0: WMat,
    fz: WMat,
    g: WMat,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "category", deny_unknown_fields)]
enum WMorphism {
    #[serde(rename = "fhs1")]
    Fhs { source: WFhs, target: WFhs, f0: WMat, fz: WMat, g: WMat },
    #[serde(rename = "motive")]
    Motive { source: WMotive, target: WMotive, f0: WMat, fet: WMat, g: WMat },
    #[serde(rename = "mhs1")]
    Mhs { source: WMhs, target: WMhs, map: WMat },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WSequence {
    objects: Vec<WFhs>,
    morphisms: Vec<WFhsMap>,
}

// encoding

fn enc_mat(m: &Mat) -> WMat {
    m.row_vectors().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn enc_int(m: &IntMat) -> WMat {
    m.row_vectors().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn enc_sub(s: &Subspace) -> WMat {
    s.basis().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect()
}

fn enc_mhs(h: &Mhs) -> WMhs {
    WMhs {
        lattice: WLattice {
            rank: h.lattice().rank(),
            torsion: h.lattice().torsion().iter().map(|d| d.to_string()).collect(),
        },
        w_m1: enc_sub(h.w_m1()),
        w_m2: enc_sub(h.w_m2()),
        f0: enc_sub(h.f0()),
        tate_tag: h.tate_tag(),
    }
}

fn enc_fhs(x: &Fhs) -> WFhs {
    WFhs {
        h0_dim: x.h0_dim(),
        het: enc_mhs(x.het()),
        v_dim: x.v_dim(),
        v0: enc_sub(x.v0()),
        v1: enc_sub(x.v1()),
        v0_map: enc_mat(x.v0_map()),
        vz_map: enc_mat(x.vz_map()),
        sigma: enc_mat(x.sigma()),
    }
}

fn enc_motive(m: &Motive) -> WMotive {
    WMotive {
        s: m.s(),
        r: m.r(),
        n: m.n(),
        add: enc_sub(m.add()),
        toradd: enc_sub(m.toradd()),
        lambda: enc_mat(m.lambda()),
        ell: enc_mat(m.ell()),
        u0: enc_mat(m.u0()),
        polarization: m.polarization().map(enc_int),
    }
}

fn enc_fhs_map(phi: &FhsMorphism) -> WFhsMap {
    WFhsMap { f0: enc_mat(phi.f0()), fz: enc_int(phi.fz().matrix()), g: enc_mat(phi.g()) }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("wire types serialize")
}

impl From<Generated> for Object {
    fn from(g: Generated) -> Self {
        match g {
            Generated::Fhs(x) => Object::Fhs(x),
            Generated::Motive(m) => Object::Motive(m),
            Generated::Mhs(h) => Object::Mhs(h),
        }
    }
}

impl Object {
    pub fn kind(&self) -> DocKind {
        match self {
            Object::Mhs(_) => DocKind::Mhs,
            Object::Fhs(_) => DocKind::Fhs,
            Object::Motive(_) => DocKind::Motive,
            Object::FhsMorphism(_) | Object::MotiveMorphism(_) | Object::MhsMorphism(_) => DocKind::Morphism,
            Object::Sequence(_) => DocKind::Sequence,
        }
    }

    pub fn to_document(&self) -> Document {
        let payload = match self {
            Object::Mhs(h) => to_value(&enc_mhs(h)),
            Object::Fhs(x) => to_value(&enc_fhs(x)),
            Object::Motive(m) => to_value(&enc_motive(m)),
            Object::FhsMorphism(phi) => {
                let WFhsMap { f0, fz, g } = enc_fhs_map(phi);
                to_value(&WMorphism::Fhs { source: enc_fhs(phi.source()), target: enc_fhs(phi.target()), f0, fz, g })
            }
            Object::MotiveMorphism(f) => to_value(&WMorphism::Motive {
                source: enc_motive(f.source()),
                target: enc_motive(f.target()),
                f0: enc_mat(f.f0()),
                fet: enc_int(f.fet()),
                g: enc_mat(f.g()),
            }),
            Object::MhsMorphism(f) => to_value(&WMorphism::Mhs {
                source: enc_mhs(f.source()),
                target: enc_mhs(f.target()),
                map: enc_int(f.map().matrix()),
            }),
            Object::Sequence(maps) => {
                let mut objects: Vec<WFhs> = maps.iter().map(|m| enc_fhs(m.source())).collect();
                if let Some(last) = maps.last() {
                    objects.push(enc_fhs(last.target()));
                }
                to_value(&WSequence { objects, morphisms: maps.iter().map(enc_fhs_map).collect() })
            }
        };
        Document { format_version: FORMAT_VERSION, kind: self.kind(), payload, field: FIELD.to_string() }
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> IoResult<Object> {
        let doc: Document = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        Object::from_document(doc)
    }

    pub fn from_document(doc: Document) -> IoResult<Object> {
        if doc.format_version != FORMAT_VERSION {
            return Err(malformed(format!("unsupported format_version {}", doc.format_version)));
        }
        if doc.field != FIELD {
            return Err(malformed(format!("unsupported field {:?}", doc.field)));
        }
        fn parse<T: for<'de> Deserialize<'de>>(v: Value) -> IoResult<T> {
            serde_json::from_value(v).map_err(|e| malformed(e.to_string()))
        }
        Ok(match doc.kind {
            DocKind::Mhs => Object::Mhs(dec_mhs(parse(doc.payload)?)?),
            DocKind::Fhs => Object::Fhs(dec_fhs(parse(doc.payload)?)?),
            DocKind::Motive => Object::Motive(dec_motive(parse(doc.payload)?)?),
            DocKind::Morphism => match parse::<WMorphism>(doc.payload)? {
                WMorphism::Fhs { source, target, f0, fz, g } => {
                    let (x, y) = (dec_fhs(source)?, dec_fhs(target)?);
                    Object::FhsMorphism(dec_fhs_map(x, y, WFhsMap { f0, fz, g })?)
                }
                WMorphism::Motive { source, target, f0, fet, g } => {
                    let (m, n) = (dec_motive(source)?, dec_motive(target)?);
                    let f0 = dec_mat(&f0, n.s(), m.s(), "f0")?;
                    let fet = dec_int(&fet, n.r(), m.r(), "fet")?;
                    let g = dec_mat(&g, n.n(), m.n(), "g")?;
                    Object::MotiveMorphism(MotiveMorphism::new(m, n, f0, fet, g)?)
                }
                WMorphism::Mhs { source, target, map } => {
                    let (h, k) = (dec_mhs(source)?, dec_mhs(target)?);
                    let m = dec_int(&map, k.lattice().num_gens(), h.lattice().num_gens(), "map")?;
                    let lm = LatticeMap::new(h.lattice().clone(), k.lattice().clone(), m)?;
                    Object::MhsMorphism(MhsMorphism::new(h, k, lm)?)
                }
            },
            DocKind::Sequence => {
                let w: WSequence = parse(doc.payload)?;
                if w.objects.len() != w.morphisms.len() + 1 {
                    return Err(malformed("a sequence needs one more object than morphisms"));
                }
                let objects = w
                    .objects
                    .into_iter()
                    .enumerate()
                    .map(|(k, x)| dec_fhs(x).map_err(|e| IoError::located("node", k, e)))
                    .collect::<IoResult<Vec<_>>>()?;
                let maps = w
                    .morphisms
                    .into_iter()
                    .enumerate()
                    .map(|(k, m)| {
                        dec_fhs_map(objects[k].clone(), objects[k + 1].clone(), m)
                            .map_err(|e| IoError::located("map", k, e))
                    })
                    .collect::<IoResult<Vec<_>>>()?;
                Object::Sequence(maps)
            }
        })
    }
}

// decoding

fn dec_scalar(s: &str) -> IoResult<Scalar> {
    s.parse().map_err(|e: crate::scalar::ParseScalarError| malformed(e.to_string()))
}

fn dec_bigint(s: &str) -> IoResult<BigInt> {
    s.trim().parse().map_err(|_| malformed(format!("malformed integer {s:?}")))
}

fn check_shape<T>(rows: &[Vec<T>], r: usize, c: usize, what: &str) -> IoResult<()> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(malformed(format!("{what} must be {r}x{c}")));
    }
    Ok(())
}

fn dec_mat(w: &WMat, r: usize, c: usize, what: &str) -> IoResult<Mat> {
    check_shape(w, r, c, what)?;
    let rows = w
        .iter()
        .map(|row| row.iter().map(|x| dec_scalar(x)).collect::<IoResult<Vector>>())
        .collect::<IoResult<Vec<_>>>()?;
    Ok(Mat::from_rows(r, c, rows))
}

fn dec_int(w: &WMat, r: usize, c: usize, what: &str) -> IoResult<IntMat> {
    check_shape(w, r, c, what)?;
    let rows = w
        .iter()
        .map(|row| row.iter().map(|x| dec_bigint(x)).collect::<IoResult<Vec<_>>>())
        .collect::<IoResult<Vec<_>>>()?;
    Ok(IntMat::from_rows(r, c, rows))
}

fn dec_sub(w: &WMat, ambient: usize, what: &str) -> IoResult<Subspace> {
    if w.iter().any(|v| v.len() != ambient) {
        return Err(malformed(format!("{what}: vectors must have length {ambient}")));
    }
    let vecs = w
        .iter()
        .map(|v| v.iter().map(|x| dec_scalar(x)).collect::<IoResult<Vector>>())
        .collect::<IoResult<Vec<_>>>()?;
    Ok(Subspace::span(ambient, vecs))
}

fn dec_mhs(w: WMhs) -> IoResult<Mhs> {
    let torsion = w.lattice.torsion.iter().map(|d| dec_bigint(d)).collect::<IoResult<Vec<_>>>()?;
    let lattice = FgAbGroup::new(w.lattice.rank, torsion)?;
    let n = lattice.rank();
    Ok(Mhs::new(
        lattice,
        dec_sub(&w.w_m1, n, "w_m1")?,
        dec_sub(&w.w_m2, n, "w_m2")?,
        dec_sub(&w.f0, n, "f0")?,
        w.tate_tag,
    )?)
}

fn dec_fhs(w: WFhs) -> IoResult<Fhs> {
    let het = dec_mhs(w.het)?;
    let (s, m, n) = (w.h0_dim, w.v_dim, het.lattice().num_gens());
    let v0 = dec_sub(&w.v0, m, "v0")?;
    let sigma_shape = (m - v0.dim(), het.rank() - het.f0().dim());
    Ok(Fhs::new(
        s,
        het,
        m,
        v0,
        dec_sub(&w.v1, m, "v1")?,
        dec_mat(&w.v0_map, m, s, "v0_map")?,
        dec_mat(&w.vz_map, m, n, "vz_map")?,
        dec_mat(&w.sigma, sigma_shape.0, sigma_shape.1, "sigma")?,
    )?)
}

fn dec_motive(w: WMotive) -> IoResult<Motive> {
    let (s, r, n) = (w.s, w.r, w.n);
    let l = w.lambda.first().map_or(0, Vec::len);
    let polarization = match &w.polarization {
        Some(q) => Some(dec_int(q, q.len(), q.len(), "polarization")?),
        None => None,
    };
    Ok(Motive::new(
        s,
        r,
        n,
        dec_sub(&w.add, n, "add")?,
        dec_sub(&w.toradd, n, "toradd")?,
        dec_mat(&w.lambda, n, l, "lambda")?,
        dec_mat(&w.ell, n, r, "ell")?,
        dec_mat(&w.u0, n, s, "u0")?,
        polarization,
    )?)
}

fn dec_fhs_map(x: Fhs, y: Fhs, w: WFhsMap) -> IoResult<FhsMorphism> {
    let f0 = dec_mat(&w.f0, y.h0_dim(), x.h0_dim(), "f0")?;
    let fz = dec_int(&w.fz, y.lattice().num_gens(), x.lattice().num_gens(), "fz")?;
    let g = dec_mat(&w.g, y.v_dim(), x.v_dim(), "g")?;
    Ok(FhsMorphism::new(x, y, f0, fz, g)?)
}

/// Reads and parses a file.
pub fn read_object(path: &std::path::Path) -> IoResult<Object> {
    let text = std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    Object::from_json(&text)
}
