//! The acceptance battery. Every criterion runs over a range of seeds in
//! parallel and reports failures in seed order, so the JSON report depends
//! only on the seed count.

use rayon::prelude::*;
use serde::Serialize;

use crate::fhs::{
    check_exact, double_dual_comparison, dual_splitting_iso, etale_dual_comparison, hom_group, Fhs, FhsMorphism,
    LinearMap, Splitting,
};
use crate::generator::{gen, gen_fhs, gen_mhs, gen_morphism, gen_motive, gen_pair, GenProfile, Kind};
use crate::lattice::{int_solve, IntMat, LatticeMap};
use crate::linalg::{Mat, Subspace};
use crate::mhs::MhsMorphism;
use crate::motive::Motive;
use crate::realize::{
    arrow, periods_square, roundtrip_fm, roundtrip_mf, separation, t_formal, t_formal_morphism, t_hodge,
    theorem_formula,
};
use crate::samples;
use crate::Error;

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, what: &str) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn lift<T>(r: crate::Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub samples: usize,
    pub failures: usize,
    /// `(case, message)` of the first failing case.
    pub first_failure: Option<(String, String)>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seeds: u64,
    /// Hash of the canonical JSON of every generated instance, so that equal
    /// reports mean equal inputs as well as equal verdicts.
    pub instances: String,
    pub criteria: Vec<CriterionReport>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "equivalence round trips"),
    (2, "theorem formulas"),
    (3, "abelian structure"),
    (4, "functor identities and adjunctions"),
    (5, "Serre subcategory"),
    (6, "duality"),
    (7, "universal extension"),
    (8, "separation"),
];

/// Runs the cases `0..count` of a labelled family in parallel.
fn family(label: &str, count: u64, f: impl Fn(u64) -> Check + Sync) -> Vec<(String, Check)> {
    (0..count).into_par_iter().map(|seed| (format!("{label}#{seed}"), f(seed))).collect()
}

fn summarize(id: u8, cases: Vec<(String, Check)>) -> CriterionReport {
    let name = CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown");
    let samples = cases.len();
    let mut failures = 0;
    let mut first_failure = None;
    for (case, r) in cases {
        if let Err(msg) = r {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some((case, msg));
            }
        }
    }
    CriterionReport { id, name, samples, failures, first_failure, passed: failures == 0 }
}

const FHS_KINDS: [Kind; 4] = [Kind::Etale, Kind::Connected, Kind::Special, Kind::General];
const MOTIVE_KINDS: [Kind; 4] = [Kind::MotiveEtale, Kind::MotiveConnected, Kind::MotiveSpecial, Kind::MotiveGeneral];

fn fhs_for(seed: u64) -> Fhs {
    gen_fhs(&GenProfile::new(FHS_KINDS[(seed % 4) as usize]), seed)
}

fn motive_for(seed: u64) -> Motive {
    gen_motive(&GenProfile::new(MOTIVE_KINDS[(seed % 4) as usize]), seed)
}

/// Runs one criterion with `seeds` as the base count.
pub fn run_criterion(id: u8, seeds: u64) -> CriterionReport {
    let half = seeds.div_ceil(2);
    let fifth = seeds.div_ceil(5);
    let cases = match id {
        1 => {
            let mut cases = Vec::new();
            for kind in FHS_KINDS {
                cases.extend(family(kind.name(), seeds, |seed| {
                    let x = gen_fhs(&GenProfile::new(kind), seed);
                    lift(roundtrip_fm(&x), "roundtrip_fm").map(|_| ())
                }));
            }
            cases.extend(family("motive", seeds, |seed| {
                lift(roundtrip_mf(&motive_for(seed)), "roundtrip_mf").map(|_| ())
            }));
            cases
        }
        2 => family("motive", seeds, |seed| theorem_case(&motive_for(seed))),
        3 => family("pair", half, abelian_case),
        4 => {
            let mut cases = family("etale-functor", half, functor_case);
            cases.extend(family("hom-restriction", half, restriction_case));
            cases.extend(family("connected-adjunction", half, adjunction_case));
            cases
        }
        5 => {
            let mut cases = family("connected-subquotients", half, serre_subquotient_case);
            cases.extend(family("connected-extension", half, serre_extension_case));
            cases.extend(family("etale-exactness", half, etale_exactness_case));
            cases
        }
        6 => {
            let mut cases = family("fhs", seeds, duality_case);
            cases.extend(family("special-motive", half, dual_sequence_case));
            cases.push(("pic-natural".into(), pic_natural_case()));
            cases
        }
        7 => family("etale-motive", fifth, |seed| {
            let m = gen_motive(&GenProfile::new(Kind::MotiveEtale), seed);
            let tr = lift(periods_square(&m), "periods_square")?;
            match tr.checks.iter().find(|c| !c.status) {
                Some(c) => Err(c.check.clone()),
                None => Ok(()),
            }
        }),
        8 => {
            let mut cases = vec![("fixed-pair".to_string(), {
                let (a, b) = samples::separation_pair();
                separation_check(&a, &b)
            })];
            cases.extend(family("random-pair", fifth, |seed| {
                let (a, b) = separation_instance(seed);
                separation_check(&a, &b)
            }));
            cases
        }
        _ => vec![("unknown".into(), Err(format!("no criterion {id}")))],
    };
    summarize(id, cases)
}

/// Criteria 1 to 8.
pub fn run_suite(seeds: u64) -> SuiteReport {
    let criteria: Vec<CriterionReport> = CRITERIA.iter().map(|&(id, _)| run_criterion(id, seeds)).collect();
    let passed = criteria.iter().all(|c| c.passed);
    SuiteReport { seeds, instances: instance_fingerprint(seeds), criteria, passed }
}

/// Fingerprint of the instances of every profile for seeds `0..seeds`.
pub fn instance_fingerprint(seeds: u64) -> String {
    use std::hash::{Hash, Hasher};
    let texts: Vec<String> = Kind::ALL
        .iter()
        .flat_map(|&k| (0..seeds).map(move |s| (k, s)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, s)| crate::io::Object::from(gen(&GenProfile::new(k), s)).to_json())
        .collect();
    let mut h = std::collections::hash_map::DefaultHasher::new();
    texts.hash(&mut h);
    format!("{:016x}", h.finish())
}

fn theorem_case(m: &Motive) -> Check {
    let (tr, _) = lift(theorem_formula(m), "theorem_formula")?;
    if let Some(c) = tr.checks.iter().find(|c| !c.status) {
        return Err(c.check.clone());
    }
    let x = lift(t_formal(m), "t_formal")?;
    if m.is_etale() {
        let h = lift(t_hodge(m), "t_hodge")?;
        ensure(*x.het() == h, "T_formal(M) carries T_Hodge(M)")?;
        ensure(x.etale_part() == x, "T_formal(M) is etale")?;
    }
    if m.is_connected() {
        ensure(x.is_connected(), "T_formal(M) is connected")?;
        let lin = lift(LinearMap::from_connected(&x), "from_connected")?;
        ensure(lin.map == *m.u0() && x.v_dim() == m.n(), "T_formal(M) is u0")?;
        ensure(lift(arrow(&x), "arrow")? == m.clone().without_polarization(), "arrow(T_formal(M)) = M")?;
    }
    Ok(())
}

fn some_morphism(x: &Fhs, y: &Fhs, seed: u64) -> FhsMorphism {
    gen_morphism(x, y, seed).unwrap_or_else(|| FhsMorphism::zero(x, y))
}

fn abelian_case(seed: u64) -> Check {
    let (x, y) = gen_pair(seed);
    let phi = some_morphism(&x, &y, seed);
    let k = lift(phi.kernel(), "kernel")?;
    let q = lift(phi.cokernel(), "cokernel")?;
    let (onto, emb) = lift(phi.image(), "image")?;
    ensure(lift(emb.compose(&onto), "compose")? == phi, "map = image inclusion after coimage projection")?;
    for (name, seq) in [("ker -> X -> im", [k.clone(), onto]), ("im -> Y -> coker", [emb, q.clone()])] {
        let r = lift(check_exact(&seq), "check_exact")?;
        if let Some((node, comp)) = r.first_failure() {
            return Err(format!("{name} not exact at node {node}, component {comp}"));
        }
    }
    let zk = lift(phi.compose(&k), "compose")?;
    ensure(zk.is_zero(), "map kills its kernel")?;
    let kx = k.source().clone();
    if kx.is_free() {
        let h = some_morphism(&kx, &kx, seed + 1);
        let psi = lift(k.compose(&h), "compose")?;
        ensure(psi.factor_through_mono(&k) == Some(h), "kernel factorization")?;
    }
    let qy = q.target().clone();
    if qy.is_free() {
        let h = some_morphism(&qy, &qy, seed + 2);
        let psi = lift(h.compose(&q), "compose")?;
        ensure(psi.factor_through_epi(&q) == Some(h), "cokernel factorization")?;
    } else {
        ensure(q.factor_through_epi(&q).is_some_and(|h| h.is_identity()), "cokernel factors through itself")?;
    }
    Ok(())
}

fn functor_case(seed: u64) -> Check {
    let h = gen_mhs(&GenProfile::new(Kind::Mhs), seed);
    let c = Fhs::canonical_etale(&h);
    ensure(c.etale_part() == c && *c.het() == h, "e(c(H)) = c(H)")?;
    let x = gen_fhs(&GenProfile::new(Kind::Connected), seed);
    let lin = lift(LinearMap::from_connected(&x), "from_connected")?;
    let back = lift(LinearMap::from_connected(&lin.to_connected().pi_connected()), "from_connected")?;
    ensure(back == lin, "pi(iota(L)) = L")?;
    ensure(x.pi_connected() == x, "pi is the identity on connected structures")?;
    Ok(())
}

/// Whether `fz` lies in the lattice of attainable lattice components.
fn lattice_contains(h: &crate::fhs::HomGroup, fz: &IntMat) -> bool {
    let flat: Vec<_> = fz.row_vectors().into_iter().flatten().collect();
    int_solve(&h.lattice_matrix(), &flat).is_some()
}

fn restriction_case(seed: u64) -> Check {
    let x = fhs_for(seed);
    let ex = x.etale_part();
    let y = if seed.is_multiple_of(2) { ex.clone() } else { gen_fhs(&GenProfile::small(Kind::Etale), seed) };
    let full = lift(hom_group(&x, &y), "hom(X, Y)")?;
    let restricted = lift(hom_group(&ex, &y), "hom(e X, Y)")?;
    ensure(full.linear_dim() == 0, "maps into an etale structure are determined by the lattice")?;
    for phi in &full.lattice_part {
        let r = lift(phi.restrict_to_etale_source(), "restriction")?;
        ensure(restricted.contains(&r), "restriction lands in hom(e X, Y)")?;
    }
    if !x.is_special() && y == ex {
        ensure(!lattice_contains(&full, &IntMat::identity(x.het().rank())), "identity of e X lifts to X")?;
    }
    if x.is_special() {
        let onto = restricted.lattice_part.iter().all(|psi| lattice_contains(&full, psi.fz().matrix()));
        ensure(onto, "restriction is not onto for special X")?;
        let p = lift(x.etale_projection(), "etale projection")?;
        for psi in &restricted.lattice_part {
            ensure(
                full.contains(&lift(psi.compose(&p), "compose")?),
                "composite with the projection lies in hom(X, Y)",
            )?;
        }
    }
    Ok(())
}

fn adjunction_case(seed: u64) -> Check {
    let src = gen_fhs(&GenProfile::new(Kind::Connected), seed);
    let tgt = gen_fhs(&GenProfile::new(Kind::Special), seed);
    let inc = lift(tgt.connected_inclusion(), "connected inclusion")?;
    let x0 = inc.source().clone();
    let to_x = lift(hom_group(&src, &tgt), "hom(X', X)")?;
    let to_x0 = lift(hom_group(&src, &x0), "hom(X', X0)")?;
    ensure(to_x.lattice_rank() == 0 && to_x0.lattice_rank() == 0, "no lattice maps out of a connected structure")?;
    ensure(to_x.linear_dim() == to_x0.linear_dim(), "hom(X', X0) and hom(X', X) have equal dimension")?;
    for phi in &to_x.linear_part {
        let psi = lift(phi.corestrict_to_connected_part(), "corestriction")?;
        ensure(lift(inc.compose(&psi), "compose")? == *phi, "map factors through X0")?;
    }
    for psi in &to_x0.linear_part {
        ensure(to_x.contains(&lift(inc.compose(psi), "compose")?), "composite lies in hom(X', X)")?;
    }
    // linear maps: commuting squares b L = L' a, counted directly
    let (l, l2) = (src.v0_map(), x0.v0_map());
    let unknowns = l2.cols() * l.cols() + l2.rows() * l.rows();
    let mut cols = Vec::with_capacity(unknowns);
    for k in 0..unknowns {
        let mut a = Mat::zeros(l2.cols(), l.cols());
        let mut b = Mat::zeros(l2.rows(), l.rows());
        let na = a.rows() * a.cols();
        if k < na {
            a.set(k / a.cols(), k % a.cols(), crate::scalar::Scalar::one());
        } else {
            let j = k - na;
            b.set(j / b.cols(), j % b.cols(), crate::scalar::Scalar::one());
        }
        cols.push(b.mul(l).sub(&l2.mul(&a)).entries().cloned().collect::<Vec<_>>());
    }
    let rows = l2.rows() * l.cols();
    let squares = if unknowns == 0 { 0 } else { Mat::from_cols(rows, &cols).kernel().dim() };
    ensure(squares == to_x0.linear_dim(), "hom of connected structures = commuting squares")?;
    Ok(())
}

fn serre_subquotient_case(seed: u64) -> Check {
    let x = gen_fhs(&GenProfile::new(Kind::Connected), seed);
    let y = gen_fhs(&GenProfile::new(Kind::Connected), seed + 1_000_003);
    let phi = some_morphism(&x, &y, seed);
    let k = lift(phi.kernel(), "kernel")?;
    let q = lift(phi.cokernel(), "cokernel")?;
    let (onto, _) = lift(phi.image(), "image")?;
    ensure(k.source().is_connected(), "kernel is connected")?;
    ensure(q.target().is_connected(), "cokernel is connected")?;
    ensure(onto.target().is_connected(), "image is connected")?;
    Ok(())
}

/// Pushes the extension `0 -> K -> F -> F/K -> 0` of connected structures
/// along a random `K -> A` and checks the result.
fn serre_extension_case(seed: u64) -> Check {
    let f = gen_fhs(&GenProfile::new(Kind::Connected), seed);
    let a = gen_fhs(&GenProfile::new(Kind::Connected), seed + 7_000_001);
    let endo = some_morphism(&f, &f, seed);
    let k = lift(endo.kernel(), "kernel")?;
    let kx = k.source().clone();
    let alpha = some_morphism(&kx, &a, seed + 1);
    let af = lift(a.direct_sum(&f), "direct sum")?;
    let (sa, sf) = (a.h0_dim(), f.h0_dim());
    let (ma, mf) = (a.v_dim(), f.v_dim());
    let into = FhsMorphism::new(
        kx.clone(),
        af.clone(),
        alpha.f0().vstack(&k.f0().neg()),
        IntMat::zeros(0, 0),
        alpha.g().vstack(&k.g().neg()),
    )
    .map_err(|e| format!("pushout relation: {e}"))?;
    let to_e = lift(into.cokernel(), "pushout")?;
    let e = to_e.target().clone();
    ensure(e.is_connected(), "extension is connected")?;
    let incl_a = FhsMorphism::new(
        a.clone(),
        af.clone(),
        Mat::identity(sa).vstack(&Mat::zeros(sf, sa)),
        IntMat::zeros(0, 0),
        Mat::identity(ma).vstack(&Mat::zeros(mf, ma)),
    )
    .map_err(|e| format!("inclusion: {e}"))?;
    let q = lift(k.cokernel(), "quotient")?;
    let proj_f = FhsMorphism::new(
        af,
        f.clone(),
        Mat::zeros(sf, sa).hstack(&Mat::identity(sf)),
        IntMat::zeros(0, 0),
        Mat::zeros(mf, ma).hstack(&Mat::identity(mf)),
    )
    .map_err(|e| format!("projection: {e}"))?;
    let to_b = lift(q.compose(&proj_f), "compose")?;
    let e_to_b = to_b.factor_through_epi(&to_e).ok_or("quotient map does not descend")?;
    let a_to_e = lift(to_e.compose(&incl_a), "compose")?;
    let r = lift(check_exact(&[a_to_e, e_to_b]), "check_exact")?;
    if let Some((node, comp)) = r.first_failure() {
        return Err(format!("0 -> A -> E -> B -> 0 not exact at node {node}, component {comp}"));
    }
    Ok(())
}

fn etale_exactness_case(seed: u64) -> Check {
    let (x, y) = gen_pair(seed + 500_000);
    let phi = some_morphism(&x, &y, seed);
    let k = lift(phi.kernel(), "kernel")?;
    let q = lift(phi.cokernel(), "cokernel")?;
    let (onto, emb) = lift(phi.image(), "image")?;
    for (name, seq) in [("ker -> X -> im", [k, onto]), ("im -> Y -> coker", [emb, q])] {
        let et = [seq[0].etale_part(), seq[1].etale_part()];
        let r = lift(check_exact(&et), "check_exact")?;
        if let Some((node, comp)) = r.first_failure() {
            return Err(format!("e({name}) not exact at node {node}, component {comp}"));
        }
    }
    Ok(())
}

fn duality_case(seed: u64) -> Check {
    let x = fhs_for(seed);
    lift(double_dual_comparison(&x), "double dual")?;
    lift(dual_splitting_iso(&x, Splitting::Pivot, Splitting::Reversed), "splitting iso")?;
    let iso = lift(etale_dual_comparison(&x), "etale comparison")?;
    if seed.is_multiple_of(4) {
        // naturality of the etale comparison for an endomorphism
        let ex = x.etale_part();
        let phi = some_morphism(&ex, &ex, seed);
        let h = ex.het();
        let fz = LatticeMap::new(h.lattice().clone(), h.lattice().clone(), phi.fz().matrix().clone())
            .map_err(|e| e.to_string())?;
        let f = lift(MhsMorphism::new(h.clone(), h.clone(), fz), "mhs morphism")?;
        let cf = FhsMorphism::canonical_etale(&lift(f.ihom_tate(), "ihom")?);
        let lhs = lift(iso.forward.compose(&cf), "compose")?;
        let rhs = lift(lift(phi.dual(), "dual")?.compose(&iso.forward), "compose")?;
        ensure(lhs == rhs, "etale comparison is natural")?;
    }
    if x.is_connected() {
        let d = lift(x.dual(), "dual")?;
        ensure(d.is_connected(), "dual of connected is connected")?;
        let (l, ld) = (lift(LinearMap::from_connected(&x), "linear")?, lift(LinearMap::from_connected(&d), "linear")?);
        ensure(ld.map == l.map.transpose(), "dual of connected is the transpose")?;
    }
    Ok(())
}

fn dual_sequence_case(seed: u64) -> Check {
    let m = gen_motive(&GenProfile::new(Kind::MotiveSpecial), seed);
    let [inc, proj] = lift(m.seq6(), "seq6")?;
    let (ti, tp) = (lift(t_formal_morphism(&inc), "T")?, lift(t_formal_morphism(&proj), "T")?);
    let seq = [lift(tp.dual(), "dual")?, lift(ti.dual(), "dual")?];
    let r = lift(check_exact(&seq), "check_exact")?;
    match r.first_failure() {
        Some((node, comp)) => {
            Err(format!("dual of the connected-etale sequence not exact at node {node}, component {comp}"))
        }
        None => Ok(()),
    }
}

fn pic_natural_case() -> Check {
    let x = lift(t_formal(&samples::pic_natural()), "T")?;
    let d = lift(x.dual(), "dual")?;
    ensure((d.h0_dim(), d.v_dim(), d.het().rank()) == (1, 1, 2), "dual of Pic# has shape (1, 1, 2)")?;
    ensure(!d.is_special(), "dual of Pic# is not special")?;
    let md = lift(arrow(&d), "arrow")?;
    ensure(md.s() == 1 && md.add().dim() == 0 && md.ranks().g == 1, "[X^ -> X] shape")?;
    Ok(())
}

/// `[K^s -> V]` and `[K^s -> V + K^k]` with the same `u`.
fn separation_instance(seed: u64) -> (Motive, Motive) {
    let base = gen_fhs(&GenProfile::new(Kind::Connected), seed);
    let u = base.v0_map().clone();
    let s = u.cols();
    let extra = 1 + (seed % 2) as usize;
    let make = |map: Mat| {
        let n = map.rows();
        Motive::new(s, 0, n, Subspace::full(n), Subspace::full(n), Mat::zeros(n, 0), Mat::zeros(n, 0), map, None)
            .expect("connected motive")
    };
    (make(u.clone()), make(u.vstack(&Mat::zeros(extra, s))))
}

fn separation_check(a: &Motive, b: &Motive) -> Check {
    let cert = separation(a, b).map_err(|e: Error| e.to_string())?;
    ensure(cert.separated(), "pair is not certified as separated")
}
