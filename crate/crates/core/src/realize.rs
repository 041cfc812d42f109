//! Realizations `T_Hodge`, `T_formal`, the inverse construction `arrow`, and
//! the comparison isomorphisms between them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fhs::{check_exact, hom_group, Fhs, FhsIso, FhsMorphism};
use crate::lattice::{complete_basis, lattice_points, FgAbGroup, IntMat};
use crate::linalg::{Mat, Quotient, Subspace};
use crate::mhs::Mhs;
use crate::motive::{Motive, MotiveIso, MotiveMorphism};
use crate::scalar::Scalar;

/// One line of a verification transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub check: String,
    pub status: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub checks: Vec<Check>,
}

impl Transcript {
    pub fn push(&mut self, check: impl Into<String>, status: bool) {
        self.checks.push(Check { check: check.into(), status, witness: None });
    }

    pub fn push_witness(&mut self, check: impl Into<String>, status: bool, witness: impl Into<String>) {
        self.checks.push(Check { check: check.into(), status, witness: Some(witness.into()) });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status)
    }
}

/// Weight data on `Z^(L + r)`: `W-1` is the span of the first `L`
/// coordinates, `W-2` the rational torus periods among them.
fn weights(m: &Motive) -> (Subspace, Subspace) {
    let l = m.lattice_rank();
    let big = l + m.r();
    let w1 = Subspace::coordinate(big, &(0..l).collect::<Vec<_>>());
    let torus = m.torus_lattice_space();
    let w2 = Subspace::span(
        big,
        torus.basis().iter().map(|b| {
            let mut v = b.clone();
            v.resize(big, Scalar::zero());
            v
        }),
    );
    (w1, w2)
}

fn periods_and_log(m: &Motive) -> Mat {
    m.lambda().hstack(m.ell())
}

/// Hodge realization of an etale motive.
pub fn t_hodge(m: &Motive) -> Result<Mhs> {
    if !m.is_etale() {
        return Err(Error::NotEtale);
    }
    realized_mhs(m)
}

fn realized_mhs(m: &Motive) -> Result<Mhs> {
    let (w1, w2) = weights(m);
    let vz = periods_and_log(m);
    let p = Quotient::new(m.add().clone()).projection();
    let f0 = p.mul(&vz).kernel();
    Mhs::new(FgAbGroup::free(vz.cols()), w1, w2, f0, 0)
        .map_err(|e| Error::Internal(format!("realization invalid: {e}")))
}

/// The formal Hodge structure of a motive.
pub fn t_formal(m: &Motive) -> Result<Fhs> {
    let het = realized_mhs(m)?;
    let vz = periods_and_log(m);
    let p = Quotient::new(m.add().clone()).projection();
    let sigma = p.mul(&vz).mul(&Quotient::new(het.f0().clone()).lift());
    Fhs::new(m.s(), het, m.n(), m.add().clone(), m.toradd().clone(), m.u0().clone(), vz, sigma)
        .map_err(|e| Error::Internal(format!("realization invalid: {e}")))
}

/// `T_formal` on morphisms.
pub fn t_formal_morphism(f: &MotiveMorphism) -> Result<FhsMorphism> {
    let (src, dst) = (f.source(), f.target());
    let (l, r) = (src.lattice_rank(), src.r());
    let (l2, r2) = (dst.lattice_rank(), dst.r());
    let mut fz = IntMat::zeros(l2 + r2, l + r);
    let a = f.period_map();
    let c = f.ell_correction();
    for i in 0..l2 {
        for j in 0..l {
            fz.set(i, j, a.get(i, j).clone());
        }
        for j in 0..r {
            fz.set(i, l + j, c.get(i, j).clone());
        }
    }
    for i in 0..r2 {
        for j in 0..r {
            fz.set(l2 + i, l + j, f.fet().get(i, j).clone());
        }
    }
    FhsMorphism::new(t_formal(src)?, t_formal(dst)?, f.f0().clone(), fz, f.g().clone())
}

/// The motive morphism underlying a map between realizations.
pub fn motive_morphism_from_fhs(phi: &FhsMorphism, src: &Motive, dst: &Motive) -> Result<MotiveMorphism> {
    if *phi.source() != t_formal(src)? || *phi.target() != t_formal(dst)? {
        return Err(Error::NotComposable("map is not between the given realizations".into()));
    }
    let fet = phi.fz().matrix().block(dst.lattice_rank(), src.lattice_rank(), dst.r(), src.r());
    MotiveMorphism::new(src.clone(), dst.clone(), phi.f0().clone(), fet, phi.g().clone())
}

/// Basis `Bw` of `W-1 cap H_Z` and a completion `Bs` to a basis of `H_Z`.
fn arrow_frame(x: &Fhs) -> Result<(IntMat, IntMat)> {
    if !x.is_free() {
        return Err(Error::NotFree);
    }
    let bw = lattice_points(x.het().w_m1());
    let n = bw.rows();
    let leading: Vec<usize> =
        (0..bw.cols()).filter_map(|j| (0..n).find(|&i| bw.get(i, j) != &num_bigint::BigInt::from(0))).collect();
    let rest: Vec<usize> = (0..n).filter(|i| !leading.contains(i)).collect();
    let std = IntMat::identity(n).select_cols(&rest);
    let bs = if bw.hstack(&std).unimodular_inverse().is_some() { std } else { complete_basis(&bw) };
    Ok((bw, bs))
}

/// `arrow(X) = [H0 x gr0(H_Z) -> V / W-1(H_Z)]`.
pub fn arrow(x: &Fhs) -> Result<Motive> {
    let (bw, bs) = arrow_frame(x)?;
    let vk = x.vk();
    Motive::new(
        x.h0_dim(),
        bs.cols(),
        x.v_dim(),
        x.v0().clone(),
        x.v1().clone(),
        vk.mul(&bw.to_mat()),
        vk.mul(&bs.to_mat()),
        x.v0_map().clone(),
        None,
    )
    .map_err(|e| Error::Internal(format!("arrow produced an invalid motive: {e}")))
}

fn frame_inverse(bw: &IntMat, bs: &IntMat) -> IntMat {
    bw.hstack(bs).unimodular_inverse().expect("basis of H_Z")
}

/// `arrow` on morphisms: the map induced on `gr0` of the lattices.
pub fn arrow_morphism(phi: &FhsMorphism) -> Result<MotiveMorphism> {
    let (x, y) = (phi.source(), phi.target());
    let (_, bsx) = arrow_frame(x)?;
    let (bwy, bsy) = arrow_frame(y)?;
    let in_y = frame_inverse(&bwy, &bsy).mul(phi.fz().matrix()).mul(&bsx);
    let fet = in_y.block(bwy.cols(), 0, bsy.cols(), bsx.cols());
    MotiveMorphism::new(arrow(x)?, arrow(y)?, phi.f0().clone(), fet, phi.g().clone())
}

/// `X -> T_formal(arrow(X))`.
pub fn roundtrip_fm(x: &Fhs) -> Result<FhsIso> {
    let (bw, bs) = arrow_frame(x)?;
    let t = t_formal(&arrow(x)?)?;
    let fwd =
        FhsMorphism::new(x.clone(), t, Mat::identity(x.h0_dim()), frame_inverse(&bw, &bs), Mat::identity(x.v_dim()))?;
    FhsIso::from_forward(fwd)
}

/// `M -> arrow(T_formal(M))`.
pub fn roundtrip_mf(m: &Motive) -> Result<MotiveIso> {
    let x = t_formal(m)?;
    let (bw, bs) = arrow_frame(&x)?;
    let l = bw.cols();
    let u = frame_inverse(&bw, &bs);
    let fet = u.block(l, l, bs.cols(), m.r());
    let fwd = MotiveMorphism::new(m.clone(), arrow(&x)?, Mat::identity(m.s()), fet, Mat::identity(m.n()))?;
    MotiveIso::from_forward(fwd)
}

/// The naturality square of the round trip `X -> T(arrow X)` for `phi`.
pub fn naturality_fm(phi: &FhsMorphism) -> Result<bool> {
    let ix = roundtrip_fm(phi.source())?;
    let iy = roundtrip_fm(phi.target())?;
    let across = t_formal_morphism(&arrow_morphism(phi)?)?;
    Ok(across.compose(&ix.forward)? == iy.forward.compose(phi)?)
}

/// The naturality square of the round trip `M -> arrow(T M)` for `f`.
pub fn naturality_mf(f: &MotiveMorphism) -> Result<bool> {
    let im = roundtrip_mf(f.source())?;
    let in_ = roundtrip_mf(f.target())?;
    let across = arrow_morphism(&t_formal_morphism(f)?)?;
    Ok(across.compose(&im.forward)? == in_.forward.compose(f)?)
}

/// Comparison of the etale part of `T_formal(M)` with the canonical etale
/// structure of `T_Hodge(M_et)`: the mixed Hodge structures agree exactly
/// and `(id, sigma)` is an isomorphism `c(T_Hodge(M_et)) -> e(T_formal(M))`.
pub fn theorem_formula(m: &Motive) -> Result<(Transcript, FhsIso)> {
    let mut tr = Transcript::default();
    let x = t_formal(m)?;
    let e = x.etale_part();
    let h = t_hodge(&m.etale_motive())?;
    let c = Fhs::canonical_etale(&h);
    tr.push("etale lattice structures agree", *e.het() == h);
    tr.push("T_formal(M_et) equals e(T_formal(M))", t_formal(&m.etale_motive())? == e);
    let fwd = FhsMorphism::new(c, e.clone(), Mat::zeros(0, 0), IntMat::identity(h.rank()), e.sigma().clone())?;
    let iso = FhsIso::from_forward(fwd)?;
    tr.push("(id, sigma) is an isomorphism", true);
    Ok((tr, iso))
}

/// Periods of an etale motive through its universal vector extension.
pub fn periods_square(met: &Motive) -> Result<Transcript> {
    if !met.is_etale() {
        return Err(Error::NotEtale);
    }
    let mut tr = Transcript::default();
    let h = t_hodge(met)?;
    let nat = met.universal_vector_extension()?;
    let big = h.rank();
    // tau : Lie G# -> H_K is the identity of the presentation
    let tau = Mat::identity(big);
    let v_nat = nat.lambda().hstack(nat.ell());
    tr.push("tau o v# = c on H_Z", tau.mul(&v_nat) == h.tensor_map());
    let vz = met.lambda().hstack(met.ell());
    tr.push("H_K -> Lie G_x kills F0", h.f0().image_under(&vz).is_zero());
    let x = t_formal(met)?;
    let via_quotient = x.sigma().mul(&x.f0_quotient().projection());
    tr.push("H_K -> H_K/F0 -> Lie G_x equals the period map", via_quotient == vz);
    tr.push("tau(V(G#)) = F0", nat.add().image_under(&tau) == *h.f0());
    tr.push("tau(Lie T# + V(G#)) = F0 + W-2", nat.toradd().image_under(&tau) == h.f0().sum(h.w_m2()));
    tr.push("dim V(G#) = g + r", nat.add().dim() == met.ranks().g + met.r());
    let t_nat = t_formal(&nat)?;
    let c = Fhs::canonical_etale(&h);
    tr.push("e(T_formal(M#)) = c(T_Hodge(M))", t_nat.etale_part() == c);
    let inc = t_nat.v0_inclusion();
    let proj = t_nat.etale_projection()?;
    let report = check_exact(&[inc, proj])?;
    tr.push("0 -> F0 -> T_formal(M#) -> c(T_Hodge(M)) -> 0 exact", report.exact);
    let et = nat.etale_motive();
    let g = x.sigma().clone();
    let back =
        MotiveMorphism::new(et, met.clone().without_polarization(), Mat::zeros(0, 0), IntMat::identity(met.r()), g)
            .and_then(MotiveIso::from_forward);
    tr.push("semi-abelian quotient of M# is isomorphic to M", back.is_ok());
    Ok(tr)
}

/// `M^v = arrow(T_formal(M)')`.
pub fn cartier_dual(m: &Motive) -> Result<Motive> {
    arrow(&t_formal(m)?.dual()?)
}

/// `M -> M^vv`: the double dual comparison of `X = T_formal(M)`, followed by
/// the dual of the round trip for `X'` and the round trip for `T(M^v)'`.
pub fn cartier_double_dual_iso(m: &Motive) -> Result<MotiveIso> {
    let x = t_formal(m)?;
    let dd = crate::fhs::double_dual_comparison(&x)?;
    let rho1 = roundtrip_fm(&x.dual()?)?;
    let rho2 = roundtrip_fm(&rho1.forward.target().dual()?)?;
    let phi = rho2.forward.compose(&rho1.backward.dual()?.compose(&dd.forward)?)?;
    let mdd = arrow(rho2.forward.source())?;
    let f = motive_morphism_from_fhs(&phi, m, &mdd)?;
    MotiveIso::from_forward(f)
}

/// Certificate that two connected motives `[W -> V]` and `[W -> V']` with
/// `V < V'` are not isomorphic although their formal parts and the kernels
/// of `u` agree.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationCertificate {
    pub formal_parts_agree: bool,
    pub kernels_agree: bool,
    pub dims: (usize, usize),
    pub hom_forward: (usize, usize),
    pub hom_backward: (usize, usize),
    /// Source and target differ in a dimension, which rules out isomorphisms.
    pub dimension_obstruction: bool,
    /// Some generator of `Hom(small, large)` is invertible.
    pub invertible_found: bool,
}

impl SeparationCertificate {
    pub fn separated(&self) -> bool {
        self.formal_parts_agree && self.kernels_agree && self.dimension_obstruction && !self.invertible_found
    }
}

pub fn separation(small: &Motive, large: &Motive) -> Result<SeparationCertificate> {
    if !small.is_connected() || !large.is_connected() {
        return Err(Error::NotConnected);
    }
    let (x, y) = (t_formal(small)?, t_formal(large)?);
    let fwd = hom_group(&x, &y)?;
    let bwd = hom_group(&y, &x)?;
    let invertible_found = fwd.linear_part.iter().chain(&fwd.lattice_part).any(|phi| phi.inverse().is_some());
    Ok(SeparationCertificate {
        formal_parts_agree: small.s() == large.s(),
        kernels_agree: small.u0().kernel() == large.u0().kernel(),
        dims: (x.v_dim(), y.v_dim()),
        hom_forward: (fwd.linear_dim(), fwd.lattice_rank()),
        hom_backward: (bwd.linear_dim(), bwd.lattice_rank()),
        dimension_obstruction: fwd.dimension_obstruction(),
        invertible_found,
    })
}

/// Decides whether two formal Hodge structures are isomorphic, trying the
/// canonical comparisons first (equality, double dual, round trip through
/// `arrow`) and then a bounded search in `Hom(x, y)`.
pub fn compare_iso(x: &Fhs, y: &Fhs) -> Result<(Transcript, Option<FhsIso>)> {
    let mut tr = Transcript::default();
    let mut found = None;
    if x == y {
        tr.push_witness("objects are equal", true, "identity");
        found = Some(FhsIso::from_forward(FhsMorphism::identity(x))?);
    }
    if found.is_none() && x.is_free() && x.dual()?.dual()? == *y {
        let iso = crate::fhs::double_dual_comparison(x)?;
        tr.push_witness("target is the double dual of the source", true, "double dual comparison");
        found = Some(iso);
    }
    if found.is_none() && x.is_free() && t_formal(&arrow(x)?)? == *y {
        tr.push_witness("target is T(arrow(source))", true, "round trip");
        found = Some(roundtrip_fm(x)?);
    }
    if found.is_none() {
        let h = hom_group(x, y)?;
        tr.push("dimensions and lattices are compatible", !h.dimension_obstruction());
        found = crate::fhs::search_iso(x, y)?;
        tr.push("bounded search found an invertible map", found.is_some());
    }
    if let Some(iso) = &found {
        tr.push("forward and backward compose to identities", iso.verify().is_ok());
    }
    Ok((tr, found))
}
