//! Duality on structures with free lattice.
//!
//! For `X` with `F = F0`, a section `s : H_K/F -> H_K` and the projection
//! `pi0 = 1 - v_K s sigma^-1 pr : V -> V0` it induces, the dual is
//!
//! * `H'_et = ihom(H_et, Z(1))`, `Lie H'0 = V0*`,
//! * `V' = (Lie H0)* (+) F*`, `V'0 = (Lie H0)*`, `V'1 = V'0 + W'-2|F`,
//! * `v'z(phi) = (phi o s o sigma^-1 o pr o v0, phi|F)`,
//! * `v'0(alpha) = (alpha o pi0 o v0, -alpha o v_K|F)`,
//! * `sigma'` the restriction isomorphism `H'_K/F' -> F*`.
//!
//! Everything is written in the canonical bases: `V0*` in the dual of the
//! canonical basis of `V0`, `F*` in the dual of the canonical basis of `F`.

use super::{Fhs, FhsIso, FhsMorphism};
use crate::error::{Error, Result};
use crate::lattice::IntMat;
use crate::linalg::{Mat, Quotient, Subspace};

/// Choice of the section `H_K/F0 -> H_K` used by the dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Splitting {
    /// Standard vectors at the non-pivot positions of `F0`.
    #[default]
    Pivot,
    /// Standard vectors chosen greedily from the last index down.
    Reversed,
}

impl Splitting {
    /// `n x (n - f)` matrix `C` with `pr_F o C = id`.
    pub fn section(self, f: &Subspace) -> Mat {
        let q = Quotient::new(f.clone());
        match self {
            Splitting::Pivot => q.lift(),
            Splitting::Reversed => {
                let n = f.ambient();
                let id = Mat::identity(n);
                let mut acc = f.clone();
                let mut chosen = Vec::new();
                for j in (0..n).rev() {
                    let e = id.col(j);
                    if !acc.contains(&e) {
                        acc = acc.sum(&Subspace::span(n, [e.clone()]));
                        chosen.push(e);
                    }
                }
                let w = Mat::from_cols(n, &chosen);
                let pw = q.projection().mul(&w);
                w.mul(&pw.inverse().expect("complement"))
            }
        }
    }
}

/// Data shared by the dual object and the comparison maps.
struct DualFrame {
    bf: Mat,
    c: Mat,
    sigma_inv: Mat,
    pv0: Mat,
    /// `pi0` followed by coordinates in the canonical basis of `V0`
    r_pi0: Mat,
    /// `v_K|F` in `V0` coordinates
    r_vk_bf: Mat,
}

impl DualFrame {
    fn new(x: &Fhs, c: Mat) -> Result<Self> {
        if !x.is_free() {
            return Err(Error::NotFree);
        }
        let bf = x.het.f0().basis_matrix();
        let sigma_inv = x.sigma.inverse().expect("validated");
        let pv0 = x.v_quotient().projection();
        let vk = x.vk();
        let pi0 = Mat::identity(x.v_dim).sub(&vk.mul(&c).mul(&sigma_inv).mul(&pv0));
        let r_pi0 = x.v0.coordinates_mat(&pi0).ok_or_else(|| Error::Internal("pi0 does not land in V0".into()))?;
        let r_vk_bf = x.v0.coordinates_mat(&vk.mul(&bf)).ok_or_else(|| Error::Internal("v_K(F0) not in V0".into()))?;
        Ok(DualFrame { bf, c, sigma_inv, pv0, r_pi0, r_vk_bf })
    }

    /// `s o sigma^-1 o pr : V -> H_K`.
    fn back(&self) -> Mat {
        self.c.mul(&self.sigma_inv).mul(&self.pv0)
    }
}

impl Fhs {
    /// Dual with the default section.
    pub fn dual(&self) -> Result<Fhs> {
        self.dual_with(Splitting::Pivot)
    }

    pub fn dual_with(&self, split: Splitting) -> Result<Fhs> {
        self.dual_with_section(split.section(self.het.f0()))
    }

    fn dual_with_section(&self, c: Mat) -> Result<Fhs> {
        let fr = DualFrame::new(self, c)?;
        let het = self.het.ihom_tate()?;
        let s = self.h0_dim;
        let f = self.het.f0().dim();
        let a = self.v0.dim();
        let m = s + f;
        let bft = fr.bf.transpose();
        let sigma = bft.mul(&Quotient::new(het.f0().clone()).lift());
        let v0 = Subspace::coordinate(m, &(0..s).collect::<Vec<_>>());
        let w2 = het.w_m2().image_under(&bft);
        let w2_in_v = Subspace::span(
            m,
            w2.basis().iter().map(|b| {
                let mut v = vec![crate::scalar::Scalar::zero(); s];
                v.extend(b.iter().cloned());
                v
            }),
        );
        let v1 = v0.sum(&w2_in_v);
        let lambda = fr.back().mul(&self.v0_map);
        let vz_map = lambda.transpose().vstack(&bft);
        let v0_map = fr.r_pi0.mul(&self.v0_map).transpose().vstack(&fr.r_vk_bf.transpose().neg());
        Fhs::new(a, het, m, v0, v1, v0_map, vz_map, sigma)
            .map_err(|e| Error::Internal(format!("dual object invalid: {e}")))
    }
}

impl FhsMorphism {
    /// The dual `Y' -> X'` of `X -> Y` (default sections on both sides).
    pub fn dual(&self) -> Result<FhsMorphism> {
        let (x, y) = (&self.source, &self.target);
        let fx = DualFrame::new(x, Splitting::Pivot.section(x.het.f0()))?;
        let fy = DualFrame::new(y, Splitting::Pivot.section(y.het.f0()))?;
        let fk = self.fz.rational_matrix();
        let (xd, yd) = (x.dual()?, y.dual()?);
        let f0 =
            y.v0.coordinates_mat(&self.g.mul(&x.v0.basis_matrix()))
                .ok_or_else(|| Error::Internal("g(V0) not in V0'".into()))?
                .transpose();
        let fy_space = y.het.f0();
        let fbar = self.fbar();
        let shear = fk.mul(&fx.c).sub(&fy.c.mul(&fbar)).mul(&fx.sigma_inv).mul(&fx.pv0).mul(&x.v0_map);
        let e = fy_space.coordinates_mat(&shear).ok_or_else(|| Error::Internal("shear leaves F0'".into()))?;
        let gf = fy_space.coordinates_mat(&fk.mul(&fx.bf)).ok_or_else(|| Error::Internal("f(F0) not in F0'".into()))?;
        let (sx, sy) = (x.h0_dim, y.h0_dim);
        let (fdx, fdy) = (x.het.f0().dim(), fy_space.dim());
        let mut g = Mat::zeros(sx + fdx, sy + fdy);
        g.set_block(0, 0, &self.f0.transpose());
        g.set_block(0, sy, &e.transpose());
        g.set_block(sx, sy, &gf.transpose());
        FhsMorphism::new(yd, xd, f0, self.fz.matrix().transpose(), g)
    }
}

/// The section of `H'_K -> H'_K/F0'` whose image annihilates the image of
/// `c`; with it the comparison below takes its simplest form.
fn transposed_section(x: &Fhs, c: &Mat) -> Result<Mat> {
    let n = x.het.rank();
    let fd = x.het.ihom_tate()?.f0().clone();
    let a = Subspace::span(n, c.col_vectors()).annihilator().basis_matrix();
    let pa = Quotient::new(fd).projection().mul(&a);
    let inv = pa.inverse().ok_or_else(|| Error::Internal("annihilator is not a complement".into()))?;
    Ok(a.mul(&inv))
}

/// The comparison `X -> X''` (with inverse), all sections default.
pub fn double_dual_comparison(x: &Fhs) -> Result<FhsIso> {
    let c = Splitting::Pivot.section(x.het.f0());
    let fr = DualFrame::new(x, c.clone())?;
    let xd = x.dual()?;
    let cd = transposed_section(x, &c)?;
    let xdd = xd.dual_with_section(cd.clone())?;
    let s = x.h0_dim;
    let ann = x.het.ihom_tate()?.f0().basis_matrix();
    let g = fr.r_pi0.neg().vstack(&ann.transpose().mul(&fr.back()));
    let direct = FhsMorphism::new(x.clone(), xdd, Mat::identity(s).neg(), IntMat::identity(x.het.rank()), g)?;
    let shear = splitting_shear(&xd, cd, Splitting::Pivot.section(xd.het.f0()))?;
    FhsIso::from_forward(shear.compose(&direct)?)
}

/// The shear isomorphism between the duals computed with two sections.
pub fn dual_splitting_iso(x: &Fhs, first: Splitting, second: Splitting) -> Result<FhsIso> {
    let f = x.het.f0();
    FhsIso::from_forward(splitting_shear(x, first.section(f), second.section(f))?)
}

fn splitting_shear(x: &Fhs, c1: Mat, c2: Mat) -> Result<FhsMorphism> {
    let (d1, d2) = (x.dual_with_section(c1.clone())?, x.dual_with_section(c2.clone())?);
    let f1 = DualFrame::new(x, c1)?;
    let delta = x
        .het
        .f0()
        .coordinates_mat(&f1.c.sub(&c2))
        .ok_or_else(|| Error::Internal("sections differ outside F0".into()))?;
    let mu = delta.mul(&f1.sigma_inv).mul(&f1.pv0).mul(&x.v0_map).transpose().neg();
    let (s, f) = (x.h0_dim, x.het.f0().dim());
    let mut g = Mat::identity(s + f);
    g.set_block(0, s, &mu);
    FhsMorphism::new(d1, d2, Mat::identity(x.v0.dim()), IntMat::identity(x.het.rank()), g)
}

/// `c(ihom(e X)) -> (e X)'`.
pub fn etale_dual_comparison(x: &Fhs) -> Result<FhsIso> {
    let et = x.etale_part();
    let dual = et.dual()?;
    let c = Fhs::canonical_etale(&et.het.ihom_tate()?);
    let g = dual.sigma.clone();
    let forward = FhsMorphism::new(c, dual, Mat::zeros(0, 0), IntMat::identity(et.het.rank()), g)?;
    FhsIso::from_forward(forward)
}
