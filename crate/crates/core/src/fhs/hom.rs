//! `Hom(X, Y)` as a `K`-vector space (maps with `fz = 0`) plus a lattice of
//! maps with integral lattice component.

use num_bigint::BigInt;

use super::{Fhs, FhsIso, FhsMorphism};
use crate::error::{Error, Result};
use crate::lattice::{int_solve, lattice_points, IntMat};
use crate::linalg::{Mat, Quotient, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct HomGroup {
    pub source: Fhs,
    pub target: Fhs,
    /// `K`-basis of the maps with vanishing lattice component.
    pub linear_part: Vec<FhsMorphism>,
    /// Maps whose lattice components form a basis of the lattice of all
    /// attainable lattice components.
    pub lattice_part: Vec<FhsMorphism>,
}

struct Layout {
    s: (usize, usize),
    m: (usize, usize),
    n: (usize, usize),
}

impl Layout {
    fn total(&self) -> usize {
        self.s.0 * self.s.1 + self.m.0 * self.m.1 + self.n.0 * self.n.1
    }

    fn split(&self, u: &[Scalar]) -> (Mat, Mat, Mat) {
        let a = self.s.0 * self.s.1;
        let b = a + self.m.0 * self.m.1;
        let f0 = Mat::from_rows(self.s.0, self.s.1, chunk(&u[..a], self.s.1, self.s.0));
        let g = Mat::from_rows(self.m.0, self.m.1, chunk(&u[a..b], self.m.1, self.m.0));
        let fz = Mat::from_rows(self.n.0, self.n.1, chunk(&u[b..], self.n.1, self.n.0));
        (f0, g, fz)
    }

    fn fz_range(&self) -> std::ops::Range<usize> {
        let b = self.s.0 * self.s.1 + self.m.0 * self.m.1;
        b..b + self.n.0 * self.n.1
    }
}

fn chunk(v: &[Scalar], width: usize, rows: usize) -> Vec<Vector> {
    (0..rows).map(|i| v[i * width..(i + 1) * width].to_vec()).collect()
}

fn flatten(ms: &[Mat]) -> Vector {
    ms.iter().flat_map(|m| m.entries().cloned()).collect()
}

/// All linear conditions on `(f0, g, fz)`, as residual matrices.
fn residuals(x: &Fhs, y: &Fhs, f0: &Mat, g: &Mat, fz: &Mat, cache: &Frames) -> Vector {
    let mut out = vec![
        g.mul(&x.v0_map).sub(&y.v0_map.mul(f0)),
        g.mul(&x.vk()).sub(&y.vk().mul(fz)),
        cache.pv0.mul(g).mul(&cache.bv0),
        cache.pv1.mul(g).mul(&cache.bv1),
    ];
    for (p, b) in &cache.weights {
        out.push(p.mul(fz).mul(b));
    }
    flatten(&out)
}

struct Frames {
    pv0: Mat,
    bv0: Mat,
    pv1: Mat,
    bv1: Mat,
    weights: Vec<(Mat, Mat)>,
}

impl Frames {
    fn new(x: &Fhs, y: &Fhs) -> Self {
        let pair = |src: &Subspace, dst: &Subspace| (Quotient::new(dst.clone()).projection(), src.basis_matrix());
        let (pv0, bv0) = pair(&x.v0, &y.v0);
        let (pv1, bv1) = pair(&x.v1, &y.v1);
        let weights =
            vec![pair(x.het.w_m1(), y.het.w_m1()), pair(x.het.w_m2(), y.het.w_m2()), pair(x.het.f0(), y.het.f0())];
        Frames { pv0, bv0, pv1, bv1, weights }
    }
}

/// Solves the constraint system for morphisms `x -> y`; both lattices must be
/// free.
pub fn hom_group(x: &Fhs, y: &Fhs) -> Result<HomGroup> {
    if !x.is_free() || !y.is_free() {
        return Err(Error::NotFree);
    }
    let lay = Layout { s: (y.h0_dim, x.h0_dim), m: (y.v_dim, x.v_dim), n: (y.het.rank(), x.het.rank()) };
    let frames = Frames::new(x, y);
    let total = lay.total();
    let mut columns = Vec::with_capacity(total);
    for k in 0..total {
        let mut u = vec![Scalar::zero(); total];
        u[k] = Scalar::one();
        let (f0, g, fz) = lay.split(&u);
        columns.push(residuals(x, y, &f0, &g, &fz, &frames));
    }
    let rows = columns.first().map_or(0, Vec::len);
    let system = Mat::from_cols(rows, &columns);
    let sol = system.kernel();
    let fz_idx: Vec<usize> = lay.fz_range().collect();
    let sol_mat = sol.basis_matrix();
    let fz_of_sol = sol_mat.select_rows(&fz_idx);

    let build = |u: &[Scalar]| -> Result<FhsMorphism> {
        let (f0, g, fz) = lay.split(u);
        let fz = IntMat::from_mat(&fz).ok_or_else(|| Error::Internal("non-integral lattice component".into()))?;
        FhsMorphism::new(x.clone(), y.clone(), f0, fz, g)
    };

    // maps with fz = 0
    let lin_coeffs = fz_of_sol.kernel();
    let linear_part = lin_coeffs.basis().iter().map(|c| build(&sol_mat.mul_vec(c))).collect::<Result<Vec<_>>>()?;

    // integral points of the attainable fz-space
    let attainable = fz_of_sol.image().rational_part();
    let points = lattice_points(&attainable);
    let mut lattice_part = Vec::new();
    for p in points.col_vectors() {
        let target: Vector = p.iter().map(Scalar::from_bigint).collect();
        let c = fz_of_sol
            .solve(&target)
            .ok_or_else(|| Error::Internal("lattice point outside the solution space".into()))?;
        lattice_part.push(build(&sol_mat.mul_vec(&c))?);
    }
    Ok(HomGroup { source: x.clone(), target: y.clone(), linear_part, lattice_part })
}

impl HomGroup {
    pub fn linear_dim(&self) -> usize {
        self.linear_part.len()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_part.len()
    }

    pub fn is_zero(&self) -> bool {
        self.linear_part.is_empty() && self.lattice_part.is_empty()
    }

    /// Lattice components of the lattice generators, as columns.
    pub fn lattice_matrix(&self) -> IntMat {
        let n = self.target.het.rank() * self.source.het.rank();
        let cols: Vec<Vec<BigInt>> =
            self.lattice_part.iter().map(|phi| phi.fz.matrix().row_vectors().into_iter().flatten().collect()).collect();
        IntMat::from_cols(n, &cols)
    }

    /// Coordinates of `phi` in the basis: integer coefficients on the lattice
    /// generators and `K` coefficients on the linear part.
    pub fn coordinates(&self, phi: &FhsMorphism) -> Option<(Vec<BigInt>, Vector)> {
        if phi.source != self.source || phi.target != self.target {
            return None;
        }
        let fz: Vec<BigInt> = phi.fz.matrix().row_vectors().into_iter().flatten().collect();
        let ints = int_solve(&self.lattice_matrix(), &fz)?;
        let mut rest = phi.clone();
        for (n, gen) in ints.iter().zip(&self.lattice_part) {
            let c = Scalar::from_bigint(n);
            rest.f0 = rest.f0.sub(&gen.f0.scale(&c));
            rest.g = rest.g.sub(&gen.g.scale(&c));
        }
        let flat = |m: &FhsMorphism| flatten(&[m.f0.clone(), m.g.clone()]);
        let cols: Vec<Vector> = self.linear_part.iter().map(flat).collect();
        let target = flat(&rest);
        let lin = Mat::from_cols(target.len(), &cols).solve(&target)?;
        Some((ints, lin))
    }

    pub fn contains(&self, phi: &FhsMorphism) -> bool {
        self.coordinates(phi).is_some()
    }

    /// True when source and target differ in some dimension or lattice, so
    /// that no element of the group can be invertible.
    pub fn dimension_obstruction(&self) -> bool {
        let (x, y) = (&self.source, &self.target);
        x.h0_dim != y.h0_dim
            || x.v_dim != y.v_dim
            || x.v0.dim() != y.v0.dim()
            || x.v1.dim() != y.v1.dim()
            || x.lattice() != y.lattice()
    }
}

/// Looks for an isomorphism `x -> y` among small integer combinations
/// (coefficients in `-1..=1`) of the lattice generators of `Hom(x, y)` plus
/// at most one linear generator. `None` means the search found nothing; it is
/// a proof of non-isomorphism only when the dimension obstruction holds.
pub fn search_iso(x: &Fhs, y: &Fhs) -> Result<Option<FhsIso>> {
    if x == y {
        return Ok(Some(FhsIso::from_forward(FhsMorphism::identity(x))?));
    }
    let h = hom_group(x, y)?;
    if h.dimension_obstruction() {
        return Ok(None);
    }
    let gens = &h.lattice_part[..h.lattice_part.len().min(8)];
    let extras: Vec<Option<&FhsMorphism>> = std::iter::once(None).chain(h.linear_part.iter().map(Some)).collect();
    let total = 3usize.pow(gens.len() as u32);
    for code in 0..total {
        let mut c = code;
        let coeffs: Vec<i64> = (0..gens.len())
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        let mut base = FhsMorphism::zero(x, y);
        for (k, phi) in coeffs.iter().zip(gens) {
            base = base.combine(1, phi, *k)?;
        }
        for extra in &extras {
            let phi = match extra {
                Some(e) => base.combine(1, e, 1)?,
                None => base.clone(),
            };
            if phi.inverse().is_some() {
                return Ok(Some(FhsIso::from_forward(phi)?));
            }
        }
    }
    Ok(None)
}
