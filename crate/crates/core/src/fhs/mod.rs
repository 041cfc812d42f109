//! Formal Hodge structures of level at most one.
//!
//! An object carries the Lie algebra `K^s` of its connected part `H0`, an
//! etale part `H_et` (a mixed Hodge structure on `H_Z`), a filtered space
//! `V0 <= V1 <= V = K^m`, the maps `v0 : K^s -> V` and `vz : H_Z -> V`, and
//! the comparison `sigma : H_K/F0 -> V/V0`.
//!
//! `sigma` is written in quotient coordinates: `H_K/F0` and `V/V0` are
//! coordinatised by the standard vectors at the non-pivot positions of
//! `F0` and `V0` respectively (see [`crate::linalg::Quotient`]).

mod abelian;
mod dual;
mod hom;
mod structure;

pub use abelian::{check_exact, ComponentStatus, ExactnessReport, NodeReport};
pub use dual::{double_dual_comparison, dual_splitting_iso, etale_dual_comparison, Splitting};
pub use hom::{hom_group, search_iso, HomGroup};
pub use structure::LinearMap;

use crate::error::{Error, Result};
use crate::lattice::{FgAbGroup, IntMat, LatticeMap};
use crate::linalg::{Mat, Quotient, Subspace};
use crate::mhs::{Mhs, MhsMorphism};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fhs {
    h0_dim: usize,
    het: Mhs,
    v_dim: usize,
    v0: Subspace,
    v1: Subspace,
    v0_map: Mat,
    vz_map: Mat,
    sigma: Mat,
}

impl Fhs {
    /// Checks the filtration and sigma conditions, the square `pr o vz = sigma o c`, and the
    /// derived inclusion `v_K(F0) <= V0`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        h0_dim: usize,
        het: Mhs,
        v_dim: usize,
        v0: Subspace,
        v1: Subspace,
        v0_map: Mat,
        vz_map: Mat,
        sigma: Mat,
    ) -> Result<Self> {
        let gens = het.lattice().num_gens();
        if v0.ambient() != v_dim || v1.ambient() != v_dim {
            return Err(Error::BadFiltration(format!("V0, V1 must live in K^{v_dim}")));
        }
        if (v0_map.rows(), v0_map.cols()) != (v_dim, h0_dim) {
            return Err(Error::Shape(format!("v0_map must be {v_dim}x{h0_dim}")));
        }
        if (vz_map.rows(), vz_map.cols()) != (v_dim, gens) {
            return Err(Error::Shape(format!("vz_map must be {v_dim}x{gens}")));
        }
        if !v1.contains_space(&v0) {
            return Err(Error::BadFiltration("V0 is not contained in V1".into()));
        }
        if (het.rank()..gens).any(|j| !vz_map.col(j).iter().all(|x| x.is_zero())) {
            return Err(Error::Shape("vz must vanish on torsion generators".into()));
        }
        let fq = Quotient::new(het.f0().clone());
        let vq = Quotient::new(v0.clone());
        if (sigma.rows(), sigma.cols()) != (vq.dim(), fq.dim()) || sigma.inverse().is_none() {
            return Err(Error::SigmaNotIso);
        }
        let w2 = fq.image_of(het.w_m2());
        if w2.image_under(&sigma) != vq.image_of(&v1) {
            return Err(Error::SigmaW2Mismatch);
        }
        let lhs = vq.projection().mul(&vz_map);
        let rhs = sigma.mul(&fq.projection()).mul(&het.tensor_map());
        if lhs != rhs {
            return Err(Error::Square1Broken);
        }
        let x = Fhs { h0_dim, het, v_dim, v0, v1, v0_map, vz_map, sigma };
        if !x.v0.contains_space(&x.het.f0().image_under(&x.vk())) {
            return Err(Error::DerivedF0Inclusion);
        }
        Ok(x)
    }

    pub fn zero() -> Self {
        Fhs::new(
            0,
            Mhs::zero(),
            0,
            Subspace::zero(0),
            Subspace::zero(0),
            Mat::zeros(0, 0),
            Mat::zeros(0, 0),
            Mat::zeros(0, 0),
        )
        .unwrap()
    }

    pub fn h0_dim(&self) -> usize {
        self.h0_dim
    }

    pub fn het(&self) -> &Mhs {
        &self.het
    }

    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    pub fn v0(&self) -> &Subspace {
        &self.v0
    }

    pub fn v1(&self) -> &Subspace {
        &self.v1
    }

    pub fn v0_map(&self) -> &Mat {
        &self.v0_map
    }

    pub fn vz_map(&self) -> &Mat {
        &self.vz_map
    }

    pub fn sigma(&self) -> &Mat {
        &self.sigma
    }

    pub fn lattice(&self) -> &FgAbGroup {
        self.het.lattice()
    }

    /// `v_K = vz (x) K : H_K -> V`.
    pub fn vk(&self) -> Mat {
        self.vz_map.block(0, 0, self.v_dim, self.het.rank())
    }

    pub fn f0_quotient(&self) -> Quotient {
        Quotient::new(self.het.f0().clone())
    }

    pub fn v_quotient(&self) -> Quotient {
        Quotient::new(self.v0.clone())
    }

    pub fn is_free(&self) -> bool {
        self.het.is_free()
    }

    /// `H0 = V0 = 0`.
    pub fn is_etale(&self) -> bool {
        self.h0_dim == 0 && self.v0.is_zero()
    }

    /// The etale part vanishes: no lattice, hence `V = V0`.
    pub fn is_connected(&self) -> bool {
        self.lattice().is_trivial() && self.v0.is_full()
    }

    /// `v(H0) <= V0`.
    pub fn is_special(&self) -> bool {
        self.v0.contains_space(&self.v0_map.image())
    }

    pub fn is_zero(&self) -> bool {
        self.h0_dim == 0 && self.v_dim == 0 && self.lattice().is_trivial()
    }

    /// Invariants `(s, rank H_Z, dim V, dim V0, dim V1, dim F0)`.
    pub fn invariants(&self) -> [usize; 6] {
        [self.h0_dim, self.het.lattice().num_gens(), self.v_dim, self.v0.dim(), self.v1.dim(), self.het.f0().dim()]
    }

    /// Direct sum with block-diagonal data.
    pub fn direct_sum(&self, other: &Fhs) -> Result<Fhs> {
        if !self.is_free() || !other.is_free() {
            return Err(Error::NotFree);
        }
        let (n1, n2) = (self.het.rank(), other.het.rank());
        let (m1, m2) = (self.v_dim, other.v_dim);
        let sum_sub = |a: &Subspace, b: &Subspace, d1: usize, d2: usize| {
            let left = a.basis().iter().map(|v| {
                let mut w = v.clone();
                w.extend(std::iter::repeat_n(crate::scalar::Scalar::zero(), d2));
                w
            });
            let right = b.basis().iter().map(|v| {
                let mut w = vec![crate::scalar::Scalar::zero(); d1];
                w.extend(v.iter().cloned());
                w
            });
            Subspace::span(d1 + d2, left.chain(right).collect::<Vec<_>>())
        };
        let het = Mhs::new(
            FgAbGroup::free(n1 + n2),
            sum_sub(self.het.w_m1(), other.het.w_m1(), n1, n2),
            sum_sub(self.het.w_m2(), other.het.w_m2(), n1, n2),
            sum_sub(self.het.f0(), other.het.f0(), n1, n2),
            if self.lattice().is_trivial() { other.het.tate_tag() } else { self.het.tate_tag() },
        )?;
        let v0 = sum_sub(&self.v0, &other.v0, m1, m2);
        let v1 = sum_sub(&self.v1, &other.v1, m1, m2);
        // sigma must be re-expressed in the quotient coordinates of the sum
        let big_sigma = self.lift_sigma().block_diag(&other.lift_sigma());
        let fq = Quotient::new(het.f0().clone());
        let vq = Quotient::new(v0.clone());
        let sigma = vq.projection().mul(&big_sigma).mul(&fq.lift());
        Fhs::new(
            self.h0_dim + other.h0_dim,
            het,
            m1 + m2,
            v0,
            v1,
            self.v0_map.block_diag(&other.v0_map),
            self.vz_map.block_diag(&other.vz_map),
            sigma,
        )
    }

    /// `sigma` as a map `H_K -> V` (through the chosen quotient lifts).
    /// Moves a free structure along `b` on `Lie H0`, the unimodular `u` on
    /// `H_Z` and `a` on `V`, returning the isomorphism `(b, u, a)`.
    pub fn transport(&self, b: &Mat, u: &IntMat, a: &Mat) -> Result<FhsIso> {
        if !self.is_free() {
            return Err(Error::NotFree);
        }
        let u_inv = u.unimodular_inverse().ok_or_else(|| Error::Shape("lattice change is not unimodular".into()))?;
        let b_inv = b.inverse().ok_or_else(|| Error::Shape("Lie change is not invertible".into()))?;
        a.inverse().ok_or_else(|| Error::Shape("V change is not invertible".into()))?;
        let het = self.het.transport(u)?;
        let v0 = self.v0.image_under(a);
        let v1 = self.v1.image_under(a);
        let sigma = Quotient::new(v0.clone())
            .projection()
            .mul(a)
            .mul(&self.lift_sigma())
            .mul(&u_inv.to_mat())
            .mul(&Quotient::new(het.f0().clone()).lift());
        let moved = Fhs::new(
            self.h0_dim,
            het,
            self.v_dim,
            v0,
            v1,
            a.mul(&self.v0_map).mul(&b_inv),
            a.mul(&self.vz_map).mul(&u_inv.to_mat()),
            sigma,
        )?;
        FhsIso::from_forward(FhsMorphism::new(self.clone(), moved, b.clone(), u.clone(), a.clone())?)
    }

    fn lift_sigma(&self) -> Mat {
        self.v_quotient().lift().mul(&self.sigma).mul(&self.f0_quotient().projection())
    }
}

/// A morphism `(f0, fz, g)` of formal Hodge structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FhsMorphism {
    source: Fhs,
    target: Fhs,
    f0: Mat,
    fz: LatticeMap,
    g: Mat,
}

impl FhsMorphism {
    pub fn new(source: Fhs, target: Fhs, f0: Mat, fz: IntMat, g: Mat) -> Result<Self> {
        if (f0.rows(), f0.cols()) != (target.h0_dim, source.h0_dim) {
            return Err(Error::Shape("f0 has the wrong shape".into()));
        }
        if (g.rows(), g.cols()) != (target.v_dim, source.v_dim) {
            return Err(Error::Shape("g has the wrong shape".into()));
        }
        let fz = LatticeMap::new(source.lattice().clone(), target.lattice().clone(), fz)?;
        MhsMorphism::new(source.het.clone(), target.het.clone(), fz.clone())
            .map_err(|e| Error::EtaleComponentNotMhs(Box::new(e)))?;
        if !target.v0.contains_space(&source.v0.image_under(&g)) {
            return Err(Error::NotFiltered("g(V0) not in V0'".into()));
        }
        if !target.v1.contains_space(&source.v1.image_under(&g)) {
            return Err(Error::NotFiltered("g(V1) not in V1'".into()));
        }
        if g.mul(&source.v0_map) != target.v0_map.mul(&f0) {
            return Err(Error::Square2Broken("H0 component".into()));
        }
        if g.mul(&source.vz_map) != target.vz_map.mul(&fz.matrix().to_mat()) {
            return Err(Error::Square2Broken("lattice component".into()));
        }
        let phi = FhsMorphism { source, target, f0, fz, g };
        if !phi.square3_commutes() {
            return Err(Error::Internal("sigma square fails although the V square holds".into()));
        }
        Ok(phi)
    }

    /// `sigma' o fbar = gbar o sigma` on quotient coordinates.
    pub fn square3_commutes(&self) -> bool {
        let (x, y) = (&self.source, &self.target);
        let fbar = y.f0_quotient().projection().mul(&self.fz.rational_matrix().mul(&x.f0_quotient().lift()));
        let gbar = self.gbar();
        y.sigma.mul(&fbar) == gbar.mul(&x.sigma)
    }

    /// Induced map `V/V0 -> V'/V0'`.
    pub fn gbar(&self) -> Mat {
        self.target.v_quotient().projection().mul(&self.g).mul(&self.source.v_quotient().lift())
    }

    /// Induced map `H_K/F0 -> H'_K/F0'`.
    pub fn fbar(&self) -> Mat {
        let (x, y) = (&self.source, &self.target);
        y.f0_quotient().projection().mul(&self.fz.rational_matrix()).mul(&x.f0_quotient().lift())
    }

    pub fn identity(x: &Fhs) -> Self {
        FhsMorphism {
            source: x.clone(),
            target: x.clone(),
            f0: Mat::identity(x.h0_dim),
            fz: LatticeMap::identity(x.lattice()),
            g: Mat::identity(x.v_dim),
        }
    }

    pub fn zero(x: &Fhs, y: &Fhs) -> Self {
        FhsMorphism {
            source: x.clone(),
            target: y.clone(),
            f0: Mat::zeros(y.h0_dim, x.h0_dim),
            fz: LatticeMap::zero(x.lattice(), y.lattice()),
            g: Mat::zeros(y.v_dim, x.v_dim),
        }
    }

    pub fn source(&self) -> &Fhs {
        &self.source
    }

    pub fn target(&self) -> &Fhs {
        &self.target
    }

    pub fn f0(&self) -> &Mat {
        &self.f0
    }

    pub fn fz(&self) -> &LatticeMap {
        &self.fz
    }

    pub fn g(&self) -> &Mat {
        &self.g
    }

    /// `self o first`, squares glued.
    pub fn compose(&self, first: &FhsMorphism) -> Result<FhsMorphism> {
        if first.target != self.source {
            return Err(Error::NotComposable("target of the first map differs from the source of the second".into()));
        }
        FhsMorphism::new(
            first.source.clone(),
            self.target.clone(),
            self.f0.mul(&first.f0),
            self.fz.matrix().mul(first.fz.matrix()),
            self.g.mul(&first.g),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.fz.is_zero() && self.g.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.f0.is_identity()
            && self.g.is_identity()
            && self.fz.matrix() == &IntMat::identity(self.source.lattice().num_gens())
    }

    /// Two-sided inverse, when all three components are invertible.
    pub fn inverse(&self) -> Option<FhsMorphism> {
        let f0 = self.f0.inverse()?;
        let g = self.g.inverse()?;
        if !self.source.is_free() || !self.target.is_free() {
            return None;
        }
        let fz = self.fz.matrix().unimodular_inverse()?;
        FhsMorphism::new(self.target.clone(), self.source.clone(), f0, fz, g).ok()
    }

    /// `a*self + b*other` with integer `a`, `b` (Hom is an abelian group).
    pub fn combine(&self, a: i64, other: &FhsMorphism, b: i64) -> Result<FhsMorphism> {
        use crate::scalar::Scalar;
        let (sa, sb) = (Scalar::int(a), Scalar::int(b));
        let (ba, bb) = (num_bigint::BigInt::from(a), num_bigint::BigInt::from(b));
        FhsMorphism::new(
            self.source.clone(),
            self.target.clone(),
            self.f0.scale(&sa).add(&other.f0.scale(&sb)),
            self.fz.matrix().scale(&ba).add(&other.fz.matrix().scale(&bb)),
            self.g.scale(&sa).add(&other.g.scale(&sb)),
        )
    }
}

/// An isomorphism together with its inverse, both validated.
#[derive(Clone, Debug)]
pub struct FhsIso {
    pub forward: FhsMorphism,
    pub backward: FhsMorphism,
}

impl FhsIso {
    /// Builds the inverse and checks both composites are identities.
    pub fn from_forward(forward: FhsMorphism) -> Result<Self> {
        let backward = forward.inverse().ok_or_else(|| Error::Internal("comparison map is not invertible".into()))?;
        let iso = FhsIso { forward, backward };
        iso.verify()?;
        Ok(iso)
    }

    pub fn verify(&self) -> Result<()> {
        let a = self.backward.compose(&self.forward)?;
        let b = self.forward.compose(&self.backward)?;
        if a.is_identity() && b.is_identity() {
            Ok(())
        } else {
            Err(Error::Internal("composites of the isomorphism are not identities".into()))
        }
    }
}
