//! Mixed Hodge structures of level at most one.
//!
//! An [`Mhs`] is a finitely generated abelian group `H_Z` together with a
//! rational weight chain `W-2 <= W-1` of `H_Q` and a Hodge subspace `F0` of
//! `H_K`. Conjugation on `H_K` is coordinatewise conjugation in the lattice
//! basis. Torsion is allowed in `H_Z`; the Hodge data lives on the free part.

use num_bigint::BigInt;

use crate::error::{Error, HodgeAxiom, Result};
use crate::lattice::{lattice_points, FgAbGroup, IntMat, LatticeMap, SubQuotient};
use crate::linalg::{dot, Mat, Subspace};
use crate::scalar::Scalar;

/// Equality and hashing ignore the Tate tag, which is bookkeeping only.
#[derive(Clone, Debug)]
pub struct Mhs {
    lattice: FgAbGroup,
    w_m1: Subspace,
    w_m2: Subspace,
    f0: Subspace,
    tate_tag: i64,
}

impl PartialEq for Mhs {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.w_m1 == other.w_m1 && self.w_m2 == other.w_m2 && self.f0 == other.f0
    }
}

impl Eq for Mhs {}

impl std::hash::Hash for Mhs {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.lattice.hash(state);
        self.w_m1.hash(state);
        self.w_m2.hash(state);
        self.f0.hash(state);
    }
}

impl Mhs {
    /// Validates the level-one axioms and returns the structure.
    pub fn new(lattice: FgAbGroup, w_m1: Subspace, w_m2: Subspace, f0: Subspace, tate_tag: i64) -> Result<Self> {
        let n = lattice.rank();
        for (name, s) in [("W-1", &w_m1), ("W-2", &w_m2), ("F0", &f0)] {
            if s.ambient() != n {
                return Err(Error::Shape(format!("{name} lives in K^{} but the lattice has rank {n}", s.ambient())));
            }
        }
        if !w_m1.is_rational() || !w_m2.is_rational() {
            return Err(Error::WeightChainBroken("weight spaces must be defined over Q".into()));
        }
        if !w_m1.contains_space(&w_m2) {
            return Err(Error::WeightChainBroken("W-2 is not contained in W-1".into()));
        }
        if !f0.intersect(&w_m2).is_zero() {
            return Err(Error::HodgeAxiom(HodgeAxiom::F0MeetsWm2));
        }
        if !f0.sum(&w_m1).is_full() {
            return Err(Error::HodgeAxiom(HodgeAxiom::F0PlusWm1NotFull));
        }
        let a = f0.intersect(&w_m1);
        let a_bar = a.conj();
        let with_f = a.sum(&w_m2);
        let with_fbar = a_bar.sum(&w_m2);
        if with_f.sum(&with_fbar) != w_m1 || with_f.intersect(&with_fbar) != w_m2 {
            return Err(Error::HodgeAxiom(HodgeAxiom::GrM1NotSplit));
        }
        let gr0 = n - w_m1.dim();
        let gr1 = w_m1.dim() - w_m2.dim();
        if 2 * f0.dim() != 2 * gr0 + gr1 {
            return Err(Error::Internal("dim F0 differs from rank gr0 + rank gr-1 / 2".into()));
        }
        // the tag carries no information on a trivial lattice
        let tate_tag = if lattice.is_trivial() { 0 } else { tate_tag };
        Ok(Mhs { lattice, w_m1, w_m2, f0, tate_tag })
    }

    /// `Z(0)` or `Z(1)`.
    pub fn tate(twist: u8) -> Self {
        let z = FgAbGroup::free(1);
        match twist {
            0 => Mhs::new(z, Subspace::zero(1), Subspace::zero(1), Subspace::full(1), 0),
            1 => Mhs::new(z, Subspace::full(1), Subspace::full(1), Subspace::zero(1), 1),
            _ => panic!("only Z(0) and Z(1) have level <= 1"),
        }
        .expect("Tate structures are valid")
    }

    pub fn zero() -> Self {
        Mhs::new(FgAbGroup::free(0), Subspace::zero(0), Subspace::zero(0), Subspace::zero(0), 0).unwrap()
    }

    /// Pure weight zero structure on `Z^n`.
    pub fn pure_weight_zero(n: usize) -> Self {
        Mhs::new(FgAbGroup::free(n), Subspace::zero(n), Subspace::zero(n), Subspace::full(n), 0).unwrap()
    }

    pub fn lattice(&self) -> &FgAbGroup {
        &self.lattice
    }

    /// Dimension of `H_Q`.
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn w_m1(&self) -> &Subspace {
        &self.w_m1
    }

    pub fn w_m2(&self) -> &Subspace {
        &self.w_m2
    }

    pub fn f0(&self) -> &Subspace {
        &self.f0
    }

    pub fn tate_tag(&self) -> i64 {
        self.tate_tag
    }

    pub fn with_tate_tag(mut self, tag: i64) -> Self {
        if !self.lattice.is_trivial() {
            self.tate_tag = tag;
        }
        self
    }

    pub fn is_free(&self) -> bool {
        self.lattice.is_free()
    }

    /// Ranks of `gr_0`, `gr_-1`, `gr_-2`.
    pub fn graded_ranks(&self) -> [usize; 3] {
        let n = self.rank();
        [n - self.w_m1.dim(), self.w_m1.dim() - self.w_m2.dim(), self.w_m2.dim()]
    }

    /// The natural map `H_Z -> H_K`: identity on free generators, zero on torsion.
    pub fn tensor_map(&self) -> Mat {
        let mut t = Mat::zeros(self.rank(), self.lattice.num_gens());
        for i in 0..self.rank() {
            t.set(i, i, Scalar::one());
        }
        t
    }

    /// `Hom(-, Z(1))`: annihilators swap the weight pieces.
    pub fn ihom_tate(&self) -> Result<Mhs> {
        if !self.is_free() {
            return Err(Error::TorsionInput);
        }
        Mhs::new(
            self.lattice.clone(),
            self.w_m2.annihilator(),
            self.w_m1.annihilator(),
            self.f0.annihilator(),
            1 - self.tate_tag,
        )
    }

    /// The structure moved along a unimodular change of basis `u` of a free
    /// lattice.
    pub fn transport(&self, u: &IntMat) -> Result<Mhs> {
        if !self.is_free() {
            return Err(Error::TorsionInput);
        }
        if u.rows() != self.rank() || u.unimodular_inverse().is_none() {
            return Err(Error::Shape("lattice change is not unimodular".into()));
        }
        let uq = u.to_mat();
        Mhs::new(
            self.lattice.clone(),
            self.w_m1.image_under(&uq),
            self.w_m2.image_under(&uq),
            self.f0.image_under(&uq),
            self.tate_tag,
        )
    }

    /// Lattice points `W-1 cap H_Z` and `W-2 cap H_Z` as basis matrices of the
    /// free part; requires a free lattice.
    pub fn weight_lattices(&self) -> Result<(IntMat, IntMat)> {
        if !self.is_free() {
            return Err(Error::TorsionInput);
        }
        Ok((lattice_points(&self.w_m1), lattice_points(&self.w_m2)))
    }

    /// Basis of the free lattice `gr_-1 = (W-1 cap H_Z)/(W-2 cap H_Z)`, given by
    /// lifts in `H_Z`, followed by the basis of `W-2 cap H_Z`.
    pub fn gr_m1_basis(&self) -> Result<(IntMat, IntMat)> {
        let (b1, b2) = self.weight_lattices()?;
        let sq = SubQuotient::new(&b1, &b2);
        debug_assert!(sq.group.is_free());
        Ok((sq.gens.clone(), b2))
    }

    /// Checks a polarization witness `q` (an alternating integer form on
    /// `gr_-1`, written in the basis of [`Mhs::gr_m1_basis`]).
    pub fn check_polarization(&self, q: &IntMat) -> Result<bool> {
        let (lifts, b2) = self.gr_m1_basis()?;
        let e = lifts.cols();
        if q.rows() != e || q.cols() != e {
            return Err(Error::Shape(format!("polarization must be {e}x{e}")));
        }
        for i in 0..e {
            for j in 0..e {
                if *q.get(i, j) != -q.get(j, i) {
                    return Err(Error::NotAlternating);
                }
            }
        }
        if e == 0 {
            return Ok(true);
        }
        // F-part of gr_-1 in gr coordinates
        let frame = lifts.to_mat().hstack(&b2.to_mat());
        let a = self.f0.intersect(&self.w_m1);
        let fpart: Vec<Vec<Scalar>> =
            a.basis().iter().map(|v| frame.solve(v).expect("F0 cap W-1 lies in W-1")[..e].to_vec()).collect();
        let qm = q.to_mat();
        let form = |x: &[Scalar], y: &[Scalar]| dot(x, &qm.mul_vec(y));
        for x in &fpart {
            for y in &fpart {
                if !form(x, y).is_zero() {
                    return Ok(false);
                }
            }
        }
        let h = fpart.len();
        let mut herm = Mat::zeros(h, h);
        for (j, x) in fpart.iter().enumerate() {
            for (k, y) in fpart.iter().enumerate() {
                let y_bar: Vec<Scalar> = y.iter().map(Scalar::conj).collect();
                herm.set(j, k, Scalar::i() * form(x, &y_bar));
            }
        }
        Ok(is_positive_definite(&herm))
    }
}

/// Positive definiteness of a hermitian matrix by symmetric elimination:
/// every pivot must be a positive rational.
pub fn is_positive_definite(h: &Mat) -> bool {
    let n = h.rows();
    let mut a = h.clone();
    for k in 0..n {
        let p = a.get(k, k).clone();
        if !p.is_rational() || p.re() <= num_rational::BigRational::from_integer(0.into()) {
            return false;
        }
        for i in k + 1..n {
            let factor = a.get(i, k) / &p;
            for j in k..n {
                let x = a.get(i, j) - &(&factor * a.get(k, j));
                a.set(i, j, x);
            }
        }
    }
    true
}

/// A lattice map compatible with weights and Hodge filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MhsMorphism {
    source: Mhs,
    target: Mhs,
    map: LatticeMap,
}

impl MhsMorphism {
    pub fn new(source: Mhs, target: Mhs, map: LatticeMap) -> Result<Self> {
        if map.source() != source.lattice() || map.target() != target.lattice() {
            return Err(Error::Shape("lattice map does not match the structures".into()));
        }
        let fq = map.rational_matrix();
        if !target.w_m1.contains_space(&source.w_m1.image_under(&fq)) {
            return Err(Error::NotMhsMorphism("W-1 not preserved".into()));
        }
        if !target.w_m2.contains_space(&source.w_m2.image_under(&fq)) {
            return Err(Error::NotMhsMorphism("W-2 not preserved".into()));
        }
        if !target.f0.contains_space(&source.f0.image_under(&fq)) {
            return Err(Error::NotMhsMorphism("F0 not preserved".into()));
        }
        Ok(MhsMorphism { source, target, map })
    }

    pub fn identity(x: &Mhs) -> Self {
        MhsMorphism { source: x.clone(), target: x.clone(), map: LatticeMap::identity(x.lattice()) }
    }

    pub fn source(&self) -> &Mhs {
        &self.source
    }

    pub fn target(&self) -> &Mhs {
        &self.target
    }

    pub fn map(&self) -> &LatticeMap {
        &self.map
    }

    pub fn kernel(&self) -> Result<(Mhs, LatticeMap)> {
        let (group, emb) = self.map.kernel();
        let eq = emb.rational_matrix();
        let k = Mhs::new(
            group,
            self.source.w_m1.preimage(&eq),
            self.source.w_m2.preimage(&eq),
            self.source.f0.preimage(&eq),
            self.source.tate_tag,
        )
        .map_err(|e| Error::InternalStrictnessViolation(e.to_string()))?;
        Ok((k, emb))
    }

    pub fn cokernel(&self) -> Result<(Mhs, LatticeMap)> {
        let (group, proj, _) = self.map.cokernel();
        let pq = proj.rational_matrix();
        let c = Mhs::new(
            group,
            self.target.w_m1.image_under(&pq),
            self.target.w_m2.image_under(&pq),
            self.target.f0.image_under(&pq),
            self.target.tate_tag,
        )
        .map_err(|e| Error::InternalStrictnessViolation(e.to_string()))?;
        Ok((c, proj))
    }

    /// `ihom(-, Z(1))` on morphisms (contravariant).
    pub fn ihom_tate(&self) -> Result<MhsMorphism> {
        MhsMorphism::new(self.target.ihom_tate()?, self.source.ihom_tate()?, self.map.dual()?)
    }

    /// Strictness: `f(H) cap W'_i = f(W_i)` and `f(H_K) cap F0' = f(F0)`.
    pub fn is_strict(&self) -> bool {
        let fq = self.map.rational_matrix();
        let im = Subspace::full(self.source.rank()).image_under(&fq);
        im.intersect(&self.target.w_m1) == self.source.w_m1.image_under(&fq)
            && im.intersect(&self.target.w_m2) == self.source.w_m2.image_under(&fq)
            && im.intersect(&self.target.f0) == self.source.f0.image_under(&fq)
    }
}

/// Integer matrix helper for small literals.
pub fn int_mat(rows: usize, cols: usize, entries: &[i64]) -> IntMat {
    IntMat::from_i64(rows, cols, entries)
}

#[doc(hidden)]
pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gvec;

    /// Weight -1 block on Z^2 with F0 = span{e2 - i e1}.
    fn elliptic() -> Mhs {
        let f0 = Subspace::span(2, [gvec(&[(0, -1), (1, 0)])]);
        Mhs::new(FgAbGroup::free(2), Subspace::full(2), Subspace::zero(2), f0, 0).unwrap()
    }

    #[test]
    fn validation_examples() {
        let _ = Mhs::tate(0);
        let bad = Mhs::new(FgAbGroup::free(1), Subspace::full(1), Subspace::full(1), Subspace::full(1), 1);
        assert_eq!(bad, Err(Error::HodgeAxiom(HodgeAxiom::F0MeetsWm2)));
        // e2 - i e1 and its conjugate e2 + i e1 span K^2
        let v = gvec(&[(0, -1), (1, 0)]);
        let vb: Vec<Scalar> = v.iter().map(Scalar::conj).collect();
        assert_eq!(Subspace::span(2, [v, vb]).dim(), 2);
        let _ = elliptic();
        // a real F0 on gr-1 is not split
        let real = Subspace::span(2, [gvec(&[(1, 0), (0, 0)])]);
        let bad = Mhs::new(FgAbGroup::free(2), Subspace::full(2), Subspace::zero(2), real, 0);
        assert_eq!(bad, Err(Error::HodgeAxiom(HodgeAxiom::GrM1NotSplit)));
        let bad = Mhs::new(FgAbGroup::free(1), Subspace::zero(1), Subspace::full(1), Subspace::zero(1), 0);
        assert!(matches!(bad, Err(Error::WeightChainBroken(_))));
    }

    #[test]
    fn kernel_cokernel_examples() {
        let e = elliptic();
        let id = MhsMorphism::identity(&e);
        assert!(id.kernel().unwrap().0.lattice().is_trivial());
        assert!(id.cokernel().unwrap().0.lattice().is_trivial());

        let zero =
            MhsMorphism::new(Mhs::tate(1), Mhs::tate(0), LatticeMap::zero(&FgAbGroup::free(1), &FgAbGroup::free(1)))
                .unwrap();
        assert_eq!(zero.kernel().unwrap().0, Mhs::tate(1));
        assert_eq!(zero.cokernel().unwrap().0, Mhs::tate(0));

        let two = MhsMorphism::new(
            e.clone(),
            e.clone(),
            LatticeMap::new(e.lattice().clone(), e.lattice().clone(), int_mat(2, 2, &[2, 0, 0, 2])).unwrap(),
        )
        .unwrap();
        assert!(two.kernel().unwrap().0.lattice().is_trivial());
        let (c, _) = two.cokernel().unwrap();
        assert_eq!(c.lattice(), &FgAbGroup::new(0, vec![big(2), big(2)]).unwrap());
        assert_eq!(c.rank(), 0);
    }

    #[test]
    fn ihom_examples() {
        assert_eq!(Mhs::tate(0).ihom_tate().unwrap(), Mhs::tate(1));
        assert_eq!(Mhs::tate(1).ihom_tate().unwrap(), Mhs::tate(0));
        let d = elliptic().ihom_tate().unwrap();
        assert_eq!(d.graded_ranks(), [0, 2, 0]);
        // functional (1, i) kills e2 - i e1
        assert!(d.f0().contains(&gvec(&[(1, 0), (0, 1)])));
        assert_eq!(d.ihom_tate().unwrap(), elliptic());
        let torsion = Mhs::new(
            FgAbGroup::new(0, vec![big(2)]).unwrap(),
            Subspace::zero(0),
            Subspace::zero(0),
            Subspace::zero(0),
            0,
        )
        .unwrap();
        assert_eq!(torsion.ihom_tate(), Err(Error::TorsionInput));
    }

    #[test]
    fn polarization_examples() {
        let e = elliptic();
        let q = int_mat(2, 2, &[0, 1, -1, 0]);
        assert_eq!(e.check_polarization(&q), Ok(true));
        let neg = int_mat(2, 2, &[0, -1, 1, 0]);
        assert_eq!(e.check_polarization(&neg), Ok(false));
        assert_eq!(Mhs::tate(0).check_polarization(&int_mat(0, 0, &[])), Ok(true));
        assert_eq!(e.check_polarization(&int_mat(2, 2, &[1, 1, -1, 0])), Err(Error::NotAlternating));
    }
}
