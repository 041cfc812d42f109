//! 1-motives `[F -> G]` over `K` in linear presentation.
//!
//! `F = F0 x Z^r` with `Lie F0 = K^s`; `G` is given by its Lie algebra
//! `K^n`, the additive part `add = V(G)`, the subspace `toradd = Lie T + V(G)`
//! and the period lattice, the image of `Z^L` under the columns of `lambda`.
//! The map on `Z^r` is recorded through a logarithm `ell : Z^r -> K^n`, and
//! `u0 : K^s -> K^n` is the map on Lie algebras.

use crate::error::{Error, Result};
use crate::lattice::IntMat;
use crate::linalg::{Mat, Quotient, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Motive {
    s: usize,
    r: usize,
    n: usize,
    add: Subspace,
    toradd: Subspace,
    lambda: Mat,
    ell: Mat,
    u0: Mat,
    polarization: Option<IntMat>,
}

/// `(s, r, n, dim add, t, g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MotiveRanks {
    pub s: usize,
    pub r: usize,
    pub n: usize,
    pub add: usize,
    pub t: usize,
    pub g: usize,
}

impl Motive {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        s: usize,
        r: usize,
        n: usize,
        add: Subspace,
        toradd: Subspace,
        lambda: Mat,
        ell: Mat,
        u0: Mat,
        polarization: Option<IntMat>,
    ) -> Result<Self> {
        if add.ambient() != n || toradd.ambient() != n {
            return Err(Error::Shape(format!("subspaces must live in K^{n}")));
        }
        if lambda.rows() != n || (ell.rows(), ell.cols()) != (n, r) || (u0.rows(), u0.cols()) != (n, s) {
            return Err(Error::Shape("lambda, ell or u0 has the wrong shape".into()));
        }
        if !toradd.contains_space(&add) {
            return Err(Error::BadSubspaceChain);
        }
        let l = lambda.cols();
        let p_add = Quotient::new(add.clone()).projection();
        if p_add.mul(&lambda).rational_rank() != l {
            return Err(Error::LatticeMeetsAdditive);
        }
        let m = Motive { s, r, n, add, toradd, lambda, ell, u0, polarization };
        let torus = m.torus_lattice_space();
        let t = torus.dim();
        if t != m.toradd.dim() - m.add.dim() {
            return Err(Error::TorusRankMismatch(format!(
                "rank of the lattice in Lie T + V(G) is {t}, expected {}",
                m.toradd.dim() - m.add.dim()
            )));
        }
        let torus_span = torus.image_under(&m.lambda);
        if torus_span.sum(&m.add) != m.toradd {
            return Err(Error::TorusRankMismatch("torus periods do not span Lie T + V(G) modulo V(G)".into()));
        }
        let g = n - m.toradd.dim();
        let ab_rank = m.abelian_periods().rational_rank();
        if ab_rank != 2 * g || l != 2 * g + t {
            return Err(Error::AbelianPartNotFull(format!(
                "abelian periods have rational rank {ab_rank}, lattice rank {l}, g = {g}, t = {t}"
            )));
        }
        if let Some(q) = &m.polarization {
            let h = crate::realize::t_hodge(&m.etale_motive())?;
            if !h.check_polarization(q)? {
                return Err(Error::PolarizationRejected);
            }
        }
        Ok(m)
    }

    pub fn zero() -> Self {
        Motive::new(
            0,
            0,
            0,
            Subspace::zero(0),
            Subspace::zero(0),
            Mat::zeros(0, 0),
            Mat::zeros(0, 0),
            Mat::zeros(0, 0),
            None,
        )
        .unwrap()
    }

    /// The image of the periods in `lieG / toradd`.
    fn abelian_periods(&self) -> Mat {
        Quotient::new(self.toradd.clone()).projection().mul(&self.lambda)
    }

    /// `Q`-span of the period coordinates that land in `toradd`, inside `Q^L`.
    pub fn torus_lattice_space(&self) -> Subspace {
        self.abelian_periods().realify().kernel()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lattice_rank(&self) -> usize {
        self.lambda.cols()
    }

    pub fn add(&self) -> &Subspace {
        &self.add
    }

    pub fn toradd(&self) -> &Subspace {
        &self.toradd
    }

    pub fn lambda(&self) -> &Mat {
        &self.lambda
    }

    pub fn ell(&self) -> &Mat {
        &self.ell
    }

    pub fn u0(&self) -> &Mat {
        &self.u0
    }

    pub fn polarization(&self) -> Option<&IntMat> {
        self.polarization.as_ref()
    }

    pub fn without_polarization(mut self) -> Self {
        self.polarization = None;
        self
    }

    pub fn ranks(&self) -> MotiveRanks {
        let t = self.toradd.dim() - self.add.dim();
        MotiveRanks { s: self.s, r: self.r, n: self.n, add: self.add.dim(), t, g: self.n - self.toradd.dim() }
    }

    /// `F0 = 0` and `V(G) = 0`.
    pub fn is_etale(&self) -> bool {
        self.s == 0 && self.add.is_zero()
    }

    /// `F_et = 0` and `G` a vector group.
    pub fn is_connected(&self) -> bool {
        self.r == 0 && self.lambda.cols() == 0
    }

    /// `u(F0) <= V(G)`.
    pub fn is_special(&self) -> bool {
        self.add.contains_space(&self.u0.image())
    }

    /// `M_et = [F_et -> G / V(G)]`.
    pub fn etale_motive(&self) -> Motive {
        let q = Quotient::new(self.add.clone());
        let p = q.projection();
        let d = q.dim();
        Motive {
            s: 0,
            r: self.r,
            n: d,
            add: Subspace::zero(d),
            toradd: q.image_of(&self.toradd),
            lambda: p.mul(&self.lambda),
            ell: p.mul(&self.ell),
            u0: Mat::zeros(d, 0),
            polarization: self.polarization.clone(),
        }
    }

    /// `M0 = [F0 -> V(G)]` for special `M`.
    pub fn connected_part(&self) -> Result<Motive> {
        if !self.is_special() {
            return Err(Error::NotSpecial);
        }
        let a = self.add.dim();
        let u0 = self.add.coordinates_mat(&self.u0).expect("special");
        Motive::new(self.s, 0, a, Subspace::full(a), Subspace::full(a), Mat::zeros(a, 0), Mat::zeros(a, 0), u0, None)
    }

    /// `M / V(G) = [F -> G / V(G)]`.
    pub fn quotient_by_additive(&self) -> Motive {
        let mut q = self.etale_motive();
        q.s = self.s;
        q.u0 = Quotient::new(self.add.clone()).projection().mul(&self.u0);
        q
    }

    /// `F0[1] = [F0 -> 0]`.
    pub fn formal_shift(s: usize) -> Motive {
        Motive::new(
            s,
            0,
            0,
            Subspace::zero(0),
            Subspace::zero(0),
            Mat::zeros(0, 0),
            Mat::zeros(0, 0),
            Mat::zeros(0, s),
            None,
        )
        .expect("formal motive")
    }

    /// `0 -> M0 -> M -> M_et -> 0` for special `M`.
    pub fn seq6(&self) -> Result<[MotiveMorphism; 2]> {
        let m0 = self.connected_part()?;
        let et = self.etale_motive();
        let inc = MotiveMorphism::new(
            m0,
            self.clone(),
            Mat::identity(self.s),
            IntMat::zeros(self.r, 0),
            self.add.basis_matrix(),
        )?;
        let proj = MotiveMorphism::new(
            self.clone(),
            et,
            Mat::zeros(0, self.s),
            IntMat::identity(self.r),
            Quotient::new(self.add.clone()).projection(),
        )?;
        Ok([inc, proj])
    }

    /// `0 -> M_et -> M / V(G) -> F0[1] -> 0`.
    pub fn seq7(&self) -> Result<[MotiveMorphism; 2]> {
        let et = self.etale_motive();
        let quot = self.quotient_by_additive();
        let first = MotiveMorphism::new(
            et.clone(),
            quot.clone(),
            Mat::zeros(self.s, 0),
            IntMat::identity(self.r),
            Mat::identity(et.n),
        )?;
        let second = MotiveMorphism::new(
            quot.clone(),
            Motive::formal_shift(self.s),
            Mat::identity(self.s),
            IntMat::zeros(0, self.r),
            Mat::zeros(0, quot.n),
        )?;
        Ok([first, second])
    }

    /// `M' = M` with `ell` shifted by lattice vectors `lambda * p`.
    pub fn shift_ell(&self, p: &IntMat) -> Result<Motive> {
        let mut m = self.clone();
        m.ell = self.ell.add(&self.lambda.mul(&p.to_mat()));
        Motive::new(m.s, m.r, m.n, m.add, m.toradd, m.lambda, m.ell, m.u0, m.polarization)
    }

    /// The identity-component isomorphism `M -> shift_ell(M, p)`.
    pub fn shift_iso(&self, p: &IntMat) -> Result<MotiveIso> {
        let shifted = self.shift_ell(p)?;
        let fwd = MotiveMorphism::new(
            self.clone(),
            shifted,
            Mat::identity(self.s),
            IntMat::identity(self.r),
            Mat::identity(self.n),
        )?;
        MotiveIso::from_forward(fwd)
    }

    /// `M_et^# = [F_et -> H_K / W-1(H_Z)]` for etale `M`, with
    /// `H = T_Hodge(M)`.
    pub fn universal_vector_extension(&self) -> Result<Motive> {
        if !self.is_etale() {
            return Err(Error::NotEtale);
        }
        let h = crate::realize::t_hodge(self)?;
        let l = self.lattice_rank();
        let big = l + self.r;
        let id = Mat::identity(big);
        let lambda = id.select_cols(&(0..l).collect::<Vec<_>>());
        let ell = id.select_cols(&(l..big).collect::<Vec<_>>());
        let add = h.f0().clone();
        let toradd = add.sum(h.w_m2());
        Motive::new(0, self.r, big, add, toradd, lambda, ell, Mat::zeros(big, 0), None)
    }
}

/// `(f0, fet, g)` with `g(Lambda) <= Lambda'` and `g ell = ell' fet` modulo
/// `Lambda'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotiveMorphism {
    source: Motive,
    target: Motive,
    f0: Mat,
    fet: IntMat,
    g: Mat,
    /// `g lambda = lambda' a`
    a: IntMat,
    /// `g ell - ell' fet = lambda' c`
    c: IntMat,
}

/// Integer `x` with `periods x = y` (columnwise), using that the periods
/// are `Q`-independent.
fn integral_period_coords(periods: &Mat, y: &Mat) -> Option<IntMat> {
    let x = periods.realify().solve_mat(&y.realify())?;
    IntMat::from_mat(&x)
}

impl MotiveMorphism {
    pub fn new(source: Motive, target: Motive, f0: Mat, fet: IntMat, g: Mat) -> Result<Self> {
        let bad = |m: &str| Err(Error::MotiveMorphism(m.into()));
        if (f0.rows(), f0.cols()) != (target.s, source.s)
            || (fet.rows(), fet.cols()) != (target.r, source.r)
            || (g.rows(), g.cols()) != (target.n, source.n)
        {
            return bad("component shapes");
        }
        if !target.add.contains_space(&source.add.image_under(&g)) {
            return bad("g(V(G)) not in V(G')");
        }
        if !target.toradd.contains_space(&source.toradd.image_under(&g)) {
            return bad("g(Lie T + V(G)) not in Lie T' + V(G')");
        }
        let Some(a) = integral_period_coords(&target.lambda, &g.mul(&source.lambda)) else {
            return bad("g does not map periods to periods");
        };
        let diff = g.mul(&source.ell).sub(&target.ell.mul(&fet.to_mat()));
        let Some(c) = integral_period_coords(&target.lambda, &diff) else {
            return bad("g ell differs from ell' fet by a non-period");
        };
        if g.mul(&source.u0) != target.u0.mul(&f0) {
            return bad("g u0 differs from u0' f0");
        }
        Ok(MotiveMorphism { source, target, f0, fet, g, a, c })
    }

    pub fn identity(m: &Motive) -> Self {
        MotiveMorphism::new(m.clone(), m.clone(), Mat::identity(m.s), IntMat::identity(m.r), Mat::identity(m.n))
            .expect("identity")
    }

    pub fn source(&self) -> &Motive {
        &self.source
    }

    pub fn target(&self) -> &Motive {
        &self.target
    }

    pub fn f0(&self) -> &Mat {
        &self.f0
    }

    pub fn fet(&self) -> &IntMat {
        &self.fet
    }

    pub fn g(&self) -> &Mat {
        &self.g
    }

    /// The induced map on period lattices.
    pub fn period_map(&self) -> &IntMat {
        &self.a
    }

    /// The period correction `c` with `g ell - ell' fet = lambda' c`.
    pub fn ell_correction(&self) -> &IntMat {
        &self.c
    }

    pub fn compose(&self, first: &MotiveMorphism) -> Result<MotiveMorphism> {
        if first.target != self.source {
            return Err(Error::NotComposable("motive maps do not compose".into()));
        }
        MotiveMorphism::new(
            first.source.clone(),
            self.target.clone(),
            self.f0.mul(&first.f0),
            self.fet.mul(&first.fet),
            self.g.mul(&first.g),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.f0.is_identity()
            && self.g.is_identity()
            && self.fet == IntMat::identity(self.source.r)
    }

    pub fn inverse(&self) -> Option<MotiveMorphism> {
        let f0 = self.f0.inverse()?;
        let g = self.g.inverse()?;
        let fet = self.fet.unimodular_inverse()?;
        MotiveMorphism::new(self.target.clone(), self.source.clone(), f0, fet, g).ok()
    }
}

#[derive(Clone, Debug)]
pub struct MotiveIso {
    pub forward: MotiveMorphism,
    pub backward: MotiveMorphism,
}

impl MotiveIso {
    pub fn from_forward(forward: MotiveMorphism) -> Result<Self> {
        let backward = forward.inverse().ok_or_else(|| Error::Internal("motive map is not invertible".into()))?;
        let a = backward.compose(&forward)?;
        let b = forward.compose(&backward)?;
        if !a.is_identity() || !b.is_identity() {
            return Err(Error::Internal("composites of the motive isomorphism are not identities".into()));
        }
        Ok(MotiveIso { forward, backward })
    }
}
