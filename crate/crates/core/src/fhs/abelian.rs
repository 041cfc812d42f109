//! Kernels, cokernels, images and exactness, computed componentwise.

use serde::Serialize;

use super::{Fhs, FhsMorphism};
use crate::error::{Error, Result};
use crate::lattice::{IntMat, LatticeMap};
use crate::linalg::{Mat, Quotient, Subspace};
use crate::mhs::MhsMorphism;

/// Coordinates of the columns of `m` in the basis `b` (columns); panics if
/// some column is outside the span, which callers rule out beforehand.
fn coords_in(b: &Mat, m: &Mat) -> Mat {
    b.solve_mat(m).expect("columns lie in the span")
}

impl FhsMorphism {
    /// Kernel object and its embedding into the source.
    pub fn kernel(&self) -> Result<FhsMorphism> {
        let x = &self.source;
        let k0 = self.f0.kernel().basis_matrix();
        let mhs_map = MhsMorphism::new(x.het.clone(), self.target.het.clone(), self.fz.clone())?;
        let (het, emb) = mhs_map.kernel()?;
        let bg = self.g.kernel().basis_matrix();
        let kg = bg.cols();
        let in_ker = |s: &Subspace| {
            let inter = s.intersect(&self.g.kernel());
            Subspace::span(kg, coords_in(&bg, &inter.basis_matrix()).col_vectors())
        };
        let v0 = in_ker(&x.v0);
        let v1 = in_ker(&x.v1);
        let v0_map = coords_in(&bg, &x.v0_map.mul(&k0));
        let vz_map = coords_in(&bg, &x.vz_map.mul(&emb.matrix().to_mat()));
        // sigma on the kernel: lift through sigma, then correct by V0 to land in ker g
        let fq = Quotient::new(het.f0().clone());
        let lifted = x.lift_sigma().mul(&emb.rational_matrix()).mul(&fq.lift());
        let frame = bg.hstack(&x.v0.basis_matrix());
        let sol = frame
            .solve_mat(&lifted)
            .ok_or_else(|| Error::Internal("kernel comparison map does not restrict".into()))?;
        let in_kg = sol.block(0, 0, kg, sol.cols());
        let sigma = Quotient::new(v0.clone()).projection().mul(&in_kg);
        let k = Fhs::new(k0.cols(), het, kg, v0, v1, v0_map, vz_map, sigma)
            .map_err(|e| Error::Internal(format!("kernel object invalid: {e}")))?;
        FhsMorphism::new(k, x.clone(), k0, emb.matrix().clone(), bg)
    }

    /// Cokernel object and the projection from the target.
    pub fn cokernel(&self) -> Result<FhsMorphism> {
        let y = &self.target;
        let q0 = Quotient::new(self.f0.image());
        let mhs_map = MhsMorphism::new(self.source.het.clone(), y.het.clone(), self.fz.clone())?;
        let (het, proj) = mhs_map.cokernel()?;
        let (_, _, section) = self.fz.cokernel();
        let qg = Quotient::new(self.g.image());
        let pg = qg.projection();
        let v0 = qg.image_of(&y.v0);
        let v1 = qg.image_of(&y.v1);
        let v0_map = pg.mul(&y.v0_map).mul(&q0.lift());
        let vz_map = pg.mul(&y.vz_map).mul(&section.to_mat());
        let fq = Quotient::new(het.f0().clone());
        let sec_q = section.block(0, 0, y.het.rank(), het.rank()).to_mat();
        let lifted = pg.mul(&y.lift_sigma()).mul(&sec_q).mul(&fq.lift());
        let sigma = Quotient::new(v0.clone()).projection().mul(&lifted);
        let c = Fhs::new(q0.dim(), het, qg.dim(), v0, v1, v0_map, vz_map, sigma)
            .map_err(|e| Error::Internal(format!("cokernel object invalid: {e}")))?;
        FhsMorphism::new(y.clone(), c, q0.projection(), proj.matrix().clone(), pg)
    }

    /// Image as a subobject of the target, with the factorisation of `self`
    /// through it: returns `(source -> image, image -> target)`.
    pub fn image(&self) -> Result<(FhsMorphism, FhsMorphism)> {
        let emb = self.cokernel()?.kernel()?;
        let onto = self
            .factor_through_mono(&emb)
            .ok_or_else(|| Error::Internal("map does not factor through its image".into()))?;
        Ok((onto, emb))
    }

    /// `h` with `mono o h = self`, when it exists.
    pub fn factor_through_mono(&self, mono: &FhsMorphism) -> Option<FhsMorphism> {
        if mono.target != self.target {
            return None;
        }
        let f0 = mono.f0.solve_mat(&self.f0)?;
        let fz = self.fz.factor_through(&mono.fz)?;
        let g = mono.g.solve_mat(&self.g)?;
        let h = FhsMorphism::new(self.source.clone(), mono.source.clone(), f0, fz.matrix().clone(), g).ok()?;
        (mono.compose(&h).ok()? == *self).then_some(h)
    }

    /// `h` with `h o epi = self` for an epimorphism `epi` onto a cokernel
    /// (as returned by [`FhsMorphism::cokernel`]).
    pub fn factor_through_epi(&self, epi: &FhsMorphism) -> Option<FhsMorphism> {
        if epi.source != self.source {
            return None;
        }
        let sec0 = epi.f0.solve_mat(&Mat::identity(epi.f0.rows()))?;
        let secg = epi.g.solve_mat(&Mat::identity(epi.g.rows()))?;
        let secz = lattice_section(&epi.fz)?;
        let h = FhsMorphism::new(
            epi.target.clone(),
            self.target.clone(),
            self.f0.mul(&sec0),
            self.fz.matrix().mul(&secz),
            self.g.mul(&secg),
        )
        .ok()?;
        (h.compose(epi).ok()? == *self).then_some(h)
    }
}

/// Integer matrix `S` with `p o S = id` for a surjective lattice map `p`.
fn lattice_section(p: &LatticeMap) -> Option<IntMat> {
    let n = p.target().num_gens();
    let cols = (0..n)
        .map(|j| {
            let mut e = vec![num_bigint::BigInt::from(0); n];
            e[j] = num_bigint::BigInt::from(1);
            p.preimage_of(&e)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(IntMat::from_cols(p.source().num_gens(), &cols))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStatus {
    pub component: &'static str,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub node: usize,
    pub components: Vec<ComponentStatus>,
}

impl NodeReport {
    pub fn exact(&self) -> bool {
        self.components.iter().all(|c| c.exact)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub exact: bool,
    pub nodes: Vec<NodeReport>,
}

impl ExactnessReport {
    /// First failing `(node, component)`.
    pub fn first_failure(&self) -> Option<(usize, &'static str)> {
        self.nodes.iter().find_map(|n| n.components.iter().find(|c| !c.exact).map(|c| (n.node, c.component)))
    }
}

/// `im(prev restricted to dom) == ker(next) cap here`, with absent maps read
/// as the zero maps from and to the zero object.
fn linear_exact(prev: Option<(&Mat, &Subspace)>, here: &Subspace, next: Option<&Mat>) -> bool {
    let im = match prev {
        Some((m, dom)) => dom.image_under(m),
        None => Subspace::zero(here.ambient()),
    };
    let ker = match next {
        Some(m) => here.intersect(&m.kernel()),
        None => here.clone(),
    };
    im == ker
}

/// A named piece of an object, compared node by node.
type Selector = (&'static str, fn(&Fhs) -> Subspace);

/// Exactness of `0 -> X_0 -> X_1 -> ... -> X_n -> 0` at every node and on
/// every component.
pub fn check_exact(maps: &[FhsMorphism]) -> Result<ExactnessReport> {
    if maps.is_empty() {
        return Err(Error::NotComposable("empty sequence".into()));
    }
    for (k, w) in maps.windows(2).enumerate() {
        if w[0].target != w[1].source {
            return Err(Error::NotComposable(format!("map {} does not end where map {} starts", k, k + 1)));
        }
    }
    let mut objects: Vec<&Fhs> = maps.iter().map(|m| &m.source).collect();
    objects.push(&maps[maps.len() - 1].target);
    let mut nodes = Vec::new();
    for (i, x) in objects.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &maps[j]);
        let next = maps.get(i);
        let mut comps = Vec::new();
        let lie_dom = prev.map(|p| Subspace::full(p.source.h0_dim));
        let lie = linear_exact(
            prev.zip(lie_dom.as_ref()).map(|(p, d)| (&p.f0, d)),
            &Subspace::full(x.h0_dim),
            next.map(|n| &n.f0),
        );
        comps.push(ComponentStatus { component: "lie", exact: lie });
        let lattice = match (prev, next) {
            (Some(p), Some(n)) => p.fz.exact_before(&n.fz),
            (None, Some(n)) => n.fz.is_injective(),
            (Some(p), None) => p.fz.is_surjective(),
            (None, None) => x.lattice().is_trivial(),
        };
        comps.push(ComponentStatus { component: "lattice", exact: lattice });
        let vspaces: [Selector; 3] =
            [("v", |y| Subspace::full(y.v_dim)), ("v1", |y| y.v1.clone()), ("v0", |y| y.v0.clone())];
        for (name, sel) in vspaces {
            let dom = prev.map(|p| sel(&p.source));
            let ok = linear_exact(prev.zip(dom.as_ref()).map(|(p, d)| (&p.g, d)), &sel(x), next.map(|n| &n.g));
            comps.push(ComponentStatus { component: name, exact: ok });
        }
        let hspaces: [Selector; 3] =
            [("w_m1", |y| y.het.w_m1().clone()), ("w_m2", |y| y.het.w_m2().clone()), ("f0", |y| y.het.f0().clone())];
        let prev_q = prev.map(|p| p.fz.rational_matrix());
        let next_q = next.map(|n| n.fz.rational_matrix());
        for (name, sel) in hspaces {
            let dom = prev.map(|p| sel(&p.source));
            let ok = linear_exact(prev_q.as_ref().zip(dom.as_ref()), &sel(x), next_q.as_ref());
            comps.push(ComponentStatus { component: name, exact: ok });
        }
        nodes.push(NodeReport { node: i, components: comps });
    }
    let exact = nodes.iter().all(NodeReport::exact);
    Ok(ExactnessReport { exact, nodes })
}
