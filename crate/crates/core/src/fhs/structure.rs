//! Etale, connected and special pieces, and the canonical sequences.

use super::{Fhs, FhsMorphism};
use crate::error::{Error, Result};
use crate::lattice::IntMat;
use crate::linalg::{Mat, Quotient, Subspace};
use crate::mhs::{Mhs, MhsMorphism};

/// A linear map `W -> V`, the data of a connected structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub map: Mat,
}

impl LinearMap {
    /// `(H0, V = V0)` with `v0 = map`.
    pub fn to_connected(&self) -> Fhs {
        let (m, s) = (self.map.rows(), self.map.cols());
        Fhs::new(
            s,
            Mhs::zero(),
            m,
            Subspace::full(m),
            Subspace::full(m),
            self.map.clone(),
            Mat::zeros(m, 0),
            Mat::zeros(0, 0),
        )
        .expect("connected structures carry no conditions")
    }

    pub fn from_connected(x: &Fhs) -> Result<Self> {
        if !x.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(LinearMap { map: x.v0_map.clone() })
    }

    /// A commuting square `(a, b)` between linear maps as a morphism of
    /// connected structures.
    pub fn square_to_morphism(src: &LinearMap, dst: &LinearMap, a: &Mat, b: &Mat) -> Result<FhsMorphism> {
        FhsMorphism::new(src.to_connected(), dst.to_connected(), a.clone(), IntMat::zeros(0, 0), b.clone())
    }

    /// The square `(f0, g)` underlying a morphism of connected structures.
    pub fn morphism_to_square(phi: &FhsMorphism) -> Result<(Mat, Mat)> {
        if !phi.source.is_connected() || !phi.target.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok((phi.f0.clone(), phi.g.clone()))
    }
}

impl Fhs {
    /// `(H_Z, V/V0)`.
    pub fn etale_part(&self) -> Fhs {
        let q = self.v_quotient();
        let p = q.projection();
        Fhs::new(
            0,
            self.het.clone(),
            q.dim(),
            Subspace::zero(q.dim()),
            q.image_of(&self.v1),
            Mat::zeros(q.dim(), 0),
            p.mul(&self.vz_map),
            self.sigma.clone(),
        )
        .expect("etale part of a valid structure")
    }

    /// `c(h) = (H_Z, H_K/F0)`.
    pub fn canonical_etale(h: &Mhs) -> Fhs {
        let q = Quotient::new(h.f0().clone());
        let d = q.dim();
        Fhs::new(
            0,
            h.clone(),
            d,
            Subspace::zero(d),
            q.image_of(h.w_m2()),
            Mat::zeros(d, 0),
            q.projection().mul(&h.tensor_map()),
            Mat::identity(d),
        )
        .expect("canonical etale structure")
    }

    /// `pi(X) = (H0, V)` with `V = V1 = V0`.
    pub fn pi_connected(&self) -> Fhs {
        LinearMap { map: self.v0_map.clone() }.to_connected()
    }

    /// `X0 = (H0, V0)`; defined for special structures.
    pub fn connected_part(&self) -> Result<Fhs> {
        if !self.is_special() {
            return Err(Error::NotSpecial);
        }
        let map = self.v0.coordinates_mat(&self.v0_map).expect("special");
        Ok(LinearMap { map }.to_connected())
    }

    /// The vector space `V` as the structure `(0, V)`.
    pub fn embed_vector(dim: usize) -> Fhs {
        LinearMap { map: Mat::zeros(dim, 0) }.to_connected()
    }

    /// The connected formal group with Lie algebra `K^dim` as `(H, 0)`.
    pub fn embed_formal(dim: usize) -> Fhs {
        LinearMap { map: Mat::zeros(0, dim) }.to_connected()
    }

    /// The inclusion `(0, V0) -> X`.
    pub fn v0_inclusion(&self) -> FhsMorphism {
        let a = self.v0.dim();
        FhsMorphism::new(
            Fhs::embed_vector(a),
            self.clone(),
            Mat::zeros(self.h0_dim, 0),
            IntMat::zeros(self.lattice().num_gens(), 0),
            self.v0.basis_matrix(),
        )
        .expect("V0 includes into X")
    }

    /// `X / V0` with its projection.
    pub fn quotient_by_v0(&self) -> Result<FhsMorphism> {
        self.v0_inclusion().cokernel()
    }

    /// `0 -> X_et -> X/V0 -> (H0, 0) -> 0`.
    pub fn seq4(&self) -> Result<[FhsMorphism; 2]> {
        let quot = self.quotient_by_v0()?.target;
        let et = self.etale_part();
        let n = self.lattice().num_gens();
        let first = FhsMorphism::new(
            et.clone(),
            quot.clone(),
            Mat::zeros(quot.h0_dim, 0),
            IntMat::identity(n),
            Mat::identity(et.v_dim),
        )?;
        let formal = Fhs::embed_formal(self.h0_dim);
        let second = FhsMorphism::new(
            quot.clone(),
            formal,
            Mat::identity(self.h0_dim),
            IntMat::zeros(0, n),
            Mat::zeros(0, quot.v_dim),
        )?;
        Ok([first, second])
    }

    /// The inclusion `X0 -> X` of a special structure.
    pub fn connected_inclusion(&self) -> Result<FhsMorphism> {
        let x0 = self.connected_part()?;
        FhsMorphism::new(
            x0,
            self.clone(),
            Mat::identity(self.h0_dim),
            IntMat::zeros(self.lattice().num_gens(), 0),
            self.v0.basis_matrix(),
        )
    }

    /// The projection `X -> X_et`; a morphism exactly when `X` is special.
    pub fn etale_projection(&self) -> Result<FhsMorphism> {
        if !self.is_special() {
            return Err(Error::NotSpecial);
        }
        let et = self.etale_part();
        FhsMorphism::new(
            self.clone(),
            et,
            Mat::zeros(0, self.h0_dim),
            IntMat::identity(self.lattice().num_gens()),
            self.v_quotient().projection(),
        )
    }

    /// `0 -> X0 -> X -> X_et -> 0` for special `X`.
    pub fn seq5(&self) -> Result<[FhsMorphism; 2]> {
        Ok([self.connected_inclusion()?, self.etale_projection()?])
    }
}

impl FhsMorphism {
    /// `e(phi)`.
    pub fn etale_part(&self) -> FhsMorphism {
        FhsMorphism::new(
            self.source.etale_part(),
            self.target.etale_part(),
            Mat::zeros(0, 0),
            self.fz.matrix().clone(),
            self.gbar(),
        )
        .expect("etale part of a valid morphism")
    }

    /// `c(f)` for a morphism of mixed Hodge structures.
    pub fn canonical_etale(f: &MhsMorphism) -> FhsMorphism {
        let x = Fhs::canonical_etale(f.source());
        let y = Fhs::canonical_etale(f.target());
        let gbar = y.f0_quotient().projection().mul(&f.map().rational_matrix()).mul(&x.f0_quotient().lift());
        FhsMorphism::new(x, y, Mat::zeros(0, 0), f.map().matrix().clone(), gbar).expect("c is a functor")
    }

    /// `pi(phi)`.
    pub fn pi_connected(&self) -> FhsMorphism {
        FhsMorphism::new(
            self.source.pi_connected(),
            self.target.pi_connected(),
            self.f0.clone(),
            IntMat::zeros(0, 0),
            self.g.clone(),
        )
        .expect("pi is a functor")
    }

    /// The restriction `e(X) -> Y` of a map `X -> Y` into an etale `Y`.
    pub fn restrict_to_etale_source(&self) -> Result<FhsMorphism> {
        if !self.target.is_etale() {
            return Err(Error::NotEtale);
        }
        let lift = self.source.v_quotient().lift();
        FhsMorphism::new(
            self.source.etale_part(),
            self.target.clone(),
            Mat::zeros(0, 0),
            self.fz.matrix().clone(),
            self.g.mul(&lift),
        )
    }

    /// The map `X' -> X0` through which a map from a connected `X'` into a
    /// special `X` factors.
    pub fn corestrict_to_connected_part(&self) -> Result<FhsMorphism> {
        if !self.source.is_connected() {
            return Err(Error::NotConnected);
        }
        let inc = self.target.connected_inclusion()?;
        self.factor_through_mono(&inc).ok_or_else(|| Error::Internal("map from a connected structure misses V0".into()))
    }
}
