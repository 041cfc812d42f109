use thiserror::Error;

/// Which Hodge-theoretic axiom a candidate mixed Hodge structure violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum HodgeAxiom {
    /// `F0` meets `W-2 (x) K` nontrivially.
    F0MeetsWm2,
    /// `F0 + W-1 (x) K` is not all of `H_K`.
    F0PlusWm1NotFull,
    /// On `gr-1`, the images of `F0` and its conjugate are not complementary.
    GrM1NotSplit,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // linear algebra
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("subspace is not contained in the requested superspace")]
    NotContained,
    #[error("shape mismatch: {0}")]
    Shape(String),

    // lattices
    #[error("lattice map is not injective")]
    NotInjective,
    #[error("lattice map is not well defined on torsion: {0}")]
    IllDefinedOnTorsion(String),

    // mixed Hodge structures
    #[error("weight chain W-2 <= W-1 is broken: {0}")]
    WeightChainBroken(String),
    #[error("Hodge axiom violated: {0:?}")]
    HodgeAxiom(HodgeAxiom),
    #[error("operation requires a torsion-free lattice")]
    TorsionInput,
    #[error("form is not alternating")]
    NotAlternating,
    #[error("lattice map does not respect weight or Hodge filtrations: {0}")]
    NotMhsMorphism(String),
    #[error("induced kernel/cokernel data violates the Hodge axioms: {0}")]
    InternalStrictnessViolation(String),

    // formal Hodge structures
    #[error("sigma is not an isomorphism H_K/F0 -> V/V0")]
    SigmaNotIso,
    #[error("sigma does not carry W-2 onto V1/V0")]
    SigmaW2Mismatch,
    #[error("square (pr o vz = sigma o c) does not commute")]
    Square1Broken,
    #[error("filtration V0 <= V1 <= V is broken: {0}")]
    BadFiltration(String),
    #[error("etale part is not a valid mixed Hodge structure: {0}")]
    EtalePartInvalid(Box<Error>),
    #[error("derived inclusion v_K(F0) <= V0 fails")]
    DerivedF0Inclusion,
    #[error("morphism square v' o f = g o v does not commute ({0})")]
    Square2Broken(String),
    #[error("morphism square sigma' o fbar = gbar o sigma does not commute")]
    Square3Broken,
    #[error("g does not respect the filtrations: {0}")]
    NotFiltered(String),
    #[error("lattice component is not a morphism of mixed Hodge structures: {0}")]
    EtaleComponentNotMhs(Box<Error>),
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("object is not special")]
    NotSpecial,
    #[error("object is not connected")]
    NotConnected,
    #[error("object is not etale")]
    NotEtale,
    #[error("object is not free")]
    NotFree,

    // motives
    #[error("period lattice meets the additive part")]
    LatticeMeetsAdditive,
    #[error("torus rank mismatch: {0}")]
    TorusRankMismatch(String),
    #[error("abelian part is not full: {0}")]
    AbelianPartNotFull(String),
    #[error("subspace chain add <= toradd <= lieG is broken")]
    BadSubspaceChain,
    #[error("polarization witness rejected")]
    PolarizationRejected,
    #[error("motive morphism invalid: {0}")]
    MotiveMorphism(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// The variant name, used as an error code in diagnostics.
    pub fn code(&self) -> String {
        let dbg = format!("{self:?}");
        dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
    }

    /// The part of an object or morphism the failure concerns.
    pub fn component(&self) -> &'static str {
        match self {
            Error::SigmaNotIso | Error::Square1Broken => "sigma",
            Error::SigmaW2Mismatch | Error::BadFiltration(_) => "v1",
            Error::DerivedF0Inclusion => "v0",
            Error::WeightChainBroken(_) | Error::HodgeAxiom(_) | Error::EtalePartInvalid(_) => "het",
            Error::IllDefinedOnTorsion(_) | Error::TorsionInput | Error::NotInjective => "lattice",
            Error::Square2Broken(_) | Error::Square3Broken | Error::NotFiltered(_) => "g",
            Error::EtaleComponentNotMhs(_) => "fz",
            Error::Shape(_) | Error::AmbientMismatch => "shape",
            _ => "object",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
