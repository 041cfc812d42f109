//! Small named instances used by the tests, the CLI and the suite.

use crate::fhs::Fhs;
use crate::lattice::IntMat;
use crate::linalg::{gvec, Mat, Subspace};
use crate::mhs::Mhs;
use crate::motive::Motive;
use crate::scalar::Scalar;

fn col(entries: &[(i64, i64)]) -> Mat {
    Mat::column(&gvec(entries))
}

/// `[0 -> G_m]`.
pub fn gm() -> Motive {
    Motive::new(0, 0, 1, Subspace::zero(1), Subspace::full(1), col(&[(1, 0)]), Mat::zeros(1, 0), Mat::zeros(1, 0), None)
        .expect("G_m")
}

/// `[Z -> 0]`.
pub fn constant() -> Motive {
    Motive::new(
        0,
        1,
        0,
        Subspace::zero(0),
        Subspace::zero(0),
        Mat::zeros(0, 0),
        Mat::zeros(0, 1),
        Mat::zeros(0, 0),
        None,
    )
    .expect("Z")
}

/// Kummer motive `[Z -> G_m]`, `1 -> exp(1/2)`.
pub fn kummer() -> Motive {
    let half = Mat::column(&[Scalar::frac(1, 2)]);
    Motive::new(0, 1, 1, Subspace::zero(1), Subspace::full(1), col(&[(1, 0)]), half, Mat::zeros(1, 0), None)
        .expect("Kummer")
}

/// `[0 -> E]` with periods `1, i`, polarized.
pub fn elliptic() -> Motive {
    let lambda = Mat::from_rows(1, 2, vec![gvec(&[(1, 0), (0, 1)])]);
    let q = IntMat::from_i64(2, 2, &[0, 1, -1, 0]);
    Motive::new(0, 0, 1, Subspace::zero(1), Subspace::zero(1), lambda, Mat::zeros(1, 0), Mat::zeros(1, 0), Some(q))
        .expect("elliptic")
}

/// Kummer motive with an additive factor and a formal part mapping into it:
/// `[F0 x Z -> G_m x G_a]`.
pub fn kummer_additive() -> Motive {
    let lambda = col(&[(1, 0), (0, 0)]);
    let ell = Mat::from_rows(2, 1, vec![vec![Scalar::frac(1, 2)], vec![Scalar::one()]]);
    let add = Subspace::span(2, [gvec(&[(0, 0), (1, 0)])]);
    Motive::new(1, 1, 2, add, Subspace::full(2), lambda, ell, col(&[(0, 0), (1, 0)]), None).expect("Kummer with G_a")
}

/// Universal vector extension of the elliptic motive, `[0 -> E#]`.
pub fn pic_natural() -> Motive {
    elliptic().universal_vector_extension().expect("E# exists")
}

/// `[0 -> G]` with `G` an extension of an elliptic curve by `G_a`.
pub fn pic0_like() -> Motive {
    let lambda = Mat::from_rows(2, 2, vec![gvec(&[(1, 0), (0, 1)]), gvec(&[(0, 0), (0, 0)])]);
    let add = Subspace::span(2, [gvec(&[(0, 0), (1, 0)])]);
    Motive::new(0, 0, 2, add.clone(), add, lambda, Mat::zeros(2, 0), Mat::zeros(2, 0), None).expect("Pic0-like")
}

/// The pair `[K -> K]` (identity) and `[K -> K^2]` (first coordinate).
pub fn separation_pair() -> (Motive, Motive) {
    let small = Motive::new(
        1,
        0,
        1,
        Subspace::full(1),
        Subspace::full(1),
        Mat::zeros(1, 0),
        Mat::zeros(1, 0),
        Mat::identity(1),
        None,
    )
    .expect("small");
    let large = Motive::new(
        1,
        0,
        2,
        Subspace::full(2),
        Subspace::full(2),
        Mat::zeros(2, 0),
        Mat::zeros(2, 0),
        col(&[(1, 0), (0, 0)]),
        None,
    )
    .expect("large");
    (small, large)
}

/// Weight `-1` structure on `Z^2` with `F0 = span(e2 - i e1)`.
pub fn elliptic_mhs() -> Mhs {
    Mhs::new(
        crate::lattice::FgAbGroup::free(2),
        Subspace::full(2),
        Subspace::zero(2),
        Subspace::span(2, [gvec(&[(0, -1), (1, 0)])]),
        0,
    )
    .expect("elliptic block")
}

pub fn c_z0() -> Fhs {
    Fhs::canonical_etale(&Mhs::tate(0))
}

pub fn c_z1() -> Fhs {
    Fhs::canonical_etale(&Mhs::tate(1))
}

/// Named objects for the CLI.
pub fn motive_by_name(name: &str) -> Option<Motive> {
    Some(match name {
        "zero" => Motive::zero(),
        "gm" => gm(),
        "constant" => constant(),
        "kummer" => kummer(),
        "elliptic" => elliptic(),
        "kummer-additive" => kummer_additive(),
        "pic-natural" => pic_natural(),
        "pic0-like" => pic0_like(),
        _ => return None,
    })
}

pub const MOTIVE_NAMES: &[&str] =
    &["zero", "gm", "constant", "kummer", "elliptic", "kummer-additive", "pic-natural", "pic0-like"];
