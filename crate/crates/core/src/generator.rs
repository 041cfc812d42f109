//! Seeded random instances.
//!
//! Motives are assembled in canonical coordinates `[torus | abelian | additive]`
//! of `Lie G`, with abelian periods taken from polarized elliptic templates
//! `(c, c tau)`, and then moved by a random `GL_n(K)` change of coordinates, a
//! unimodular change of the period lattice and a shift of the logarithms.
//! Structures are realizations of such motives transported along a random
//! isomorphism. The same `(profile, seed)` always gives the same instance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fhs::{hom_group, Fhs, FhsMorphism};
use crate::lattice::IntMat;
use crate::linalg::{Mat, Subspace};
use crate::mhs::Mhs;
use crate::motive::Motive;
use crate::realize::{t_formal, t_hodge};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Etale,
    Connected,
    Special,
    General,
    MotiveEtale,
    MotiveConnected,
    MotiveSpecial,
    MotiveGeneral,
    Mhs,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::Etale,
        Kind::Connected,
        Kind::Special,
        Kind::General,
        Kind::MotiveEtale,
        Kind::MotiveConnected,
        Kind::MotiveSpecial,
        Kind::MotiveGeneral,
        Kind::Mhs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Etale => "etale",
            Kind::Connected => "connected",
            Kind::Special => "special",
            Kind::General => "general",
            Kind::MotiveEtale => "motive-etale",
            Kind::MotiveConnected => "motive-connected",
            Kind::MotiveSpecial => "motive-special",
            Kind::MotiveGeneral => "motive-general",
            Kind::Mhs => "mhs",
        }
    }

    fn motive_kind(self) -> Kind {
        match self {
            Kind::Etale | Kind::Mhs => Kind::MotiveEtale,
            Kind::Connected => Kind::MotiveConnected,
            Kind::Special => Kind::MotiveSpecial,
            Kind::General => Kind::MotiveGeneral,
            k => k,
        }
    }

    fn tag(self) -> u64 {
        Kind::ALL.iter().position(|&k| k == self).unwrap() as u64 + 1
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL.iter().copied().find(|k| k.name() == s).ok_or_else(|| format!("unknown profile {s:?}"))
    }
}

/// Profile and size bounds. `max_rank` bounds the period lattice and the
/// dimension of `Lie G`; `max_aux` bounds `r` and `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenProfile {
    pub kind: Kind,
    pub max_rank: usize,
    pub max_aux: usize,
}

impl GenProfile {
    pub fn new(kind: Kind) -> Self {
        GenProfile { kind, max_rank: 4, max_aux: 2 }
    }

    pub fn small(kind: Kind) -> Self {
        GenProfile { kind, max_rank: 2, max_aux: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Fhs(Fhs),
    Motive(Motive),
    Mhs(Mhs),
}

fn rng_for(tag: u64, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// The instance for `(profile, seed)`.
pub fn gen(profile: &GenProfile, seed: u64) -> Generated {
    match profile.kind {
        Kind::MotiveEtale | Kind::MotiveConnected | Kind::MotiveSpecial | Kind::MotiveGeneral => {
            Generated::Motive(gen_motive(profile, seed))
        }
        Kind::Mhs => Generated::Mhs(gen_mhs(profile, seed)),
        _ => Generated::Fhs(gen_fhs(profile, seed)),
    }
}

pub fn gen_motive(profile: &GenProfile, seed: u64) -> Motive {
    let mut rng = rng_for(profile.kind.motive_kind().tag(), seed);
    random_motive(&mut rng, profile.kind.motive_kind(), profile.max_rank, profile.max_aux)
}

pub fn gen_fhs(profile: &GenProfile, seed: u64) -> Fhs {
    let mut rng = rng_for(profile.kind.tag(), seed);
    let m = random_motive(&mut rng, profile.kind.motive_kind(), profile.max_rank, profile.max_aux);
    let x = t_formal(&m).expect("realization of a generated motive");
    let b = random_gl(&mut rng, x.h0_dim());
    let u = random_unimodular(&mut rng, x.het().rank());
    let a = random_gl(&mut rng, x.v_dim());
    x.transport(&b, &u, &a).expect("transport along an isomorphism").forward.target().clone()
}

pub fn gen_mhs(profile: &GenProfile, seed: u64) -> Mhs {
    let mut rng = rng_for(Kind::Mhs.tag(), seed);
    let m = random_motive(&mut rng, Kind::MotiveEtale, profile.max_rank, profile.max_aux);
    let h = t_hodge(&m).expect("Hodge realization of an etale motive");
    let u = random_unimodular(&mut rng, h.rank());
    h.transport(&u).expect("unimodular transport")
}

/// A random element of `Hom(x, y)` with small coefficients on a basis, or
/// `None` when the group is zero or cannot be computed.
pub fn gen_morphism(x: &Fhs, y: &Fhs, seed: u64) -> Option<FhsMorphism> {
    let h = hom_group(x, y).ok()?;
    if h.is_zero() {
        return None;
    }
    let mut rng = rng_for(0xF00D, seed);
    if x == y && rng.gen_ratio(1, 5) {
        return Some(FhsMorphism::identity(x));
    }
    let mut f0 = Mat::zeros(y.h0_dim(), x.h0_dim());
    let mut g = Mat::zeros(y.v_dim(), x.v_dim());
    let mut fz = IntMat::zeros(y.het().rank(), x.het().rank());
    for phi in &h.lattice_part {
        let c = rng.gen_range(-2i64..=2);
        f0 = f0.add(&phi.f0().scale(&Scalar::int(c)));
        g = g.add(&phi.g().scale(&Scalar::int(c)));
        fz = fz.add(&phi.fz().matrix().scale(&BigInt::from(c)));
    }
    for phi in &h.linear_part {
        let c = small_gaussian(&mut rng, 1);
        f0 = f0.add(&phi.f0().scale(&c));
        g = g.add(&phi.g().scale(&c));
    }
    FhsMorphism::new(x.clone(), y.clone(), f0, fz, g).ok()
}

/// `(A + B, A + C)` with small random summands, so that the hom group is
/// nonzero.
pub fn gen_pair(seed: u64) -> (Fhs, Fhs) {
    let mut rng = rng_for(0xBEEF, seed);
    let kinds = [Kind::Etale, Kind::Connected, Kind::Special, Kind::General];
    let pick = |rng: &mut ChaCha8Rng| {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        gen_fhs(&GenProfile::small(kind), rng.gen())
    };
    let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
    (a.direct_sum(&b).expect("free"), a.direct_sum(&c).expect("free"))
}

fn small_gaussian(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    Scalar::from_ints(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

fn small_fraction(rng: &mut ChaCha8Rng) -> Scalar {
    let den = rng.gen_range(1i64..=3);
    let re = Scalar::frac(rng.gen_range(-3i64..=3), den);
    let im = Scalar::frac(rng.gen_range(-2i64..=2), den);
    re + im * Scalar::i()
}

/// Unit lower times unit upper triangular, times an invertible diagonal.
fn random_gl(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let mut lower = Mat::identity(n);
    let mut upper = Mat::identity(n);
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(0.5) {
                lower.set(i, j, small_gaussian(rng, 1));
            }
            if rng.gen_bool(0.5) {
                upper.set(j, i, small_gaussian(rng, 1));
            }
        }
    }
    let units = [Scalar::one(), Scalar::int(-1), Scalar::i(), Scalar::int(2)];
    let mut diag = Mat::zeros(n, n);
    for i in 0..n {
        diag.set(i, i, units[rng.gen_range(0..units.len())].clone());
    }
    lower.mul(&upper).mul(&diag)
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMat {
    let mut u = IntMat::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            u.set(0, 0, BigInt::from(-1));
        }
        return u;
    }
    for _ in 0..n + 1 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        for k in 0..n {
            let v = u.get(i, k) + &c * u.get(j, k);
            u.set(i, k, v);
        }
    }
    u
}

struct Shape {
    t: usize,
    g: usize,
    a: usize,
    r: usize,
    s: usize,
}

fn random_shape(rng: &mut ChaCha8Rng, kind: Kind, max_rank: usize, max_aux: usize) -> Shape {
    let aux = |rng: &mut ChaCha8Rng| rng.gen_range(0..=max_aux);
    match kind {
        Kind::MotiveConnected => Shape { t: 0, g: 0, a: rng.gen_range(0..=max_rank.min(3)), r: 0, s: aux(rng) },
        _ => {
            let g = rng.gen_range(0..=max_rank / 2);
            let t = rng.gen_range(0..=max_rank - 2 * g);
            let a = if kind == Kind::MotiveEtale { 0 } else { rng.gen_range(0..=(max_rank - t - g).min(2)) };
            let s = if kind == Kind::MotiveEtale { 0 } else { aux(rng) };
            Shape { t, g, a, r: aux(rng), s }
        }
    }
}

fn random_motive(rng: &mut ChaCha8Rng, kind: Kind, max_rank: usize, max_aux: usize) -> Motive {
    let Shape { t, g, a, r, s } = random_shape(rng, kind, max_rank, max_aux);
    let n = t + g + a;
    let l = t + 2 * g;
    let (ab0, add0) = (t, t + g);

    let mut lambda = Mat::zeros(n, l);
    for j in 0..t {
        lambda.set(j, j, Scalar::int(if rng.gen_bool(0.5) { 1 } else { 2 }));
        for i in 0..j {
            lambda.set(i, j, Scalar::int(rng.gen_range(-1..=1)));
        }
    }
    for k in 0..g {
        let c = Scalar::int(rng.gen_range(1..=2));
        let tau = Scalar::from_ints(rng.gen_range(-1..=1), rng.gen_range(1..=2));
        let (c1, c2) = (t + 2 * k, t + 2 * k + 1);
        lambda.set(ab0 + k, c1, c.clone());
        lambda.set(ab0 + k, c2, c.clone() * tau);
        for i in 0..t {
            if rng.gen_bool(0.5) {
                lambda.set(i, c1, small_gaussian(rng, 1));
            }
        }
    }
    for j in 0..l {
        for i in add0..n {
            if rng.gen_bool(0.5) {
                lambda.set(i, j, small_gaussian(rng, 1));
            }
        }
    }
    let mut ell = Mat::zeros(n, r);
    for i in 0..n {
        for j in 0..r {
            ell.set(i, j, small_fraction(rng));
        }
    }
    let special = matches!(kind, Kind::MotiveSpecial | Kind::MotiveConnected);
    let mut u0 = Mat::zeros(n, s);
    for i in 0..n {
        for j in 0..s {
            if !special || i >= add0 {
                u0.set(i, j, small_gaussian(rng, 2));
            }
        }
    }
    let add = Subspace::coordinate(n, &(add0..n).collect::<Vec<_>>());
    let toradd = Subspace::coordinate(n, &(0..t).chain(add0..n).collect::<Vec<_>>());

    let change = random_gl(rng, n);
    let u = random_unimodular(rng, l);
    let p = random_unimodular(rng, r);
    let mut shift = IntMat::zeros(l, r);
    for i in 0..l {
        for j in 0..r {
            shift.set(i, j, BigInt::from(rng.gen_range(-1..=1)));
        }
    }
    let lambda_new = change.mul(&lambda).mul(&u.to_mat());
    let ell_new = change.mul(&ell.mul(&p.to_mat()).add(&lambda.mul(&shift.to_mat())));
    let build = |q: Option<IntMat>| {
        Motive::new(
            s,
            r,
            n,
            add.image_under(&change),
            toradd.image_under(&change),
            lambda_new.clone(),
            ell_new.clone(),
            change.mul(&u0),
            q,
        )
    };
    let m = build(None).expect("generated motive is valid");
    if g == 0 {
        return m;
    }
    // the template form, pulled back to the lifts used by the witness check
    let h = t_hodge(&m.etale_motive()).expect("etale part realizes");
    let (lifts, _) = h.gr_m1_basis().expect("free");
    let mut q0 = IntMat::zeros(2 * g, 2 * g);
    for k in 0..g {
        q0.set(2 * k, 2 * k + 1, BigInt::from(1));
        q0.set(2 * k + 1, 2 * k, BigInt::from(-1));
    }
    let top = IntMat::identity(l).hstack(&IntMat::zeros(l, r));
    let old = u.mul(&top).mul(&lifts);
    let ab = old.block(t, 0, 2 * g, old.cols());
    let q = ab.transpose().mul(&q0).mul(&ab);
    build(Some(q)).expect("template polarization is a witness")
}
