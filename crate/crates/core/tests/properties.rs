//! Randomized invariants of the exact linear algebra, lattices, mixed Hodge
//! structures and formal Hodge structures.

use formal_hodge::fhs::{hom_group, Fhs, FhsMorphism};
use formal_hodge::generator::{gen_fhs, gen_mhs, gen_morphism, GenProfile, Kind};
use formal_hodge::lattice::{saturate, snf, FgAbGroup, IntMat, LatticeMap};
use formal_hodge::linalg::{Mat, Subspace};
use formal_hodge::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Numerators range up to the full `i64` width so that both the small and
/// the arbitrary-precision paths of `Scalar` get exercised.
fn rational() -> impl Strategy<Value = BigRational> {
    prop_oneof![
        (-9i64..=9, 1i64..=6).prop_map(|(n, d)| q(n, d)),
        (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| q(n, d)),
    ]
}

fn scalar() -> impl Strategy<Value = (BigRational, BigRational)> {
    (rational(), rational())
}

fn mk((a, b): &(BigRational, BigRational)) -> Scalar {
    Scalar::new(a.clone(), b.clone())
}

fn small_mat(max: usize) -> impl Strategy<Value = Mat> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec((-2i64..=2, -1i64..=1), r * c).prop_map(move |v| {
            let rows = v.chunks(c).map(|row| row.iter().map(|&(a, b)| Scalar::from_ints(a, b)).collect()).collect();
            Mat::from_rows(r, c, rows)
        })
    })
}

fn int_mat(max: usize) -> impl Strategy<Value = IntMat> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-4i64..=4, r * c).prop_map(move |v| IntMat::from_i64(r, c, &v))
    })
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Etale), Just(Kind::Connected), Just(Kind::Special), Just(Kind::General)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_arithmetic_matches_rational_pairs(x in scalar(), y in scalar()) {
        let (a, b) = (mk(&x), mk(&y));
        let (xr, xi) = x;
        let (yr, yi) = y;
        let sum = a.clone() + b.clone();
        prop_assert_eq!(sum.re(), &xr + &yr);
        prop_assert_eq!(sum.im(), &xi + &yi);
        let prod = a.clone() * b.clone();
        prop_assert_eq!(prod.re(), &xr * &yr - &xi * &yi);
        prop_assert_eq!(prod.im(), &xr * &yi + &xi * &yr);
        prop_assert_eq!(a.norm_sqr(), &xr * &xr + &xi * &xi);
        prop_assert_eq!(a.conj().conj(), a.clone());
        if let Some(inv) = a.inv() {
            prop_assert!((a.clone() * inv).is_one());
        }
        let text = a.to_string();
        prop_assert_eq!(text.parse::<Scalar>().unwrap(), a.clone());
        // equal values are equal scalars no matter how they were reached
        prop_assert_eq!(sum - b, a);
    }

    #[test]
    fn rank_nullity(m in small_mat(5)) {
        let ker = m.kernel();
        prop_assert_eq!(ker.dim() + m.rank(), m.cols());
        prop_assert!(m.mul(&ker.basis_matrix()).is_zero());
        prop_assert_eq!(m.image().dim(), m.rank());
    }

    #[test]
    fn inverse_is_two_sided(m in small_mat(4)) {
        if m.rows() == m.cols() {
            match m.inverse() {
                Some(inv) => {
                    prop_assert!(m.mul(&inv).is_identity());
                    prop_assert!(inv.mul(&m).is_identity());
                }
                None => prop_assert!(m.rank() < m.rows()),
            }
        }
    }

    #[test]
    fn subspace_lattice_operations(a in small_mat(4), b in small_mat(4)) {
        let n = a.rows();
        let b = if b.rows() == n { b } else { Mat::zeros(n, 1) };
        let (u, w) = (a.image(), b.image());
        prop_assert_eq!(u.sum(&w).dim() + u.intersect(&w).dim(), u.dim() + w.dim());
        let c = u.complement();
        prop_assert_eq!(u.sum(&c).dim(), n);
        prop_assert!(u.intersect(&c).is_zero());
        prop_assert_eq!(u.annihilator().dim(), n - u.dim());
        prop_assert_eq!(u.annihilator().annihilator(), u.clone());
        prop_assert_eq!(u.conj().conj(), u.clone());
        prop_assert!(u.sum(&w).contains_space(&u));
    }

    #[test]
    fn smith_normal_form(m in int_mat(4)) {
        let s = snf(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.unimodular_inverse().is_some());
        prop_assert!(s.v.unimodular_inverse().is_some());
        let d = s.diagonal();
        for w in d.windows(2) {
            if w[1] != BigInt::from(0) {
                prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
            }
        }
    }

    #[test]
    fn saturation_is_idempotent(m in int_mat(4)) {
        if m.rank() == m.cols() {
            let emb = LatticeMap::new(FgAbGroup::free(m.cols()), FgAbGroup::free(m.rows()), m.clone()).unwrap();
            let once = saturate(&emb).unwrap();
            let twice = saturate(&once).unwrap();
            prop_assert_eq!(once.matrix(), twice.matrix());
            // the original columns lie in the saturation
            prop_assert!(once.matrix().to_mat().image().contains_space(&m.to_mat().image()));
        }
    }

    #[test]
    fn ihom_tate_is_an_involution(seed in 0u64..5000) {
        let h = gen_mhs(&GenProfile::new(Kind::Mhs), seed);
        let d = h.ihom_tate().unwrap();
        let [g0, g1, g2] = h.graded_ranks();
        prop_assert_eq!(d.graded_ranks(), [g2, g1, g0]);
        prop_assert_eq!(d.ihom_tate().unwrap(), h);
    }

    #[test]
    fn fhs_morphism_strictness(k1 in kind(), k2 in kind(), seed in 0u64..5000) {
        let x = gen_fhs(&GenProfile::small(k1), seed);
        let y = gen_fhs(&GenProfile::small(k2), seed + 1);
        if let Some(phi) = gen_morphism(&x, &y, seed) {
            let ker = phi.kernel().unwrap();
            let coker = phi.cokernel().unwrap();
            prop_assert!(phi.compose(&ker).unwrap().is_zero());
            prop_assert!(coker.compose(&phi).unwrap().is_zero());
            let (onto, emb) = phi.image().unwrap();
            let back = emb.compose(&onto).unwrap();
            prop_assert_eq!(back.f0(), phi.f0());
            prop_assert_eq!(back.g(), phi.g());
            prop_assert_eq!(back.fz().matrix(), phi.fz().matrix());
        }
    }

    #[test]
    fn hom_group_contains_generated_maps(k1 in kind(), seed in 0u64..5000) {
        let x = gen_fhs(&GenProfile::small(k1), seed);
        let y = gen_fhs(&GenProfile::small(Kind::General), seed + 7);
        let h = hom_group(&x, &y).unwrap();
        if let Some(phi) = gen_morphism(&x, &y, seed) {
            prop_assert!(h.contains(&phi));
        }
        prop_assert!(hom_group(&x, &x).unwrap().contains(&FhsMorphism::identity(&x)));
    }

    #[test]
    fn transport_preserves_invariants(k1 in kind(), seed in 0u64..5000) {
        let x = gen_fhs(&GenProfile::new(k1), seed);
        let (s, m, n) = (x.h0_dim(), x.v_dim(), x.het().rank());
        let b = Mat::scalar_identity(s, &Scalar::from_ints(1, 1));
        let a = Mat::scalar_identity(m, &Scalar::int(2));
        let mut u = IntMat::identity(n);
        if n > 1 {
            u.set(0, 1, BigInt::from(seed as i64 % 5 - 2));
        }
        let iso = x.transport(&b, &u, &a).unwrap();
        let y: &Fhs = iso.forward.target();
        prop_assert_eq!(y.invariants(), x.invariants());
        prop_assert_eq!(y.is_special(), x.is_special());
        prop_assert!(iso.verify().is_ok());
    }
}

#[test]
fn subspace_equality_is_basis_independent() {
    let a = Subspace::span(
        3,
        vec![vec![Scalar::int(1), Scalar::int(1), Scalar::zero()], vec![Scalar::zero(), Scalar::int(1), Scalar::i()]],
    );
    let b = Subspace::span(
        3,
        vec![vec![Scalar::int(1), Scalar::int(2), Scalar::i()], vec![Scalar::int(2), Scalar::int(2), Scalar::zero()]],
    );
    assert_eq!(a, b);
}
