use formal_hodge::fhs::{
    check_exact, double_dual_comparison, dual_splitting_iso, etale_dual_comparison, hom_group, Fhs, FhsMorphism,
    LinearMap, Splitting,
};
use formal_hodge::lattice::{FgAbGroup, IntMat};
use formal_hodge::linalg::{Mat, Subspace};
use formal_hodge::mhs::Mhs;
use formal_hodge::realize::{
    arrow, cartier_double_dual_iso, cartier_dual, periods_square, roundtrip_fm, roundtrip_mf, separation, t_formal,
    t_hodge, theorem_formula,
};
use formal_hodge::samples::*;
use formal_hodge::scalar::Scalar;
use formal_hodge::Error;

#[test]
fn zero_and_tate_objects_validate() {
    assert!(Fhs::zero().is_zero());
    let c1 = c_z1();
    assert_eq!(c1.v_dim(), 1);
    assert!(c1.v1().is_full());
    assert!(c1.is_etale());
    let c0 = c_z0();
    assert_eq!(c0.v_dim(), 0);
    let ce = Fhs::canonical_etale(&elliptic_mhs());
    assert_eq!(ce.v_dim(), 1);
    assert!(ce.v1().is_zero());
}

#[test]
fn rescaled_sigma_breaks_square_one() {
    let x = t_formal(&kummer()).unwrap();
    let sigma = x.sigma().scale(&Scalar::int(2));
    let err = Fhs::new(
        x.h0_dim(),
        x.het().clone(),
        x.v_dim(),
        x.v0().clone(),
        x.v1().clone(),
        x.v0_map().clone(),
        x.vz_map().clone(),
        sigma,
    )
    .unwrap_err();
    assert_eq!(err, Error::Square1Broken);
}

#[test]
fn multiplication_maps_on_c_z1() {
    let x = c_z1();
    for n in [-2i64, 0, 1, 3] {
        let ok = FhsMorphism::new(
            x.clone(),
            x.clone(),
            Mat::zeros(0, 0),
            IntMat::from_i64(1, 1, &[n]),
            Mat::from_i64(1, 1, &[n]),
        );
        assert!(ok.is_ok());
        let bad = FhsMorphism::new(
            x.clone(),
            x.clone(),
            Mat::zeros(0, 0),
            IntMat::from_i64(1, 1, &[n]),
            Mat::from_i64(1, 1, &[n + 1]),
        );
        assert!(matches!(bad, Err(Error::Square2Broken(_))));
    }
}

#[test]
fn kernel_cokernel_examples() {
    let x = t_formal(&kummer_additive()).unwrap();
    let id = FhsMorphism::identity(&x);
    assert!(id.kernel().unwrap().source().is_zero());
    assert!(id.cokernel().unwrap().target().is_zero());
    let c1 = c_z1();
    let to_zero = FhsMorphism::zero(&c1, &Fhs::zero());
    assert_eq!(*to_zero.kernel().unwrap().source(), c1);
    let two = FhsMorphism::new(
        c1.clone(),
        c1.clone(),
        Mat::zeros(0, 0),
        IntMat::from_i64(1, 1, &[2]),
        Mat::from_i64(1, 1, &[2]),
    )
    .unwrap();
    let coker = two.cokernel().unwrap();
    let c = coker.target();
    assert_eq!(*c.lattice(), FgAbGroup::new(0, vec![2.into()]).unwrap());
    assert_eq!(c.v_dim(), 0);
}

#[test]
fn exact_sequences() {
    let x = t_formal(&kummer_additive()).unwrap();
    let r = check_exact(&[FhsMorphism::identity(&x)]).unwrap();
    assert!(r.exact);
    let y = c_z1();
    let sum = x.direct_sum(&y).unwrap();
    let (n, m) = (x.het().rank(), y.het().rank());
    let inc = FhsMorphism::new(
        x.clone(),
        sum.clone(),
        Mat::identity(x.h0_dim()).vstack(&Mat::zeros(0, x.h0_dim())),
        IntMat::identity(n).block_diag(&IntMat::zeros(m, 0)),
        Mat::identity(x.v_dim()).vstack(&Mat::zeros(y.v_dim(), x.v_dim())),
    )
    .unwrap();
    let proj = FhsMorphism::new(
        sum.clone(),
        y.clone(),
        Mat::zeros(0, x.h0_dim()),
        IntMat::zeros(m, n).hstack(&IntMat::identity(m)),
        Mat::zeros(y.v_dim(), x.v_dim()).hstack(&Mat::identity(y.v_dim())),
    )
    .unwrap();
    assert!(check_exact(&[inc.clone(), proj.clone()]).unwrap().exact);
    assert!(!check_exact(&[proj, inc]).is_ok_and(|r| r.exact));
    for seq in [x.seq4().unwrap(), x.seq5().unwrap()] {
        let r = check_exact(&seq).unwrap();
        assert!(r.exact, "{r:?}");
    }
}

#[test]
fn etale_and_connected_pieces() {
    let x = t_formal(&kummer_additive()).unwrap();
    let e = x.etale_part();
    assert!(e.is_etale());
    assert_eq!(e.etale_part(), e);
    assert_eq!(Fhs::canonical_etale(x.het()).etale_part(), Fhs::canonical_etale(x.het()));
    let conn = LinearMap { map: Mat::from_i64(3, 2, &[1, 0, 0, 1, 2, 3]) }.to_connected();
    assert!(conn.is_connected() && conn.is_special());
    assert!(conn.etale_part().is_zero());
    assert_eq!(conn.pi_connected(), conn);
    assert_eq!(LinearMap::from_connected(&conn).unwrap().map, Mat::from_i64(3, 2, &[1, 0, 0, 1, 2, 3]));
    assert!(c_z1().pi_connected().is_connected());
    let conn_seq = conn.seq4().unwrap();
    assert!(conn_seq[0].source().is_zero());
}

#[test]
fn hom_examples() {
    let x = t_formal(&kummer()).unwrap();
    let h = hom_group(&x, &x).unwrap();
    assert!(h.contains(&FhsMorphism::identity(&x)));
    assert!(hom_group(&Fhs::zero(), &x).unwrap().is_zero());
    assert!(hom_group(&c_z0(), &c_z1()).unwrap().is_zero());
}

#[test]
fn duality_examples() {
    assert_eq!(c_z0().dual().unwrap(), c_z1());
    assert_eq!(c_z1().dual().unwrap(), c_z0());
    let conn = LinearMap { map: Mat::from_i64(3, 2, &[1, 0, 0, 1, 2, 3]) }.to_connected();
    let d = conn.dual().unwrap();
    assert!(d.is_connected());
    assert_eq!(d.v0_map(), &Mat::from_i64(3, 2, &[1, 0, 0, 1, 2, 3]).transpose());
    for m in [kummer(), elliptic(), kummer_additive(), pic_natural(), pic0_like(), gm(), constant()] {
        let x = t_formal(&m).unwrap();
        double_dual_comparison(&x).unwrap();
        dual_splitting_iso(&x, Splitting::Pivot, Splitting::Reversed).unwrap();
        etale_dual_comparison(&x).unwrap();
        let xd = x.dual().unwrap();
        assert_eq!(xd.h0_dim(), x.v0().dim());
        assert_eq!(xd.v0().dim(), x.h0_dim());
    }
    let pd = t_formal(&pic_natural()).unwrap().dual().unwrap();
    assert_eq!((pd.h0_dim(), pd.v_dim(), pd.het().rank()), (1, 1, 2));
    assert!(!pd.is_special());
}

#[test]
fn motive_examples() {
    assert_eq!(Motive::zero().ranks().g, 0);
    let k = kummer().ranks();
    assert_eq!((k.g, k.t, k.r), (0, 1, 1));
    assert_eq!(elliptic().ranks().g, 1);
    assert_eq!(t_hodge(&gm()).unwrap(), Mhs::tate(1));
    assert_eq!(t_hodge(&elliptic()).unwrap(), elliptic_mhs());
    let kh = t_hodge(&kummer()).unwrap();
    assert_eq!(kh.graded_ranks(), [1, 0, 1]);
    assert_eq!(*kh.f0(), Subspace::span(2, [vec![Scalar::frac(-1, 2), Scalar::one()]]));
    let nat = pic_natural();
    assert_eq!((nat.n(), nat.add().dim()), (2, 1));
    let kn = kummer().universal_vector_extension().unwrap();
    assert_eq!((kn.n(), kn.add().dim()), (2, 1));
    assert_eq!(gm().universal_vector_extension().unwrap().add().dim(), 0);
    assert_eq!(pic_natural().etale_motive().ranks().g, 1);
}

use formal_hodge::motive::Motive;

#[test]
fn realization_round_trips() {
    for m in [Motive::zero(), gm(), constant(), kummer(), elliptic(), kummer_additive(), pic_natural(), pic0_like()] {
        let x = t_formal(&m).unwrap();
        roundtrip_fm(&x).unwrap();
        roundtrip_mf(&m).unwrap();
        assert_eq!(arrow(&x).unwrap(), m.clone().without_polarization());
        let (tr, _) = theorem_formula(&m).unwrap();
        assert!(tr.passed(), "{tr:?}");
        let d = cartier_dual(&m).unwrap();
        let (r, rd) = (m.ranks(), d.ranks());
        assert_eq!((rd.s, rd.r, rd.add, rd.t, rd.g), (r.add, r.t, r.s, r.r, r.g));
        cartier_double_dual_iso(&m).unwrap();
        if m.is_etale() {
            let tr = periods_square(&m).unwrap();
            assert!(tr.passed(), "{tr:?}");
        }
    }
    let pd = cartier_dual(&pic_natural()).unwrap();
    assert_eq!((pd.s(), pd.add().dim(), pd.ranks().g), (1, 0, 1));
    assert!(!pd.is_special());
}

#[test]
fn separation_pair_is_separated() {
    let (a, b) = separation_pair();
    let cert = separation(&a, &b).unwrap();
    assert!(cert.separated(), "{cert:?}");
}

fn small_grid(len: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (-bound..=bound).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

// Every small integral candidate is a morphism exactly when the solved group contains it.
#[test]
fn hom_group_agrees_with_enumeration() {
    let cases = [(c_z0(), c_z1()), (c_z1(), c_z1()), (t_formal(&kummer()).unwrap(), t_formal(&kummer()).unwrap())];
    for (x, y) in cases {
        let h = hom_group(&x, &y).unwrap();
        let (s, m, n) = ((y.h0_dim(), x.h0_dim()), (y.v_dim(), x.v_dim()), (y.het().rank(), x.het().rank()));
        let len = s.0 * s.1 + m.0 * m.1 + n.0 * n.1;
        let mut found = 0;
        for v in small_grid(len, 2) {
            let (a, rest) = v.split_at(s.0 * s.1);
            let (b, c) = rest.split_at(m.0 * m.1);
            let cand = FhsMorphism::new(
                x.clone(),
                y.clone(),
                Mat::from_i64(s.0, s.1, a),
                IntMat::from_i64(n.0, n.1, c),
                Mat::from_i64(m.0, m.1, b),
            );
            if let Ok(phi) = &cand {
                found += 1;
                assert!(h.contains(phi));
            }
        }
        assert!(found >= 1);
        for phi in h.lattice_part.iter().chain(&h.linear_part) {
            assert!(FhsMorphism::new(
                x.clone(),
                y.clone(),
                phi.f0().clone(),
                phi.fz().matrix().clone(),
                phi.g().clone()
            )
            .is_ok());
        }
    }
    let k = t_formal(&kummer()).unwrap();
    let h = hom_group(&k, &k).unwrap();
    assert_eq!((h.lattice_rank(), h.linear_dim()), (2, 0));
}

#[test]
fn dual_is_contravariant() {
    let x = t_formal(&kummer_additive()).unwrap();
    let h = hom_group(&x, &x).unwrap();
    let maps: Vec<_> = h.lattice_part.iter().chain(&h.linear_part).cloned().collect();
    assert!(!maps.is_empty());
    for p in &maps {
        for q in &maps {
            let lhs = q.compose(p).unwrap().dual().unwrap();
            let rhs = p.dual().unwrap().compose(&q.dual().unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let dd = double_dual_comparison(&x).unwrap();
        let a = dd.forward.compose(p).unwrap();
        let b = p.dual().unwrap().dual().unwrap().compose(&dd.forward).unwrap();
        assert_eq!(a, b);
    }
    assert!(FhsMorphism::identity(&x).dual().unwrap().is_identity());
}

#[test]
fn arrow_is_natural() {
    for m in [kummer(), kummer_additive(), pic_natural(), elliptic()] {
        let x = t_formal(&m).unwrap();
        for phi in hom_group(&x, &x).unwrap().lattice_part {
            assert!(formal_hodge::realize::naturality_fm(&phi).unwrap());
            let f = formal_hodge::realize::arrow_morphism(&phi).unwrap();
            assert!(formal_hodge::realize::naturality_mf(&f).unwrap());
        }
    }
}
