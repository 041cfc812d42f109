use std::collections::HashSet;

use formal_hodge::fhs::check_exact;
use formal_hodge::generator::{gen, gen_fhs, gen_morphism, gen_motive, gen_pair, GenProfile, Kind};
use formal_hodge::io::Object;
use formal_hodge::realize::t_formal;
use formal_hodge::samples;

#[test]
fn etale_profile() {
    let x = gen_fhs(&GenProfile::new(Kind::Etale), 1);
    assert_eq!(x.h0_dim(), 0);
    assert!(x.v0().is_zero());
    for seed in 0..200 {
        assert!(gen_fhs(&GenProfile::new(Kind::Etale), seed).is_etale());
        assert!(gen_motive(&GenProfile::new(Kind::MotiveEtale), seed).is_etale());
    }
}

#[test]
fn connected_profile() {
    for seed in 1..=1000 {
        let x = gen_fhs(&GenProfile::new(Kind::Connected), seed);
        assert!(x.is_connected(), "seed {seed}");
    }
    for seed in 0..200 {
        assert!(gen_motive(&GenProfile::new(Kind::MotiveConnected), seed).is_connected());
    }
}

#[test]
fn special_profile() {
    for seed in 0..300 {
        let x = gen_fhs(&GenProfile::new(Kind::Special), seed);
        assert!(x.is_special(), "seed {seed}");
        let seq = x.seq5().unwrap();
        assert!(check_exact(&seq).unwrap().exact, "seed {seed}");
        assert!(gen_motive(&GenProfile::new(Kind::MotiveSpecial), seed).is_special());
    }
}

#[test]
fn general_profile_covers_all_shapes() {
    let mut special = 0;
    let mut seen: Vec<HashSet<usize>> = vec![HashSet::new(); 6];
    for seed in 0..400 {
        let x = gen_fhs(&GenProfile::new(Kind::General), seed);
        special += x.is_special() as usize;
        for (set, v) in seen.iter_mut().zip(x.invariants()) {
            set.insert(v);
        }
    }
    assert!(special > 0 && special < 400, "special count {special}");
    assert!(seen.iter().all(|s| s.len() >= 2), "{seen:?}");
}

#[test]
fn generated_objects_are_valid() {
    for kind in Kind::ALL {
        for seed in 0..100 {
            let text = Object::from(gen(&GenProfile::new(kind), seed)).to_json();
            Object::from_json(&text).unwrap_or_else(|e| panic!("{kind} seed {seed}: {e}"));
        }
    }
    for seed in 0..200 {
        let (a, b) = gen_pair(seed);
        if let Some(phi) = gen_morphism(&a, &b, seed) {
            let text = Object::FhsMorphism(phi).to_json();
            Object::from_json(&text).unwrap_or_else(|e| panic!("pair seed {seed}: {e}"));
        }
    }
}

#[test]
fn realizations_of_generated_motives_are_valid() {
    for kind in [Kind::MotiveEtale, Kind::MotiveConnected, Kind::MotiveSpecial, Kind::MotiveGeneral] {
        for seed in 0..100 {
            t_formal(&gen_motive(&GenProfile::new(kind), seed)).unwrap();
        }
    }
}

#[test]
fn no_maps_between_tate_twists() {
    assert!(gen_morphism(&samples::c_z0(), &samples::c_z1(), 0).is_none());
    assert!(gen_morphism(&samples::c_z1(), &samples::c_z0(), 0).is_none());
}

#[test]
fn deterministic() {
    for kind in Kind::ALL {
        for seed in [0, 1, 99, u64::MAX] {
            let p = GenProfile::new(kind);
            assert_eq!(gen(&p, seed), gen(&p, seed));
        }
    }
    assert_eq!(gen_pair(17), gen_pair(17));
    let (a, b) = gen_pair(17);
    assert_eq!(gen_morphism(&a, &b, 5), gen_morphism(&a, &b, 5));
    // different seeds give different objects
    let p = GenProfile::new(Kind::General);
    let distinct: HashSet<String> = (0..20).map(|s| Object::from(gen(&p, s)).to_json()).collect();
    assert!(distinct.len() > 15);
}
