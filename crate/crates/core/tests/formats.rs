//! JSON documents: printing then parsing gives back the same object, and
//! malformed or invalid input is told apart.

use formal_hodge::fhs::{Fhs, FhsMorphism};
use formal_hodge::generator::{gen, gen_fhs, gen_morphism, gen_pair, GenProfile, Kind};
use formal_hodge::io::{IoError, Object};
use formal_hodge::mhs::MhsMorphism;
use formal_hodge::motive::MotiveMorphism;
use formal_hodge::realize::t_formal_morphism;
use formal_hodge::samples;
use proptest::prelude::*;
use serde_json::Value;

fn roundtrip(obj: &Object) {
    let text = obj.to_json();
    let back = Object::from_json(&text).unwrap_or_else(|e| panic!("reparse failed: {e}\n{text}"));
    assert_eq!(&back, obj);
    assert_eq!(back.to_json(), text);
}

fn tamper(obj: &Object, edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(&obj.to_json()).unwrap();
    edit(&mut v);
    v.to_string()
}

#[test]
fn every_kind_roundtrips() {
    for kind in Kind::ALL {
        for seed in 0..25 {
            roundtrip(&Object::from(gen(&GenProfile::new(kind), seed)));
        }
    }
    let x = samples::c_z1();
    roundtrip(&Object::FhsMorphism(FhsMorphism::identity(&x)));
    let m = samples::elliptic();
    roundtrip(&Object::MotiveMorphism(MotiveMorphism::identity(&m)));
    let h = samples::elliptic_mhs();
    roundtrip(&Object::MhsMorphism(MhsMorphism::identity(&h)));
    roundtrip(&Object::Sequence(gen_fhs(&GenProfile::new(Kind::General), 3).seq4().unwrap().to_vec()));
    let seq6 = samples::kummer_additive().seq6().unwrap();
    roundtrip(&Object::Sequence(seq6.iter().map(|f| t_formal_morphism(f).unwrap()).collect()));
    roundtrip(&Object::Fhs(Fhs::zero()));
}

#[test]
fn torsion_lattices_roundtrip() {
    let mut hits = 0;
    for seed in 0..60 {
        let (a, b) = gen_pair(seed);
        if let Some(phi) = gen_morphism(&a, &b, seed) {
            let coker = phi.cokernel().unwrap();
            if !coker.target().is_free() {
                hits += 1;
            }
            roundtrip(&Object::FhsMorphism(coker));
        }
    }
    assert!(hits > 0, "no torsion cokernel among the samples");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_documents_roundtrip(seed in 0u64..100_000, k in 0usize..9) {
        let obj = Object::from(gen(&GenProfile::new(Kind::ALL[k]), seed));
        let text = obj.to_json();
        prop_assert_eq!(Object::from_json(&text).unwrap(), obj);
    }

    #[test]
    fn random_morphisms_roundtrip(seed in 0u64..100_000) {
        let (a, b) = gen_pair(seed);
        if let Some(phi) = gen_morphism(&a, &b, seed) {
            let obj = Object::FhsMorphism(phi);
            prop_assert_eq!(Object::from_json(&obj.to_json()).unwrap(), obj);
        }
    }
}

#[test]
fn unknown_fields_are_malformed() {
    let obj = Object::Fhs(samples::c_z1());
    let text = tamper(&obj, |v| {
        v["extra"] = Value::Bool(true);
    });
    assert!(matches!(Object::from_json(&text), Err(IoError::Malformed(_))));
    let text = tamper(&obj, |v| {
        v["payload"]["colour"] = Value::Bool(true);
    });
    assert!(matches!(Object::from_json(&text), Err(IoError::Malformed(_))));
}

#[test]
fn wrong_version_shape_or_scalar_is_malformed() {
    let obj = Object::Fhs(samples::c_z1());
    for edit in [
        (|v: &mut Value| v["format_version"] = 2.into()) as fn(&mut Value),
        |v| v["field"] = "C".into(),
        |v| v["payload"]["vz_map"] = serde_json::json!([["1", "2"]]),
        |v| v["payload"]["vz_map"] = serde_json::json!([["one"]]),
        |v| v["kind"] = "fhs2".into(),
    ] {
        let text = tamper(&obj, edit);
        assert!(matches!(Object::from_json(&text), Err(IoError::Malformed(_))), "{text}");
    }
}

#[test]
fn axiom_violations_are_invalid_not_malformed() {
    let obj = Object::Fhs(samples::c_z1());
    let text = tamper(&obj, |v| v["payload"]["sigma"] = serde_json::json!([["2/1"]]));
    match Object::from_json(&text) {
        Err(IoError::Invalid(e)) => assert_eq!(e.code(), "Square1Broken"),
        other => panic!("expected an axiom violation, got {other:?}"),
    }
}

#[test]
fn sequence_errors_name_the_node() {
    let x = gen_fhs(&GenProfile::new(Kind::General), 11);
    let seq = Object::Sequence(x.seq4().unwrap().to_vec());
    let text = tamper(&seq, |v| {
        let obj = &mut v["payload"]["objects"][1];
        let m = obj["v_dim"].as_u64().unwrap() as usize;
        let mut e = vec!["0/1".to_string(); m];
        e[0] = "1/1".into();
        let mut f = e.clone();
        f[m - 1] = "1/1".into();
        obj["v1"] = serde_json::json!([e, f]);
    });
    match Object::from_json(&text) {
        Err(IoError::InSequence { place, index, component, .. }) => {
            assert_eq!((place, index, component), ("node", 1, "v1"));
        }
        other => panic!("expected a located failure, got {other:?}"),
    }
}
