use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use formal_hodge::generator::{gen_fhs, GenProfile, Kind};
use formal_hodge::io::Object;
use formal_hodge::samples;
use serde_json::Value;

fn fhs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhs")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr)
        .unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn validate_tate_object() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "cz1.json", &Object::Fhs(samples::c_z1()).to_json());
    let out = fhs(&["validate", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["summary"]["etale"], true);
}

#[test]
fn dual_twice_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_fhs(&GenProfile::new(Kind::General), 5);
    let f = write(dir.path(), "x.json", &Object::Fhs(x).to_json());
    let d = dir.path().join("d.json");
    let dd = dir.path().join("dd.json");
    assert_eq!(fhs(&["dual", s(&f), "--output", s(&d)]).status.code(), Some(0));
    assert_eq!(fhs(&["dual", s(&d), "--output", s(&dd)]).status.code(), Some(0));
    let out = fhs(&["compare-iso", s(&f), s(&dd)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["iso"]["verified"], true);
    let checks = v["transcript"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty() && checks.iter().all(|c| c["status"] == true));
}

#[test]
fn tampered_sequence_names_node_and_component() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_fhs(&GenProfile::new(Kind::General), 11);
    let seq = Object::Sequence(x.seq4().unwrap().to_vec());
    let good = write(dir.path(), "seq4.json", &seq.to_json());
    let out = fhs(&["check-exact", s(&good)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["exact"], true);

    let mut v: Value = serde_json::from_str(&seq.to_json()).unwrap();
    let node = &mut v["payload"]["objects"][1];
    let m = node["v_dim"].as_u64().unwrap() as usize;
    let basis: Vec<Vec<String>> =
        (0..m).map(|i| (0..m).map(|j| if i == j { "1/1" } else { "0/1" }.to_string()).collect()).collect();
    node["v1"] = serde_json::json!(basis);
    let bad = write(dir.path(), "bad.json", &v.to_string());
    let out = fhs(&["check-exact", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let e = stderr_json(&out);
    assert_eq!(e["location"]["place"], "node");
    assert_eq!(e["location"]["index"], 1);
    assert_eq!(e["location"]["component"], "v1");
}

#[test]
fn inexact_sequence_reports_first_failure() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_fhs(&GenProfile::new(Kind::General), 11);
    let [first, _] = x.seq4().unwrap();
    // drop the last map: X_et -> X/V0 alone is not onto
    let f = write(dir.path(), "short.json", &Object::Sequence(vec![first]).to_json());
    let out = fhs(&["check-exact", s(&f)]);
    assert_eq!(out.status.code(), Some(1));
    let e = stderr_json(&out);
    assert_eq!(e["error"], "NotExact");
    assert_eq!(e["location"]["index"], 1);
    assert_eq!(stdout_json(&out)["exact"], false);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let junk = write(dir.path(), "junk.json", "{\"format_version\": 1, \"kind\": \"fhs1\"}");
    let out = fhs(&["validate", s(&junk)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "Malformed");

    let missing = dir.path().join("missing.json");
    assert_eq!(fhs(&["validate", s(&missing)]).status.code(), Some(2));

    let mut v: Value = serde_json::from_str(&Object::Fhs(samples::c_z1()).to_json()).unwrap();
    v["payload"]["sigma"] = serde_json::json!([["3/1"]]);
    let broken = write(dir.path(), "broken.json", &v.to_string());
    let out = fhs(&["validate", s(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "Square1Broken");

    // a general motive is not etale
    let m = write(dir.path(), "m.json", &Object::Motive(samples::kummer_additive()).to_json());
    assert_eq!(fhs(&["hodge", s(&m)]).status.code(), Some(1));
    // an MHS is not a motive
    let h = write(dir.path(), "h.json", &Object::Mhs(samples::elliptic_mhs()).to_json());
    assert_eq!(fhs(&["realize", s(&h)]).status.code(), Some(2));
}

#[test]
fn gen_feeds_other_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let out = fhs(&["gen", "--profile", "motive-etale", "--seed", "4", "--output", s(&m)]);
    assert_eq!(out.status.code(), Some(0));
    for cmd in ["validate", "hodge", "univ-ext", "realize", "roundtrip", "dual", "etale"] {
        let out = fhs(&[cmd, s(&m)]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let x = dir.path().join("x.json");
    fhs(&["realize", s(&m), "--output", s(&x)]);
    for cmd in ["arrow", "connected", "dual", "roundtrip", "etale"] {
        let out = fhs(&[cmd, s(&x)]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = fhs(&["hom", s(&x), s(&x)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out)["lattice_rank"].as_u64().unwrap() >= 1);

    let sp = dir.path().join("sp.json");
    fhs(&["gen", "--profile", "special", "--seed", "2", "--output", s(&sp)]);
    assert_eq!(fhs(&["special-part", s(&sp)]).status.code(), Some(0));
}

#[test]
fn kernel_and_cokernel_of_multiplication() {
    let dir = tempfile::tempdir().unwrap();
    let x = samples::c_z1();
    let id = formal_hodge::fhs::FhsMorphism::identity(&x);
    let two = id.combine(1, &id, 1).unwrap();
    let f = write(dir.path(), "two.json", &Object::FhsMorphism(two).to_json());
    let out = fhs(&["cokernel", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["target"]["het"]["lattice"]["torsion"], serde_json::json!(["2"]));
    let out = fhs(&["kernel", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["payload"]["source"]["het"]["lattice"]["rank"], 0);
}

#[test]
fn small_suite_run() {
    let out = fhs(&["suite", "--seeds", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 8);
}
