//! Black-box tests against the installed binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dgcalc::dgq::DgqFile;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn dgcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgcalc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_accepts_every_fixture() {
    for name in [
        "x_surface.dgq",
        "x_first_quiver.dgq",
        "v_collection.dgq",
        "y_surface.dgq",
        "delta_family.dgq",
    ] {
        let out = dgcalc(&["check", fixture(name).to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn deform_at_zero_matches_the_surface_fixture() {
    let out = dgcalc(&["deform", "--t", "0", fixture("delta_family.dgq").to_str().unwrap()]);
    assert!(out.status.success());
    let expected = std::fs::read(fixture("x_surface.dgq")).unwrap();
    assert_eq!(out.stdout, expected);
}

#[test]
fn exceptional_distinguishes_the_two_collections() {
    let out = dgcalc(&["exceptional", fixture("v_collection.dgq").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not exceptional"));
    let out = dgcalc(&["exceptional", fixture("x_surface.dgq").to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn malformed_input_reports_position_and_exits_2() {
    let dir = std::env::temp_dir().join("dgcalc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.dgq");
    std::fs::write(&bad, "{\"vertices\": [\"a\",]}\n").unwrap();
    let out = dgcalc(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = dgcalc(&["check", dir.join("missing.dgq").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let path = fixture("x_surface.dgq");
    let path = path.to_str().unwrap();
    for args in [
        vec!["cohomology", path],
        vec!["minimal-model", path],
        vec!["mutate", "--word", "L2", fixture("y_surface.dgq").to_str().unwrap()],
    ] {
        let a = dgcalc(&args);
        let b = dgcalc(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn chi_evaluates_divisor_expressions() {
    let path = fixture("x_surface.dgq");
    let out = dgcalc(&["chi", "--divisor", "H-E2", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("= 2"));
    let out = dgcalc(&["chi", "--divisor", "0,1,0", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("= 1"));
}

#[test]
fn universal_dg_emits_a_loadable_quiver() {
    let out = dgcalc(&["universal-dg", fixture("x_surface.dgq").to_str().unwrap()]);
    assert!(out.status.success());
    let f = DgqFile::parse(&stdout_of(&out)).unwrap();
    f.to_quiver().unwrap();
}

#[test]
fn bad_thread_hint_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_dgcalc"))
        .args(["check", fixture("x_surface.dgq").to_str().unwrap()])
        .env("DGCALC_THREADS", "zebra")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
