use std::process::{Command, Output};
use std::sync::Arc;

use serde_json::Value;
use skein_core::freealg::{RelatorTarget, TwistSystem};
use skein_core::quotient::Certificate;
use skein_core::serial::CertificateRepr;

fn skein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skein"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn structured(args: &[&str]) -> (Value, String, i32) {
    let mut all = vec!["--format", "structured"];
    all.extend_from_slice(args);
    let o = skein(&all);
    let text = stdout(&o);
    (serde_json::from_str(&text).unwrap(), text, o.status.code().unwrap())
}

#[test]
fn nf_examples() {
    let o = skein(&["nf", "y*x"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "A^2*x*y - (A^3 - A^-1)*z");
    assert_eq!(stdout(&skein(&["nf", "x*y"])).trim(), "x*y");

    let once = stdout(&skein(&["nf", "z*y*x"]));
    let twice = stdout(&skein(&["nf", once.trim()]));
    assert_eq!(once, twice);
}

#[test]
fn nf_parse_error_reports_position() {
    let (v, _, code) = structured(&["nf", "x*y + q"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "failed");
    assert_eq!(v["result"]["error"], "parse_error");
    assert_eq!(v["result"]["position"], 6);
}

#[test]
fn witness_examples() {
    assert_eq!(stdout(&skein(&["witness", "1,0"])), "X1\nverified\n");
    assert_eq!(stdout(&skein(&["witness", "1,1"])), "A*X1*X2 - A^-1*X2*X1\nverified\n");
    let o = skein(&["witness", "4,6"]);
    assert_eq!(o.status.code(), Some(2));
    let (v, _, code) = structured(&["witness", "-2,-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["inputs"]["curve"], "2,1");
    assert_eq!(v["result"]["verified"], true);
}

#[test]
fn structured_output_round_trips_and_is_deterministic() {
    for args in [
        vec!["nf", "z*y*x"],
        vec!["psi", "A*X1*X2 - X2*X1"],
        vec!["twist", "T1 T2^-1", "X1*X2"],
        vec!["check", "boundary"],
    ] {
        let (v, text, code) = structured(&args);
        assert_eq!(code, 0, "{args:?}");
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");

        let (mut w, _, _) = structured(&args);
        let mut v = v;
        v["timing_ms"] = Value::Null;
        w["timing_ms"] = Value::Null;
        assert_eq!(v, w);
    }
}

#[test]
fn report_envelope_fields() {
    let (v, _, _) = structured(&["mul", "y", "x"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["command", "inputs", "result", "status", "timing_ms"]);
    assert_eq!(v["command"], "mul");
    assert_eq!(v["result"]["product"], "A^2*x*y - (A^3 - A^-1)*z");
}

#[test]
fn boundary_suite_reports_the_element() {
    let (v, _, code) = structured(&["check", "boundary"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["result"]["boundary"], "A*x*y*z - A^2*x^2 - A^-2*y^2 - A^2*z^2 + (A^2 + A^-2)");
}

#[test]
fn equivariance_suite() {
    let o = skein(&["check", "equivariance", "--max-word", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("255 equivariance checks"));
    assert_eq!(skein(&["check", "equivariance", "--max-word", "7"]).status.code(), Some(3));
}

#[test]
fn braiding_and_witness_suites() {
    assert!(skein(&["check", "braiding"]).status.success());
    let (v, _, code) = structured(&["check", "witness", "--bound", "3"]);
    assert_eq!(code, 0);
    // (0,1); (1,q) for |q| <= 3; (2,+-1), (2,+-3); (3,+-1), (3,+-2).
    assert_eq!(v["result"]["curves"], 16);
}

#[test]
fn confluence_suite_is_seeded() {
    let (v, _, code) = structured(&["--seed", "7", "check", "confluence", "--length", "4", "--orders", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["words"], 81);
    assert_eq!(v["inputs"]["seed"], 7);
}

#[test]
fn membership_writes_a_checkable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let target = "(T1 T2 T1)^2 X1 - X1";
    let o = skein(&[
        "check",
        "membership",
        "--target",
        target,
        "--degree",
        "9",
        "--certificate",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let repr: CertificateRepr = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cert = Certificate::try_from(&repr).unwrap();
    let sys = Arc::new(TwistSystem::torus());
    let element = RelatorTarget::parse(target).unwrap().element(&sys, 16).unwrap();
    assert!(cert.verify(&element).unwrap());
}

#[test]
fn membership_failures_and_budgets() {
    let o = skein(&["member", "--target", "T1 T2 X1 - X1", "--degree", "5"]);
    assert_eq!(o.status.code(), Some(3));
    // The X2 center element has degree 19, above the default cap.
    let o = skein(&["member", "--target", "(T1 T2 T1)^2 X2 - X2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = skein(&["span", "--degree", "15"]);
    assert_eq!(o.status.code(), Some(3));
    let o = skein(&["member", "--target", "X1*X2 -", "--degree", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plain_polynomial_membership() {
    let (v, _, code) = structured(&[
        "member",
        "--target",
        "(A^2 + A^-2)*X2*X1*X2 - X1*X2*X2 - X2*X2*X1 - X1",
        "--degree",
        "4",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["route"], "direct");
    assert_eq!(v["result"]["span_degree"], 3);
}

#[test]
fn span_dimensions() {
    let (v, _, code) = structured(&["span", "--degree", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dimension"], 29);
    assert_eq!(v["result"]["words"], 63);
}
