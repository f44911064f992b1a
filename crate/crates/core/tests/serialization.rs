use std::sync::Arc;

use skein_core::freealg::{torus_coxeter_relators, NCPolynomial, RelatorTarget, TwistSystem};
use skein_core::quotient::{prove_relator_member, Certificate};
use skein_core::serial::{nc_from_repr, nc_repr, torus_from_repr, torus_repr, CertificateRepr, RationalFunctionRepr};
use skein_core::torus::{boundary_element, TorusElement};

#[test]
fn rational_function_json_shape() {
    let p = NCPolynomial::parse(&Arc::new(TwistSystem::torus()), "(A)/(A^2 - A^-2)*X1").unwrap();
    let (_, c) = p.terms().next().unwrap();
    let json = serde_json::to_string(&RationalFunctionRepr::from(c)).unwrap();
    assert_eq!(json, r#"{"num":[[3,"1"]],"den":[[0,"-1"],[4,"1"]]}"#);
}

#[test]
fn polynomials_round_trip_through_json() {
    let sys = Arc::new(TwistSystem::torus());
    let p = NCPolynomial::parse(&sys, "3/2*A^4*X1*X2 - (A + 1)/(A^3 - 2)*X2*X1 + 7").unwrap();
    let text = serde_json::to_string(&nc_repr(&p)).unwrap();
    let back = nc_from_repr(&sys, &serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, p);
    assert_eq!(serde_json::to_string(&nc_repr(&back)).unwrap(), text);
    // Words come out in graded-lex order, constant first.
    assert!(text.starts_with(r#"[{"word":[],"#));

    let d = boundary_element();
    let text = serde_json::to_string(&torus_repr(d)).unwrap();
    let back: TorusElement = torus_from_repr(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(&back, d);
}

#[test]
fn center_certificate_survives_json() {
    let sys = Arc::new(TwistSystem::torus());
    let gens = torus_coxeter_relators(&sys).unwrap();
    let t = RelatorTarget::parse("(T1 T2 T1)^2 X1 - X1").unwrap();
    let proof = prove_relator_member(&gens, &t, 9, 16).unwrap().unwrap();
    let text = serde_json::to_string(&CertificateRepr::from(&proof.certificate)).unwrap();
    let repr: CertificateRepr = serde_json::from_str(&text).unwrap();
    let cert = Certificate::try_from(&repr).unwrap();
    assert_eq!(cert, proof.certificate);
    assert!(cert.verify(&t.element(&sys, 16).unwrap()).unwrap());
    assert!(repr.entries.iter().all(|e| e.generator_index < 2));
}

#[test]
fn malformed_reprs_are_rejected() {
    let bad: RationalFunctionRepr = serde_json::from_str(r#"{"num":[[0,"1"]],"den":[]}"#).unwrap();
    assert!(skein_core::coeff::RationalFunction::try_from(&bad).is_err());
    let bad: RationalFunctionRepr = serde_json::from_str(r#"{"num":[[0,"x"]],"den":[[0,"1"]]}"#).unwrap();
    assert!(skein_core::coeff::RationalFunction::try_from(&bad).is_err());
}
