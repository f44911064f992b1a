use std::sync::Arc;

use serde_json::{json, Value};
use skein_core::coeff::quantum_scale;
use skein_core::freealg::{
    apply_operator_word, torus_coxeter_relators, NCPolynomial, OperatorWord, RelatorTarget, TwistSystem,
};
use skein_core::quotient::{
    build_span, prove_direct_member, prove_relator_member, word_count, MembershipProof, Route,
};
use skein_core::serial::{nc_repr, torus_repr, CertificateRepr};
use skein_core::torus::{
    boundary_element, clear_product_cache, curve_element_with, normal_form, t_mul, twist_word_auto,
    witness_boundary, witness_with_cap, Curve, TorusElement,
};

use crate::report::{CliError, Outcome};
use crate::{Global, MemberArgs, SpanArgs};

/// Largest span degree accepted on the command line.
const MAX_SPAN_DEGREE: usize = 14;

pub fn torus_system() -> Arc<TwistSystem> {
    Arc::new(TwistSystem::torus())
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("plain data serializes")
}

pub fn nf(expr: &str) -> Result<Outcome, CliError> {
    let r = normal_form(expr)?;
    let text = r.element.to_string();
    Ok(Outcome::ok(
        json!({ "expr": expr }),
        json!({
            "normal_form": text,
            "element": to_value(&torus_repr(&r.element)),
            "rewrite_steps": r.steps,
        }),
        text,
    ))
}

pub fn mul(lhs: &str, rhs: &str) -> Result<Outcome, CliError> {
    let a = TorusElement::parse(lhs)?;
    let b = TorusElement::parse(rhs)?;
    let p = t_mul(&a, &b);
    let text = p.to_string();
    Ok(Outcome::ok(
        json!({ "lhs": a.to_string(), "rhs": b.to_string() }),
        json!({ "product": text, "element": to_value(&torus_repr(&p)) }),
        text,
    ))
}

pub fn twist(word: &str, expr: &str, torus: bool, g: &Global) -> Result<Outcome, CliError> {
    let w = OperatorWord::parse(word)?;
    if torus {
        let e = TorusElement::parse(expr)?;
        let img = twist_word_auto(&w, &e)?;
        let text = img.to_string();
        return Ok(Outcome::ok(
            json!({ "word": w.to_string(), "expr": e.to_string(), "acts_on": "torus" }),
            json!({ "image": text, "element": to_value(&torus_repr(&img)) }),
            text,
        ));
    }
    let p = NCPolynomial::parse(&torus_system(), expr)?;
    let img = apply_operator_word(&w, &p, g.degree_cap)?;
    let text = img.to_string();
    Ok(Outcome::ok(
        json!({ "word": w.to_string(), "expr": p.to_string(), "acts_on": "free", "degree_cap": g.degree_cap }),
        json!({ "image": text, "degree": img.degree(), "terms": img.len(), "polynomial": to_value(&nc_repr(&img)) }),
        text,
    ))
}

pub fn psi(expr: &str) -> Result<Outcome, CliError> {
    let p = NCPolynomial::parse(&torus_system(), expr)?;
    let img = skein_core::torus::psi(&p)?;
    let text = img.to_string();
    Ok(Outcome::ok(
        json!({ "expr": p.to_string() }),
        json!({ "image": text, "element": to_value(&torus_repr(&img)) }),
        text,
    ))
}

pub fn witness(curve: &str, g: &Global) -> Result<Outcome, CliError> {
    if !g.memo {
        clear_product_cache();
    }
    let (label, poly, target) = if curve.trim() == "boundary" {
        ("boundary".to_string(), witness_boundary()?, boundary_element().clone())
    } else {
        let v: Curve = curve.parse()?;
        let target = curve_element_with(v, g.memo).scale(&quantum_scale().inv()?);
        (v.to_string(), witness_with_cap(v, g.degree_cap)?, target)
    };
    let verified = skein_core::torus::psi(&poly)? == target;
    let text = format!("{poly}\n{}", if verified { "verified" } else { "NOT verified" });
    Ok(Outcome {
        inputs: json!({ "curve": label }),
        result: json!({
            "witness": poly.to_string(),
            "degree": poly.degree(),
            "polynomial": to_value(&nc_repr(&poly)),
            "target": target.to_string(),
            "verified": verified,
        }),
        text,
        ok: verified,
    })
}

fn generators(list: Option<&str>) -> Result<Vec<NCPolynomial>, CliError> {
    let sys = torus_system();
    match list {
        None => Ok(torus_coxeter_relators(&sys)?),
        Some(s) => Ok(s
            .split(';')
            .map(|g| NCPolynomial::parse(&sys, g.trim()))
            .collect::<Result<Vec<_>, _>>()?),
    }
}

fn check_span_degree(d: usize) -> Result<(), CliError> {
    if d > MAX_SPAN_DEGREE {
        return Err(CliError::Budget {
            what: format!("span degree {d}"),
            limit: MAX_SPAN_DEGREE,
        });
    }
    Ok(())
}

pub fn member(a: &MemberArgs, g: &Global) -> Result<Outcome, CliError> {
    check_span_degree(a.degree)?;
    let gens = generators(a.generators.as_deref())?;
    let sys = torus_system();
    let (target_text, proof): (String, Option<MembershipProof>) = match RelatorTarget::parse(&a.target) {
        Ok(t) => (t.to_string(), prove_relator_member(&gens, &t, a.degree, g.degree_cap)?),
        Err(relator_err) => {
            // Not of the form "W Xi - Xi": read it as a plain polynomial and
            // report whichever parse got further.
            let p = NCPolynomial::parse(&sys, &a.target).map_err(|e| match (&e, &relator_err) {
                (
                    skein_core::error::Error::Parse { pos: p1, .. },
                    skein_core::error::Error::Parse { pos: p2, .. },
                ) if p2 > p1 => relator_err.clone(),
                _ => e,
            })?;
            (p.to_string(), prove_direct_member(&gens, &p, a.degree)?)
        }
    };
    let inputs = json!({
        "target": target_text,
        "degree": a.degree,
        "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    });
    let Some(proof) = proof else {
        return Ok(Outcome {
            inputs,
            result: json!({ "membership": "not_in_degree_bound" }),
            text: format!("no certificate found with spans up to degree {}", a.degree),
            ok: false,
        });
    };
    // Independent re-check by plain expansion before anything is reported.
    let verified = proof.certificate.verify(&proof.target)?;
    if let Some(path) = &a.certificate {
        let repr = CertificateRepr::from(&proof.certificate);
        let body = serde_json::to_string_pretty(&repr).expect("certificates serialize");
        std::fs::write(path, body + "\n").map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let route = match proof.route {
        Route::Direct => "direct",
        Route::Transport => "transport",
    };
    let text = format!(
        "member: {} (degree {}, {} terms) via {route} reduction at span degree {}; certificate of {} products {}",
        target_text,
        proof.target.degree().unwrap_or(0),
        proof.target.len(),
        proof.span_degree,
        proof.certificate.len(),
        if verified { "verified" } else { "FAILED to verify" },
    );
    Ok(Outcome {
        inputs,
        result: json!({
            "membership": "member",
            "route": route,
            "span_degree": proof.span_degree,
            "target_degree": proof.target.degree(),
            "target_terms": proof.target.len(),
            "certificate_entries": proof.certificate.len(),
            "certificate_file": a.certificate.as_ref().map(|p| p.display().to_string()),
            "verified": verified,
        }),
        text,
        ok: verified,
    })
}

pub fn span(a: &SpanArgs) -> Result<Outcome, CliError> {
    check_span_degree(a.degree)?;
    let gens = generators(a.generators.as_deref())?;
    let span = build_span(&gens, a.degree)?;
    let words = word_count(2, a.degree);
    let text = format!(
        "degree {}: span dimension {} of {} words ({} candidate products)",
        a.degree,
        span.dimension(),
        words,
        span.candidate_count()
    );
    Ok(Outcome::ok(
        json!({ "degree": a.degree, "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>() }),
        json!({ "dimension": span.dimension(), "words": words, "candidates": span.candidate_count() }),
        text,
    ))
}
