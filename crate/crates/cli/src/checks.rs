use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use skein_core::coeff::{quantum_scale, LaurentPoly, RationalFunction};
use skein_core::freealg::{
    a_commutator, apply_operator_word, free_identity_check, predicted_degree, torus_coxeter_relators, NCPolynomial,
    OperatorWord, Sign,
};
use skein_core::torus::{
    boundary_element, clear_product_cache, curve_element_with, equivariance_check, euclid_twist_word, nf_reduce,
    psi, psi_of_operator_image, t_mul, twist_auto, twist_word_auto, witness_boundary, witness_with_cap, word_product,
    z_prime, Curve, Gen, Strategy, TorusElement, Twist, TwistMatrix,
};

use crate::commands::{member, torus_system};
use crate::report::{CliError, Outcome};
use crate::{Global, Suite};

const MAX_EQUIVARIANCE_WORD: usize = 6;
const MAX_CONFLUENCE_LENGTH: usize = 8;
const MAX_CONFLUENCE_ORDERS: usize = 1000;
const MAX_WITNESS_BOUND: i64 = 12;

pub fn suite_name(s: &Suite) -> &'static str {
    match s {
        Suite::Equivariance { .. } => "equivariance",
        Suite::Braiding => "braiding",
        Suite::Boundary => "boundary",
        Suite::Confluence { .. } => "confluence",
        Suite::Witness { .. } => "witness",
        Suite::Membership(_) => "membership",
    }
}

pub fn run(s: &Suite, g: &Global) -> Result<Outcome, CliError> {
    if !g.memo {
        clear_product_cache();
    }
    match s {
        Suite::Equivariance { max_word } => equivariance(*max_word, g),
        Suite::Braiding => braiding(g),
        Suite::Boundary => boundary(),
        Suite::Confluence { length, orders } => confluence(*length, *orders, g),
        Suite::Witness { bound } => witness_sweep(*bound, g),
        Suite::Membership(a) => member(a, g),
    }
}

fn budget(what: &str, value: usize, limit: usize) -> Result<(), CliError> {
    if value > limit {
        return Err(CliError::Budget {
            what: format!("{what} {value}"),
            limit,
        });
    }
    Ok(())
}

/// Named pass/fail lines, rendered one per line in text mode.
#[derive(Default)]
struct Checks {
    items: Vec<(String, bool, Value)>,
}

impl Checks {
    fn add(&mut self, name: impl Into<String>, ok: bool, detail: Value) {
        self.items.push((name.into(), ok, detail));
    }

    fn ok(&self) -> bool {
        self.items.iter().all(|(_, ok, _)| *ok)
    }

    fn values(&self) -> Value {
        Value::Array(
            self.items
                .iter()
                .map(|(n, ok, d)| json!({ "name": n, "ok": ok, "detail": d }))
                .collect(),
        )
    }

    fn text(&self) -> String {
        self.items
            .iter()
            .map(|(n, ok, _)| format!("{} {n}", if *ok { "ok  " } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn equivariance(max_word: usize, g: &Global) -> Result<Outcome, CliError> {
    budget("operator word length", max_word, MAX_EQUIVARIANCE_WORD)?;
    let sys = torus_system();
    let inputs = ["X1", "X2", "X1*X2"].map(|s| NCPolynomial::parse(&sys, s).unwrap());
    let words = OperatorWord::all_up_to(2, max_word);
    let mut failures = Vec::new();
    let mut count = 0;
    for w in &words {
        for p in &inputs {
            count += 1;
            if !equivariance_check(w, p, g.degree_cap)? {
                failures.push(json!({ "word": w.to_string(), "input": p.to_string() }));
            }
        }
    }
    let ok = failures.is_empty();
    Ok(Outcome {
        inputs: json!({ "max_word": max_word, "degree_cap": g.degree_cap }),
        result: json!({ "operator_words": words.len(), "checks": count, "failures": failures }),
        text: format!(
            "{} {count} equivariance checks over {} operator words",
            if ok { "ok  " } else { "FAIL" },
            words.len()
        ),
        ok,
    })
}

fn braiding(g: &Global) -> Result<Outcome, CliError> {
    let sys = torus_system();
    let x = |i| NCPolynomial::generator(&sys, i).unwrap();
    let mut c = Checks::default();
    c.add("[X2,[X1,X2]_A]_A = [[X2,X1]_A,X2]_A", free_identity_check(), Value::Null);

    for (i, j) in [(1, 2), (2, 1)] {
        let w = OperatorWord::new(vec![(j, Sign::Plus), (j, Sign::Minus)]);
        let lhs = apply_operator_word(&w, &x(i), g.degree_cap)?.checked_sub(&x(i))?;
        let rhs = a_commutator(&a_commutator(&x(j), &x(i))?, &x(j))?.checked_sub(&x(i))?;
        c.add(
            format!("T{j} T{j}^-1 X{i} - X{i} = [[X{j},X{i}]_A,X{j}]_A - X{i}"),
            lhs == rhs,
            json!(lhs.to_string()),
        );
    }

    for (k, r) in torus_coxeter_relators(&sys)?.iter().enumerate() {
        let img = psi(r)?;
        c.add(format!("psi kills coxeter relator {}", k + 1), img.is_zero(), json!(img.to_string()));
    }

    // The braid relator on X2 reaches degree 21; expand literally when the
    // cap allows it, otherwise push psi through the word.
    let braid = OperatorWord::braid_relator(1, 2);
    for a in [1, 2] {
        let p = x(a);
        let degree = predicted_degree(&braid, &p)?;
        let (img, route) = if degree <= g.degree_cap {
            let e = apply_operator_word(&braid, &p, g.degree_cap)?.checked_sub(&p)?;
            (psi(&e)?, "literal")
        } else {
            (psi_of_operator_image(&braid, &p)?.sub(&psi(&p)?), "substitution")
        };
        c.add(
            format!("psi kills {braid} X{a} - X{a}"),
            img.is_zero(),
            json!({ "degree": degree, "route": route }),
        );
    }

    Ok(Outcome {
        inputs: json!({ "degree_cap": g.degree_cap }),
        result: json!({ "checks": c.values() }),
        text: c.text(),
        ok: c.ok(),
    })
}

fn boundary() -> Result<Outcome, CliError> {
    let d = boundary_element();
    let (x, y, z) = (TorusElement::x(), TorusElement::y(), TorusElement::z());
    let a = |k| RationalFunction::a_pow(k);
    let delta0 = TorusElement::scalar(-RationalFunction::from(LaurentPoly::a_pow(2) + LaurentPoly::a_pow(-2)));
    let mut c = Checks::default();

    let sep = t_mul(&z_prime(), &z)
        .sub(&x.mul(&x).scale(&a(2)))
        .sub(&y.mul(&y).scale(&a(-2)))
        .sub(d);
    c.add("z'z - A^2 x^2 - A^-2 y^2 - boundary = -A^2 - A^-2", sep == delta0, json!(sep.to_string()));
    for (name, g) in [("x", &x), ("y", &y), ("z", &z)] {
        c.add(format!("boundary commutes with {name}"), d.commutator(g).is_zero(), Value::Null);
    }
    for t in [Twist::X, Twist::Y] {
        for e in [Sign::Plus, Sign::Minus] {
            let label = format!("t_{}^{}", if t == Twist::X { "x" } else { "y" }, e.as_i32());
            c.add(format!("{label} fixes the boundary"), twist_auto(t, e, d) == *d, Value::Null);
        }
    }
    let wb = witness_boundary()?;
    c.add("psi(boundary witness) = boundary", psi(&wb)? == *d, json!(wb.degree()));

    Ok(Outcome {
        inputs: json!({}),
        result: json!({ "boundary": d.to_string(), "checks": c.values() }),
        text: format!("boundary = {d}\n{}", c.text()),
        ok: c.ok(),
    })
}

fn confluence(length: usize, orders: usize, g: &Global) -> Result<Outcome, CliError> {
    budget("word length", length, MAX_CONFLUENCE_LENGTH)?;
    budget("reduction orders", orders, MAX_CONFLUENCE_ORDERS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let one = RationalFunction::one();
    let total = 3usize.pow(length as u32);
    let mut failures = Vec::new();
    let mut max_steps = 0;
    for idx in 0..total {
        let mut k = idx;
        let w: Vec<Gen> = (0..length)
            .map(|_| {
                let l = Gen::ALL[k % 3];
                k /= 3;
                l
            })
            .collect();
        let reference = word_product(&w);
        let mut forms = vec![nf_reduce(&w, &one, Strategy::Leftmost)];
        for _ in 0..orders {
            forms.push(nf_reduce(&w, &one, Strategy::Random(&mut rng)));
        }
        max_steps = max_steps.max(forms.iter().map(|r| r.steps).max().unwrap_or(0));
        if forms.iter().any(|r| r.element != reference) {
            let word: String = w.iter().map(|l| l.symbol()).collect();
            failures.push(json!(word));
        }
    }
    let ok = failures.is_empty();
    Ok(Outcome {
        inputs: json!({ "length": length, "orders": orders, "seed": g.seed }),
        result: json!({ "words": total, "reductions": total * (orders + 1), "max_steps": max_steps, "failures": failures }),
        text: format!(
            "{} {total} words of length {length}, {} reductions each, one normal form per word",
            if ok { "ok  " } else { "FAIL" },
            orders + 1
        ),
        ok,
    })
}

fn witness_sweep(bound: i64, g: &Global) -> Result<Outcome, CliError> {
    budget("curve bound", bound.max(0) as usize, MAX_WITNESS_BOUND as usize)?;
    let s_inv = quantum_scale().inv()?;
    let center = OperatorWord::parse("(T1 T2 T1)^2")?;
    let braid = OperatorWord::braid_relator(1, 2);
    let curves = Curve::all_within(bound);
    let mut failures = Vec::new();
    let mut max_degree = 0;
    for &v in &curves {
        let target = curve_element_with(v, g.memo);
        let w = witness_with_cap(v, g.degree_cap)?;
        max_degree = max_degree.max(w.degree().unwrap_or(0));
        if psi(&w)? != target.scale(&s_inv) {
            failures.push(json!({ "curve": v.to_string(), "check": "witness" }));
        }
        let e = euclid_twist_word(v);
        for alt in [e.concat(&center), e.concat(&braid)] {
            let lands = TwistMatrix::of_word(&alt)?.apply(Curve::MERIDIAN) == v;
            if !lands || twist_word_auto(&alt, &TorusElement::x())? != *target {
                failures.push(json!({ "curve": v.to_string(), "check": "path", "word": alt.to_string() }));
            }
        }
    }
    let ok = failures.is_empty();
    Ok(Outcome {
        inputs: json!({ "bound": bound, "degree_cap": g.degree_cap, "memo": g.memo }),
        result: json!({ "curves": curves.len(), "max_witness_degree": max_degree, "failures": failures }),
        text: format!(
            "{} {} curves: witnesses verified, curve elements path independent (max witness degree {max_degree})",
            if ok { "ok  " } else { "FAIL" },
            curves.len()
        ),
        ok,
    })
}
