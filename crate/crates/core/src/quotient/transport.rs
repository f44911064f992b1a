//! Membership proofs for relator elements `w(X_i) - X_i` whose degree is
//! far beyond what a direct span can hold.
//!
//! Write `w = s_1 ... s_m` and `phi_k = T_{s_1} o ... o T_{s_k}`. Each
//! `phi_k(X_j)` is obtained from `phi_{k-1}` by substituting into the small
//! polynomial `T_{s_k}(X_j)`. Alongside we keep a reduced representative
//! `r_{k,j}` of low degree and a certificate for `phi_k(X_j) - r_{k,j}`.
//! Products of images differ from products of representatives by
//! `E_a phi_b + r_a E_b`, so certificates only ever get multiplied by
//! polynomials; every reduction happens in one span of small degree.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_span, CertEntry, Certificate, IdealSpan};
use crate::coeff::RationalFunction;
use crate::error::{Error, Result};
use crate::freealg::{NCPolynomial, OperatorWord, RelatorTarget, TwistSystem, Word};

/// `coef * left * g[generator] * right` with polynomial factors.
#[derive(Debug, Clone)]
pub struct FactoredEntry {
    pub left: NCPolynomial,
    pub generator: usize,
    pub right: NCPolynomial,
}

/// A certificate whose products carry polynomial rather than word factors.
#[derive(Debug, Clone)]
pub struct FactoredCertificate {
    system: Arc<TwistSystem>,
    generators: Vec<NCPolynomial>,
    entries: Vec<FactoredEntry>,
}

impl FactoredCertificate {
    pub fn new(system: Arc<TwistSystem>, generators: Vec<NCPolynomial>) -> Self {
        FactoredCertificate {
            system,
            generators,
            entries: Vec::new(),
        }
    }

    pub fn from_certificate(cert: &Certificate) -> Self {
        let sys = cert.system().clone();
        let entries = cert
            .entries()
            .iter()
            .map(|e| FactoredEntry {
                left: NCPolynomial::monomial(&sys, e.left_word.clone(), e.coefficient.clone()).unwrap(),
                generator: e.generator_index,
                right: NCPolynomial::monomial(&sys, e.right_word.clone(), RationalFunction::one()).unwrap(),
            })
            .collect();
        FactoredCertificate {
            system: sys,
            generators: cert.generators().to_vec(),
            entries,
        }
    }

    pub fn entries(&self) -> &[FactoredEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `c * p * self`.
    fn left_mul(&self, c: &RationalFunction, p: &NCPolynomial) -> Result<Vec<FactoredEntry>> {
        let cp = p.scale(c);
        self.entries
            .iter()
            .map(|e| {
                Ok(FactoredEntry {
                    left: cp.checked_mul(&e.left)?,
                    generator: e.generator,
                    right: e.right.clone(),
                })
            })
            .collect()
    }

    /// `c * self * p`.
    fn right_mul(&self, c: &RationalFunction, p: &NCPolynomial) -> Result<Vec<FactoredEntry>> {
        self.entries
            .iter()
            .map(|e| {
                Ok(FactoredEntry {
                    left: e.left.scale(c),
                    generator: e.generator,
                    right: e.right.checked_mul(p)?,
                })
            })
            .collect()
    }

    /// Expand with products in the free algebra.
    pub fn expand(&self) -> NCPolynomial {
        let mut out = NCPolynomial::zero(&self.system);
        for e in &self.entries {
            let lg = e.left.checked_mul(&self.generators[e.generator]).expect("same system");
            for (v, cv) in e.right.terms() {
                for (w, c) in lg.terms() {
                    out.add_term(w.concat(v), c * cv);
                }
            }
        }
        out
    }

    pub fn verify(&self, target: &NCPolynomial) -> Result<bool> {
        Ok(self.expand().checked_sub(target)?.is_zero())
    }

    /// Word-level form, with equal products merged.
    pub fn flatten(&self) -> Certificate {
        let mut index: HashMap<(Word, usize, Word), usize> = HashMap::new();
        let mut out: Vec<CertEntry> = Vec::new();
        for e in &self.entries {
            for (u, cu) in e.left.terms() {
                for (v, cv) in e.right.terms() {
                    let c = cu * cv;
                    let key = (u.clone(), e.generator, v.clone());
                    match index.get(&key) {
                        Some(&i) => out[i].coefficient = &out[i].coefficient + &c,
                        None => {
                            index.insert(key, out.len());
                            out.push(CertEntry {
                                left_word: u.clone(),
                                generator_index: e.generator,
                                right_word: v.clone(),
                                coefficient: c,
                            });
                        }
                    }
                }
            }
        }
        out.retain(|e| !e.coefficient.is_zero());
        Certificate::from_entries(self.system.clone(), self.generators.clone(), out).unwrap()
    }
}

/// The result of [`transport_proof`].
#[derive(Debug, Clone)]
pub struct TransportProof {
    /// `w(X_i) - X_i`.
    pub target: NCPolynomial,
    pub certificate: FactoredCertificate,
    /// Degree of the span every reduction took place in.
    pub span_degree: usize,
    /// Reduced representatives of `phi_k(X_i)` after each step.
    pub representatives: Vec<NCPolynomial>,
}

/// Prove `w(X_i) - X_i` lies in the ideal generated by `gens`, reducing
/// only inside the span of degree `span_degree`. Returns `Ok(None)` when the
/// chain of representatives does not close up at `X_i`.
pub fn transport_proof(
    gens: &[NCPolynomial],
    w: &OperatorWord,
    i: usize,
    span_degree: usize,
) -> Result<Option<TransportProof>> {
    let span = build_span(gens, span_degree)?;
    transport_in_span(&span, w, i)
}

pub fn transport_in_span(span: &IdealSpan, w: &OperatorWord, i: usize) -> Result<Option<TransportProof>> {
    let sys = span.system().clone();
    let n = sys.n();
    sys.check_index(i)?;
    w.check(&sys)?;
    let gens = span.generators().to_vec();
    let gen = |j| NCPolynomial::generator(&sys, j).unwrap();
    let mut phi: Vec<NCPolynomial> = (1..=n).map(gen).collect();
    let mut rep: Vec<NCPolynomial> = phi.clone();
    let mut err: Vec<FactoredCertificate> = (0..n)
        .map(|_| FactoredCertificate::new(sys.clone(), gens.clone()))
        .collect();
    let mut trail = Vec::new();

    for &(s, eps) in w.steps() {
        let mut next_phi = phi.clone();
        let mut next_rep = rep.clone();
        let mut next_err = err.clone();
        for j in 1..=n {
            if sys.iota(s, j) == 0 {
                continue;
            }
            let (a, b) = (s - 1, j - 1);
            let e = eps.as_i32();
            let sign = RationalFunction::from_int(e as i64);
            let c1 = &sign * &RationalFunction::a_pow(e);
            let c2 = -&(&sign * &RationalFunction::a_pow(-e));
            // phi_k(X_j) = c1 phi_s phi_j + c2 phi_j phi_s, likewise for reps.
            next_phi[b] = phi[a]
                .checked_mul(&phi[b])?
                .scale(&c1)
                .checked_add(&phi[b].checked_mul(&phi[a])?.scale(&c2))?;
            let raw = rep[a]
                .checked_mul(&rep[b])?
                .scale(&c1)
                .checked_add(&rep[b].checked_mul(&rep[a])?.scale(&c2))?;
            let (rem, cert) = span.reduce_with_certificate(&raw)?;
            let mut entries = Vec::new();
            entries.extend(err[a].right_mul(&c1, &phi[b])?);
            entries.extend(err[b].left_mul(&c1, &rep[a])?);
            entries.extend(err[b].right_mul(&c2, &phi[a])?);
            entries.extend(err[a].left_mul(&c2, &rep[b])?);
            entries.extend(FactoredCertificate::from_certificate(&cert).entries);
            next_err[b] = FactoredCertificate {
                system: sys.clone(),
                generators: gens.clone(),
                entries,
            };
            next_rep[b] = rem;
        }
        phi = next_phi;
        rep = next_rep;
        err = next_err;
        trail.push(rep[i - 1].clone());
    }

    let x = gen(i);
    if rep[i - 1] != x {
        return Ok(None);
    }
    let target = phi[i - 1].checked_sub(&x)?;
    Ok(Some(TransportProof {
        target,
        certificate: err.swap_remove(i - 1),
        span_degree: span.degree_bound(),
        representatives: trail,
    }))
}

/// Smallest span degree in `min..=max` for which [`transport_proof`]
/// closes up, with the proof.
pub fn minimal_transport_proof(
    gens: &[NCPolynomial],
    w: &OperatorWord,
    i: usize,
    max_degree: usize,
) -> Result<Option<TransportProof>> {
    let min = gens.iter().filter_map(|g| g.degree()).max().unwrap_or(0);
    for d in min..=max_degree {
        match transport_proof(gens, w, i, d) {
            Ok(Some(p)) => return Ok(Some(p)),
            Ok(None) | Err(Error::DegreeTooHigh { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// How a membership certificate was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Reduction of the element itself in a span.
    Direct,
    /// Chained reductions along the operator word; see the module docs.
    Transport,
}

/// A checked membership proof with a word-level certificate.
#[derive(Debug, Clone)]
pub struct MembershipProof {
    pub target: NCPolynomial,
    pub route: Route,
    pub span_degree: usize,
    pub certificate: Certificate,
}

/// Decide membership of `w(X_i) - X_i` using spans of degree at most
/// `max_degree`: directly when the element fits, otherwise by transport.
/// The element is expanded with degree cap `cap`, and every certificate is
/// verified against it before being returned.
pub fn prove_relator_member(
    gens: &[NCPolynomial],
    target: &RelatorTarget,
    max_degree: usize,
    cap: usize,
) -> Result<Option<MembershipProof>> {
    let sys = gens.first().ok_or(Error::InvalidSystem("no generators".into()))?.system().clone();
    let element = target.element(&sys, cap)?;
    if let Some(p) = prove_direct_member(gens, &element, max_degree)? {
        return Ok(Some(p));
    }
    let Some(t) = minimal_transport_proof(gens, &target.word, target.index, max_degree)? else {
        return Ok(None);
    };
    debug_assert_eq!(t.target, element);
    let certificate = t.certificate.flatten();
    if !certificate.verify(&element)? {
        return Ok(None);
    }
    Ok(Some(MembershipProof {
        target: element,
        route: Route::Transport,
        span_degree: t.span_degree,
        certificate,
    }))
}

/// Direct membership, trying every span degree from the degree of `p` up to
/// `max_degree`.
pub fn prove_direct_member(gens: &[NCPolynomial], p: &NCPolynomial, max_degree: usize) -> Result<Option<MembershipProof>> {
    let lo = gens
        .iter()
        .filter_map(|g| g.degree())
        .chain(p.degree())
        .max()
        .unwrap_or(0);
    for d in lo..=max_degree {
        let span = build_span(gens, d)?;
        if let Some(certificate) = span.certify(p)? {
            if certificate.verify(p)? {
                return Ok(Some(MembershipProof {
                    target: p.clone(),
                    route: Route::Direct,
                    span_degree: d,
                    certificate,
                }));
            }
        }
    }
    Ok(None)
}
