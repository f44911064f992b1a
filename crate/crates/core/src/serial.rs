//! Structured (serde) forms of the algebraic values. Each `*Repr` type is a
//! plain data mirror; conversions back validate and canonicalise.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::{LaurentPoly, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::freealg::{NCPolynomial, TwistSystem, Word};
use crate::quotient::{CertEntry, Certificate};
use crate::torus::{Monomial, TorusElement};

/// `[exponent, "p/q"]` pairs in increasing exponent order.
pub type LaurentRepr = Vec<(i32, String)>;

pub fn laurent_repr(p: &LaurentPoly) -> LaurentRepr {
    p.terms().iter().map(|(e, c)| (*e, c.to_string())).collect()
}

pub fn laurent_from_repr(r: &LaurentRepr) -> Result<LaurentPoly> {
    let mut terms = Vec::with_capacity(r.len());
    for (e, c) in r {
        let q: Rational = c
            .parse()
            .map_err(|_| Error::parse(0, format!("bad rational '{c}'")))?;
        terms.push((*e, q));
    }
    Ok(LaurentPoly::from_terms(terms))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionRepr {
    pub num: LaurentRepr,
    pub den: LaurentRepr,
}

impl From<&RationalFunction> for RationalFunctionRepr {
    fn from(f: &RationalFunction) -> Self {
        RationalFunctionRepr {
            num: laurent_repr(f.num()),
            den: laurent_repr(f.den()),
        }
    }
}

impl TryFrom<&RationalFunctionRepr> for RationalFunction {
    type Error = Error;

    fn try_from(r: &RationalFunctionRepr) -> Result<Self> {
        RationalFunction::new(laurent_from_repr(&r.num)?, laurent_from_repr(&r.den)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCTermRepr {
    pub word: Vec<usize>,
    pub coef: RationalFunctionRepr,
}

/// Terms in increasing graded-lex order of their words.
pub type NCPolynomialRepr = Vec<NCTermRepr>;

pub fn nc_repr(p: &NCPolynomial) -> NCPolynomialRepr {
    p.terms()
        .map(|(w, c)| NCTermRepr {
            word: w.letters().collect(),
            coef: c.into(),
        })
        .collect()
}

fn word_from(sys: &TwistSystem, letters: &[usize]) -> Result<Word> {
    for &i in letters {
        sys.check_index(i)?;
    }
    Ok(Word::from_indices(letters.iter().copied()))
}

pub fn nc_from_repr(system: &Arc<TwistSystem>, r: &NCPolynomialRepr) -> Result<NCPolynomial> {
    let mut p = NCPolynomial::zero(system);
    for t in r {
        p.add_term(word_from(system, &t.word)?, RationalFunction::try_from(&t.coef)?);
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusTermRepr {
    /// Exponents of `x`, `y`, `z`.
    pub monomial: [u32; 3],
    pub coef: RationalFunctionRepr,
}

pub type TorusElementRepr = Vec<TorusTermRepr>;

pub fn torus_repr(e: &TorusElement) -> TorusElementRepr {
    e.terms()
        .map(|(m, c)| TorusTermRepr {
            monomial: [m.a, m.b, m.c],
            coef: c.into(),
        })
        .collect()
}

pub fn torus_from_repr(r: &TorusElementRepr) -> Result<TorusElement> {
    let mut e = TorusElement::zero();
    for t in r {
        let [a, b, c] = t.monomial;
        e.add_term(Monomial::new(a, b, c), RationalFunction::try_from(&t.coef)?);
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertEntryRepr {
    pub left_word: Vec<usize>,
    /// 0-based position in the generator list.
    pub generator_index: usize,
    pub right_word: Vec<usize>,
    pub coefficient: RationalFunctionRepr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRepr {
    /// Intersection matrix of the twist system.
    pub system: Vec<Vec<u8>>,
    pub generators: Vec<NCPolynomialRepr>,
    pub entries: Vec<CertEntryRepr>,
}

impl From<&Certificate> for CertificateRepr {
    fn from(c: &Certificate) -> Self {
        CertificateRepr {
            system: c.system().matrix(),
            generators: c.generators().iter().map(nc_repr).collect(),
            entries: c
                .entries()
                .iter()
                .map(|e| CertEntryRepr {
                    left_word: e.left_word.letters().collect(),
                    generator_index: e.generator_index,
                    right_word: e.right_word.letters().collect(),
                    coefficient: (&e.coefficient).into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&CertificateRepr> for Certificate {
    type Error = Error;

    fn try_from(r: &CertificateRepr) -> Result<Self> {
        let sys = Arc::new(TwistSystem::new(r.system.clone())?);
        let generators = r
            .generators
            .iter()
            .map(|g| nc_from_repr(&sys, g))
            .collect::<Result<Vec<_>>>()?;
        let entries = r
            .entries
            .iter()
            .map(|e| {
                Ok(CertEntry {
                    left_word: word_from(&sys, &e.left_word)?,
                    generator_index: e.generator_index,
                    right_word: word_from(&sys, &e.right_word)?,
                    coefficient: RationalFunction::try_from(&e.coefficient)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Certificate::from_entries(sys, generators, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::torus_coxeter_relators;
    use crate::quotient::build_span;

    #[test]
    fn ratfn_round_trip() {
        let f = crate::parse::parse_scalar("(3/2*A^4 + 1)/(A^2 - A^-2)").unwrap();
        let r = RationalFunctionRepr::from(&f);
        assert_eq!(r.den[0].0, 0);
        assert_eq!(RationalFunction::try_from(&r).unwrap(), f);
    }

    #[test]
    fn torus_round_trip() {
        let e = TorusElement::parse("A*x*y*z - A^2*z^2 + 1/3").unwrap();
        assert_eq!(torus_from_repr(&torus_repr(&e)).unwrap(), e);
    }

    #[test]
    fn rejects_bad_words() {
        let sys = Arc::new(TwistSystem::torus());
        let r = vec![NCTermRepr {
            word: vec![3],
            coef: (&RationalFunction::one()).into(),
        }];
        assert!(nc_from_repr(&sys, &r).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let sys = Arc::new(TwistSystem::torus());
        let gens = torus_coxeter_relators(&sys).unwrap();
        let span = build_span(&gens, 4).unwrap();
        let target = gens[0].sandwich(&Word::letter(2), &Word::empty());
        let cert = span.certify(&target).unwrap().unwrap();
        let back = Certificate::try_from(&CertificateRepr::from(&cert)).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify(&target).unwrap());
    }
}
