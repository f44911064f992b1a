use std::collections::HashMap;
use std::sync::Arc;

use crate::coeff::RationalFunction;
use crate::error::{Error, Result};
use crate::freealg::{NCPolynomial, TwistSystem, Word};

/// One summand `coefficient * left_word * g[generator_index] * right_word`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertEntry {
    pub left_word: Word,
    pub generator_index: usize,
    pub right_word: Word,
    pub coefficient: RationalFunction,
}

/// An explicit expression `sum c_i u_i g_{k_i} v_i` over a list of
/// generators. It proves ideal membership of whatever it expands to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    system: Arc<TwistSystem>,
    generators: Vec<NCPolynomial>,
    entries: Vec<CertEntry>,
}

impl Certificate {
    pub fn new(system: Arc<TwistSystem>, generators: Vec<NCPolynomial>) -> Self {
        Certificate {
            system,
            generators,
            entries: Vec::new(),
        }
    }

    pub fn from_entries(system: Arc<TwistSystem>, generators: Vec<NCPolynomial>, entries: Vec<CertEntry>) -> Result<Self> {
        for e in &entries {
            if e.generator_index >= generators.len() {
                return Err(Error::InvalidIndex {
                    index: e.generator_index,
                    n: generators.len(),
                });
            }
        }
        Ok(Certificate {
            system,
            generators,
            entries,
        })
    }

    pub fn push(&mut self, left: Word, generator: usize, right: Word, c: RationalFunction) {
        if !c.is_zero() {
            self.entries.push(CertEntry {
                left_word: left,
                generator_index: generator,
                right_word: right,
                coefficient: c,
            });
        }
    }

    pub fn system(&self) -> &Arc<TwistSystem> {
        &self.system
    }

    pub fn generators(&self) -> &[NCPolynomial] {
        &self.generators
    }

    pub fn entries(&self) -> &[CertEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merge entries with the same `(u, k, v)` and drop zeros.
    pub fn compact(&mut self) {
        let mut index: HashMap<(Word, usize, Word), usize> = HashMap::new();
        let mut merged: Vec<CertEntry> = Vec::new();
        for e in self.entries.drain(..) {
            let key = (e.left_word.clone(), e.generator_index, e.right_word.clone());
            match index.get(&key) {
                Some(&i) => merged[i].coefficient = &merged[i].coefficient + &e.coefficient,
                None => {
                    index.insert(key, merged.len());
                    merged.push(e);
                }
            }
        }
        merged.retain(|e| !e.coefficient.is_zero());
        self.entries = merged;
    }

    /// Expand every product with plain multiplication in the free algebra.
    pub fn expand(&self) -> NCPolynomial {
        let mut out = NCPolynomial::zero(&self.system);
        for e in &self.entries {
            let g = &self.generators[e.generator_index];
            for (w, c) in g.terms() {
                out.add_term(e.left_word.concat(w).concat(&e.right_word), c * &e.coefficient);
            }
        }
        out
    }

    /// Whether the certificate expands exactly to `target`.
    pub fn verify(&self, target: &NCPolynomial) -> Result<bool> {
        Ok(self.expand().checked_sub(target)?.is_zero())
    }
}
