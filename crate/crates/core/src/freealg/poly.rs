use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{TwistSystem, Word};
use crate::coeff::{write_term, RationalFunction};
use crate::error::{Error, Result};
use crate::parse::{parse_terms, GenToken, Generators};

/// An element of the free algebra `Q(A)<X_1, ..., X_n>` over a fixed
/// [`TwistSystem`]. No zero coefficients are stored.
#[derive(Clone)]
pub struct NCPolynomial {
    system: Arc<TwistSystem>,
    terms: BTreeMap<Word, RationalFunction>,
}

impl PartialEq for NCPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_system(other) && self.terms == other.terms
    }
}

impl Eq for NCPolynomial {}

impl NCPolynomial {
    pub fn zero(system: &Arc<TwistSystem>) -> Self {
        NCPolynomial {
            system: system.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(system: &Arc<TwistSystem>) -> Self {
        Self::scalar(system, RationalFunction::one())
    }

    pub fn scalar(system: &Arc<TwistSystem>, c: RationalFunction) -> Self {
        let mut p = Self::zero(system);
        p.add_term(Word::empty(), c);
        p
    }

    /// The generator `X_i`.
    pub fn generator(system: &Arc<TwistSystem>, i: usize) -> Result<Self> {
        system.check_index(i)?;
        Ok(Self::monomial_unchecked(system, Word::letter(i), RationalFunction::one()))
    }

    pub fn monomial(system: &Arc<TwistSystem>, word: Word, coef: RationalFunction) -> Result<Self> {
        for i in word.letters() {
            system.check_index(i)?;
        }
        Ok(Self::monomial_unchecked(system, word, coef))
    }

    pub(crate) fn monomial_unchecked(system: &Arc<TwistSystem>, word: Word, coef: RationalFunction) -> Self {
        let mut p = Self::zero(system);
        p.add_term(word, coef);
        p
    }

    /// Parse e.g. `"A*X1*X2 - A^-1*X2*X1"`.
    pub fn parse(system: &Arc<TwistSystem>, src: &str) -> Result<Self> {
        let mut p = Self::zero(system);
        for t in parse_terms(src, Generators::Free)? {
            let mut letters = Vec::new();
            for (g, k) in t.gens {
                let GenToken::Free(i) = g else { unreachable!() };
                if i > system.n() {
                    return Err(Error::InvalidIndex { index: i, n: system.n() });
                }
                letters.extend(std::iter::repeat_n(i, k as usize));
            }
            p.add_term(Word::from_indices(letters), t.coef);
        }
        Ok(p)
    }

    pub fn system(&self) -> &Arc<TwistSystem> {
        &self.system
    }

    pub fn same_system(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.system, &other.system) || self.system == other.system
    }

    fn check_system(&self, other: &Self) -> Result<()> {
        if self.same_system(other) {
            Ok(())
        } else {
            Err(Error::MixedSystems)
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &RationalFunction)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, w: &Word) -> RationalFunction {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Length of the longest word, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    /// Largest word in graded-lex order together with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &RationalFunction)> {
        self.terms.iter().next_back()
    }

    /// Add `c * w` in place.
    pub fn add_term(&mut self, w: Word, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_system(rhs)?;
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_system(rhs)?;
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        Ok(out)
    }

    /// Product in the free algebra: concatenation extended bilinearly.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_system(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(&self.system);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        let mut out = Self::zero(&self.system);
        if c.is_zero() {
            return out;
        }
        for (w, x) in &self.terms {
            out.terms.insert(w.clone(), x * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        NCPolynomial {
            system: self.system.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    /// Left and right multiplication by words: `u * self * v`.
    pub fn sandwich(&self, u: &Word, v: &Word) -> Self {
        NCPolynomial {
            system: self.system.clone(),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (u.concat(w).concat(v), c.clone()))
                .collect(),
        }
    }

    /// Image under the abelianisation `Q(A)<X> -> Q(A)[x]`, keyed by letter content.
    pub fn abelianize(&self) -> BTreeMap<Vec<usize>, RationalFunction> {
        let mut out: BTreeMap<Vec<usize>, RationalFunction> = BTreeMap::new();
        for (w, c) in &self.terms {
            let e = out.entry(w.content(self.system.n())).or_default();
            *e = &*e + c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first, lexicographic within a degree.
        let mut ordered: Vec<(&Word, &RationalFunction)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.raw().cmp(b.0.raw())));
        for (k, (w, c)) in ordered.into_iter().enumerate() {
            let mono = if w.is_empty() { String::new() } else { w.to_string() };
            write_term(f, k == 0, c, &mono)?;
        }
        Ok(())
    }
}

impl fmt::Debug for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPolynomial({self})")
    }
}
