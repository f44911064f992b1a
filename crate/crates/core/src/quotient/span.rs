use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Certificate;
use crate::coeff::RationalFunction;
use crate::error::{Error, Result};
use crate::freealg::{NCPolynomial, TwistSystem, Word};

/// Default cap on the number of words of length `<= d` a span may index.
pub const DEFAULT_WORD_BUDGET: u64 = 2_000_000;

/// Outcome of a bounded membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    /// Not witnessed by products of degree `<= d`; higher degrees may still
    /// witness it.
    NotInDegreeBound,
}

/// One product `u * g * v` fed to the elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub left: Word,
    pub generator: usize,
    pub right: Word,
}

/// How a stored row was obtained: `scale * (base - sum c_k row_k)`.
#[derive(Debug, Clone)]
enum Base {
    Candidate(usize),
    Row(usize),
}

#[derive(Debug, Clone)]
struct Recipe {
    base: Base,
    scale: RationalFunction,
    subs: Vec<(usize, RationalFunction)>,
}

/// A row, leading word first with coefficient 1, remaining words descending.
type Row = Vec<(Word, RationalFunction)>;

/// The degree-`<= d` slice of the two-sided ideal generated by a list of
/// polynomials, in reduced row-echelon form over `Q(A)`.
#[derive(Debug, Clone)]
pub struct IdealSpan {
    system: Arc<TwistSystem>,
    generators: Vec<NCPolynomial>,
    degree_bound: usize,
    candidates: Vec<Candidate>,
    /// Every row version ever produced, indexed by id.
    versions: Vec<Option<Row>>,
    recipes: Vec<Recipe>,
    /// Leading word to current row id.
    pivots: HashMap<Word, usize>,
    provenance: bool,
}

/// Options for [`build_span_with`].
#[derive(Debug, Clone, Copy)]
pub struct SpanOptions {
    pub word_budget: u64,
    /// Keep enough history to emit certificates.
    pub provenance: bool,
}

impl Default for SpanOptions {
    fn default() -> Self {
        SpanOptions {
            word_budget: DEFAULT_WORD_BUDGET,
            provenance: true,
        }
    }
}

/// Number of words of length `<= d` over `n` letters.
pub fn word_count(n: usize, d: usize) -> u64 {
    let mut total: u64 = 0;
    let mut layer: u64 = 1;
    for _ in 0..=d {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(n as u64);
    }
    total
}

pub fn build_span(gens: &[NCPolynomial], d: usize) -> Result<IdealSpan> {
    build_span_with(gens, d, SpanOptions::default())
}

pub fn build_span_with(gens: &[NCPolynomial], d: usize, opts: SpanOptions) -> Result<IdealSpan> {
    let system = match gens.first() {
        Some(g) => g.system().clone(),
        None => return Err(Error::InvalidSystem("a span needs at least one generator".into())),
    };
    for g in gens {
        if !g.same_system(&gens[0]) {
            return Err(Error::MixedSystems);
        }
        let gd = g.degree().unwrap_or(0);
        if gd > d {
            return Err(Error::DegreeTooHigh { degree: gd, bound: d });
        }
    }
    let attempted = word_count(system.n(), d);
    if attempted > opts.word_budget {
        return Err(Error::BudgetExceeded {
            attempted,
            budget: opts.word_budget,
        });
    }
    let mut span = IdealSpan {
        system: system.clone(),
        generators: gens.to_vec(),
        degree_bound: d,
        candidates: Vec::new(),
        versions: Vec::new(),
        recipes: Vec::new(),
        pivots: HashMap::new(),
        provenance: opts.provenance,
    };

    let mut cands: Vec<(usize, Word, Candidate)> = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let Some(gd) = g.degree() else { continue };
        let lead = g.leading().unwrap().0.clone();
        for extra in 0..=d - gd {
            for lu in 0..=extra {
                let lefts = Word::all_of_length(system.n(), lu);
                let rights = Word::all_of_length(system.n(), extra - lu);
                for u in &lefts {
                    for v in &rights {
                        cands.push((
                            g.len(),
                            u.concat(&lead).concat(v),
                            Candidate {
                                left: u.clone(),
                                generator: k,
                                right: v.clone(),
                            },
                        ));
                    }
                }
            }
        }
    }
    // Sparsest first, then lowest leading word.
    cands.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    for (_, _, cand) in cands {
        let idx = span.candidates.len();
        let g = &span.generators[cand.generator];
        let mut work: BTreeMap<Word, RationalFunction> = BTreeMap::new();
        for (w, c) in g.terms() {
            work.insert(cand.left.concat(w).concat(&cand.right), c.clone());
        }
        span.candidates.push(cand);
        let subs = span.reduce_map(&mut work, true);
        if work.is_empty() {
            continue;
        }
        let (lead, lc) = work.iter().next_back().map(|(w, c)| (w.clone(), c.clone())).unwrap();
        let scale = lc.inv()?;
        let row: Row = work.into_iter().rev().map(|(w, c)| (w, &c * &scale)).collect();
        let id = span.push_version(
            row,
            Recipe {
                base: Base::Candidate(idx),
                scale,
                subs,
            },
        );
        span.pivots.insert(lead, id);
    }
    span.interreduce();
    Ok(span)
}

impl IdealSpan {
    fn push_version(&mut self, row: Row, recipe: Recipe) -> usize {
        self.versions.push(Some(row));
        self.recipes.push(if self.provenance {
            recipe
        } else {
            Recipe {
                base: recipe.base,
                scale: RationalFunction::one(),
                subs: Vec::new(),
            }
        });
        self.versions.len() - 1
    }

    /// Reduce `work` in place, largest word first, in a single downward pass.
    /// Returns the multiples of each row subtracted.
    fn reduce_map(&self, work: &mut BTreeMap<Word, RationalFunction>, record: bool) -> Vec<(usize, RationalFunction)> {
        let mut subs = Vec::new();
        let mut cursor: Option<Word> = None;
        loop {
            let next = match &cursor {
                None => work.keys().next_back().cloned(),
                Some(c) => work.range(..c.clone()).next_back().map(|(w, _)| w.clone()),
            };
            let Some(w) = next else { break };
            if let Some(&id) = self.pivots.get(&w) {
                let c = work.remove(&w).unwrap();
                let row = self.versions[id].as_ref().unwrap();
                for (w2, c2) in &row[1..] {
                    let delta = &c * c2;
                    match work.get_mut(w2) {
                        Some(x) => {
                            let s = &*x - &delta;
                            if s.is_zero() {
                                work.remove(w2);
                            } else {
                                *x = s;
                            }
                        }
                        None => {
                            work.insert(w2.clone(), -delta);
                        }
                    }
                }
                if record {
                    subs.push((id, c));
                }
            }
            cursor = Some(w);
        }
        subs
    }

    /// Clear every pivot word from every other row, lowest pivot first.
    fn interreduce(&mut self) {
        let mut leads: Vec<Word> = self.pivots.keys().cloned().collect();
        leads.sort();
        for lead in leads {
            let id = self.pivots[&lead];
            let row = self.versions[id].as_ref().unwrap();
            if row[1..].iter().all(|(w, _)| !self.pivots.contains_key(w)) {
                continue;
            }
            let mut work: BTreeMap<Word, RationalFunction> = row[1..].iter().cloned().collect();
            let subs = self.reduce_map(&mut work, true);
            let mut new_row: Row = vec![(lead.clone(), RationalFunction::one())];
            new_row.extend(work.into_iter().rev());
            let new_id = self.push_version(
                new_row,
                Recipe {
                    base: Base::Row(id),
                    scale: RationalFunction::one(),
                    subs,
                },
            );
            if !self.provenance {
                self.versions[id] = None;
            }
            self.pivots.insert(lead, new_id);
        }
    }

    pub fn system(&self) -> &Arc<TwistSystem> {
        &self.system
    }

    pub fn generators(&self) -> &[NCPolynomial] {
        &self.generators
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Number of basis rows.
    pub fn dimension(&self) -> usize {
        self.pivots.len()
    }

    /// Number of products `u*g*v` that were eliminated.
    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    /// The basis rows in increasing order of leading word.
    pub fn basis(&self) -> Vec<NCPolynomial> {
        let mut leads: Vec<&Word> = self.pivots.keys().collect();
        leads.sort();
        leads
            .into_iter()
            .map(|w| {
                let mut p = NCPolynomial::zero(&self.system);
                for (w2, c) in self.versions[self.pivots[w]].as_ref().unwrap() {
                    p.add_term(w2.clone(), c.clone());
                }
                p
            })
            .collect()
    }

    /// Whether `w` is the leading word of a basis row.
    pub fn is_pivot(&self, w: &Word) -> bool {
        self.pivots.contains_key(w)
    }

    fn check(&self, p: &NCPolynomial) -> Result<()> {
        if p.system() != &self.system && **p.system() != *self.system {
            return Err(Error::MixedSystems);
        }
        let d = p.degree().unwrap_or(0);
        if d > self.degree_bound {
            return Err(Error::DegreeTooHigh {
                degree: d,
                bound: self.degree_bound,
            });
        }
        Ok(())
    }

    /// The remainder of `p` modulo the span: a combination of non-pivot words.
    pub fn reduce(&self, p: &NCPolynomial) -> Result<NCPolynomial> {
        self.check(p)?;
        let mut work: BTreeMap<Word, RationalFunction> = p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        self.reduce_map(&mut work, false);
        let mut out = NCPolynomial::zero(&self.system);
        for (w, c) in work {
            out.add_term(w, c);
        }
        Ok(out)
    }

    pub fn member(&self, p: &NCPolynomial) -> Result<Membership> {
        Ok(if self.reduce(p)?.is_zero() {
            Membership::Member
        } else {
            Membership::NotInDegreeBound
        })
    }

    /// `p - r` as an explicit combination of products `u g v`, where `r` is
    /// the remainder. For members `r = 0` and this is a membership proof.
    pub fn reduce_with_certificate(&self, p: &NCPolynomial) -> Result<(NCPolynomial, Certificate)> {
        self.check(p)?;
        if !self.provenance {
            return Err(Error::InvalidSystem("span was built without provenance".into()));
        }
        let mut work: BTreeMap<Word, RationalFunction> = p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        let subs = self.reduce_map(&mut work, true);
        let mut rem = NCPolynomial::zero(&self.system);
        for (w, c) in work {
            rem.add_term(w, c);
        }
        // Push coefficients from newer row versions back to older ones.
        let mut weight: BTreeMap<usize, RationalFunction> = BTreeMap::new();
        for (id, c) in subs {
            let e = weight.entry(id).or_default();
            *e = &*e + &c;
        }
        let mut per_candidate: BTreeMap<usize, RationalFunction> = BTreeMap::new();
        while let Some((id, c)) = weight.pop_last() {
            if c.is_zero() {
                continue;
            }
            let r = &self.recipes[id];
            let c = &c * &r.scale;
            match r.base {
                Base::Candidate(k) => {
                    let e = per_candidate.entry(k).or_default();
                    *e = &*e + &c;
                }
                Base::Row(old) => {
                    let e = weight.entry(old).or_default();
                    *e = &*e + &c;
                }
            }
            for (old, m) in &r.subs {
                let e = weight.entry(*old).or_default();
                *e = &*e - &(&c * m);
            }
        }
        let mut cert = Certificate::new(self.system.clone(), self.generators.clone());
        for (k, c) in per_candidate {
            let cand = &self.candidates[k];
            cert.push(cand.left.clone(), cand.generator, cand.right.clone(), c);
        }
        Ok((rem, cert))
    }

    /// A certificate for `p`, or `None` when `p` is not in the span.
    pub fn certify(&self, p: &NCPolynomial) -> Result<Option<Certificate>> {
        let (rem, cert) = self.reduce_with_certificate(p)?;
        Ok(rem.is_zero().then_some(cert))
    }
}

/// `member(p, span)`.
pub fn member(p: &NCPolynomial, span: &IdealSpan) -> Result<Membership> {
    span.member(p)
}

/// `reduce(p, span)`.
pub fn reduce(p: &NCPolynomial, span: &IdealSpan) -> Result<NCPolynomial> {
    span.reduce(p)
}
