//! The literal rewriting system behind the torus normal form. It is slow
//! and exists to check the memoised product: both must agree on every word,
//! and the result must not depend on the order in which rules fire.

use std::collections::BTreeMap;

use rand::Rng;

use super::{Gen, Monomial, TorusElement};
use crate::coeff::{LaurentPoly, RationalFunction};
use crate::error::Result;
use crate::parse::{parse_terms, GenToken, Generators};

/// Which reducible position to rewrite next.
pub enum Strategy<'a> {
    /// Smallest reducible word, leftmost descent.
    Leftmost,
    /// A random reducible word and a random descent in it.
    Random(&'a mut dyn rand::RngCore),
}

/// Result of a rewriting run.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub element: TorusElement,
    pub steps: u64,
}

/// The right-hand side of `hi * lo` for a descent `hi > lo`.
fn rule(hi: Gen, lo: Gen) -> [(LaurentPoly, Vec<Gen>); 2] {
    let lp = LaurentPoly::from_int_terms;
    match (hi, lo) {
        (Gen::Y, Gen::X) => [(lp(&[(2, 1)]), vec![Gen::X, Gen::Y]), (lp(&[(3, -1), (-1, 1)]), vec![Gen::Z])],
        (Gen::Z, Gen::Y) => [(lp(&[(2, 1)]), vec![Gen::Y, Gen::Z]), (lp(&[(3, -1), (-1, 1)]), vec![Gen::X])],
        (Gen::Z, Gen::X) => [(lp(&[(-2, 1)]), vec![Gen::X, Gen::Z]), (lp(&[(1, 1), (-3, -1)]), vec![Gen::Y])],
        _ => unreachable!("not a descent"),
    }
}

fn descents(w: &[Gen]) -> Vec<usize> {
    (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]).collect()
}

fn to_monomial(w: &[Gen]) -> Monomial {
    let count = |g| w.iter().filter(|&&l| l == g).count() as u32;
    Monomial::new(count(Gen::X), count(Gen::Y), count(Gen::Z))
}

/// Rewrite `coef * w` with the three ordering rules until every word is
/// ordered `x <= y <= z`.
pub fn nf_reduce(w: &[Gen], coef: &RationalFunction, strategy: Strategy<'_>) -> Reduction {
    let mut pending: BTreeMap<Vec<Gen>, LaurentPoly> = BTreeMap::new();
    pending.insert(w.to_vec(), LaurentPoly::one());
    nf_reduce_sum(pending, coef, strategy)
}

fn nf_reduce_sum(
    mut pending: BTreeMap<Vec<Gen>, LaurentPoly>,
    coef: &RationalFunction,
    mut strategy: Strategy<'_>,
) -> Reduction {
    let mut done = TorusElement::zero();
    let mut steps = 0u64;
    loop {
        let normal: Vec<Vec<Gen>> = pending.keys().filter(|w| descents(w).is_empty()).cloned().collect();
        for w in normal {
            let c = pending.remove(&w).unwrap();
            done.add_term(to_monomial(&w), coef.mul_laurent(&c));
        }
        if pending.is_empty() {
            break;
        }
        let (w, pos) = match &mut strategy {
            Strategy::Leftmost => {
                let w = pending.keys().next().unwrap().clone();
                let pos = descents(&w)[0];
                (w, pos)
            }
            Strategy::Random(rng) => {
                let k = rng.gen_range(0..pending.len());
                let w = pending.keys().nth(k).unwrap().clone();
                let d = descents(&w);
                let pos = d[rng.gen_range(0..d.len())];
                (w, pos)
            }
        };
        let c = pending.remove(&w).unwrap();
        steps += 1;
        for (k, mid) in rule(w[pos], w[pos + 1]) {
            let mut nw = Vec::with_capacity(w.len());
            nw.extend_from_slice(&w[..pos]);
            nw.extend_from_slice(&mid);
            nw.extend_from_slice(&w[pos + 2..]);
            let add = &c * &k;
            let e = pending.entry(nw).or_insert_with(LaurentPoly::zero);
            *e = &*e + &add;
        }
        pending.retain(|_, c| !c.is_zero());
    }
    Reduction { element: done, steps }
}

/// Number of inverted pairs under `x < y < z`.
pub fn inversions(w: &[Gen]) -> u64 {
    let mut n = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                n += 1;
            }
        }
    }
    n
}

/// Upper bound on rule applications for a word of length `len` with `inv`
/// inversions: one step removes one inversion and spawns a shorter word
/// with at most `C(len-1, 2)` inversions.
pub fn step_bound(len: usize, inv: u64) -> u64 {
    fn worst(len: usize) -> u64 {
        if len < 2 {
            return 0;
        }
        let l = (len - 1) as u64;
        step_bound(len, (l + 1) * l / 2)
    }
    if len < 2 {
        return 0;
    }
    inv * (1 + worst(len - 1))
}

/// Random word over `{x, y, z}`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Gen> {
    (0..len).map(|_| Gen::ALL[rng.gen_range(0..3)]).collect()
}

/// Parse a torus expression and reduce it term by term with the leftmost
/// strategy, for example `"z*y*x - 2*x"`.
pub fn normal_form(src: &str) -> Result<Reduction> {
    let mut element = TorusElement::zero();
    let mut steps = 0;
    for t in parse_terms(src, Generators::Torus)? {
        let mut letters = Vec::new();
        for (g, k) in t.gens {
            let GenToken::Torus(ch) = g else { unreachable!() };
            letters.extend(std::iter::repeat_n(Gen::from_symbol(ch).unwrap(), k as usize));
        }
        let r = nf_reduce(&letters, &t.coef, Strategy::Leftmost);
        element = element.add(&r.element);
        steps += r.steps;
    }
    Ok(Reduction { element, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_of_expressions() {
        let r = normal_form("y*x").unwrap();
        assert_eq!(r.element.to_string(), "A^2*x*y - (A^3 - A^-1)*z");
        assert_eq!(normal_form("x*y").unwrap().element.to_string(), "x*y");
        let nf = normal_form("z*y*x - 2*x").unwrap().element;
        assert_eq!(nf, TorusElement::parse("z*y*x - 2*x").unwrap());
        assert_eq!(normal_form(&nf.to_string()).unwrap().element, nf);
        assert!(normal_form("x*w").is_err());
    }
    use crate::torus::word_product;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_words(len: usize) -> Vec<Vec<Gen>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    Gen::ALL.iter().map(move |&g| {
                        let mut v = w.clone();
                        v.push(g);
                        v
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn single_rule() {
        let r = nf_reduce(&[Gen::Y, Gen::X], &RationalFunction::one(), Strategy::Leftmost);
        assert_eq!(r.steps, 1);
        assert_eq!(r.element.to_string(), "A^2*x*y - (A^3 - A^-1)*z");
    }

    #[test]
    fn zyx_overlap_resolves() {
        let w = [Gen::Z, Gen::Y, Gen::X];
        let one = RationalFunction::one();
        let left = nf_reduce(&w, &one, Strategy::Leftmost).element;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let r = nf_reduce(&w, &one, Strategy::Random(&mut rng));
            assert_eq!(r.element, left);
        }
        assert_eq!(left, word_product(&w));
    }

    #[test]
    fn agrees_with_memoised_product() {
        for len in 0..=5 {
            for w in all_words(len) {
                let r = nf_reduce(&w, &RationalFunction::one(), Strategy::Leftmost);
                assert_eq!(r.element, word_product(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn confluence_length_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for w in all_words(4) {
            let want = word_product(&w);
            for _ in 0..10 {
                let r = nf_reduce(&w, &RationalFunction::one(), Strategy::Random(&mut rng));
                assert_eq!(r.element, want);
            }
        }
    }

    #[test]
    fn steps_within_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for len in 0..=8 {
            for _ in 0..20 {
                let w = random_word(&mut rng, len);
                let bound = step_bound(len, inversions(&w));
                let lm = nf_reduce(&w, &RationalFunction::one(), Strategy::Leftmost);
                assert!(lm.steps <= bound, "{w:?}: {} > {bound}", lm.steps);
                let rr = nf_reduce(&w, &RationalFunction::one(), Strategy::Random(&mut rng));
                assert!(rr.steps <= bound, "{w:?}: {} > {bound}", rr.steps);
            }
        }
        assert_eq!(step_bound(2, 1), 1);
        assert_eq!(step_bound(1, 0), 0);
    }
}
