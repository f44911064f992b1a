//! Dense univariate polynomial helpers over Q, ascending coefficient order.
//! Inputs and outputs never carry trailing zeros.

use num_traits::{One, Zero};

use super::Rational;

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Euclidean division `a = q*b + r` with `deg r < deg b`. `b` must be nonzero.
pub(crate) fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem: Vec<Rational> = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, bc) in b.iter().enumerate() {
            if !bc.is_zero() {
                rem[k + i] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    rem.truncate(db);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn make_monic(p: &mut [Rational]) {
    if let Some(lc) = p.last().cloned() {
        if !lc.is_one() {
            for c in p.iter_mut() {
                *c /= &lc;
            }
        }
    }
}

/// Monic gcd over Q[A]. `gcd(0, 0)` is the empty (zero) polynomial.
pub(crate) fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, mut r) = poly_divrem(&x, &y);
        make_monic(&mut r);
        x = y;
        y = r;
    }
    make_monic(&mut x);
    x
}
