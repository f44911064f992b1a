use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{poly_divrem, poly_gcd};
use super::{LaurentPoly, Rational};
use crate::error::{Error, Result};

/// An element of `Q(A)` stored as `num / den` in canonical form.
///
/// Canonical form: `den` is an ordinary polynomial with nonzero constant
/// term, monic in its highest power, and coprime to `num` over `Q[A]`.
/// Zero is `0 / 1`. Two canonical values are equal iff they are the same
/// rational function, so `==` is exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction {
            num: LaurentPoly::one(),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        LaurentPoly::from_int(c).into()
    }

    pub fn from_rational(c: Rational) -> Self {
        LaurentPoly::constant(c).into()
    }

    /// `A^e`.
    pub fn a_pow(e: i32) -> Self {
        LaurentPoly::a_pow(e).into()
    }

    /// Canonical representative of `num / den`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonicalize(num, den))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in `Q[A, A^-1]`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonicalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if rhs.num.is_monomial() && rhs.den.is_one() {
            let (e, c) = &rhs.num.terms()[0];
            return Ok(RationalFunction {
                num: self.num.shift(-e).scale(&c.recip()),
                den: self.den.clone(),
            });
        }
        Ok(Self::canonicalize(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Multiply by a Laurent polynomial, with a fast path for Laurent values.
    /// Value at `A = a`, or `None` at a pole.
    pub fn eval(&self, a: &Rational) -> Option<Rational> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(a) / d)
    }

    pub fn mul_laurent(&self, rhs: &LaurentPoly) -> Self {
        if rhs.is_zero() || self.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() || rhs.is_monomial() {
            return RationalFunction {
                num: &self.num * rhs,
                den: self.den.clone(),
            };
        }
        Self::canonicalize(&self.num * rhs, self.den.clone())
    }

    fn canonicalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let lo = den.min_exp().unwrap();
        let (mut num, mut den) = if lo != 0 {
            (num.shift(-lo), den.shift(-lo))
        } else {
            (num, den)
        };
        // A is not a factor of den, so monomial numerators and constant
        // denominators are already coprime.
        if !num.is_monomial() && den.max_exp().unwrap() > 0 {
            let (nshift, ndense) = num.to_dense();
            let (_, ddense) = den.to_dense();
            let g = poly_gcd(&ndense, &ddense);
            if g.len() > 1 {
                let (nq, nr) = poly_divrem(&ndense, &g);
                let (dq, dr) = poly_divrem(&ddense, &g);
                debug_assert!(nr.is_empty() && dr.is_empty());
                num = LaurentPoly::from_dense(nshift, nq);
                den = LaurentPoly::from_dense(0, dq);
            }
        }
        let lc = den.leading_coef().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(num: LaurentPoly) -> Self {
        RationalFunction {
            num,
            den: LaurentPoly::one(),
        }
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return (&self.num + &rhs.num).into();
        }
        if self.den == rhs.den {
            return RationalFunction::canonicalize(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::canonicalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if rhs.den.is_one() {
            return self.mul_laurent(&rhs.num);
        }
        if self.den.is_one() {
            return rhs.mul_laurent(&self.num);
        }
        RationalFunction::canonicalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -self.num,
            den: self.den,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
        impl $tr<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(t: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(t)
    }

    fn scale() -> LaurentPoly {
        lp(&[(2, 1), (-2, -1)])
    }

    /// Reference reduction: strip common factors found by trial division
    /// with an explicit polynomial long division, then normalise.
    fn oracle_reduce(n: &[i64], d: &[i64]) -> (Vec<Rational>, Vec<Rational>) {
        let to_q = |v: &[i64]| -> Vec<Rational> {
            v.iter().map(|&c| Rational::from_integer(c.into())).collect()
        };
        let (mut n, mut d) = (to_q(n), to_q(d));
        let mut changed = true;
        while changed {
            changed = false;
            // Euclid by hand: remainder sequence until zero.
            let (mut a, mut b) = (n.clone(), d.clone());
            while !b.is_empty() {
                let (_, r) = poly_divrem(&a, &b);
                a = b;
                b = r;
            }
            if a.len() > 1 {
                n = poly_divrem(&n, &a).0;
                d = poly_divrem(&d, &a).0;
                changed = true;
            }
        }
        let lc = d.last().unwrap().clone();
        (
            n.into_iter().map(|c| c / &lc).collect(),
            d.into_iter().map(|c| c / &lc).collect(),
        )
    }

    #[test]
    fn inverse_of_scale() {
        let s: RationalFunction = scale().into();
        let inv = s.inv().unwrap();
        assert!((&inv * &s).is_one());
        assert_eq!(inv.den(), &lp(&[(4, 1), (0, -1)]));
        assert_eq!(inv.num(), &lp(&[(2, 1)]));
    }

    #[test]
    fn sum_reduces_to_inverse_of_a_plus_a_inv() {
        let s = RationalFunction::from(scale());
        let a = RationalFunction::a_pow(1).checked_div(&s).unwrap();
        let b = (-RationalFunction::a_pow(-1)).checked_div(&s).unwrap();
        let sum = &a + &b;
        let want = RationalFunction::one()
            .checked_div(&lp(&[(1, 1), (-1, 1)]).into())
            .unwrap();
        assert_eq!(sum, want);
        // A/(A^2 + 1)
        assert_eq!(sum.num(), &lp(&[(1, 1)]));
        assert_eq!(sum.den(), &lp(&[(2, 1), (0, 1)]));
        // Cross-check against the long-division oracle on (A^3 - A)/(A^4 - 1).
        let (n, d) = oracle_reduce(&[0, -1, 0, 1], &[-1, 0, 0, 0, 1]);
        assert_eq!(sum.num(), &LaurentPoly::from_dense(0, n));
        assert_eq!(sum.den(), &LaurentPoly::from_dense(0, d));
    }

    #[test]
    fn zero_divided() {
        let x = RationalFunction::from(scale());
        assert!(RationalFunction::zero().checked_div(&x).unwrap().is_zero());
        assert_eq!(
            RationalFunction::zero().checked_div(&x).unwrap().den(),
            &LaurentPoly::one()
        );
        assert_eq!(
            x.checked_div(&RationalFunction::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            RationalFunction::new(LaurentPoly::one(), LaurentPoly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn canonicalize_shifts_and_normalises() {
        // (A^3 - A)/A^2 = A - A^-1 over 1
        let r = RationalFunction::new(lp(&[(3, 1), (1, -1)]), lp(&[(2, 1)])).unwrap();
        assert_eq!(r.num(), &lp(&[(1, 1), (-1, -1)]));
        assert!(r.den().is_one());
        // (A^2 - A^-2)/(A - A^-1) = A + A^-1
        let r = RationalFunction::new(scale(), lp(&[(1, 1), (-1, -1)])).unwrap();
        assert_eq!(r.num(), &lp(&[(1, 1), (-1, 1)]));
        assert!(r.den().is_one());
        // 3/(2A + 4) -> (3/2)/(A + 2)
        let r = RationalFunction::new(lp(&[(0, 3)]), lp(&[(1, 2), (0, 4)])).unwrap();
        assert_eq!(r.den(), &lp(&[(1, 1), (0, 2)]));
        assert_eq!(r.num().coef(0), Rational::new(3.into(), 2.into()));
        // idempotent
        let again = RationalFunction::new(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn display_forms() {
        let s = RationalFunction::from(scale());
        assert_eq!(s.to_string(), "A^2 - A^-2");
        let r = RationalFunction::a_pow(1).checked_div(&s).unwrap();
        assert_eq!(r.to_string(), "(A^3)/(A^4 - 1)");
    }

    fn small_lp() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::btree_map(-3i32..=3, -4i64..=4, 0..=3)
            .prop_map(|m| LaurentPoly::from_int_terms(&m.into_iter().collect::<Vec<_>>()))
    }

    fn nonzero_lp() -> impl Strategy<Value = LaurentPoly> {
        small_lp().prop_filter("nonzero", |p| !p.is_zero())
    }

    proptest! {
        #[test]
        fn common_factor_cancels(n in small_lp(), d in nonzero_lp(), f in nonzero_lp()) {
            let plain = RationalFunction::new(n.clone(), d.clone()).unwrap();
            let scaled = RationalFunction::new(&n * &f, &d * &f).unwrap();
            prop_assert_eq!(plain, scaled);
        }

        #[test]
        fn canonical_invariants(n in small_lp(), d in nonzero_lp()) {
            let r = RationalFunction::new(n, d).unwrap();
            prop_assert_eq!(r.den().min_exp(), Some(0));
            prop_assert!(r.den().leading_coef().unwrap().is_one());
            let again = RationalFunction::new(r.num().clone(), r.den().clone()).unwrap();
            prop_assert_eq!(again, r);
        }
    }
}
