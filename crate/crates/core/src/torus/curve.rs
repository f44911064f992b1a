use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{OperatorWord, Sign};

/// A non-separating simple closed curve on the one-holed torus: a primitive
/// vector `(p, q)` up to sign, stored with `p > 0`, or as `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Curve {
    p: i64,
    q: i64,
}

impl Curve {
    pub const MERIDIAN: Curve = Curve { p: 1, q: 0 };
    pub const LONGITUDE: Curve = Curve { p: 0, q: 1 };

    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p.gcd(&q) != 1 {
            return Err(Error::NotPrimitive { p, q });
        }
        Ok(Self::canonical(p, q))
    }

    fn canonical(p: i64, q: i64) -> Self {
        if p < 0 || (p == 0 && q < 0) {
            Curve { p: -p, q: -q }
        } else {
            Curve { p, q }
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// All canonical curves with `|p|, |q| <= bound`.
    pub fn all_within(bound: i64) -> Vec<Curve> {
        let mut out = Vec::new();
        for p in 0..=bound {
            for q in -bound..=bound {
                if let Ok(c) = Curve::new(p, q) {
                    if c.p == p && c.q == q {
                        out.push(c);
                    }
                }
            }
        }
        out
    }
}

impl TryFrom<(i64, i64)> for Curve {
    type Error = Error;

    fn try_from((p, q): (i64, i64)) -> Result<Self> {
        Curve::new(p, q)
    }
}

impl From<Curve> for (i64, i64) {
    fn from(c: Curve) -> Self {
        (c.p, c.q)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

impl FromStr for Curve {
    type Err = Error;

    /// Parse `"p,q"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::parse(0, "expected a curve 'p,q'"))?;
        let p = a
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad integer '{}'", a.trim())))?;
        let q = b
            .trim()
            .parse()
            .map_err(|_| Error::parse(a.len() + 1, format!("bad integer '{}'", b.trim())))?;
        Curve::new(p, q)
    }
}

/// The two twist curves: `X` is the meridian `(1,0)` (operator `T1`), `Y`
/// the longitude `(0,1)` (operator `T2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Twist {
    X,
    Y,
}

impl Twist {
    /// Index of the matching free-algebra operator.
    pub fn index(self) -> usize {
        match self {
            Twist::X => 1,
            Twist::Y => 2,
        }
    }

    pub fn from_index(j: usize) -> Result<Twist> {
        match j {
            1 => Ok(Twist::X),
            2 => Ok(Twist::Y),
            _ => Err(Error::InvalidIndex { index: j, n: 2 }),
        }
    }

    pub fn curve(self) -> Curve {
        match self {
            Twist::X => Curve::MERIDIAN,
            Twist::Y => Curve::LONGITUDE,
        }
    }
}

/// A matrix in `SL_2(Z)` acting on column vectors `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistMatrix([[i64; 2]; 2]);

impl TwistMatrix {
    pub const IDENTITY: TwistMatrix = TwistMatrix([[1, 0], [0, 1]]);

    pub fn new(m: [[i64; 2]; 2]) -> Result<Self> {
        let t = TwistMatrix(m);
        if t.det() != 1 {
            return Err(Error::InvalidSystem(format!("determinant {} is not 1", t.det())));
        }
        Ok(t)
    }

    /// `t_x: (p,q) -> (p+q, q)` and `t_y: (p,q) -> (p, q-p)`, each raised to `e`.
    pub fn of(t: Twist, e: Sign) -> Self {
        let k = e.as_i32() as i64;
        match t {
            Twist::X => TwistMatrix([[1, k], [0, 1]]),
            Twist::Y => TwistMatrix([[1, 0], [-k, 1]]),
        }
    }

    /// Matrix of an operator word; the leftmost step acts last.
    pub fn of_word(w: &OperatorWord) -> Result<Self> {
        let mut m = Self::IDENTITY;
        for &(j, e) in w.steps() {
            m = m.mul(&Self::of(Twist::from_index(j)?, e));
        }
        Ok(m)
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.0
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = self.0;
        let b = rhs.0;
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TwistMatrix(m)
    }

    pub fn apply(&self, v: Curve) -> Curve {
        let p = self.0[0][0] * v.p + self.0[0][1] * v.q;
        let q = self.0[1][0] * v.p + self.0[1][1] * v.q;
        Curve::canonical(p, q)
    }
}

pub fn curve_matrix_action(t: Twist, e: Sign, v: Curve) -> Curve {
    TwistMatrix::of(t, e).apply(v)
}

/// Geometric intersection number `|ps - qr|`.
pub fn intersection(u: Curve, v: Curve) -> u64 {
    (u.p * v.q - u.q * v.p).unsigned_abs()
}

/// A word `w` in `T1 = t_x` and `T2 = t_y` with `w((1,0)) = v`, built by
/// running the Euclidean algorithm on `(p, q)` down to `(1, 0)` and
/// inverting the steps.
pub fn euclid_twist_word(v: Curve) -> OperatorWord {
    let (mut p, mut q) = (v.p, v.q);
    // Each reduction step is (twist, exponent).
    let mut reductions: Vec<(Twist, i64)> = Vec::new();
    while q != 0 {
        let step = if p == 0 {
            (Twist::X, 1)
        } else if q.abs() >= p.abs() {
            (Twist::Y, q / p)
        } else {
            let mut k = p / q;
            if p % q == 0 {
                k -= k.signum();
            }
            (Twist::X, -k)
        };
        match step {
            (Twist::X, m) => p += m * q,
            (Twist::Y, m) => q -= m * p,
        }
        reductions.push(step);
    }
    let mut steps = Vec::new();
    for (t, m) in reductions {
        let e = if m > 0 { Sign::Minus } else { Sign::Plus };
        steps.extend(std::iter::repeat_n((t.index(), e), m.unsigned_abs() as usize));
    }
    OperatorWord::new(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: i64, q: i64) -> Curve {
        Curve::new(p, q).unwrap()
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(c(-2, -1), c(2, 1));
        assert_eq!(c(0, -1), Curve::LONGITUDE);
        assert_eq!(c(-1, 3).to_string(), "1,-3");
        assert_eq!(Curve::new(4, 6), Err(Error::NotPrimitive { p: 4, q: 6 }));
        assert!(Curve::new(0, 0).is_err());
        assert_eq!("3, -5".parse::<Curve>().unwrap(), c(3, -5));
        assert!("3".parse::<Curve>().is_err());
    }

    #[test]
    fn matrix_action() {
        assert_eq!(curve_matrix_action(Twist::X, Sign::Plus, c(1, 0)), c(1, 0));
        assert_eq!(curve_matrix_action(Twist::X, Sign::Plus, c(0, 1)), c(1, 1));
        assert_eq!(curve_matrix_action(Twist::Y, Sign::Plus, c(1, 0)), c(1, -1));
        let w = OperatorWord::parse("T1 T2 T1").unwrap();
        let m = TwistMatrix::of_word(&w).unwrap();
        assert_eq!(m.apply(c(1, 0)), c(0, 1));
        assert_eq!(m.entries(), [[0, 1], [-1, 0]]);
        assert_eq!(m.mul(&m).apply(c(2, 7)), c(2, 7));
        assert_eq!(m.det(), 1);
        assert!(TwistMatrix::new([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn braid_relation_holds_on_matrices() {
        let a = TwistMatrix::of_word(&OperatorWord::parse("T1 T2 T1").unwrap()).unwrap();
        let b = TwistMatrix::of_word(&OperatorWord::parse("T2 T1 T2").unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn intersections() {
        assert_eq!(intersection(c(1, 0), c(0, 1)), 1);
        assert_eq!(intersection(c(1, 0), c(1, 0)), 0);
        assert_eq!(intersection(c(2, 1), c(1, 1)), 1);
    }

    #[test]
    fn euclid_words() {
        assert!(euclid_twist_word(c(1, 0)).is_empty());
        assert_eq!(euclid_twist_word(c(1, 1)).to_string(), "T2^-1");
        assert_eq!(euclid_twist_word(c(1, -1)).to_string(), "T2");
        assert_eq!(euclid_twist_word(c(2, 1)).to_string(), "T1 T2^-1");
        for v in Curve::all_within(12) {
            let w = euclid_twist_word(v);
            let m = TwistMatrix::of_word(&w).unwrap();
            assert_eq!(m.apply(Curve::MERIDIAN), v, "{v} via {w}");
        }
        let w = euclid_twist_word(c(3, 5));
        assert_eq!(TwistMatrix::of_word(&w).unwrap().apply(Curve::MERIDIAN), c(3, 5));
    }

    #[test]
    fn euclid_length_tracks_partial_quotients() {
        // 34/21 has partial quotients all 1; 1/n is one quotient of size n.
        assert!(euclid_twist_word(c(34, 21)).len() <= 10);
        assert_eq!(euclid_twist_word(c(1, 7)).len(), 7);
    }

    #[test]
    fn enumerates_canonical_curves() {
        let all = Curve::all_within(1);
        assert_eq!(all, vec![c(0, 1), c(1, -1), c(1, 0), c(1, 1)]);
    }
}
