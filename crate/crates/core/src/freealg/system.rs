use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Direction of a twist, `e = +1` or `e = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_i32(e: i32) -> Option<Sign> {
        match e {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Generators `1..=n` together with their pairwise geometric intersection
/// numbers, each 0 or 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistSystem {
    n: usize,
    iota: Vec<u8>,
}

impl TwistSystem {
    /// `matrix[i][j]` is the intersection number of curves `i+1` and `j+1`.
    pub fn new(matrix: Vec<Vec<u8>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::InvalidSystem("at least one generator is required".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::InvalidSystem("too many generators".into()));
        }
        let mut iota = Vec::with_capacity(n * n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSystem(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::InvalidSystem(format!(
                        "curves {} and {} intersect {v} times; at most once is allowed",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && v != 0 {
                    return Err(Error::InvalidSystem(format!("nonzero diagonal at {}", i + 1)));
                }
                if matrix[j][i] != v {
                    return Err(Error::InvalidSystem(format!(
                        "intersection matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                iota.push(v);
            }
        }
        Ok(TwistSystem { n, iota })
    }

    /// Meridian `X1` and longitude `X2` of the one-holed torus, meeting once.
    pub fn torus() -> Self {
        TwistSystem {
            n: 2,
            iota: vec![0, 1, 1, 0],
        }
    }

    /// A chain `1 - 2 - ... - n` where consecutive curves meet once.
    pub fn chain(n: usize) -> Result<Self> {
        let mut m = vec![vec![0u8; n]; n];
        for i in 1..n {
            m[i - 1][i] = 1;
            m[i][i - 1] = 1;
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_torus(&self) -> bool {
        *self == Self::torus()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if (1..=self.n).contains(&index) {
            Ok(())
        } else {
            Err(Error::InvalidIndex { index, n: self.n })
        }
    }

    /// Intersection number of curves `i` and `j` (1-based, assumed valid).
    pub fn iota(&self, i: usize, j: usize) -> u8 {
        self.iota[(i - 1) * self.n + (j - 1)]
    }

    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.iota.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

impl fmt::Debug for TwistSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistSystem(n={}, {:?})", self.n, self.matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TwistSystem::new(vec![vec![0, 1], vec![1, 0]]).unwrap().is_torus());
        assert!(matches!(
            TwistSystem::new(vec![vec![0, 2], vec![2, 0]]),
            Err(Error::InvalidSystem(_))
        ));
        assert!(TwistSystem::new(vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(TwistSystem::new(vec![vec![1]]).is_err());
        assert!(TwistSystem::new(vec![]).is_err());
        let c = TwistSystem::chain(4).unwrap();
        assert_eq!(c.iota(2, 3), 1);
        assert_eq!(c.iota(1, 3), 0);
        assert_eq!(c.check_index(5), Err(Error::InvalidIndex { index: 5, n: 4 }));
    }
}
