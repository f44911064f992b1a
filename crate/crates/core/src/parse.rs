//! Recursive-descent parser shared by the scalar, free-algebra and torus
//! text grammars.
//!
//! A sum is a signed sequence of terms; a term is a product of factors
//! joined by `*`, `/` or juxtaposition. Factors are integers, `A^k`,
//! parenthesised scalar sums, and (when enabled) generators: `x^a`, `y^b`,
//! `z^c` for the torus or `X1`, `X2^3`, ... for the free algebra.

use crate::coeff::{LaurentPoly, RationalFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generators {
    None,
    Torus,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenToken {
    /// `x`, `y` or `z`.
    Torus(char),
    /// `X<i>`, 1-based.
    Free(usize),
}

#[derive(Debug, Clone)]
pub struct ParsedTerm {
    pub coef: RationalFunction,
    /// Generators in order of appearance, each with a power.
    pub gens: Vec<(GenToken, u32)>,
}

pub fn parse_terms(src: &str, kind: Generators) -> Result<Vec<ParsedTerm>> {
    let mut c = Cursor { s: src.as_bytes(), pos: 0, kind };
    let terms = c.sum()?;
    c.ws();
    if c.pos != c.s.len() {
        return Err(Error::parse(c.pos, format!("unexpected '{}'", c.s[c.pos] as char)));
    }
    Ok(terms)
}

/// Parse a scalar expression in `Q(A)`.
pub fn parse_scalar(src: &str) -> Result<RationalFunction> {
    let terms = parse_terms(src, Generators::None)?;
    Ok(terms
        .into_iter()
        .fold(RationalFunction::zero(), |acc, t| &acc + &t.coef))
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    kind: Generators,
}

impl Cursor<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", ch as char)))
        }
    }

    fn sum(&mut self) -> Result<Vec<ParsedTerm>> {
        let mut out = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let mut t = self.term()?;
            if negate {
                t.coef = -t.coef;
            }
            out.push(t);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => return Ok(out),
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        match self.peek() {
            Some(b) => {
                b.is_ascii_digit()
                    || b == b'A'
                    || b == b'('
                    || (self.kind == Generators::Torus && matches!(b, b'x' | b'y' | b'z'))
                    || (self.kind == Generators::Free && b == b'X')
            }
            None => false,
        }
    }

    fn term(&mut self) -> Result<ParsedTerm> {
        if !self.starts_factor() {
            return Err(Error::parse(self.pos, "expected a term"));
        }
        let mut coef = RationalFunction::one();
        let mut gens: Vec<(GenToken, u32)> = Vec::new();
        let mut divide = false;
        loop {
            let at = self.pos;
            match self.factor()? {
                Factor::Scalar(s) => {
                    coef = if divide {
                        coef.checked_div(&s).map_err(|_| Error::parse(at, "division by zero"))?
                    } else {
                        &coef * &s
                    };
                }
                Factor::Gen(g, k) => {
                    if divide {
                        return Err(Error::parse(at, "cannot divide by a generator"));
                    }
                    match gens.last_mut() {
                        Some((last, p)) if *last == g => *p += k,
                        _ => gens.push((g, k)),
                    }
                }
            }
            divide = false;
            match self.peek() {
                Some(b'*') => self.pos += 1,
                Some(b'/') => {
                    self.pos += 1;
                    divide = true;
                }
                _ if self.starts_factor() => {}
                _ => break,
            }
        }
        gens.retain(|(_, k)| *k > 0);
        Ok(ParsedTerm { coef, gens })
    }

    fn integer(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        let neg = if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(Error::parse(start, "expected an integer"));
        }
        let v: i64 = std::str::from_utf8(&self.s[digits..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self) -> Result<Option<i64>> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            Ok(Some(self.integer()?))
        } else {
            Ok(None)
        }
    }

    fn gen_power(&mut self) -> Result<u32> {
        let at = self.pos;
        match self.power()? {
            None => Ok(1),
            Some(k) if (0..=u32::MAX as i64).contains(&k) => Ok(k as u32),
            Some(_) => Err(Error::parse(at, "generator powers must be nonnegative")),
        }
    }

    fn factor(&mut self) -> Result<Factor> {
        let at = {
            self.ws();
            self.pos
        };
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(Factor::Scalar(RationalFunction::from_int(v)))
            }
            Some(b'A') => {
                self.pos += 1;
                let e = self.power()?.unwrap_or(1);
                let e = i32::try_from(e).map_err(|_| Error::parse(at, "exponent out of range"))?;
                Ok(Factor::Scalar(LaurentPoly::a_pow(e).into()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(b')')?;
                let mut s = RationalFunction::zero();
                for t in inner {
                    if !t.gens.is_empty() {
                        return Err(Error::parse(at, "generators are not allowed inside parentheses"));
                    }
                    s = &s + &t.coef;
                }
                Ok(Factor::Scalar(s))
            }
            Some(c @ (b'x' | b'y' | b'z')) if self.kind == Generators::Torus => {
                self.pos += 1;
                let k = self.gen_power()?;
                Ok(Factor::Gen(GenToken::Torus(c as char), k))
            }
            Some(b'X') if self.kind == Generators::Free => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(Error::parse(start, "expected a generator index after 'X'"));
                }
                let idx: usize = std::str::from_utf8(&self.s[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::parse(start, "generator index out of range"))?;
                if idx == 0 {
                    return Err(Error::parse(start, "generator indices start at 1"));
                }
                let k = self.gen_power()?;
                Ok(Factor::Gen(GenToken::Free(idx), k))
            }
            Some(c) => Err(Error::parse(at, format!("unexpected '{}'", c as char))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

enum Factor {
    Scalar(RationalFunction),
    Gen(GenToken, u32),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars() {
        let s = parse_scalar("A^2 - A^-2").unwrap();
        assert_eq!(s.to_string(), "A^2 - A^-2");
        let r = parse_scalar("(A)/(A^2 - A^-2)").unwrap();
        assert_eq!(r.to_string(), "(A^3)/(A^4 - 1)");
        let f = parse_scalar("3/2*A^4 + 1").unwrap();
        assert_eq!(f.to_string(), "3/2*A^4 + 1");
        assert_eq!(parse_scalar("-(A^3 - A^-1)").unwrap().to_string(), "-A^3 + A^-1");
        assert_eq!(parse_scalar("2A").unwrap().to_string(), "2*A");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_scalar("A^2 + * 3") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("(A").is_err());
    }

    #[test]
    fn generator_terms() {
        let t = parse_terms("A*X1*X2 - A^-1*X2X1", Generators::Free).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].gens, vec![(GenToken::Free(1), 1), (GenToken::Free(2), 1)]);
        assert_eq!(t[1].coef.to_string(), "-A^-1");
        let t = parse_terms("x*x^2*y z", Generators::Torus).unwrap();
        assert_eq!(
            t[0].gens,
            vec![(GenToken::Torus('x'), 3), (GenToken::Torus('y'), 1), (GenToken::Torus('z'), 1)]
        );
        assert!(parse_terms("X1", Generators::Torus).is_err());
    }
}
