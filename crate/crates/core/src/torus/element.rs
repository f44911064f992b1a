use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::coeff::{write_term, LaurentPoly, RationalFunction};
use crate::error::Result;
use crate::parse::{parse_terms, GenToken, Generators};

/// One of the three generators `x < y < z` of the torus algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    X,
    Y,
    Z,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::X, Gen::Y, Gen::Z];

    pub fn symbol(self) -> char {
        match self {
            Gen::X => 'x',
            Gen::Y => 'y',
            Gen::Z => 'z',
        }
    }

    pub(crate) fn from_symbol(c: char) -> Option<Gen> {
        match c {
            'x' => Some(Gen::X),
            'y' => Some(Gen::Y),
            'z' => Some(Gen::Z),
            _ => None,
        }
    }
}

/// The ordered monomial `x^a y^b z^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { a: 0, b: 0, c: 0 };

    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Monomial { a, b, c }
    }

    pub fn of(g: Gen) -> Self {
        match g {
            Gen::X => Monomial::new(1, 0, 0),
            Gen::Y => Monomial::new(0, 1, 0),
            Gen::Z => Monomial::new(0, 0, 1),
        }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c
    }

    /// The letters `x..x y..y z..z`.
    pub fn letters(&self) -> Vec<Gen> {
        let mut v = Vec::with_capacity(self.degree() as usize);
        v.extend(std::iter::repeat_n(Gen::X, self.a as usize));
        v.extend(std::iter::repeat_n(Gen::Y, self.b as usize));
        v.extend(std::iter::repeat_n(Gen::Z, self.c as usize));
        v
    }

    /// All monomials of total degree exactly `d`.
    pub fn all_of_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in 0..=d {
            for b in 0..=d - a {
                out.push(Monomial::new(a, b, d - a - b));
            }
        }
        out
    }

    fn key(&self) -> (u32, u32, u32, u32) {
        (self.degree(), self.a, self.b, self.c)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (sym, e) in [('x', self.a), ('y', self.b), ('z', self.c)] {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{sym}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// An element of the skein algebra of the one-holed torus, written in the
/// ordered basis `x^a y^b z^c`. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TorusElement {
    terms: BTreeMap<Monomial, RationalFunction>,
}

impl TorusElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(RationalFunction::one())
    }

    pub fn scalar(c: RationalFunction) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: RationalFunction) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn gen(g: Gen) -> Self {
        Self::monomial(Monomial::of(g), RationalFunction::one())
    }

    pub fn x() -> Self {
        Self::gen(Gen::X)
    }

    pub fn y() -> Self {
        Self::gen(Gen::Y)
    }

    pub fn z() -> Self {
        Self::gen(Gen::Z)
    }

    /// Parse e.g. `"A*x*y*z - A^2*z^2 + 1"`. Factors may appear in any
    /// order; the product is taken in the algebra and normalised.
    pub fn parse(src: &str) -> Result<Self> {
        let mut out = Self::zero();
        for t in parse_terms(src, Generators::Torus)? {
            let mut letters = Vec::new();
            for (g, k) in t.gens {
                let GenToken::Torus(ch) = g else { unreachable!() };
                let g = Gen::from_symbol(ch).unwrap();
                letters.extend(std::iter::repeat_n(g, k as usize));
            }
            out = out.add(&word_product(&letters).scale(&t.coef));
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &RationalFunction)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, m: &Monomial) -> RationalFunction {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn add_term(&mut self, m: Monomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        let (mut out, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TorusElement {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TorusElement {
            terms: self.terms.iter().map(|(m, x)| (*m, -x)).collect(),
        }
    }

    /// `g * self`.
    pub fn lmul_gen(&self, g: Gen) -> Self {
        if g == Gen::X {
            return TorusElement {
                terms: self
                    .terms
                    .iter()
                    .map(|(m, c)| (Monomial::new(m.a + 1, m.b, m.c), c.clone()))
                    .collect(),
            };
        }
        let mut acc: HashMap<Monomial, RationalFunction> = HashMap::new();
        for (m, c) in &self.terms {
            for (m2, k) in lmul(g, *m).iter() {
                let v = c.mul_laurent(k);
                match acc.get_mut(m2) {
                    Some(x) => *x = &*x + &v,
                    None => {
                        acc.insert(*m2, v);
                    }
                }
            }
        }
        TorusElement {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// The algebra product, normalised.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        // Horner in z, then y, then x over the terms of the left factor.
        let max_c = self.terms.keys().map(|m| m.c).max().unwrap_or(0);
        let mut zc = Vec::with_capacity(max_c as usize + 1);
        zc.push(rhs.clone());
        for k in 1..=max_c as usize {
            let next = zc[k - 1].lmul_gen(Gen::Z);
            zc.push(next);
        }
        let mut by_ab: BTreeMap<(u32, u32), Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let slot = by_ab.entry((m.a, m.b)).or_default();
            *slot = slot.add(&zc[m.c as usize].scale(c));
        }
        let mut by_a: BTreeMap<u32, Vec<(u32, Self)>> = BTreeMap::new();
        for ((a, b), q) in by_ab {
            by_a.entry(a).or_default().push((b, q));
        }
        let mut out = Self::zero();
        for (a, mut qs) in by_a {
            qs.sort_by_key(|(b, _)| std::cmp::Reverse(*b));
            let mut r = Self::zero();
            let mut level = qs[0].0;
            for (b, q) in qs {
                while level > b {
                    r = r.lmul_gen(Gen::Y);
                    level -= 1;
                }
                r = r.add(&q);
            }
            for _ in 0..level {
                r = r.lmul_gen(Gen::Y);
            }
            let shifted = TorusElement {
                terms: r
                    .terms
                    .into_iter()
                    .map(|(m, c)| (Monomial::new(m.a + a, m.b, m.c), c))
                    .collect(),
            };
            out = out.add(&shifted);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = self.mul(&out);
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }
}

/// `t_mul`: the product in the skein algebra.
pub fn t_mul(e1: &TorusElement, e2: &TorusElement) -> TorusElement {
    e1.mul(e2)
}

/// Normal form of a word in the generators, via the memoised product.
pub fn word_product(letters: &[Gen]) -> TorusElement {
    let mut e = TorusElement::one();
    for &g in letters.iter().rev() {
        e = e.lmul_gen(g);
    }
    e
}

type Table = HashMap<(Gen, Monomial), Rc<[(Monomial, LaurentPoly)]>>;

thread_local! {
    static LMUL: RefCell<Table> = RefCell::new(HashMap::new());
}

/// Drop the memoised left-multiplication tables of the current thread.
pub fn clear_product_cache() {
    LMUL.with(|t| t.borrow_mut().clear());
}

fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_int_terms(terms)
}

fn push(acc: &mut HashMap<Monomial, LaurentPoly>, m: Monomial, c: LaurentPoly) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            *e.get_mut() = s;
        }
    }
}

fn add_scaled(acc: &mut HashMap<Monomial, LaurentPoly>, part: &[(Monomial, LaurentPoly)], k: &LaurentPoly, shift_a: u32) {
    for (m, c) in part {
        push(acc, Monomial::new(m.a + shift_a, m.b, m.c), c * k);
    }
}

/// `g * m` in normal form, memoised per thread. Uses the relations
/// `yx = A^2 xy - A s z`, `zy = A^2 yz - A s x`, `zx = A^-2 xz + A^-1 s y`
/// with `s = A^2 - A^-2`.
fn lmul(g: Gen, m: Monomial) -> Rc<[(Monomial, LaurentPoly)]> {
    if let Some(hit) = LMUL.with(|t| t.borrow().get(&(g, m)).cloned()) {
        return hit;
    }
    let mut acc: HashMap<Monomial, LaurentPoly> = HashMap::new();
    match g {
        Gen::X => push(&mut acc, Monomial::new(m.a + 1, m.b, m.c), LaurentPoly::one()),
        Gen::Y if m.a == 0 => push(&mut acc, Monomial::new(0, m.b + 1, m.c), LaurentPoly::one()),
        Gen::Y => {
            let rest = Monomial::new(m.a - 1, m.b, m.c);
            add_scaled(&mut acc, &lmul(Gen::Y, rest), &lp(&[(2, 1)]), 1);
            add_scaled(&mut acc, &lmul(Gen::Z, rest), &lp(&[(3, -1), (-1, 1)]), 0);
        }
        Gen::Z if m.a > 0 => {
            let rest = Monomial::new(m.a - 1, m.b, m.c);
            add_scaled(&mut acc, &lmul(Gen::Z, rest), &lp(&[(-2, 1)]), 1);
            add_scaled(&mut acc, &lmul(Gen::Y, rest), &lp(&[(1, 1), (-3, -1)]), 0);
        }
        Gen::Z if m.b > 0 => {
            let rest = Monomial::new(0, m.b - 1, m.c);
            let a2 = lp(&[(2, 1)]);
            for (m2, c) in lmul(Gen::Z, rest).iter() {
                add_scaled(&mut acc, &lmul(Gen::Y, *m2), &(c * &a2), 0);
            }
            push(&mut acc, Monomial::new(1, m.b - 1, m.c), lp(&[(3, -1), (-1, 1)]));
        }
        Gen::Z => push(&mut acc, Monomial::new(0, 0, m.c + 1), LaurentPoly::one()),
    }
    let mut v: Vec<(Monomial, LaurentPoly)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by(|x, y| x.0.cmp(&y.0));
    let rc: Rc<[(Monomial, LaurentPoly)]> = v.into();
    LMUL.with(|t| t.borrow_mut().insert((g, m), rc.clone()));
    rc
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = if *m == Monomial::ONE { String::new() } else { m.to_string() };
            write_term(f, k == 0, c, &mono)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({self})")
    }
}
