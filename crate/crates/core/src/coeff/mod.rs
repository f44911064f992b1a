//! Scalars: Laurent polynomials in `A` with rational coefficients and the
//! field `Q(A)` of rational functions in canonical form.

mod laurent;
mod poly;
mod ratfn;

pub use laurent::LaurentPoly;
pub use ratfn::RationalFunction;

/// Arbitrary precision rational numbers used for every coefficient.
pub type Rational = num_rational::BigRational;

/// `A^2 - A^-2`, the normalising scalar of `psi` and of the twist formula.
pub fn quantum_scale() -> RationalFunction {
    RationalFunction::from(LaurentPoly::a_pow(2) - LaurentPoly::a_pow(-2))
}

use num_traits::Signed;
use std::fmt;

/// Write `coef * monomial` as one signed summand of a sum. `first` selects
/// a bare leading `-` instead of ` - `; an empty `monomial` is the unit.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coef: &RationalFunction,
    monomial: &str,
) -> fmt::Result {
    let negative = coef
        .num()
        .leading_coef()
        .is_some_and(|c| c.is_negative());
    let c = if negative { -coef } else { coef.clone() };
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    let c_str = if c.is_one() {
        None
    } else if c.is_laurent() && c.num().is_monomial() {
        Some(c.to_string())
    } else if c.is_laurent() {
        Some(format!("({c})"))
    } else {
        Some(c.to_string())
    };
    match (c_str, monomial.is_empty()) {
        (None, true) => write!(f, "1"),
        (None, false) => write!(f, "{monomial}"),
        (Some(s), true) => write!(f, "{s}"),
        (Some(s), false) => write!(f, "{s}*{monomial}"),
    }
}
