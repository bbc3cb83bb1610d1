//! Exact arithmetic: rationals and multivariate Laurent polynomials over an
//! explicit, ordered symbol table.

mod exact;
mod poly;

pub use exact::ExactCoeff;
pub use poly::{LaurentPoly, Monomial, Symbol, SymbolTable};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number with arbitrary precision numerator and denominator.
pub type Rational = BigRational;

/// Parses `"n"` or `"n/d"` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidInput(format!("`{text}` is not a rational number"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// The exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x)
        .ok_or_else(|| Error::InvalidInput(format!("{x} has no exact rational value")))
}

/// Canonical `num/den` text (denominator omitted when it is 1).
pub fn rational_text(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `q` as a double (nearest, possibly overflowing to infinity).
pub fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
