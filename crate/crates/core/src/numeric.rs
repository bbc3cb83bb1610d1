//! Complex scalars for the numeric engines: plain doubles, or (with the
//! `mpfr` feature) correctly rounded arbitrary-precision values.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::branch::BranchPoint;
use crate::error::{Error, Result};
use crate::symbolic::{
    parse_rational, rational_from_f64, rational_text, rational_to_f64, Rational,
};

/// Precision of `f64`, the default.
pub const DOUBLE_PRECISION: u32 = 53;

/// Arbitrary precision complex scalar.
#[cfg(feature = "mpfr")]
pub type MpComplex = rug::Complex;

/// Complex field element used by the numeric engines.
pub trait NumScalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(z: Complex64, prec: u32) -> Self;
    fn from_rational(q: &Rational, prec: u32) -> Self;
    fn to_c64(&self) -> Complex64;
    fn precision(&self) -> u32;
    fn exp(&self) -> Self;
    /// Principal logarithm.
    fn ln(&self) -> Self;
    fn norm(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn pi(prec: u32) -> Self;

    fn from_int(k: i64, prec: u32) -> Self {
        Self::from_c64(Complex64::new(k as f64, 0.0), prec)
    }

    fn from_scalar(s: &Scalar, prec: u32) -> Self {
        match s {
            Scalar::Rational(q) => Self::from_rational(q, prec),
            Scalar::Complex(z) => Self::from_c64(*z, prec),
        }
    }

    /// `ln r + i theta + 2 pi i n` at the working precision.
    fn branch_log(z: &BranchPoint, prec: u32) -> Self {
        let modulus = Self::from_c64(Complex64::new(z.r(), 0.0), prec).ln();
        let angle = Self::from_c64(Complex64::new(0.0, z.theta()), prec);
        let turns =
            Self::from_c64(Complex64::new(0.0, 2.0 * z.sheet() as f64), prec) * Self::pi(prec);
        modulus + angle + turns
    }

    fn powi(&self, k: i64) -> Self {
        let prec = self.precision();
        let mut base = if k < 0 {
            Self::from_int(1, prec) / self.clone()
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc = Self::from_int(1, prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl NumScalar for Complex64 {
    fn from_c64(z: Complex64, _prec: u32) -> Self {
        z
    }

    fn from_rational(q: &Rational, _prec: u32) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn precision(&self) -> u32 {
        DOUBLE_PRECISION
    }

    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }

    fn ln(&self) -> Self {
        Complex64::ln(*self)
    }

    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn pi(_prec: u32) -> Self {
        Complex64::new(std::f64::consts::PI, 0.0)
    }
}

#[cfg(feature = "mpfr")]
mod mp {
    use super::*;
    use rug::float::Constant;
    use rug::{Complex, Float};

    fn float_from_int_text(text: &str, prec: u32) -> Float {
        let parsed = Float::parse(text).expect("integer text parses");
        Float::with_val(prec, parsed)
    }

    impl NumScalar for Complex {
        fn from_c64(z: Complex64, prec: u32) -> Self {
            Complex::with_val(prec, (z.re, z.im))
        }

        fn from_rational(q: &Rational, prec: u32) -> Self {
            // extra guard bits so the quotient is correctly rounded at `prec`
            let work = prec + 64;
            let num = float_from_int_text(&q.numer().to_string(), work);
            let den = float_from_int_text(&q.denom().to_string(), work);
            Complex::with_val(prec, (Float::with_val(prec, num / den), 0))
        }

        fn to_c64(&self) -> Complex64 {
            Complex64::new(self.real().to_f64(), self.imag().to_f64())
        }

        fn precision(&self) -> u32 {
            self.prec().0
        }

        fn exp(&self) -> Self {
            self.clone().exp()
        }

        fn ln(&self) -> Self {
            self.clone().ln()
        }

        fn norm(&self) -> f64 {
            self.clone().abs().real().to_f64()
        }

        fn is_zero(&self) -> bool {
            Complex::is_zero(self)
        }

        fn pi(prec: u32) -> Self {
            Complex::with_val(prec, (Float::with_val(prec, Constant::Pi), 0))
        }
    }
}

/// A complex input value: either an exact rational or a double pair.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Complex(Complex64),
}

impl Scalar {
    pub fn real(x: f64) -> Self {
        Scalar::Complex(Complex64::new(x, 0.0))
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Rational(q) => Complex64::new(rational_to_f64(q), 0.0),
            Scalar::Complex(z) => *z,
        }
    }

    /// The exact value, if the scalar is real. Doubles convert exactly.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rational(q) => Some(q.clone()),
            Scalar::Complex(z) if z.im == 0.0 => rational_from_f64(z.re).ok(),
            Scalar::Complex(_) => None,
        }
    }

    pub fn require_rational(&self, what: &str) -> Result<Rational> {
        self.as_rational()
            .ok_or_else(|| Error::InvalidInput(format!("{what} must be real for exact mode")))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Complex(z) => Zero::is_zero(z),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Rational(_) => true,
            Scalar::Complex(z) => z.re.is_finite() && z.im.is_finite(),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Complex(z)
    }
}

impl From<i64> for Scalar {
    fn from(k: i64) -> Self {
        Scalar::Rational(Rational::from_integer(k.into()))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", rational_text(q)),
            Scalar::Complex(z) => write!(f, "[{}, {}]", z.re, z.im),
        }
    }
}

/// JSON form: `"num/den"` for exact values, `[re, im]` for doubles.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(q) => s.serialize_str(&rational_text(q)),
            Scalar::Complex(z) => [z.re, z.im].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Pair([f64; 2]),
            Real(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_rational(&t)
                .map(Scalar::Rational)
                .map_err(serde::de::Error::custom),
            Raw::Pair([re, im]) => Ok(Scalar::Complex(Complex64::new(re, im))),
            Raw::Real(re) => Ok(Scalar::real(re)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_json_forms() {
        let s: Scalar = serde_json::from_str("\"-3/6\"").unwrap();
        assert_eq!(s, Scalar::Rational(Rational::new((-1).into(), 2.into())));
        let s: Scalar = serde_json::from_str("[1.5, -2]").unwrap();
        assert_eq!(s, Scalar::Complex(Complex64::new(1.5, -2.0)));
        let s: Scalar = serde_json::from_str("4").unwrap();
        assert_eq!(s.as_rational(), Some(Rational::from_integer(4.into())));
        assert_eq!(serde_json::to_string(&Scalar::from(-2)).unwrap(), "\"-2\"");
        assert!(serde_json::from_str::<Scalar>("\"1/0\"").is_err());
    }

    #[test]
    fn complex_scalars_are_not_rational() {
        assert!(Scalar::Complex(Complex64::new(1.0, 1.0))
            .as_rational()
            .is_none());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let z = Complex64::new(0.7, -1.1);
        let p = NumScalar::powi(&z, 5);
        assert!((p - z * z * z * z * z).norm() < 1e-13);
        let m = NumScalar::powi(&z, -2);
        assert!((m * z * z - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[cfg(feature = "mpfr")]
    #[test]
    fn high_precision_rational_is_exact_beyond_double() {
        use rug::Complex;
        let third = Rational::new(1.into(), 3.into());
        let x = <Complex as NumScalar>::from_rational(&third, 256);
        let three = <Complex as NumScalar>::from_int(3, 256);
        let err = NumScalar::norm(&(x * three - <Complex as NumScalar>::from_int(1, 256)));
        assert!(err < 1e-70, "{err}");
    }

    #[cfg(feature = "mpfr")]
    #[test]
    fn high_precision_branch_log_matches_double() {
        use rug::Complex;
        let b = BranchPoint::new(2.5, 1.0, -1).unwrap();
        let l = <Complex as NumScalar>::branch_log(&b, 200).to_c64();
        assert!((l - b.log()).norm() < 1e-14);
    }
}
