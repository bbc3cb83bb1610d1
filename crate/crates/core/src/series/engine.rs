use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{BaseCoeffs, BaseFunction};
use crate::branch::BranchPoint;
use crate::combinatorics::{factorial, gen_binomial};
use crate::error::{Error, Result};
use crate::numeric::{NumScalar, Scalar};
use crate::symbolic::{ExactCoeff, LaurentPoly, Rational, Symbol, SymbolTable};

/// Arithmetic needed by the coefficient formulas, abstracted over the exact
/// and the numeric representation.
///
/// `Value` is a coefficient (an element of the coefficient ring, including
/// the `alpha^x` factor); `Arg` is the kind of quantity an exponent sum
/// such as `sum gamma_m` lives in.
pub trait Engine: Sync {
    type Value: Clone + Send + Sync + fmt::Debug;
    type Arg: Clone + Send + Sync + fmt::Debug;

    fn zero(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn scale(&self, a: &Self::Value, q: &Rational) -> Self::Value;
    fn is_zero(&self, a: &Self::Value) -> bool;

    fn arg(&self, s: &Scalar) -> Result<Self::Arg>;
    fn arg_int(&self, k: i64) -> Self::Arg;
    fn arg_add(&self, x: &Self::Arg, y: &Self::Arg) -> Self::Arg;
    fn arg_mul(&self, x: &Self::Arg, y: &Self::Arg) -> Self::Arg;
    fn arg_inv(&self, x: &Self::Arg) -> Result<Self::Arg>;
    fn arg_value(&self, x: &Self::Arg) -> Self::Value;

    /// `C(x, m)`, zero for negative `m`.
    fn binomial(&self, x: &Self::Arg, m: i64) -> Self::Value;
    /// `(x)_k`.
    fn falling(&self, x: &Self::Arg, k: u32) -> Self::Value;
    /// `alpha^x` on the branch of the base point.
    fn alpha_pow(&self, x: &Self::Arg) -> Self::Value;
    /// `q alpha^alpha_exp c1^c1_exp prod_{i >= 2} c_i^tail[i - 2]`.
    fn term(&self, q: &Rational, alpha_exp: i64, c1_exp: i64, tail: &[u32]) -> Self::Value;

    /// Highest `c_k` the engine can represent (`None`: unbounded, missing
    /// coefficients are zero).
    fn max_order(&self) -> Option<usize>;
    fn c1_is_zero(&self) -> bool;

    fn one(&self) -> Self::Value {
        self.term(&Rational::one(), 0, 0, &[])
    }

    fn neg(&self, a: &Self::Value) -> Self::Value {
        self.scale(a, &-Rational::one())
    }

    fn arg_sub(&self, x: &Self::Arg, y: &Self::Arg) -> Self::Arg {
        let minus = self.arg_mul(y, &self.arg_int(-1));
        self.arg_add(x, &minus)
    }

    /// `c_k` as a value.
    fn c(&self, k: usize) -> Self::Value {
        if k == 1 {
            return self.term(&Rational::one(), 0, 1, &[]);
        }
        let mut tail = vec![0u32; k - 1];
        tail[k - 2] = 1;
        self.term(&Rational::one(), 0, 0, &tail)
    }

    /// Fails unless `c_1 .. c_order` are available.
    fn require_order(&self, order: usize) -> Result<()> {
        if self.c1_is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        match self.max_order() {
            Some(avail) if order > avail => Err(Error::OrderTooLarge {
                requested: order,
                available: avail,
            }),
            _ => Ok(()),
        }
    }
}

/// Exact engine over `Q[alpha^{+-1}, c1^{+-1}, c2, ..., x1, ...]` with a
/// separately tracked power of alpha.
#[derive(Debug, Clone)]
pub struct ExactEngine {
    table: Arc<SymbolTable>,
}

impl ExactEngine {
    /// Engine with formal `c_1 .. c_order` and `indeterminates` pure
    /// indeterminates `x_1, ...`.
    pub fn new(order: usize, indeterminates: usize) -> Self {
        Self {
            table: SymbolTable::for_series(order, indeterminates),
        }
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    /// The indeterminate `x_i` as an argument.
    pub fn indeterminate(&self, i: u32) -> Result<LaurentPoly> {
        LaurentPoly::symbol(&self.table, Symbol::X(i))
    }

    pub fn constant(&self, q: Rational) -> LaurentPoly {
        LaurentPoly::constant(&self.table, q)
    }
}

impl Engine for ExactEngine {
    type Value = ExactCoeff;
    type Arg = LaurentPoly;

    fn zero(&self) -> ExactCoeff {
        ExactCoeff::zero(&self.table)
    }

    fn add(&self, a: &ExactCoeff, b: &ExactCoeff) -> ExactCoeff {
        a.checked_add(b)
            .expect("coefficients of one multiset share their alpha exponent")
    }

    fn mul(&self, a: &ExactCoeff, b: &ExactCoeff) -> ExactCoeff {
        a.checked_mul(b).expect("symbol table mismatch")
    }

    fn scale(&self, a: &ExactCoeff, q: &Rational) -> ExactCoeff {
        a.scale(q)
    }

    fn is_zero(&self, a: &ExactCoeff) -> bool {
        a.is_zero()
    }

    fn arg(&self, s: &Scalar) -> Result<LaurentPoly> {
        Ok(self.constant(s.require_rational("exponent")?))
    }

    fn arg_int(&self, k: i64) -> LaurentPoly {
        self.constant(Rational::from_integer(k.into()))
    }

    fn arg_add(&self, x: &LaurentPoly, y: &LaurentPoly) -> LaurentPoly {
        x + y
    }

    fn arg_mul(&self, x: &LaurentPoly, y: &LaurentPoly) -> LaurentPoly {
        x * y
    }

    fn arg_inv(&self, x: &LaurentPoly) -> Result<LaurentPoly> {
        match x.constant_value() {
            Some(q) if !q.is_zero() => Ok(self.constant(q.recip())),
            Some(_) => Err(Error::InvalidInput("division by zero".into())),
            None => Err(Error::InvalidInput(
                "cannot invert a non-constant polynomial".into(),
            )),
        }
    }

    fn arg_value(&self, x: &LaurentPoly) -> ExactCoeff {
        ExactCoeff::from_poly(x.clone())
    }

    fn binomial(&self, x: &LaurentPoly, m: i64) -> ExactCoeff {
        let p = match x.constant_value() {
            Some(q) => self.constant(gen_binomial(&q, m)),
            None => x.binomial(m),
        };
        ExactCoeff::from_poly(p)
    }

    fn falling(&self, x: &LaurentPoly, k: u32) -> ExactCoeff {
        let p = match x.constant_value() {
            Some(q) => self.constant(crate::combinatorics::falling_factorial(&q, k)),
            None => x.falling(k),
        };
        ExactCoeff::from_poly(p)
    }

    fn alpha_pow(&self, x: &LaurentPoly) -> ExactCoeff {
        ExactCoeff::alpha_power(x)
    }

    fn term(&self, q: &Rational, alpha_exp: i64, c1_exp: i64, tail: &[u32]) -> ExactCoeff {
        let mut powers = Vec::with_capacity(tail.len() + 2);
        powers.push((Symbol::Alpha, alpha_exp as i32));
        powers.push((Symbol::C(1), c1_exp as i32));
        for (i, &m) in tail.iter().enumerate() {
            if m > 0 {
                powers.push((Symbol::C(i as u32 + 2), m as i32));
            }
        }
        let poly = LaurentPoly::monomial(&self.table, q.clone(), &powers)
            .expect("requested coefficient is within the engine order");
        ExactCoeff::from_poly(poly)
    }

    fn max_order(&self) -> Option<usize> {
        Some(self.table.c_order())
    }

    fn c1_is_zero(&self) -> bool {
        false
    }
}

/// Numeric engine at a fixed working precision. The base function is a
/// truncated expansion: coefficients past the supplied ones are zero.
#[derive(Debug, Clone)]
pub struct NumericEngine<T> {
    prec: u32,
    branch: BranchPoint,
    alpha: T,
    alpha_log: T,
    coeffs: Vec<T>,
}

impl<T: NumScalar> NumericEngine<T> {
    pub fn new(alpha: &BranchPoint, coeffs: &[Scalar], prec: u32) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "coefficient {c} is not finite"
            )));
        }
        let coeffs = coeffs.iter().map(|c| T::from_scalar(c, prec)).collect();
        Ok(Self::from_parts(alpha, coeffs, prec))
    }

    pub fn from_base(base: &BaseFunction, prec: u32) -> Result<Self> {
        match &base.coeffs {
            BaseCoeffs::Numeric(c) => Self::new(&base.alpha, c, prec),
            BaseCoeffs::Symbolic(_) => Err(Error::InvalidInput(
                "numeric engine needs numeric base coefficients".into(),
            )),
        }
    }

    /// Engine whose coefficients are those of `1 + b z^beta` at `alpha`,
    /// computed at the working precision.
    pub fn from_twoterm(
        b: &Scalar,
        beta: &Scalar,
        alpha: &BranchPoint,
        order: usize,
        prec: u32,
    ) -> Result<Self> {
        let coeffs = twoterm_coefficients::<T>(b, beta, alpha, order, prec)?;
        Ok(Self::from_parts(alpha, coeffs, prec))
    }

    pub(crate) fn from_parts(branch: &BranchPoint, coeffs: Vec<T>, prec: u32) -> Self {
        let alpha_log = T::branch_log(branch, prec);
        let unit = T::from_c64(Complex64::new(0.0, branch.theta()), prec).exp();
        let alpha = T::from_c64(Complex64::new(branch.r(), 0.0), prec) * unit;
        Self {
            prec,
            branch: *branch,
            alpha,
            alpha_log,
            coeffs,
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn branch(&self) -> &BranchPoint {
        &self.branch
    }

    /// The zero `alpha` as a complex number.
    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn alpha_log(&self) -> &T {
        &self.alpha_log
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    fn coeff(&self, k: usize) -> Option<&T> {
        self.coeffs.get(k - 1).filter(|c| !c.is_zero())
    }
}

/// `c_k = b C(beta, k) alpha^(beta - k)` for `k = 1..=order`.
pub(crate) fn twoterm_coefficients<T: NumScalar>(
    b: &Scalar,
    beta: &Scalar,
    alpha: &BranchPoint,
    order: usize,
    prec: u32,
) -> Result<Vec<T>> {
    if b.is_zero() || beta.is_zero() {
        return Err(Error::InvalidInput(
            "two-term base needs b != 0 and beta != 0".into(),
        ));
    }
    let b = T::from_scalar(b, prec);
    let beta = T::from_scalar(beta, prec);
    let log = T::branch_log(alpha, prec);
    let mut out = Vec::with_capacity(order);
    let mut binom = T::from_int(1, prec);
    for k in 1..=order {
        binom =
            binom * (beta.clone() - T::from_int(k as i64 - 1, prec)) / T::from_int(k as i64, prec);
        let power = ((beta.clone() - T::from_int(k as i64, prec)) * log.clone()).exp();
        out.push(b.clone() * binom.clone() * power);
    }
    Ok(out)
}

impl<T: NumScalar> Engine for NumericEngine<T> {
    type Value = T;
    type Arg = T;

    fn zero(&self) -> T {
        T::from_int(0, self.prec)
    }

    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }

    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }

    fn scale(&self, a: &T, q: &Rational) -> T {
        a.clone() * T::from_rational(q, self.prec)
    }

    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }

    fn arg(&self, s: &Scalar) -> Result<T> {
        if !s.is_finite() {
            return Err(Error::InvalidInput(format!("{s} is not finite")));
        }
        Ok(T::from_scalar(s, self.prec))
    }

    fn arg_int(&self, k: i64) -> T {
        T::from_int(k, self.prec)
    }

    fn arg_add(&self, x: &T, y: &T) -> T {
        x.clone() + y.clone()
    }

    fn arg_mul(&self, x: &T, y: &T) -> T {
        x.clone() * y.clone()
    }

    fn arg_inv(&self, x: &T) -> Result<T> {
        if x.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        Ok(T::from_int(1, self.prec) / x.clone())
    }

    fn arg_value(&self, x: &T) -> T {
        x.clone()
    }

    fn binomial(&self, x: &T, m: i64) -> T {
        if m < 0 {
            return self.zero();
        }
        let f = factorial(m as u32);
        self.falling(x, m as u32) / T::from_rational(&Rational::from_integer(f), self.prec)
    }

    fn falling(&self, x: &T, k: u32) -> T {
        (0..k).fold(T::from_int(1, self.prec), |acc, i| {
            acc * (x.clone() - T::from_int(i as i64, self.prec))
        })
    }

    fn alpha_pow(&self, x: &T) -> T {
        (x.clone() * self.alpha_log.clone()).exp()
    }

    fn term(&self, q: &Rational, alpha_exp: i64, c1_exp: i64, tail: &[u32]) -> T {
        let mut acc = T::from_rational(q, self.prec);
        if alpha_exp != 0 {
            acc = acc * self.alpha.powi(alpha_exp);
        }
        if c1_exp != 0 {
            match self.coeff(1) {
                Some(c1) => acc = acc * c1.powi(c1_exp),
                None => return self.zero(),
            }
        }
        for (i, &m) in tail.iter().enumerate() {
            if m == 0 {
                continue;
            }
            match self.coeff(i + 2) {
                Some(c) => acc = acc * c.powi(m as i64),
                None => return self.zero(),
            }
        }
        acc
    }

    fn max_order(&self) -> Option<usize> {
        None
    }

    fn c1_is_zero(&self) -> bool {
        self.coeff(1).is_none()
    }
}

/// Default (double precision) numeric engine for a base function.
pub fn double_engine(base: &BaseFunction) -> Result<NumericEngine<Complex64>> {
    NumericEngine::from_base(base, crate::numeric::DOUBLE_PRECISION)
}

/// Zero-free helper for exact arguments.
pub(crate) fn rational_arg_nonzero(s: &Scalar, what: &str) -> Result<()> {
    if s.is_zero() {
        return Err(Error::InvalidInput(format!("{what} must be nonzero")));
    }
    Ok(())
}
