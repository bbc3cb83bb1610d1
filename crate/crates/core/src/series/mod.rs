//! Taylor coefficients of the perturbed root `phi(a)` of
//! `g(z) + sum_i a_i z^gamma_i = 0` with `phi(0) = alpha`.
//!
//! Three independent routes are provided: the closed form through
//! `F(x, r, a)`, the recursive implicit-differentiation oracle, and the
//! product formula for two-term bases `1 + b z^beta`. All of them are
//! generic over an [`Engine`], so the same code produces exact Laurent
//! polynomials and numeric values.

mod engine;
mod formula;
mod oracle;
mod twoterm;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use engine::{double_engine, Engine, ExactEngine, NumericEngine};
pub use formula::{
    coefficient_table, f_value, phi_coeff_with, series_eval_with, taylor_coeff_with,
};
pub use oracle::Oracle;
pub use twoterm::{base_from_twoterm, phi_coeff_twoterm_with, taylor_coeff_twoterm_with};

use crate::branch::BranchPoint;
use crate::combinatorics::OrderedMultiset;
use crate::error::{Error, Result};
use crate::numeric::{Scalar, DOUBLE_PRECISION};
use crate::symbolic::ExactCoeff;

/// Largest multiset the oracle will partition.
pub const MAX_PARTITION_SIZE: usize = 10;

/// The exponents `gamma_1 .. gamma_d` of the perturbation terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    gammas: Vec<Scalar>,
}

impl Perturbation {
    pub fn new(gammas: Vec<Scalar>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::InvalidInput(
                "at least one exponent is required".into(),
            ));
        }
        if let Some(g) = gammas.iter().find(|g| !g.is_finite()) {
            return Err(Error::InvalidInput(format!("exponent {g} is not finite")));
        }
        Ok(Self { gammas })
    }

    pub fn from_ints(gammas: &[i64]) -> Self {
        Self {
            gammas: gammas.iter().map(|&g| Scalar::from(g)).collect(),
        }
    }

    pub fn gammas(&self) -> &[Scalar] {
        &self.gammas
    }

    pub fn dim(&self) -> usize {
        self.gammas.len()
    }

    /// The exponents as engine arguments.
    pub fn args<E: Engine>(&self, eng: &E) -> Result<Vec<E::Arg>> {
        self.gammas.iter().map(|g| eng.arg(g)).collect()
    }
}

/// A derivative order `n = (n_1, .., n_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(n: Vec<u32>) -> Self {
        Self(n)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The sorted multiset with these multiplicities.
    pub fn to_multiset(&self) -> OrderedMultiset {
        OrderedMultiset::from_multiplicities(&self.0)
    }

    /// All `n` in dimension `d` with `sum n = total`, lexicographically
    /// descending (mass on `n_1` first).
    pub fn of_total(d: usize, total: u32) -> Vec<MultiIndex> {
        fn rec(d: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == d {
                cur.push(left);
                out.push(MultiIndex(cur.clone()));
                cur.pop();
                return;
            }
            for k in (0..=left).rev() {
                cur.push(k);
                rec(d, left - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if d > 0 {
            rec(d, total, &mut Vec::with_capacity(d), &mut out);
        }
        out
    }

    /// Graded order: total degree `1..=max_total` ascending, each degree
    /// lexicographically descending.
    pub fn graded(d: usize, max_total: u32) -> Vec<MultiIndex> {
        (1..=max_total).flat_map(|t| Self::of_total(d, t)).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Expansion coefficients of the base function around its zero.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseCoeffs {
    /// `c_1 .. c_K`; later coefficients are zero.
    Numeric(Vec<Scalar>),
    /// Formal symbols `c_1 .. c_K`.
    Symbolic(usize),
}

/// `g(z) = sum_k c_k (z - alpha)^k` with `c_1 != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseFunction {
    pub alpha: BranchPoint,
    pub coeffs: BaseCoeffs,
}

impl BaseFunction {
    pub fn numeric(alpha: BranchPoint, coeffs: Vec<Scalar>) -> Result<Self> {
        match coeffs.first() {
            None => return Err(Error::InvalidInput("no base coefficients given".into())),
            Some(c1) if c1.is_zero() => return Err(Error::ZeroLeadingCoefficient),
            _ => {}
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "coefficient {c} is not finite"
            )));
        }
        Ok(Self {
            alpha,
            coeffs: BaseCoeffs::Numeric(coeffs),
        })
    }

    /// Base with formal coefficients `c_1 .. c_order`.
    pub fn symbolic(alpha: BranchPoint, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("symbolic base needs order >= 1".into()));
        }
        Ok(Self {
            alpha,
            coeffs: BaseCoeffs::Symbolic(order),
        })
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.coeffs, BaseCoeffs::Symbolic(_))
    }

    /// `g(z)` through its truncated expansion.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let coeffs = self.numeric_coeffs()?;
        let h = z - self.alpha.value();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = (acc + c.to_c64()) * h;
        }
        Ok(acc)
    }

    fn numeric_coeffs(&self) -> Result<&[Scalar]> {
        match &self.coeffs {
            BaseCoeffs::Numeric(c) => Ok(c),
            BaseCoeffs::Symbolic(_) => {
                Err(Error::InvalidInput("base has symbolic coefficients".into()))
            }
        }
    }
}

/// A coefficient in the representation of its base function.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffValue {
    Exact(ExactCoeff),
    Numeric(Complex64),
}

impl CoeffValue {
    pub fn as_exact(&self) -> Option<&ExactCoeff> {
        match self {
            CoeffValue::Exact(e) => Some(e),
            CoeffValue::Numeric(_) => None,
        }
    }

    pub fn as_numeric(&self) -> Option<Complex64> {
        match self {
            CoeffValue::Numeric(z) => Some(*z),
            CoeffValue::Exact(_) => None,
        }
    }
}

impl fmt::Display for CoeffValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffValue::Exact(e) => write!(f, "{e}"),
            CoeffValue::Numeric(z) => write!(f, "[{}, {}]", z.re, z.im),
        }
    }
}

enum Dispatch {
    Exact(ExactEngine),
    Numeric(NumericEngine<Complex64>),
}

fn dispatch(base: &BaseFunction, indeterminates: usize) -> Result<Dispatch> {
    match &base.coeffs {
        BaseCoeffs::Symbolic(k) => Ok(Dispatch::Exact(ExactEngine::new(*k, indeterminates))),
        BaseCoeffs::Numeric(c) => Ok(Dispatch::Numeric(NumericEngine::new(
            &base.alpha,
            c,
            DOUBLE_PRECISION,
        )?)),
    }
}

fn check_dim(pert: &Perturbation, d: usize) -> Result<()> {
    if pert.dim() != d {
        return Err(Error::InvalidInput(format!(
            "index has dimension {d}, perturbation has {}",
            pert.dim()
        )));
    }
    Ok(())
}

/// `F(x, r, a)` for the base function.
pub fn f_eval(x: &Scalar, r: i64, a: usize, base: &BaseFunction) -> Result<CoeffValue> {
    match dispatch(base, 0)? {
        Dispatch::Exact(e) => Ok(CoeffValue::Exact(f_value(&e, &e.arg(x)?, r, a)?)),
        Dispatch::Numeric(e) => Ok(CoeffValue::Numeric(f_value(&e, &e.arg(x)?, r, a)?)),
    }
}

/// `d(phi, I)` by the closed form.
pub fn phi_coeff(
    i: &OrderedMultiset,
    pert: &Perturbation,
    base: &BaseFunction,
) -> Result<CoeffValue> {
    check_dim(pert, i.ambient())?;
    let mult = i.multiplicities();
    match dispatch(base, 0)? {
        Dispatch::Exact(e) => Ok(CoeffValue::Exact(phi_coeff_with(
            &e,
            &mult,
            &pert.args(&e)?,
        )?)),
        Dispatch::Numeric(e) => Ok(CoeffValue::Numeric(phi_coeff_with(
            &e,
            &mult,
            &pert.args(&e)?,
        )?)),
    }
}

/// `d(phi, I)` by the recursive oracle.
pub fn phi_coeff_oracle(
    i: &OrderedMultiset,
    pert: &Perturbation,
    base: &BaseFunction,
) -> Result<CoeffValue> {
    check_dim(pert, i.ambient())?;
    let mult = i.multiplicities();
    match dispatch(base, 0)? {
        Dispatch::Exact(e) => {
            let oracle = Oracle::new(&e, pert.args(&e)?);
            Ok(CoeffValue::Exact(oracle.coeff(&mult)?))
        }
        Dispatch::Numeric(e) => {
            let oracle = Oracle::new(&e, pert.args(&e)?);
            Ok(CoeffValue::Numeric(oracle.coeff(&mult)?))
        }
    }
}

/// `d(phi, n)` for `g(z) = 1 + b z^beta`, in double precision.
pub fn phi_coeff_twoterm(
    n: &MultiIndex,
    pert: &Perturbation,
    b: &Scalar,
    beta: &Scalar,
    alpha: &BranchPoint,
) -> Result<CoeffValue> {
    check_dim(pert, n.dim())?;
    let e = NumericEngine::<Complex64>::from_parts(alpha, Vec::new(), DOUBLE_PRECISION);
    let args = pert.args(&e)?;
    Ok(CoeffValue::Numeric(phi_coeff_twoterm_with(
        &e,
        n,
        &args,
        &e.arg(b)?,
        &e.arg(beta)?,
    )?))
}

/// The Taylor coefficient `d(phi, n) / prod n_i!`.
pub fn taylor_coeff(
    n: &MultiIndex,
    pert: &Perturbation,
    base: &BaseFunction,
) -> Result<CoeffValue> {
    check_dim(pert, n.dim())?;
    match dispatch(base, 0)? {
        Dispatch::Exact(e) => Ok(CoeffValue::Exact(taylor_coeff_with(
            &e,
            n,
            &pert.args(&e)?,
        )?)),
        Dispatch::Numeric(e) => Ok(CoeffValue::Numeric(taylor_coeff_with(
            &e,
            n,
            &pert.args(&e)?,
        )?)),
    }
}

/// The series truncated at total degree `order`, evaluated at `a`.
pub fn series_eval(
    a: &[Complex64],
    order: u32,
    pert: &Perturbation,
    base: &BaseFunction,
) -> Result<Complex64> {
    check_dim(pert, a.len())?;
    match dispatch(base, 0)? {
        Dispatch::Exact(_) => Err(Error::InvalidInput(
            "series evaluation needs a numeric base".into(),
        )),
        Dispatch::Numeric(e) => series_eval_with(&e, &pert.args(&e)?, a, order),
    }
}
