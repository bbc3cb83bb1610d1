//! JSON problem descriptions and the coefficient and evaluation tables
//! built from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::branch::{branch_pow, BranchPoint};
use crate::error::{Error, Result};
use crate::numeric::{NumScalar, Scalar, DOUBLE_PRECISION};
use crate::series::{
    coefficient_table, phi_coeff_with, series_eval_with, BaseFunction, Engine, ExactEngine,
    MultiIndex, NumericEngine, Perturbation,
};
use crate::symbolic::{ExactCoeff, Rational};
use crate::verify::{convergence_order_fit, NewtonProblem, TrackReport};

/// Tracking radius used when a spec does not declare one.
pub const DEFAULT_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoTermSpec {
    pub b: Scalar,
    pub beta: Scalar,
    pub alpha: BranchPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicSpec {
    pub alpha: BranchPoint,
}

/// The base function: explicit expansion coefficients, a two-term base
/// `1 + b z^beta`, or formal coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Direct {
        alpha: BranchPoint,
        coeffs: Vec<Scalar>,
    },
    TwoTerm {
        twoterm: TwoTermSpec,
    },
    Symbolic {
        symbolic: SymbolicSpec,
    },
}

impl BaseSpec {
    pub fn alpha(&self) -> &BranchPoint {
        match self {
            BaseSpec::Direct { alpha, .. } => alpha,
            BaseSpec::TwoTerm { twoterm } => &twoterm.alpha,
            BaseSpec::Symbolic { symbolic } => &symbolic.alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub base: BaseSpec,
    pub gammas: Vec<Scalar>,
    pub mode: Mode,
    pub max_order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_values: Option<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

/// A coefficient as it appears in output: canonical text when exact,
/// `[re, im]` when numeric.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CoeffOut {
    Exact(String),
    Numeric([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffRow {
    pub n: MultiIndex,
    pub value: CoeffOut,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub a: Vec<[f64; 2]>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<f64>,
}

fn pair(z: Complex64) -> [f64; 2] {
    // no negative zeros in output
    [z.re + 0.0, z.im + 0.0]
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ProblemSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("problem spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        Perturbation::new(self.gammas.clone())?;
        if self.max_order == 0 {
            return Err(Error::InvalidInput("max_order must be at least 1".into()));
        }
        if let Some(r) = self.radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidInput(format!("radius {r} must be positive")));
            }
        }
        match &self.base {
            BaseSpec::Direct { alpha, coeffs } => {
                BaseFunction::numeric(*alpha, coeffs.clone())?;
                if self.mode == Mode::Exact {
                    for c in coeffs {
                        c.require_rational("base coefficient")?;
                    }
                }
            }
            BaseSpec::TwoTerm { twoterm } => {
                if twoterm.b.is_zero() || twoterm.beta.is_zero() {
                    return Err(Error::InvalidInput(
                        "two-term base needs b != 0 and beta != 0".into(),
                    ));
                }
                let bz = twoterm.b.to_c64() * branch_pow(&twoterm.alpha, twoterm.beta.to_c64());
                let residual = (bz + 1.0).norm();
                if residual > 1e-9 * bz.norm().max(1.0) {
                    return Err(Error::NotAZero(residual));
                }
                if self.mode == Mode::Exact {
                    twoterm.b.require_rational("b")?;
                    twoterm.beta.require_rational("beta")?;
                }
            }
            BaseSpec::Symbolic { .. } => {
                if self.mode == Mode::Numeric {
                    return Err(Error::InvalidInput(
                        "a symbolic base needs exact mode".into(),
                    ));
                }
            }
        }
        if self.mode == Mode::Exact {
            for g in &self.gammas {
                g.require_rational("exponent")?;
            }
        }
        if let Some(rows) = &self.a_values {
            for a in rows {
                if a.len() != self.gammas.len() {
                    return Err(Error::InvalidInput(format!(
                        "a-value with {} entries for {} exponents",
                        a.len(),
                        self.gammas.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn perturbation(&self) -> Perturbation {
        Perturbation::new(self.gammas.clone()).expect("validated")
    }

    pub fn radius(&self) -> f64 {
        self.radius.unwrap_or(DEFAULT_RADIUS)
    }

    /// Taylor coefficients for `1 <= sum n <= order` in graded order.
    pub fn coefficients(&self, order: u32, precision: u32) -> Result<Vec<CoeffRow>> {
        self.validate()?;
        match self.mode {
            Mode::Exact => self.exact_coefficients(order),
            Mode::Numeric => with_precision(precision, Coefficients { spec: self, order }),
        }
    }

    fn exact_coefficients(&self, order: u32) -> Result<Vec<CoeffRow>> {
        let eng = ExactEngine::new(order as usize, 0);
        let gammas = self.perturbation().args(&eng)?;
        let specialize = |v: ExactCoeff| -> Result<ExactCoeff> {
            match &self.base {
                BaseSpec::Direct { coeffs, .. } => {
                    let mut values: Vec<Rational> = coeffs
                        .iter()
                        .map(|c| c.require_rational("base coefficient"))
                        .collect::<Result<_>>()?;
                    values.resize(order as usize, Rational::from_integer(0.into()));
                    v.substitute_coeffs(&values)
                }
                BaseSpec::TwoTerm { twoterm } => v.substitute_twoterm(
                    &twoterm.b.require_rational("b")?,
                    &twoterm.beta.require_rational("beta")?,
                ),
                BaseSpec::Symbolic { .. } => Ok(v),
            }
        };
        MultiIndex::graded(gammas.len(), order)
            .into_iter()
            .map(|n| {
                let phi = phi_coeff_with(&eng, n.as_slice(), &gammas)?;
                let scale = n
                    .as_slice()
                    .iter()
                    .fold(Rational::from_integer(1.into()), |acc, &k| {
                        acc / Rational::from_integer(crate::combinatorics::factorial(k))
                    });
                let v = specialize(phi.scale(&scale))?.collapse();
                Ok(CoeffRow {
                    n,
                    value: CoeffOut::Exact(v.to_string()),
                })
            })
            .collect()
    }

    /// Series and tracked root side by side for every a-value. A tracking
    /// failure is reported in its row.
    pub fn evaluate(&self, order: u32, precision: u32) -> Result<Vec<EvalRow>> {
        self.validate()?;
        if self.mode != Mode::Numeric {
            return Err(Error::InvalidInput("evaluation needs numeric mode".into()));
        }
        if self.a_values.as_ref().is_none_or(Vec::is_empty) {
            return Err(Error::InvalidInput("no a_values given".into()));
        }
        with_precision(precision, Evaluate { spec: self, order })
    }

    /// Truncation error of the order-`order` series against the tracked
    /// root along `a = s * direction` for each `s` in `scales`, with the
    /// log-log slope fit.
    pub fn convergence(
        &self,
        order: u32,
        precision: u32,
        direction: &[Complex64],
        scales: &[f64],
    ) -> Result<TrackReport> {
        self.validate()?;
        if direction.len() != self.gammas.len() {
            return Err(Error::InvalidInput(format!(
                "direction has {} entries for {} exponents",
                direction.len(),
                self.gammas.len()
            )));
        }
        with_precision(
            precision,
            Convergence {
                spec: self,
                order,
                direction,
                scales,
            },
        )
    }

    fn newton_problem<T: NumScalar>(
        &self,
        eng: &NumericEngine<T>,
        gammas: &[T],
    ) -> Result<NewtonProblem<T>> {
        Ok(match &self.base {
            BaseSpec::TwoTerm { twoterm } => NewtonProblem::twoterm(
                eng,
                eng.arg(&twoterm.b)?,
                eng.arg(&twoterm.beta)?,
                gammas.to_vec(),
                self.radius(),
            ),
            _ => NewtonProblem::truncated(eng, gammas.to_vec(), self.radius()),
        })
    }

    fn numeric_engine<T: NumScalar>(&self, order: u32, prec: u32) -> Result<NumericEngine<T>> {
        match &self.base {
            BaseSpec::Direct { alpha, coeffs } => NumericEngine::new(alpha, coeffs, prec),
            BaseSpec::TwoTerm { twoterm } => NumericEngine::from_twoterm(
                &twoterm.b,
                &twoterm.beta,
                &twoterm.alpha,
                order as usize,
                prec,
            ),
            BaseSpec::Symbolic { .. } => Err(Error::InvalidInput(
                "a symbolic base needs exact mode".into(),
            )),
        }
    }
}

/// A computation generic over the numeric scalar.
trait NumericTask {
    type Output;
    fn run<T: NumScalar>(self, prec: u32) -> Result<Self::Output>;
}

fn with_precision<K: NumericTask>(precision: u32, task: K) -> Result<K::Output> {
    if precision <= DOUBLE_PRECISION {
        return task.run::<Complex64>(DOUBLE_PRECISION);
    }
    #[cfg(feature = "mpfr")]
    {
        task.run::<rug::Complex>(precision)
    }
    #[cfg(not(feature = "mpfr"))]
    {
        let _ = task;
        Err(Error::PrecisionUnavailable(precision))
    }
}

struct Coefficients<'a> {
    spec: &'a ProblemSpec,
    order: u32,
}

impl NumericTask for Coefficients<'_> {
    type Output = Vec<CoeffRow>;

    fn run<T: NumScalar>(self, prec: u32) -> Result<Vec<CoeffRow>> {
        let eng = self.spec.numeric_engine::<T>(self.order, prec)?;
        eng.require_order(1)?;
        let gammas = self.spec.perturbation().args(&eng)?;
        Ok(coefficient_table(&eng, &gammas, self.order)?
            .into_iter()
            .map(|(n, v)| CoeffRow {
                n,
                value: CoeffOut::Numeric(pair(v.to_c64())),
            })
            .collect())
    }
}

struct Evaluate<'a> {
    spec: &'a ProblemSpec,
    order: u32,
}

impl NumericTask for Evaluate<'_> {
    type Output = Vec<EvalRow>;

    fn run<T: NumScalar>(self, prec: u32) -> Result<Vec<EvalRow>> {
        let spec = self.spec;
        let eng = spec.numeric_engine::<T>(self.order, prec)?;
        eng.require_order(1)?;
        let gammas = spec.perturbation().args(&eng)?;
        let problem = spec.newton_problem(&eng, &gammas)?;
        let tol = 2f64.powi(-(prec as i32)) * 16.0 * eng.alpha().norm().max(1.0);
        let mut rows = Vec::new();
        for a in spec.a_values.as_deref().unwrap_or_default() {
            let at: Vec<T> = a.iter().map(|s| T::from_scalar(s, prec)).collect();
            let shown = a.iter().map(|s| pair(s.to_c64())).collect();
            let series = series_eval_with(&eng, &gammas, &at, self.order)?;
            let row = match problem.track(&at, tol) {
                Ok(root) => EvalRow {
                    a: shown,
                    status: "ok".into(),
                    series: Some(pair(series.to_c64())),
                    newton: Some(pair(root.z.to_c64())),
                    difference: Some((root.z - series).norm()),
                },
                Err(e) => EvalRow {
                    a: shown,
                    status: match e {
                        Error::OutsideRadius { .. } | Error::NoConvergence { .. } => {
                            "no-converge".into()
                        }
                        Error::SingularDerivative(_) => "singular".into(),
                        other => return Err(other),
                    },
                    series: Some(pair(series.to_c64())),
                    newton: None,
                    difference: None,
                },
            };
            rows.push(row);
        }
        Ok(rows)
    }
}

struct Convergence<'a> {
    spec: &'a ProblemSpec,
    order: u32,
    direction: &'a [Complex64],
    scales: &'a [f64],
}

impl NumericTask for Convergence<'_> {
    type Output = TrackReport;

    fn run<T: NumScalar>(self, prec: u32) -> Result<TrackReport> {
        let eng = self.spec.numeric_engine::<T>(self.order, prec)?;
        eng.require_order(1)?;
        let gammas = self.spec.perturbation().args(&eng)?;
        let problem = self.spec.newton_problem(&eng, &gammas)?;
        convergence_order_fit(
            &eng,
            &problem,
            &gammas,
            self.direction,
            self.order,
            self.scales,
        )
    }
}
