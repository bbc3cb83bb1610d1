use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::report::IdentityReport;
use crate::branch::{branch_pow, BranchPoint};
use crate::error::{Error, Result};
use crate::numeric::{Scalar, DOUBLE_PRECISION};
use crate::series::{
    taylor_coeff_twoterm_with, Engine, ExactEngine, MultiIndex, NumericEngine, Perturbation,
};
use crate::symbolic::{ExactCoeff, Rational};

/// Parameters of `phi(a; gamma, b, beta1)^(1/beta2) = phi(a; beta2 gamma, b, beta2 beta1)`
/// for the base `1 + b z^beta1` with zero `alpha1`.
#[derive(Debug, Clone)]
pub struct TransformCase {
    pub gammas: Vec<Scalar>,
    pub b: Scalar,
    pub beta1: Scalar,
    pub beta2: Scalar,
    pub alpha1: BranchPoint,
    /// Expected zero of the transformed base; derived from `alpha1` when absent.
    pub alpha2: Option<BranchPoint>,
    pub order: u32,
}

impl TransformCase {
    fn label(&self) -> String {
        let g: Vec<String> = self.gammas.iter().map(|g| g.to_string()).collect();
        format!(
            "gamma=({}) b={} beta1={} beta2={} alpha1=({}, {}, {})",
            g.join(","),
            self.b,
            self.beta1,
            self.beta2,
            self.alpha1.r(),
            self.alpha1.theta(),
            self.alpha1.sheet()
        )
    }

    /// `alpha2 = alpha1^(1/beta2)` as a point of the log surface.
    pub fn derived_alpha2(&self) -> Result<BranchPoint> {
        let beta2 = self.beta2.to_c64();
        if beta2 == Complex64::zero() {
            return Err(Error::InvalidInput("beta2 must be nonzero".into()));
        }
        let derived = BranchPoint::from_log(self.alpha1.log() / beta2)?;
        if let Some(given) = &self.alpha2 {
            let gap = (given.log() - derived.log()).norm();
            if gap > 1e-9 * derived.log().norm().max(1.0) {
                return Err(Error::BranchMismatch(format!(
                    "alpha2 log {} differs from alpha1 log / beta2 = {}",
                    given.log(),
                    derived.log()
                )));
            }
        }
        Ok(derived)
    }

    fn validate(&self) -> Result<()> {
        if self.beta1.is_zero() || self.beta2.is_zero() || self.b.is_zero() {
            return Err(Error::InvalidInput(
                "b, beta1 and beta2 must be nonzero".into(),
            ));
        }
        if self.gammas.is_empty() {
            return Err(Error::InvalidInput(
                "at least one exponent is required".into(),
            ));
        }
        let bz = self.b.to_c64() * branch_pow(&self.alpha1, self.beta1.to_c64());
        let residual = (bz + 1.0).norm();
        if residual > 1e-9 * bz.norm().max(1.0) {
            return Err(Error::NotAZero(residual));
        }
        Ok(())
    }
}

type Series<V> = BTreeMap<MultiIndex, V>;

fn series_mul<E: Engine>(
    eng: &E,
    x: &Series<E::Value>,
    y: &Series<E::Value>,
    order: u32,
) -> Series<E::Value> {
    let mut out: Series<E::Value> = BTreeMap::new();
    for (nx, vx) in x {
        for (ny, vy) in y {
            if nx.total() + ny.total() > order {
                continue;
            }
            let n = MultiIndex::new(
                nx.as_slice()
                    .iter()
                    .zip(ny.as_slice())
                    .map(|(a, b)| a + b)
                    .collect(),
            );
            let p = eng.mul(vx, vy);
            let next = match out.remove(&n) {
                Some(v) => eng.add(&v, &p),
                None => p,
            };
            out.insert(n, next);
        }
    }
    out
}

/// Coefficients of `phi^(1/beta2)` with `sum n <= order`, given the
/// Taylor coefficients of `phi` around `alpha`:
/// `alpha^(1/beta2) sum_k C(1/beta2, k) u^k` with `u = (phi - alpha)/alpha`.
fn power_series<E: Engine>(
    eng: &E,
    taylor: &Series<E::Value>,
    inv_beta2: &E::Arg,
    d: usize,
    order: u32,
) -> Series<E::Value> {
    let inv_alpha = eng.term(&Rational::one(), -1, 0, &[]);
    let u: Series<E::Value> = taylor
        .iter()
        .map(|(n, v)| (n.clone(), eng.mul(v, &inv_alpha)))
        .collect();
    let mut out: Series<E::Value> = BTreeMap::new();
    let mut power: Series<E::Value> = BTreeMap::from([(MultiIndex::new(vec![0; d]), eng.one())]);
    for k in 0..=order {
        let ck = eng.binomial(inv_beta2, k as i64);
        for (n, v) in &power {
            let t = eng.mul(&ck, v);
            let next = match out.remove(n) {
                Some(prev) => eng.add(&prev, &t),
                None => t,
            };
            out.insert(n.clone(), next);
        }
        power = series_mul(eng, &power, &u, order);
    }
    let prefactor = eng.alpha_pow(inv_beta2);
    out.remove(&MultiIndex::new(vec![0; d]));
    out.into_iter()
        .map(|(n, v)| (n, eng.mul(&prefactor, &v)))
        .collect()
}

fn twoterm_table<E: Engine>(
    eng: &E,
    gammas: &[E::Arg],
    b: &E::Arg,
    beta: &E::Arg,
    order: u32,
) -> Result<Series<E::Value>> {
    MultiIndex::graded(gammas.len(), order)
        .into_iter()
        .map(|n| {
            let v = taylor_coeff_twoterm_with(eng, &n, gammas, b, beta)?;
            Ok((n, v))
        })
        .collect()
}

/// Compares both sides term by term with exact rational parameters.
pub fn transform_check_exact(case: &TransformCase) -> Result<IdentityReport> {
    case.validate()?;
    case.derived_alpha2()?;
    let b = case.b.require_rational("b")?;
    let beta1 = case.beta1.require_rational("beta1")?;
    let beta2 = case.beta2.require_rational("beta2")?;
    let eng = ExactEngine::new(1, 0);
    let pert = Perturbation::new(case.gammas.clone())?;
    let gammas = pert.args(&eng)?;
    let d = gammas.len();
    let (bq, b1, b2) = (
        eng.constant(b.clone()),
        eng.constant(beta1),
        eng.constant(beta2.clone()),
    );

    let left_in = twoterm_table(&eng, &gammas, &bq, &b1, case.order)?;
    let inv_b2 = eng.constant(beta2.recip());
    let left = power_series(&eng, &left_in, &inv_b2, d, case.order);

    let scaled: Vec<_> = gammas.iter().map(|g| g * &b2).collect();
    let beta_r = &b2 * &b1;
    let right = twoterm_table(&eng, &scaled, &bq, &beta_r, case.order)?;

    let mut report = IdentityReport::new("transform", format!("exact, sum n<={}", case.order));
    let label = case.label();
    for (n, r) in right {
        // the right side is a power series in alpha2 = alpha1^(1/beta2)
        let r: ExactCoeff = r.rescale_alpha(&beta2.recip())?;
        let l = left.get(&n).cloned().unwrap_or_else(|| eng.zero());
        let ok = l == r;
        report.record(format!("{label} n={n}"), ok, || {
            format!("lhs {l} != rhs {r}")
        });
    }
    Ok(report)
}

/// Compares both sides in double precision to relative `tol`.
pub fn transform_check_numeric(case: &TransformCase, tol: f64) -> Result<IdentityReport> {
    case.validate()?;
    let alpha2 = case.derived_alpha2()?;
    let pert = Perturbation::new(case.gammas.clone())?;
    let e1 = NumericEngine::<Complex64>::new(&case.alpha1, &[], DOUBLE_PRECISION)?;
    let e2 = NumericEngine::<Complex64>::new(&alpha2, &[], DOUBLE_PRECISION)?;
    let gammas = pert.args(&e1)?;
    let d = gammas.len();
    let (b, beta1, beta2) = (case.b.to_c64(), case.beta1.to_c64(), case.beta2.to_c64());

    let left_in = twoterm_table(&e1, &gammas, &b, &beta1, case.order)?;
    let left = power_series(&e1, &left_in, &(1.0 / beta2), d, case.order);
    let scaled: Vec<Complex64> = gammas.iter().map(|g| g * beta2).collect();
    let right = twoterm_table(&e2, &scaled, &b, &(beta1 * beta2), case.order)?;

    let scale = right.values().map(|z| z.norm()).fold(0.0, f64::max);
    let mut report = IdentityReport::new(
        "transform",
        format!("numeric rel {tol:e}, sum n<={}", case.order),
    );
    let label = case.label();
    for (n, r) in right {
        let l = left.get(&n).copied().unwrap_or_default();
        let err = (l - r).norm();
        let ok = err <= tol * r.norm().max(1e-12 * scale);
        report.record(format!("{label} n={n}"), ok, || {
            format!("lhs {l} rhs {r} |diff| {err:e}")
        });
    }
    Ok(report)
}

/// Both exact (when every parameter is real) and numeric comparisons.
pub fn transform_check(case: &TransformCase, tol: f64) -> Result<IdentityReport> {
    let mut report = transform_check_numeric(case, tol)?;
    let exact_ok = [&case.b, &case.beta1, &case.beta2]
        .into_iter()
        .chain(&case.gammas)
        .all(|s| s.as_rational().is_some());
    if exact_ok {
        report.absorb(transform_check_exact(case)?);
        report.range = format!("exact and numeric rel {tol:e}, sum n<={}", case.order);
    }
    Ok(report)
}

/// A fixed spread of parameter sets: integer, half-integer and negative
/// powers, two letters, a base point off the real axis and one on sheet 1.
pub fn standard_transform_cases(order: u32) -> Vec<TransformCase> {
    let q = |n: i64, d: i64| Scalar::Rational(Rational::new(n.into(), d.into()));
    let i = Scalar::from;
    let one = BranchPoint::new(1.0, 0.0, 0).expect("valid point");
    let case =
        |gammas: Vec<Scalar>, b: Scalar, beta1: Scalar, beta2: Scalar, alpha1: BranchPoint| {
            TransformCase {
                gammas,
                b,
                beta1,
                beta2,
                alpha1,
                alpha2: None,
                order,
            }
        };
    let at = |r: f64, theta: f64, n: i64| BranchPoint::new(r, theta, n).expect("valid point");
    vec![
        case(vec![i(1)], i(-1), i(2), i(2), one),
        case(vec![q(1, 2), i(-1)], i(-1), i(3), q(1, 2), one),
        case(vec![i(2)], i(-1), q(5, 2), i(3), one),
        case(vec![i(1), q(1, 3)], i(-4), i(2), i(-1), at(0.5, 0.0, 0)),
        case(vec![q(-1, 2)], q(-1, 8), q(3, 2), q(2, 3), at(4.0, 0.0, 0)),
        case(
            vec![i(1), i(2)],
            i(1),
            i(2),
            i(2),
            at(1.0, std::f64::consts::FRAC_PI_2, 0),
        ),
        case(vec![q(3, 4)], i(-1), i(2), i(1), at(1.0, 0.0, 1)),
    ]
}
