use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::NumScalar;
use crate::series::{BaseFunction, Engine, NumericEngine, Perturbation};

/// Maximum Newton iterations per solve.
pub const MAX_ITERATIONS: usize = 80;
/// Homotopy steps used when direct Newton fails.
pub const HOMOTOPY_STEPS: usize = 32;

/// How `g` is evaluated.
#[derive(Debug, Clone)]
pub enum BaseEval<T> {
    /// `sum_k c_k (z - alpha)^k`.
    Truncated(Vec<T>),
    /// `1 + b z^beta`.
    TwoTerm { b: T, beta: T },
}

/// `f(z; a) = g(z) + sum_i a_i z^gamma_i` with powers continued from the
/// sheet of `alpha`.
#[derive(Debug, Clone)]
pub struct NewtonProblem<T> {
    alpha: T,
    alpha_log: T,
    g: BaseEval<T>,
    gammas: Vec<T>,
    radius: f64,
    prec: u32,
}

/// A converged root.
#[derive(Debug, Clone)]
pub struct Root<T> {
    pub z: T,
    pub iterations: usize,
    pub residual: f64,
    pub homotopy: bool,
}

impl<T: NumScalar> NewtonProblem<T> {
    /// `g` as the truncated expansion held by `eng`.
    pub fn truncated(eng: &NumericEngine<T>, gammas: Vec<T>, radius: f64) -> Self {
        Self::with_base(
            eng,
            BaseEval::Truncated(eng.coeffs().to_vec()),
            gammas,
            radius,
        )
    }

    /// `g(z) = 1 + b z^beta` in closed form.
    pub fn twoterm(eng: &NumericEngine<T>, b: T, beta: T, gammas: Vec<T>, radius: f64) -> Self {
        Self::with_base(eng, BaseEval::TwoTerm { b, beta }, gammas, radius)
    }

    fn with_base(eng: &NumericEngine<T>, g: BaseEval<T>, gammas: Vec<T>, radius: f64) -> Self {
        Self {
            alpha: eng.alpha().clone(),
            alpha_log: eng.alpha_log().clone(),
            g,
            gammas,
            radius,
            prec: eng.precision(),
        }
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Logarithm of `z` on the sheet nearest to that of `alpha`.
    fn log(&self, z: &T) -> T {
        let principal = z.ln();
        let gap = self.alpha_log.to_c64().im - principal.to_c64().im;
        let turns = (gap / (2.0 * PI)).round();
        if turns == 0.0 {
            return principal;
        }
        let shift = T::from_c64(Complex64::new(0.0, 2.0 * turns), self.prec) * T::pi(self.prec);
        principal + shift
    }

    /// `(f, f')` at `z`.
    fn eval(&self, z: &T, a: &[T]) -> (T, T) {
        let prec = self.prec;
        let one = T::from_int(1, prec);
        let log = || self.log(z);
        let (mut f, mut df) = match &self.g {
            BaseEval::Truncated(c) => {
                let h = z.clone() - self.alpha.clone();
                let mut f = T::from_int(0, prec);
                let mut df = T::from_int(0, prec);
                for (k, ck) in c.iter().enumerate().rev() {
                    f = (f + ck.clone()) * h.clone();
                    df = df * h.clone() + ck.clone() * T::from_int(k as i64 + 1, prec);
                }
                (f, df)
            }
            BaseEval::TwoTerm { b, beta } => {
                let l = log();
                let p = (beta.clone() * l).exp();
                let f = one.clone() + b.clone() * p.clone();
                let df = b.clone() * beta.clone() * p / z.clone();
                (f, df)
            }
        };
        let mut l = None;
        for (ai, g) in a.iter().zip(&self.gammas) {
            if ai.is_zero() {
                continue;
            }
            let lz = l.get_or_insert_with(log).clone();
            let p = (g.clone() * lz).exp();
            f = f + ai.clone() * p.clone();
            df = df + ai.clone() * g.clone() * p / z.clone();
        }
        (f, df)
    }

    fn solve(&self, start: T, a: &[T], tol: f64, threshold: f64) -> Result<(T, usize, f64)> {
        let mut z = start;
        let mut residual = f64::INFINITY;
        for it in 0..MAX_ITERATIONS {
            let (f, df) = self.eval(&z, a);
            residual = f.norm();
            if residual <= tol {
                return Ok((z, it, residual));
            }
            let dn = df.norm();
            if dn.is_nan() || dn <= threshold {
                return Err(Error::SingularDerivative(dn));
            }
            z = z - f / df;
            if !z.norm().is_finite() || z.is_zero() {
                break;
            }
        }
        Err(Error::NoConvergence {
            iterations: MAX_ITERATIONS,
            residual,
        })
    }

    /// Root of `f(z; a)` continued from `alpha` at `a = 0`, to `|f| <= tol`.
    ///
    /// Direct Newton from `alpha` is tried first, then a linear homotopy
    /// in `a` with warm starts.
    pub fn track(&self, a: &[T], tol: f64) -> Result<Root<T>> {
        if a.len() != self.gammas.len() {
            return Err(Error::InvalidInput(format!(
                "{} perturbation values for {} exponents",
                a.len(),
                self.gammas.len()
            )));
        }
        let norm = a.iter().map(NumScalar::norm).fold(0.0, f64::max);
        if norm.is_nan() || norm > self.radius {
            return Err(Error::OutsideRadius {
                norm,
                radius: self.radius,
            });
        }
        let (_, d0) = self.eval(&self.alpha, &vec![T::from_int(0, self.prec); a.len()]);
        let threshold = 1e-12 * d0.norm();
        if d0.norm().is_nan() || d0.norm() == 0.0 {
            return Err(Error::SingularDerivative(0.0));
        }

        match self.solve(self.alpha.clone(), a, tol, threshold) {
            Ok((z, iterations, residual)) => {
                return Ok(Root {
                    z,
                    iterations,
                    residual,
                    homotopy: false,
                })
            }
            Err(e) if !e.is_numeric() => return Err(e),
            Err(_) => {}
        }

        let mut z = self.alpha.clone();
        let mut total = 0;
        let mut residual = 0.0;
        for step in 1..=HOMOTOPY_STEPS {
            let t = T::from_c64(
                Complex64::new(step as f64 / HOMOTOPY_STEPS as f64, 0.0),
                self.prec,
            );
            let at: Vec<T> = a.iter().map(|ai| ai.clone() * t.clone()).collect();
            let (next, it, res) = self.solve(z, &at, tol, threshold)?;
            z = next;
            total += it;
            residual = res;
        }
        Ok(Root {
            z,
            iterations: total,
            residual,
            homotopy: true,
        })
    }
}

/// Double precision root of `g(z) + sum a_i z^gamma_i` for a numeric base,
/// with `g` taken as its truncated expansion.
pub fn newton_track(
    pert: &Perturbation,
    base: &BaseFunction,
    a: &[Complex64],
    tol: f64,
    radius: f64,
) -> Result<Complex64> {
    let eng = crate::series::double_engine(base)?;
    eng.require_order(1)?;
    let gammas = pert.args(&eng)?;
    let problem = NewtonProblem::truncated(&eng, gammas, radius);
    Ok(problem.track(a, tol)?.z)
}
