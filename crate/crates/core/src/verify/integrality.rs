use num_integer::Integer;

use super::report::IdentityReport;
use crate::error::{Error, Result};
use crate::numeric::Scalar;
use crate::series::{taylor_coeff_with, Engine, ExactEngine, MultiIndex};
use crate::symbolic::{ExactCoeff, Rational, Symbol};

/// Integer exponents, or an input error naming the first non-integer one.
pub fn integer_gammas(gammas: &[Scalar]) -> Result<Vec<i64>> {
    gammas
        .iter()
        .map(|g| {
            let q = g
                .as_rational()
                .filter(|q| q.is_integer())
                .ok_or_else(|| Error::InvalidInput(format!("exponent {g} is not an integer")))?;
            i64::try_from(q.to_integer())
                .map_err(|_| Error::InvalidInput(format!("exponent {g} is too large")))
        })
        .collect()
}

/// Why `value / alpha^(n.gamma)` is not in
/// `Z[alpha^-1, c1^-1, c2, ..., c_{sum n}]`, if it is not.
pub fn integrality_defect(value: &ExactCoeff, n: &MultiIndex, gammas: &[i64]) -> Option<String> {
    let ng: i64 = n
        .as_slice()
        .iter()
        .zip(gammas)
        .map(|(&k, &g)| k as i64 * g)
        .sum();
    let reduced = value
        .times_alpha_power(&-Rational::from_integer(ng.into()))
        .collapse();
    if !reduced.alpha_exponent().is_zero() {
        return Some(format!(
            "residual alpha exponent {}",
            reduced.alpha_exponent()
        ));
    }
    let p = reduced.poly();
    if !p.is_integral() {
        return Some(format!("non-integer coefficient in {p}"));
    }
    for (mono, _) in p.terms() {
        if p.exponent(mono, Symbol::Alpha) > 0 {
            return Some(format!("positive power of alpha in {p}"));
        }
        if p.exponent(mono, Symbol::C(1)) > 0 {
            return Some(format!("positive power of c1 in {p}"));
        }
    }
    None
}

/// Checks a given coefficient value for the Taylor coefficient `n`.
pub fn integrality_check_value(
    value: &ExactCoeff,
    n: &MultiIndex,
    gammas: &[i64],
) -> IdentityReport {
    let mut report = IdentityReport::new("integrality", format!("n={n} gamma={gammas:?}"));
    let defect = integrality_defect(value, n, gammas);
    report.record(format!("n={n}"), defect.is_none(), || {
        defect.unwrap_or_default()
    });
    report
}

/// The Taylor coefficient `n` for integer exponents lies in
/// `alpha^(n.gamma) Z[alpha^-1, c1^-1, c2, ..., c_{sum n}]`.
pub fn integrality_check(n: &MultiIndex, gammas: &[Scalar]) -> Result<IdentityReport> {
    let ints = integer_gammas(gammas)?;
    let eng = ExactEngine::new(n.total().max(1) as usize, 0);
    let args: Vec<_> = ints.iter().map(|&g| eng.arg_int(g)).collect();
    let value = taylor_coeff_with(&eng, n, &args)?;
    Ok(integrality_check_value(&value, n, &ints))
}

/// Every Taylor coefficient with `1 <= sum n <= max_total` for every
/// integer tuple in `[-bound, bound]^d`, `d <= max_dim`.
pub fn integrality_sweep(max_dim: usize, bound: i64, max_total: u32) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "integrality",
        format!("d<={max_dim} |gamma|<={bound} sum n<={max_total}"),
    );
    let eng = ExactEngine::new(max_total as usize, 0);
    for d in 1..=max_dim {
        for gammas in integer_tuples(d, bound) {
            let args: Vec<_> = gammas.iter().map(|&g| eng.arg_int(g)).collect();
            for n in MultiIndex::graded(d, max_total) {
                let value = taylor_coeff_with(&eng, &n, &args)?;
                let defect = integrality_defect(&value, &n, &gammas);
                report.record(format!("gamma={gammas:?} n={n}"), defect.is_none(), || {
                    defect.unwrap_or_default()
                });
            }
        }
    }
    Ok(report)
}

fn integer_tuples(d: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t| {
                (-bound..=bound).map(move |g| {
                    let mut t = t.clone();
                    t.push(g);
                    t
                })
            })
            .collect();
    }
    out
}

/// Halves the coefficient of the first monomial with an odd coefficient
/// numerator, or of the first monomial otherwise.
pub fn corrupt(value: &ExactCoeff) -> ExactCoeff {
    let p = value.poly();
    let half = Rational::new(1.into(), 2.into());
    let target = p
        .terms()
        .find(|(_, q)| q.numer().is_odd())
        .or_else(|| p.terms().next())
        .map(|(m, _)| m.clone());
    let terms = p.terms().map(|(m, q)| {
        let q = if Some(m) == target.as_ref() {
            q * &half
        } else {
            q.clone()
        };
        (m.clone(), q)
    });
    let poly = crate::symbolic::LaurentPoly::from_terms(p.table(), terms).expect("same monomials");
    ExactCoeff::new(value.alpha_exponent().clone(), poly).expect("same table")
}
