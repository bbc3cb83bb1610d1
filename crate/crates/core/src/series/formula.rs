use num_traits::One;

use super::{Engine, MultiIndex, NumericEngine};
use crate::combinatorics::{compositions, factorial};
use crate::error::{Error, Result};
use crate::numeric::NumScalar;
use crate::symbolic::Rational;

/// `F(x, r, a)`.
///
/// The sum over compositions of `r` only runs over `mu` with
/// `W(mu) <= r - (a - 1)`; every other term carries a binomial with a
/// negative lower index.
pub fn f_value<E: Engine>(eng: &E, x: &E::Arg, r: i64, a: usize) -> Result<E::Value> {
    if a == 0 {
        return Err(Error::InvalidInput("F needs a >= 1".into()));
    }
    if r < -1 {
        return Err(Error::InvalidInput(format!("F needs r >= -1, got {r}")));
    }
    if eng.c1_is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let max_w = r - (a as i64 - 1);
    if r == -1 || max_w < 0 {
        return Ok(eng.zero());
    }
    eng.require_order((max_w + 1) as usize)?;

    let binom: Vec<E::Value> = (0..=max_w).map(|m| eng.binomial(x, m)).collect();
    let mut sum = eng.zero();
    for mu in compositions(r as u32, max_w as u32) {
        let m = max_w - mu.weight() as i64;
        if eng.is_zero(&binom[m as usize]) {
            continue;
        }
        let s = mu.tail_total() as i64;
        let mut q = Rational::from_integer(factorial((r + s) as u32));
        for &k in mu.tail() {
            q /= Rational::from_integer(factorial(k));
        }
        if mu.get(1) % 2 == 1 {
            q = -q;
        }
        let t = eng.term(&q, -m, -(r + 1 + s), mu.tail());
        sum = eng.add(&sum, &eng.mul(&t, &binom[m as usize]));
    }
    let pre = -Rational::one() / Rational::from_integer(factorial(a as u32 - 1));
    Ok(eng.scale(&eng.mul(&eng.alpha_pow(x), &sum), &pre))
}

/// `sum_j mult_j gamma_j`.
pub(crate) fn exponent_sum<E: Engine>(eng: &E, mult: &[u32], gammas: &[E::Arg]) -> E::Arg {
    let mut x = eng.arg_int(0);
    for (&m, g) in mult.iter().zip(gammas) {
        if m > 0 {
            x = eng.arg_add(&x, &eng.arg_mul(&eng.arg_int(m as i64), g));
        }
    }
    x
}

pub(crate) fn check_index(mult: &[u32], gammas_len: usize) -> Result<u32> {
    if mult.len() != gammas_len {
        return Err(Error::InvalidInput(format!(
            "index has dimension {}, perturbation has {gammas_len}",
            mult.len()
        )));
    }
    let total: u32 = mult.iter().sum();
    if total == 0 {
        return Err(Error::EmptyIndex);
    }
    Ok(total)
}

/// `d(phi, I) = F(sum_{m in I} gamma_m, |I| - 1, 1)` for the multiset with
/// multiplicities `mult`.
pub fn phi_coeff_with<E: Engine>(eng: &E, mult: &[u32], gammas: &[E::Arg]) -> Result<E::Value> {
    let total = check_index(mult, gammas.len())?;
    let x = exponent_sum(eng, mult, gammas);
    f_value(eng, &x, total as i64 - 1, 1)
}

/// `d(phi, n) / prod n_i!`.
pub fn taylor_coeff_with<E: Engine>(
    eng: &E,
    n: &MultiIndex,
    gammas: &[E::Arg],
) -> Result<E::Value> {
    let v = phi_coeff_with(eng, n.as_slice(), gammas)?;
    Ok(eng.scale(&v, &inverse_factorials(n)))
}

pub(crate) fn inverse_factorials(n: &MultiIndex) -> Rational {
    let mut den = Rational::one();
    for &k in n.as_slice() {
        den *= Rational::from_integer(factorial(k));
    }
    den.recip()
}

/// Taylor coefficients for every `n` with `1 <= sum n <= order`, in graded
/// order.
pub fn coefficient_table<E: Engine>(
    eng: &E,
    gammas: &[E::Arg],
    order: u32,
) -> Result<Vec<(MultiIndex, E::Value)>> {
    MultiIndex::graded(gammas.len(), order)
        .into_iter()
        .map(|n| {
            let v = taylor_coeff_with(eng, &n, gammas)?;
            Ok((n, v))
        })
        .collect()
}

/// `alpha + sum_{1 <= sum n <= order} t_n a^n`.
pub fn series_eval_with<T: NumScalar>(
    eng: &NumericEngine<T>,
    gammas: &[T],
    a: &[T],
    order: u32,
) -> Result<T> {
    if a.len() != gammas.len() {
        return Err(Error::InvalidInput(format!(
            "{} perturbation values for {} exponents",
            a.len(),
            gammas.len()
        )));
    }
    let mut acc = eng.alpha().clone();
    for (n, t) in coefficient_table(eng, gammas, order)? {
        let mut term = t;
        for (ai, &k) in a.iter().zip(n.as_slice()) {
            if k > 0 {
                term = term * ai.powi(k as i64);
            }
        }
        acc = acc + term;
    }
    Ok(acc)
}
