use num_complex::Complex64;

use super::engine::{rational_arg_nonzero, twoterm_coefficients};
use super::formula::{check_index, exponent_sum, inverse_factorials};
use super::{BaseFunction, Engine, MultiIndex};
use crate::branch::{branch_pow, BranchPoint};
use crate::error::{Error, Result};
use crate::numeric::{Scalar, DOUBLE_PRECISION};

/// `d(phi, n)` for `g(z) = 1 + b z^beta`:
/// `-alpha^(1 + sum n_i (gamma_i - 1)) / g'(alpha)^(sum n) * prod_{i=1}^{sum n - 1} (-1 + i beta - n.gamma)`
/// with `g'(alpha) = b beta alpha^(beta - 1)`.
pub fn phi_coeff_twoterm_with<E: Engine>(
    eng: &E,
    n: &MultiIndex,
    gammas: &[E::Arg],
    b: &E::Arg,
    beta: &E::Arg,
) -> Result<E::Value> {
    let total = check_index(n.as_slice(), gammas.len())? as i64;
    let bb = eng
        .arg_inv(&eng.arg_mul(b, beta))
        .map_err(|_| Error::InvalidInput("two-term base needs b != 0 and beta != 0".into()))?;
    let ng = exponent_sum(eng, n.as_slice(), gammas);

    // alpha^(1 + n.gamma - sum n) * alpha^(-(beta - 1) sum n)
    let exponent = eng.arg_sub(
        &eng.arg_add(&eng.arg_int(1), &ng),
        &eng.arg_mul(beta, &eng.arg_int(total)),
    );
    let mut acc = eng.neg(&eng.alpha_pow(&exponent));
    let inv = eng.arg_value(&bb);
    for _ in 0..total {
        acc = eng.mul(&acc, &inv);
    }
    for i in 1..total {
        let f = eng.arg_sub(
            &eng.arg_mul(&eng.arg_int(i), beta),
            &eng.arg_add(&eng.arg_int(1), &ng),
        );
        acc = eng.mul(&acc, &eng.arg_value(&f));
    }
    Ok(acc)
}

/// The two-term coefficient divided by `prod n_i!`.
pub fn taylor_coeff_twoterm_with<E: Engine>(
    eng: &E,
    n: &MultiIndex,
    gammas: &[E::Arg],
    b: &E::Arg,
    beta: &E::Arg,
) -> Result<E::Value> {
    let v = phi_coeff_twoterm_with(eng, n, gammas, b, beta)?;
    Ok(eng.scale(&v, &inverse_factorials(n)))
}

/// Numeric base function for `1 + b z^beta` expanded to `order` terms at
/// `alpha`, which must be one of its zeros.
pub fn base_from_twoterm(
    b: &Scalar,
    beta: &Scalar,
    alpha: &BranchPoint,
    order: usize,
) -> Result<BaseFunction> {
    rational_arg_nonzero(b, "b")?;
    rational_arg_nonzero(beta, "beta")?;
    if order == 0 {
        return Err(Error::InvalidInput("two-term base needs order >= 1".into()));
    }
    let bz = b.to_c64() * branch_pow(alpha, beta.to_c64());
    let residual = (Complex64::new(1.0, 0.0) + bz).norm();
    if residual > 1e-9 * bz.norm().max(1.0) {
        return Err(Error::NotAZero(residual));
    }
    let coeffs = twoterm_coefficients::<Complex64>(b, beta, alpha, order, DOUBLE_PRECISION)?;
    BaseFunction::numeric(*alpha, coeffs.into_iter().map(Scalar::Complex).collect())
}
