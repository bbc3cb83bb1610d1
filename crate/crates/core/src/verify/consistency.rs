use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::IdentityReport;
use crate::branch::BranchPoint;
use crate::error::Result;
use crate::numeric::{Scalar, DOUBLE_PRECISION};
use crate::series::{
    phi_coeff_twoterm_with, phi_coeff_with, ExactEngine, MultiIndex, NumericEngine, Oracle,
};
use crate::symbolic::Rational;

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(
        rng.gen_range(-12i64..=12).into(),
        rng.gen_range(1i64..=6).into(),
    )
}

/// Closed form against the recursive oracle with formal `c_k` and random
/// rational exponents, for every multiset of size `1..=max_total` over
/// `d <= max_dim` letters.
pub fn check_closed_form_exact(
    max_dim: usize,
    max_total: u32,
    seed: u64,
) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "closed-form-vs-oracle",
        format!("exact, d<={max_dim} sum n<={max_total}, seed {seed}"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eng = ExactEngine::new(max_total as usize, 0);
    for d in 1..=max_dim {
        let gammas: Vec<Rational> = (0..d).map(|_| random_rational(&mut rng)).collect();
        let args: Vec<_> = gammas.iter().map(|g| eng.constant(g.clone())).collect();
        let oracle = Oracle::new(&eng, args.clone());
        let shown: Vec<String> = gammas.iter().map(crate::symbolic::rational_text).collect();
        for n in MultiIndex::graded(d, max_total) {
            let closed = phi_coeff_with(&eng, n.as_slice(), &args)?;
            let rec = oracle.coeff(n.as_slice())?;
            let ok = closed == rec;
            report.record(
                format!("gamma=({}) I={}", shown.join(","), n.to_multiset()),
                ok,
                || format!("closed form {closed} != oracle {rec}"),
            );
        }
    }
    Ok(report)
}

/// The same comparison in double precision with random complex exponents,
/// base point and coefficients, to relative `tol`.
pub fn check_closed_form_numeric(
    max_dim: usize,
    max_total: u32,
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "closed-form-vs-oracle",
        format!("numeric rel {tol:e}, d<={max_dim} sum n<={max_total}, seed {seed}"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cplx =
        |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    for d in 1..=max_dim {
        let alpha = BranchPoint::new(
            rng.gen_range(0.5..2.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-1..=1),
        )?;
        let mut coeffs: Vec<Scalar> = (0..max_total)
            .map(|_| Scalar::Complex(cplx(&mut rng)))
            .collect();
        coeffs[0] = Scalar::Complex(cplx(&mut rng) + Complex64::new(2.0, 0.0));
        let eng = NumericEngine::<Complex64>::new(&alpha, &coeffs, DOUBLE_PRECISION)?;
        let gammas: Vec<Complex64> = (0..d).map(|_| cplx(&mut rng)).collect();
        let oracle = Oracle::new(&eng, gammas.clone());
        for n in MultiIndex::graded(d, max_total) {
            let closed = phi_coeff_with(&eng, n.as_slice(), &gammas)?;
            let rec = oracle.coeff(n.as_slice())?;
            let err = (closed - rec).norm();
            let ok = err <= tol * rec.norm().max(f64::MIN_POSITIVE);
            report.record(format!("d={d} I={}", n.to_multiset()), ok, || {
                format!("closed form {closed} oracle {rec} |diff| {err:e}")
            });
        }
    }
    Ok(report)
}

/// Two-term product formula against the closed form specialized to
/// `c_k = b C(beta, k) alpha^(beta - k)`, exactly, for each `beta`.
pub fn check_twoterm_consistency(
    betas: &[Rational],
    max_dim: usize,
    max_total: u32,
    seed: u64,
) -> Result<IdentityReport> {
    let shown: Vec<String> = betas.iter().map(crate::symbolic::rational_text).collect();
    let mut report = IdentityReport::new(
        "twoterm-vs-closed-form",
        format!(
            "exact, beta in {{{}}}, d<={max_dim} sum n<={max_total}, seed {seed}",
            shown.join(",")
        ),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eng = ExactEngine::new(max_total as usize, 0);
    for beta in betas {
        let b = loop {
            let b = random_rational(&mut rng);
            if b != Rational::from_integer(0.into()) {
                break b;
            }
        };
        for d in 1..=max_dim {
            let gammas: Vec<Rational> = (0..d).map(|_| random_rational(&mut rng)).collect();
            let args: Vec<_> = gammas.iter().map(|g| eng.constant(g.clone())).collect();
            let g: Vec<String> = gammas.iter().map(crate::symbolic::rational_text).collect();
            for n in MultiIndex::graded(d, max_total) {
                let closed =
                    phi_coeff_with(&eng, n.as_slice(), &args)?.substitute_twoterm(&b, beta)?;
                let tt = phi_coeff_twoterm_with(
                    &eng,
                    &n,
                    &args,
                    &eng.constant(b.clone()),
                    &eng.constant(beta.clone()),
                )?;
                let ok = closed == tt;
                report.record(
                    format!(
                        "beta={} b={} gamma=({}) n={n}",
                        crate::symbolic::rational_text(beta),
                        crate::symbolic::rational_text(&b),
                        g.join(",")
                    ),
                    ok,
                    || format!("closed form {closed} != product formula {tt}"),
                );
            }
        }
    }
    Ok(report)
}
