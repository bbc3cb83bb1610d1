use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::IdentityReport;
use crate::combinatorics::{binomial_int, factorial, falling_factorial, set_partitions};
use crate::error::Result;
use crate::series::{f_value, Engine, ExactEngine};
use crate::symbolic::{LaurentPoly, Rational, Symbol, SymbolTable};

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(
        rng.gen_range(-9i64..=9).into(),
        rng.gen_range(1i64..=5).into(),
    )
}

fn random_poly(
    rng: &mut ChaCha8Rng,
    table: &Arc<SymbolTable>,
    sym: Symbol,
    degree: u32,
) -> Result<LaurentPoly> {
    let mut p = LaurentPoly::zero(table);
    for e in 0..=degree {
        let m = LaurentPoly::monomial(table, random_rational(rng), &[(sym, e as i32)])?;
        p = &p + &m;
    }
    Ok(p)
}

/// `sum_{s in S(M,a)} prod_i F(sum_{m in s_i} x_m, |s_i| - 1, 1) = F(sum x, M - 1, a)`
/// as polynomials in `x_1 .. x_M`.
pub fn check_f_prod(m: usize, a: usize) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("fprod", format!("M={m} a={a}"));
    check_f_prod_into(&mut report, m, a)?;
    Ok(report)
}

fn check_f_prod_into(report: &mut IdentityReport, m: usize, a: usize) -> Result<()> {
    let eng = ExactEngine::new(m.max(1), m);
    let xs: Vec<LaurentPoly> = (1..=m as u32)
        .map(|i| eng.indeterminate(i))
        .collect::<Result<_>>()?;
    let sum_of = |idx: &[usize]| idx.iter().fold(eng.arg_int(0), |acc, &i| &acc + &xs[i - 1]);

    let all: Vec<usize> = (1..=m).collect();
    let rhs = f_value(&eng, &sum_of(&all), m as i64 - 1, a)?;
    let mut lhs = eng.zero();
    for s in set_partitions(m, a) {
        let mut prod = eng.one();
        for part in s.parts() {
            let f = f_value(&eng, &sum_of(part), part.len() as i64 - 1, 1)?;
            prod = eng.mul(&prod, &f);
        }
        lhs = eng.add(&lhs, &prod);
    }
    let ok = lhs == rhs;
    report.record(format!("M={m} a={a}"), ok, || {
        format!("lhs {lhs} != rhs {rhs}")
    });
    Ok(())
}

/// Every `1 <= a <= M <= max_m`.
pub fn check_f_prod_range(max_m: usize) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("fprod", format!("1<=a<=M<={max_m}"));
    for m in 1..=max_m {
        for a in 1..=m {
            check_f_prod_into(&mut report, m, a)?;
        }
    }
    Ok(report)
}

/// The two sides of the alternating-sum identity in `nu, x_1 .. x_N`.
pub fn nu_sides(n: usize, k: usize) -> Result<(LaurentPoly, LaurentPoly)> {
    let mut symbols = vec![Symbol::Nu];
    symbols.extend((1..=n as u32).map(Symbol::X));
    let table = SymbolTable::new(symbols)?;
    let nu = LaurentPoly::symbol(&table, Symbol::Nu)?;
    let xs: Vec<LaurentPoly> = (1..=n as u32)
        .map(|i| LaurentPoly::symbol(&table, Symbol::X(i)))
        .collect::<Result<_>>()?;
    let one = LaurentPoly::one(&table);
    let sum_of = |idx: &[usize]| {
        idx.iter()
            .fold(LaurentPoly::zero(&table), |acc, &i| &acc + &xs[i - 1])
    };
    let all: Vec<usize> = (1..=n).collect();
    let total = sum_of(&all);

    let mut lhs = LaurentPoly::zero(&table);
    for r in 0..k {
        let arg = &(&nu.scale(&int(r as i64 + 1)) - &one) + &total;
        let mut q = Rational::from_integer(binomial_int(k as u32 - 1, r as u32));
        if (k - 1 - r) % 2 == 1 {
            q = -q;
        }
        lhs = &lhs + &arg.falling(n as u32 - 1).scale(&q);
    }
    lhs = lhs.scale(&Rational::from_integer(factorial(k as u32 - 1)).recip());

    let mut rhs = LaurentPoly::zero(&table);
    for s in set_partitions(n, k) {
        let mut prod = one.clone();
        for part in s.parts() {
            let arg = &(&nu - &one) + &sum_of(part);
            prod = &prod * &arg.falling(part.len() as u32 - 1);
        }
        rhs = &rhs + &prod;
    }
    rhs = &rhs * &nu.pow(k as u32 - 1);
    Ok((lhs, rhs))
}

/// The alternating-sum identity for one `(N, k)`.
pub fn check_nu(n: usize, k: usize) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("nu", format!("N={n} k={k}"));
    check_nu_into(&mut report, n, k)?;
    Ok(report)
}

fn check_nu_into(report: &mut IdentityReport, n: usize, k: usize) -> Result<()> {
    let (lhs, rhs) = nu_sides(n, k)?;
    let ok = lhs == rhs;
    report.record(format!("N={n} k={k}"), ok, || {
        format!("lhs {lhs} != rhs {rhs}")
    });
    Ok(())
}

/// Every `1 <= k <= N <= max_n`.
pub fn check_nu_range(max_n: usize) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("nu", format!("1<=k<=N<={max_n}"));
    for n in 1..=max_n {
        for k in 1..=n {
            check_nu_into(&mut report, n, k)?;
        }
    }
    Ok(report)
}

fn t_derivative(p: &LaurentPoly, times: usize) -> Result<LaurentPoly> {
    let mut p = p.clone();
    for _ in 0..times {
        p = p.derivative(Symbol::T)?;
    }
    Ok(p)
}

/// Both sides of the derivation-set identity in `Q[t]` with `delta = d/dt`.
pub fn deriv_set_sides(
    fa: &LaurentPoly,
    fb: &LaurentPoly,
    fs: &[LaurentPoly],
) -> Result<(LaurentPoly, LaurentPoly)> {
    let table = fa.table().clone();
    let m = fs.len();
    let one = LaurentPoly::one(&table);
    let fa1 = fa.derivative(Symbol::T)?;
    let mut lhs = LaurentPoly::zero(&table);
    for mask in 0u32..(1 << m) {
        let mut inside = fb.clone();
        let mut outside = one.clone();
        let mut w = 0;
        for (i, f) in fs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside = &inside * f;
                w += 1;
            } else {
                outside = &outside * f;
            }
        }
        let first = if w == m {
            // delta^-1 of delta f_A
            fa.clone()
        } else {
            t_derivative(&(&fa1 * &outside), m - w - 1)?
        };
        lhs = &lhs + &(&first * &t_derivative(&inside, w)?);
    }
    let all = fs.iter().fold(fa * fb, |acc, f| &acc * f);
    let rhs = t_derivative(&all, m)?;
    Ok((lhs, rhs))
}

/// The derivation-set identity for `instances` random choices of
/// polynomials of degree at most 3, for each `0 <= M <= max_m`.
pub fn check_deriv_set(max_m: usize, instances: usize, seed: u64) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "derivset",
        format!("M<={max_m}, {instances} random inputs each, seed {seed}"),
    );
    let table = SymbolTable::new(vec![Symbol::T])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in 0..=max_m {
        for i in 0..instances {
            let mut draw = || {
                let deg = rng.gen_range(0..=3);
                random_poly(&mut rng, &table, Symbol::T, deg)
            };
            let fa = draw()?;
            let fb = draw()?;
            let fs: Vec<LaurentPoly> = (0..m).map(|_| draw()).collect::<Result<_>>()?;
            let (lhs, rhs) = deriv_set_sides(&fa, &fb, &fs)?;
            let ok = lhs == rhs;
            report.record(format!("M={m} #{i}"), ok, || {
                format!("f_A={fa} f_B={fb} lhs {lhs} != rhs {rhs}")
            });
        }
    }
    Ok(report)
}

/// The finite-difference reconstruction of a polynomial `F` of degree `m`
/// from `F(1), .., F(m + 1)`, as a polynomial in `x1`.
pub fn newton_series(values: &[Rational], table: &Arc<SymbolTable>) -> Result<LaurentPoly> {
    let x = LaurentPoly::symbol(table, Symbol::X(1))?;
    let shifted = &x - &LaurentPoly::one(table);
    let mut out = LaurentPoly::zero(table);
    for k in 1..=values.len() {
        let mut diff = Rational::zero();
        for (r, v) in values.iter().enumerate().take(k) {
            let mut q = Rational::from_integer(binomial_int(k as u32 - 1, r as u32)) * v;
            if (k - 1 - r) % 2 == 1 {
                q = -q;
            }
            diff += q;
        }
        let c = diff / Rational::from_integer(factorial(k as u32 - 1));
        out = &out + &shifted.falling(k as u32 - 1).scale(&c);
    }
    Ok(out)
}

fn eval_at(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Random polynomials of every degree `0..=max_degree`, rebuilt from
/// their values at `1 .. m + 1`.
pub fn check_newton_series(
    max_degree: usize,
    instances: usize,
    seed: u64,
) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "newton",
        format!("degree<={max_degree}, {instances} random inputs each, seed {seed}"),
    );
    let table = SymbolTable::new(vec![Symbol::X(1)])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in 0..=max_degree {
        for i in 0..instances {
            let mut coeffs: Vec<Rational> = (0..=m).map(|_| random_rational(&mut rng)).collect();
            if coeffs[m].is_zero() {
                coeffs[m] = Rational::one();
            }
            let values: Vec<Rational> = (1..=m as i64 + 1)
                .map(|k| eval_at(&coeffs, &int(k)))
                .collect();
            let rebuilt = newton_series(&values, &table)?;
            let terms = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (vec![e as i32], c.clone()));
            let original = LaurentPoly::from_terms(&table, terms)?;
            let ok = rebuilt == original;
            report.record(format!("m={m} #{i}"), ok, || {
                format!("{original} rebuilt as {rebuilt}")
            });
        }
    }
    Ok(report)
}

/// `(a + b)_n = sum_i C(n, i) (a)_i (b)_{n-i}` as a polynomial identity in
/// two indeterminates and at random rational points, `0 <= n <= max_n`.
pub fn check_vandermonde(max_n: u32, instances: usize, seed: u64) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(
        "vandermonde",
        format!("n<={max_n}, symbolic plus {instances} random rational pairs, seed {seed}"),
    );
    let table = SymbolTable::new(vec![Symbol::X(1), Symbol::X(2)])?;
    let a = LaurentPoly::symbol(&table, Symbol::X(1))?;
    let b = LaurentPoly::symbol(&table, Symbol::X(2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 0..=max_n {
        let lhs = (&a + &b).falling(n);
        let mut rhs = LaurentPoly::zero(&table);
        for i in 0..=n {
            let c = Rational::from_integer(binomial_int(n, i));
            rhs = &rhs + &(&a.falling(i) * &b.falling(n - i)).scale(&c);
        }
        let ok = lhs == rhs;
        report.record(format!("n={n} symbolic"), ok, || {
            format!("lhs {lhs} != rhs {rhs}")
        });

        for j in 0..instances {
            let (x, y) = (random_rational(&mut rng), random_rational(&mut rng));
            let lhs = falling_factorial(&(&x + &y), n);
            let rhs = (0..=n).fold(Rational::zero(), |acc, i| {
                acc + Rational::from_integer(binomial_int(n, i))
                    * falling_factorial(&x, i)
                    * falling_factorial(&y, n - i)
            });
            let ok = lhs == rhs;
            report.record(format!("n={n} #{j}"), ok, || {
                format!("a={x} b={y}: {lhs} != {rhs}")
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_prod_small_cases() {
        assert!(check_f_prod(1, 1).unwrap().passed);
        assert!(check_f_prod(3, 3).unwrap().passed);
        assert!(check_f_prod(4, 2).unwrap().passed);
    }

    #[test]
    fn nu_small_cases() {
        for (n, k) in [(1, 1), (3, 1), (3, 3), (4, 2)] {
            assert!(check_nu(n, k).unwrap().passed, "N={n} k={k}");
        }
        let (lhs, rhs) = nu_sides(3, 3).unwrap();
        assert_eq!(rhs.to_string(), "1*nu^2");
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn deriv_set_base_cases() {
        let table = SymbolTable::new(vec![Symbol::T]).unwrap();
        let t = LaurentPoly::symbol(&table, Symbol::T).unwrap();
        let one = LaurentPoly::one(&table);
        let (l, r) = deriv_set_sides(&t, &one, &[]).unwrap();
        assert_eq!(l, t);
        assert_eq!(r, t);
        let (l, r) = deriv_set_sides(&t, &one, std::slice::from_ref(&t)).unwrap();
        assert_eq!(l, r);
        assert_eq!(r.to_string(), "2*t");
        assert!(check_deriv_set(3, 3, 7).unwrap().passed);
    }

    #[test]
    fn newton_series_reproduces_x() {
        let table = SymbolTable::new(vec![Symbol::X(1)]).unwrap();
        let p = newton_series(&[int(1), int(2)], &table).unwrap();
        assert_eq!(p.to_string(), "1*x1");
        let c = newton_series(&[int(5)], &table).unwrap();
        assert_eq!(c.to_string(), "5");
        assert!(check_newton_series(5, 2, 3).unwrap().passed);
    }

    #[test]
    fn vandermonde_holds() {
        assert!(check_vandermonde(8, 3, 11).unwrap().passed);
    }
}
