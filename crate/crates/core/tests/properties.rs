use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rootseries::branch::{branch_pow, BranchPoint};
use rootseries::combinatorics::{compositions, gen_binomial, set_partitions, Composition};
use rootseries::numeric::{Scalar, DOUBLE_PRECISION};
use rootseries::problem::{BaseSpec, Mode, ProblemSpec};
use rootseries::series::{
    phi_coeff_with, BaseFunction, ExactEngine, MultiIndex, NumericEngine, Oracle, Perturbation,
};
use rootseries::symbolic::{rational_to_f64, LaurentPoly, Rational, Symbol, SymbolTable};
use rootseries::verify;

fn table() -> Arc<SymbolTable> {
    SymbolTable::for_series(2, 1)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| *q != Rational::from_integer(0.into()))
}

// symbols: alpha, c1, c2, x1
fn poly() -> impl Strategy<Value = LaurentPoly> {
    let mono =
        (-2i32..=2, -2i32..=2, 0i32..=2, 0i32..=2).prop_map(|(a, c1, c2, x)| vec![a, c1, c2, x]);
    prop::collection::vec((mono, rational()), 0..5)
        .prop_map(|terms| LaurentPoly::from_terms(&table(), terms).unwrap())
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn branch_point() -> impl Strategy<Value = BranchPoint> {
    (0.3f64..3.0, -3.0f64..3.0, -2i64..=2).prop_map(|(r, t, n)| BranchPoint::new(r, t, n).unwrap())
}

fn dyadic() -> impl Strategy<Value = f64> {
    (-64i32..=64).prop_map(|k| k as f64 / 8.0)
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &LaurentPoly::one(&table()), p.clone());
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(), q in poly(), vals in prop::collection::vec(complex(), 4)) {
        prop_assume!(vals.iter().all(|v| v.norm() > 0.2));
        let syms = [Symbol::Alpha, Symbol::C(1), Symbol::C(2), Symbol::X(1)];
        let b: HashMap<Symbol, Complex64> = syms.iter().copied().zip(vals).collect();
        let (ep, eq) = (p.eval(&b).unwrap(), q.eval(&b).unwrap());
        let scale = ep.norm().max(1.0) * eq.norm().max(1.0);
        prop_assert!(((&p * &q).eval(&b).unwrap() - ep * eq).norm() <= 1e-12 * scale);
        prop_assert!(((&p + &q).eval(&b).unwrap() - (ep + eq)).norm() <= 1e-12 * scale);
    }

    #[test]
    fn exact_and_numeric_engines_agree(
        gammas in prop::collection::vec(rational(), 1..=2),
        c in prop::collection::vec(nonzero_rational(), 4),
        alpha in branch_point(),
        seed in 0usize..1000,
    ) {
        let d = gammas.len();
        let all = MultiIndex::graded(d, 4);
        let n = &all[seed % all.len()];
        let exact = ExactEngine::new(4, 0);
        let args: Vec<_> = gammas.iter().map(|g| exact.constant(g.clone())).collect();
        let sym = phi_coeff_with(&exact, n.as_slice(), &args).unwrap();
        let bindings: HashMap<Symbol, Complex64> = c
            .iter()
            .enumerate()
            .map(|(k, q)| (Symbol::C(k as u32 + 1), Complex64::new(rational_to_f64(q), 0.0)))
            .collect();
        let from_exact = sym.eval(&alpha, &bindings).unwrap();

        let coeffs: Vec<Scalar> = c.iter().cloned().map(Scalar::Rational).collect();
        let num = NumericEngine::<Complex64>::new(&alpha, &coeffs, DOUBLE_PRECISION).unwrap();
        let g: Vec<Complex64> = gammas.iter().map(|q| Complex64::new(rational_to_f64(q), 0.0)).collect();
        let direct = phi_coeff_with(&num, n.as_slice(), &g).unwrap();
        prop_assert!((from_exact - direct).norm() <= 1e-9 * direct.norm().max(f64::MIN_POSITIVE), "{} vs {}", from_exact, direct);
    }

    #[test]
    fn coefficients_are_symmetric_in_letters(g in prop::collection::vec(rational(), 2), m0 in 0u32..=3, m1 in 0u32..=3) {
        prop_assume!(m0 + m1 > 0);
        let eng = ExactEngine::new(6, 0);
        let args: Vec<_> = g.iter().map(|q| eng.constant(q.clone())).collect();
        let swapped = vec![args[1].clone(), args[0].clone()];
        let a = phi_coeff_with(&eng, &[m0, m1], &args).unwrap();
        let b = phi_coeff_with(&eng, &[m1, m0], &swapped).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn memo_does_not_change_the_oracle(g in prop::collection::vec(rational(), 1..=2), seed in 0usize..1000) {
        let eng = ExactEngine::new(4, 0);
        let args: Vec<_> = g.iter().map(|q| eng.constant(q.clone())).collect();
        let all = MultiIndex::graded(g.len(), 4);
        let n = &all[seed % all.len()];
        let memo = Oracle::new(&eng, args.clone()).coeff(n.as_slice()).unwrap();
        let plain = Oracle::unmemoized(&eng, args).coeff(n.as_slice()).unwrap();
        prop_assert_eq!(memo, plain);
    }

    #[test]
    fn branch_pow_adds_exponents(z in branch_point(), g1 in complex(), g2 in complex()) {
        let lhs = branch_pow(&z, g1 + g2);
        let rhs = branch_pow(&z, g1) * branch_pow(&z, g2);
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn vandermonde(x in rational(), y in rational(), n in 0i64..8) {
        let lhs = gen_binomial(&(&x + &y), n);
        let rhs = (0..=n).fold(Rational::from_integer(0.into()), |acc, k| acc + gen_binomial(&x, k) * gen_binomial(&y, n - k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn spec_round_trip(
        alpha in branch_point(),
        coeffs in prop::collection::vec((dyadic(), dyadic()), 1..4),
        gammas in prop::collection::vec(rational(), 1..3),
        order in 1u32..6,
        radius in prop::option::of(dyadic()),
    ) {
        prop_assume!(coeffs[0] != (0.0, 0.0));
        let spec = ProblemSpec {
            base: BaseSpec::Direct {
                alpha,
                coeffs: coeffs.iter().map(|&(re, im)| Scalar::Complex(Complex64::new(re, im))).collect(),
            },
            gammas: gammas.into_iter().map(Scalar::Rational).collect(),
            mode: Mode::Numeric,
            max_order: order,
            a_values: None,
            radius: radius.map(f64::abs).filter(|r| *r > 0.0),
        };
        let back = ProblemSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn newton_at_zero_is_alpha(alpha in branch_point(), c1 in complex(), c2 in complex(), g in complex()) {
        prop_assume!(c1.norm() > 0.1);
        let base = BaseFunction::numeric(alpha, vec![Scalar::Complex(c1), Scalar::Complex(c2)]).unwrap();
        let pert = Perturbation::new(vec![Scalar::Complex(g)]).unwrap();
        let z = verify::newton_track(&pert, &base, &[Complex64::new(0.0, 0.0)], 1e-14, 0.25).unwrap();
        prop_assert!(close(z, alpha.value(), 1e-15));
    }

    #[test]
    fn identity_transform_holds(beta1 in prop::sample::select(vec![(1, 2), (2, 1), (3, 1), (5, 2)]), g in rational()) {
        let case = verify::TransformCase {
            gammas: vec![Scalar::Rational(g)],
            b: Scalar::from(-1),
            beta1: Scalar::Rational(Rational::new(beta1.0.into(), beta1.1.into())),
            beta2: Scalar::from(1),
            alpha1: BranchPoint::new(1.0, 0.0, 0).unwrap(),
            alpha2: None,
            order: 3,
        };
        let r = verify::transform_check(&case, 1e-9).unwrap();
        prop_assert!(r.passed, "{}", r);
    }
}

#[test]
fn compositions_match_brute_force() {
    for r in 0..=4u32 {
        for bound in 0..=4u32 {
            let len = bound as usize + 1;
            let mut want = BTreeSet::new();
            let mut mu = vec![0u32; len];
            loop {
                let total: u32 = mu.iter().sum();
                let weight: u32 = mu.iter().enumerate().map(|(i, &m)| i as u32 * m).sum();
                if total == r && weight <= bound {
                    want.insert(Composition::new(mu.clone()));
                }
                let mut i = 0;
                while i < len && mu[i] == r {
                    mu[i] = 0;
                    i += 1;
                }
                if i == len {
                    break;
                }
                mu[i] += 1;
            }
            let got = compositions(r, bound);
            let set: BTreeSet<Composition> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len());
            assert_eq!(set, want, "r={r} bound={bound}");
            let tails: Vec<&[u32]> = got.iter().map(|c| c.tail()).collect();
            let mut sorted = tails.clone();
            sorted.sort();
            assert_eq!(tails, sorted);
        }
    }
}

#[test]
fn set_partition_counts_follow_the_recurrence() {
    let mut s = vec![vec![0u64; 9]; 9];
    s[0][0] = 1;
    for n in 1..=8 {
        for k in 1..=n {
            s[n][k] = k as u64 * s[n - 1][k] + s[n - 1][k - 1];
        }
    }
    for (n, row) in s.iter().enumerate().skip(1) {
        for (k, &want) in row.iter().enumerate().take(n + 1).skip(1) {
            assert_eq!(set_partitions(n, k).len() as u64, want, "S({n},{k})");
        }
    }
}
