//! Frozen reference values, each obtained independently of the code under
//! test (hand expansion, closed-form roots, brute-force enumeration).

use num_complex::Complex64;
use rootseries::branch::{branch_pow, BranchPoint};
use rootseries::combinatorics::{
    compositions, count_equivalent, falling_factorial, gen_binomial, multiset_partitions,
    set_partitions, OrderedMultiset,
};
use rootseries::numeric::Scalar;
use rootseries::series::{
    base_from_twoterm, f_value, phi_coeff, phi_coeff_oracle, phi_coeff_twoterm, series_eval,
    taylor_coeff, taylor_coeff_with, BaseCoeffs, BaseFunction, Engine, ExactEngine, MultiIndex,
    Perturbation,
};
use rootseries::symbolic::{LaurentPoly, Rational, SymbolTable};
use rootseries::verify;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * b.norm().max(1e-300)
}

fn poly(text: &str, table: &std::sync::Arc<SymbolTable>) -> LaurentPoly {
    LaurentPoly::parse(text, table).unwrap()
}

#[test]
fn combinatorial_counts() {
    assert_eq!(falling_factorial(&q(5, 1), 3), q(60, 1));
    assert_eq!(falling_factorial(&q(1, 2), 2), q(-1, 4));
    assert_eq!(falling_factorial(&q(7, 3), 0), q(1, 1));
    assert_eq!(gen_binomial(&q(1, 2), 2), q(-1, 8));
    assert_eq!(gen_binomial(&q(3, 1), -2), q(0, 1));

    assert_eq!(compositions(0, 5).len(), 1);
    let c22: Vec<Vec<u32>> = compositions(2, 2)
        .iter()
        .map(|c| c.as_slice().to_vec())
        .collect();
    assert_eq!(c22, vec![vec![2], vec![1, 0, 1], vec![1, 1], vec![0, 2]]);
    assert_eq!(compositions(1, 0).len(), 1);

    assert_eq!(set_partitions(5, 1).len(), 1);
    assert_eq!(set_partitions(3, 2).len(), 3);
    assert_eq!(set_partitions(4, 2).len(), 7);
    assert!(set_partitions(2, 3).is_empty());

    let i = OrderedMultiset::new(vec![1, 1, 2], 2).unwrap();
    let parts = multiset_partitions(&i, 2);
    assert_eq!(parts.len(), 3);
    let counts: Vec<i64> = parts
        .iter()
        .map(|p| i64::try_from(count_equivalent(p)).unwrap())
        .collect();
    // ((1),(1,2)) twice, ((1,1),(2)) once
    assert_eq!(counts.iter().filter(|&&c| c == 2).count(), 2);
    assert_eq!(counts.iter().filter(|&&c| c == 1).count(), 1);

    let pair = OrderedMultiset::new(vec![1, 1], 1).unwrap();
    assert_eq!(multiset_partitions(&pair, 2).len(), 1);
    assert_eq!(
        count_equivalent(&multiset_partitions(&pair, 2)[0]),
        1.into()
    );
}

#[test]
fn integrality_of_simple_polynomials() {
    let t = SymbolTable::for_series(2, 0);
    assert!(poly("-1*c1^-3*c2", &t).is_integral());
    assert!(!poly("1/2*c2", &t).is_integral());
    assert!(LaurentPoly::zero(&t).is_integral());
}

#[test]
fn f_values() {
    let eng = ExactEngine::new(2, 1);
    let x = eng.indeterminate(1).unwrap();
    for a in 1..4 {
        assert!(f_value(&eng, &x, -1, a).unwrap().is_zero());
    }
    let f = f_value(&eng, &x, 1, 1).unwrap();
    let want = poly("1*alpha^-1*c1^-2*x1 + -2*c1^-3*c2", eng.table());
    assert_eq!(f.poly(), &want);
    assert_eq!(f.alpha_exponent(), &x);

    let linear = BaseFunction::numeric(
        BranchPoint::new(2.0, 0.0, 0).unwrap(),
        vec![Scalar::real(1.0)],
    )
    .unwrap();
    let v = rootseries::series::f_eval(&Scalar::from(0), 1, 1, &linear).unwrap();
    assert_eq!(v.as_numeric().unwrap().norm(), 0.0);
}

#[test]
fn first_order_coefficient_is_minus_alpha_gamma_over_c1() {
    let bp = BranchPoint::new(1.7, -0.4, 2).unwrap();
    let c1 = Complex64::new(0.3, 1.1);
    let base = BaseFunction::numeric(bp, vec![Scalar::Complex(c1), Scalar::real(0.5)]).unwrap();
    let gammas = [Complex64::new(0.25, -0.5), Complex64::new(3.0, 0.0)];
    let pert = Perturbation::new(gammas.iter().map(|&g| Scalar::Complex(g)).collect()).unwrap();
    for i in 1..=2 {
        let set = OrderedMultiset::new(vec![i], 2).unwrap();
        let want = -branch_pow(&bp, gammas[i - 1]) / c1;
        for v in [
            phi_coeff(&set, &pert, &base).unwrap(),
            phi_coeff_oracle(&set, &pert, &base).unwrap(),
        ] {
            assert!(close(v.as_numeric().unwrap(), want, 1e-14));
        }
    }
}

#[test]
fn second_order_symbolic_coefficients() {
    // 2 gamma alpha^(2 gamma - 1) / c1^2 - 2 c2 alpha^(2 gamma) / c1^3
    let eng = ExactEngine::new(2, 1);
    let g = eng.indeterminate(1).unwrap();
    let v = rootseries::series::phi_coeff_with(&eng, &[2], std::slice::from_ref(&g)).unwrap();
    assert_eq!(v.alpha_exponent(), &(&g + &g));
    assert_eq!(
        v.poly(),
        &poly("2*alpha^-1*c1^-2*x1 + -2*c1^-3*c2", eng.table())
    );

    // constant perturbation: -c2 / c1^3
    let base = BaseFunction::symbolic(BranchPoint::new(1.0, 0.0, 0).unwrap(), 2).unwrap();
    let pert = Perturbation::from_ints(&[0]);
    let t = taylor_coeff(&MultiIndex::new(vec![2]), &pert, &base).unwrap();
    let t = t.as_exact().unwrap().collapse();
    assert_eq!(t.poly(), &poly("-1*c1^-3*c2", t.table()));
    let o = phi_coeff_oracle(&OrderedMultiset::new(vec![1, 1], 1).unwrap(), &pert, &base).unwrap();
    assert_eq!(
        o.as_exact().unwrap().scale(&q(1, 2)),
        *taylor_coeff(&MultiIndex::new(vec![2]), &pert, &base)
            .unwrap()
            .as_exact()
            .unwrap()
    );
    assert!(taylor_coeff(&MultiIndex::new(vec![0]), &pert, &base).is_err());
}

#[test]
fn third_order_constant_perturbation_matches_series_reversion() {
    // inverting y = c1 h + c2 h^2 + c3 h^3 at y = -a gives
    // h = -a/c1 - c2 a^2/c1^3 - (2 c2^2 - c1 c3) a^3 / c1^5
    let eng = ExactEngine::new(3, 0);
    let t = taylor_coeff_with(&eng, &MultiIndex::new(vec![3]), &[eng.arg_int(0)])
        .unwrap()
        .collapse();
    assert_eq!(t.poly(), &poly("-2*c1^-5*c2^2 + 1*c1^-4*c3", eng.table()));
}

#[test]
fn quadratic_root_expansion() {
    // root of 1 - z^2 + a z near 1 is (a + sqrt(a^2 + 4)) / 2
    //   = 1 + a/2 + a^2/8 + 0 a^3 - a^4/128 + ...
    let want = [q(1, 2), q(1, 8), q(0, 1), q(-1, 128)];
    let one = BranchPoint::new(1.0, 0.0, 0).unwrap();
    let pert = Perturbation::from_ints(&[1]);
    let base = base_from_twoterm(&Scalar::from(-1), &Scalar::from(2), &one, 4).unwrap();
    for (k, w) in want.iter().enumerate() {
        let n = MultiIndex::new(vec![k as u32 + 1]);
        let v = taylor_coeff(&n, &pert, &base)
            .unwrap()
            .as_numeric()
            .unwrap();
        let w = rootseries::symbolic::rational_to_f64(w);
        assert!((v - Complex64::new(w, 0.0)).norm() < 1e-14, "k={k} {v}");

        let tt = phi_coeff_twoterm(&n, &pert, &Scalar::from(-1), &Scalar::from(2), &one).unwrap();
        let fact: f64 = (1..=k + 1).map(|i| i as f64).product();
        assert!((tt.as_numeric().unwrap() / fact - Complex64::new(w, 0.0)).norm() < 1e-14);
    }
    let a = Complex64::new(1e-2, 0.0);
    let exact = (a + (a * a + 4.0).sqrt()) / 2.0;
    let s = series_eval(&[a], 4, &pert, &base).unwrap();
    assert!((s - exact).norm() < 1e-11);
}

#[test]
fn twoterm_first_order() {
    let alpha = BranchPoint::new(0.8, 2.0, -1).unwrap();
    let (b, beta) = (Complex64::new(0.4, -0.3), Complex64::new(1.5, 0.5));
    let gamma = Complex64::new(-0.7, 0.1);
    let pert = Perturbation::new(vec![Scalar::Complex(gamma)]).unwrap();
    let v = phi_coeff_twoterm(
        &MultiIndex::new(vec![1]),
        &pert,
        &Scalar::Complex(b),
        &Scalar::Complex(beta),
        &alpha,
    )
    .unwrap()
    .as_numeric()
    .unwrap();
    let want = -branch_pow(&alpha, gamma) / (b * beta * branch_pow(&alpha, beta - 1.0));
    assert!(close(v, want, 1e-14));
}

#[test]
fn base_from_twoterm_coefficients() {
    let one = BranchPoint::new(1.0, 0.0, 0).unwrap();
    let coeffs =
        |b: i64, beta: i64| match base_from_twoterm(&Scalar::from(b), &Scalar::from(beta), &one, 4)
            .unwrap()
            .coeffs
        {
            BaseCoeffs::Numeric(c) => c.iter().map(|s| s.to_c64().re).collect::<Vec<f64>>(),
            BaseCoeffs::Symbolic(_) => unreachable!(),
        };
    assert_eq!(coeffs(-1, 1), vec![-1.0, 0.0, 0.0, 0.0]);
    assert_eq!(coeffs(-1, 2), vec![-2.0, -1.0, 0.0, 0.0]);
    assert!(base_from_twoterm(&Scalar::from(1), &Scalar::from(1), &one, 4).is_err());
}

#[test]
fn linear_base_series_and_root() {
    let base = BaseFunction::numeric(
        BranchPoint::new(2.0, 0.0, 0).unwrap(),
        vec![Scalar::real(1.0)],
    )
    .unwrap();
    let pert = Perturbation::from_ints(&[0]);
    for order in 1..=5 {
        for a in [0.0, 0.05, -0.1] {
            let s = series_eval(&[Complex64::new(a, 0.0)], order, &pert, &base).unwrap();
            assert!((s - Complex64::new(2.0 - a, 0.0)).norm() < 1e-15);
        }
    }
    let z = verify::newton_track(&pert, &base, &[Complex64::new(0.1, 0.0)], 1e-14, 0.5).unwrap();
    assert!((z - Complex64::new(1.9, 0.0)).norm() < 1e-14);
    let z = verify::newton_track(&pert, &base, &[Complex64::new(0.0, 0.0)], 1e-14, 0.5).unwrap();
    assert_eq!(z, Complex64::new(2.0, 0.0));
}

#[test]
fn twoterm_series_tracks_root_to_fifth_order() {
    let one = BranchPoint::new(1.0, 0.0, 0).unwrap();
    let pert = Perturbation::new(vec![Scalar::real(0.5)]).unwrap();
    let base = base_from_twoterm(&Scalar::from(-1), &Scalar::from(2), &one, 4).unwrap();
    let a = Complex64::new(1e-3, 0.0);
    let s = series_eval(&[a], 4, &pert, &base).unwrap();
    let z = verify::newton_track(&pert, &base, &[a], 1e-15, 0.1).unwrap();
    assert!((s - z).norm() < 10.0 * a.norm().powi(5));
}

#[test]
fn branch_pow_examples() {
    let any = Complex64::new(-1.3, 0.8);
    assert!(close(
        branch_pow(&BranchPoint::new(1.0, 0.0, 0).unwrap(), any),
        Complex64::new(1.0, 0.0),
        1e-15
    ));
    let half = branch_pow(
        &BranchPoint::new(1.0, 0.0, 1).unwrap(),
        Complex64::new(0.5, 0.0),
    );
    assert!(close(half, Complex64::new(-1.0, 0.0), 1e-15));
    let e = std::f64::consts::E;
    let sq = branch_pow(
        &BranchPoint::new(e, 0.0, 0).unwrap(),
        Complex64::new(2.0, 0.0),
    );
    assert!(close(sq, Complex64::new(e * e, 0.0), 1e-15));
}

#[test]
fn integrality_examples() {
    assert!(
        verify::integrality_check(&MultiIndex::new(vec![2]), &[Scalar::from(0)])
            .unwrap()
            .passed
    );
    assert!(
        verify::integrality_check(&MultiIndex::new(vec![1]), &[Scalar::from(1)])
            .unwrap()
            .passed
    );
    let eng = ExactEngine::new(2, 0);
    let n = MultiIndex::new(vec![2]);
    let v = taylor_coeff_with(&eng, &n, &[eng.arg_int(0)]).unwrap();
    let bad = verify::integrality_check_value(&verify::corrupt(&v), &n, &[0]);
    assert!(!bad.passed && bad.counterexample.is_some());
}

#[test]
fn identity_examples() {
    assert!(verify::check_f_prod(1, 1).unwrap().passed);
    assert!(verify::check_f_prod(3, 3).unwrap().passed);
    let r = verify::check_f_prod(4, 2).unwrap();
    assert!(r.passed);
    assert_eq!(set_partitions(4, 2).len(), 7);

    let (lhs, rhs) = verify::nu_sides(3, 1).unwrap();
    assert_eq!(lhs, rhs);
    // (s)(s - 1) with s = nu - 1 + x1 + x2 + x3
    assert_eq!(
        rhs.to_string(),
        "2 + -3*x3 + 1*x3^2 + -3*x2 + 2*x2*x3 + 1*x2^2 + -3*x1 + 2*x1*x3 + 2*x1*x2 + 1*x1^2 + -3*nu + 2*nu*x3 + 2*nu*x2 + 2*nu*x1 + 1*nu^2"
    );
    let (_, rhs) = verify::nu_sides(4, 4).unwrap();
    assert_eq!(rhs.to_string(), "1*nu^3");
    assert!(verify::check_nu(4, 2).unwrap().passed);

    assert!(verify::check_deriv_set(3, 4, 5).unwrap().passed);
    assert!(verify::check_newton_series(5, 3, 9).unwrap().passed);
}

#[test]
fn transform_examples() {
    let case = |beta2: Scalar| verify::TransformCase {
        gammas: vec![Scalar::from(1)],
        b: Scalar::from(-1),
        beta1: Scalar::from(2),
        beta2,
        alpha1: BranchPoint::new(1.0, 0.0, 0).unwrap(),
        alpha2: None,
        order: 4,
    };
    assert!(
        verify::transform_check_exact(&case(Scalar::from(1)))
            .unwrap()
            .passed
    );
    assert!(
        verify::transform_check_numeric(&case(Scalar::from(2)), 1e-9)
            .unwrap()
            .passed
    );
    assert!(
        verify::transform_check_exact(&case(Scalar::from(2)))
            .unwrap()
            .passed
    );
}
