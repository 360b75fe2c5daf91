use hardy_core::functionals::RadialWeight;
use hardy_core::quadrature::{
    classify_finiteness, integrate, Chart, ClassifyOptions, FinitenessVerdict, LogFn, PositiveFn, Radius, Tolerances,
};
use hardy_core::special::ln_add_exp;
use proptest::prelude::*;

// ∫₁^∞ sinh^{-3}, from the antiderivative evaluated in 30-digit arithmetic.
const SINH_CUBE_TAIL: f64 = 0.172674347271984723;

#[test]
fn closed_form_oracles() {
    let tol = Tolerances::default();
    let r = integrate(&PositiveFn::new(|x: f64| x.powi(-2)), 1.0, f64::INFINITY, &tol).unwrap();
    assert!(r.converged && (r.value - 1.0).abs() < 1e-9);
    let r = integrate(&PositiveFn::new(|x: f64| x.powf(-0.5)), 0.0, 1.0, &tol).unwrap();
    assert!(r.converged && (r.value - 2.0).abs() < 1e-9);
    let r = integrate(&PositiveFn::new(|x: f64| x.sinh().powi(-3)), 1.0, f64::INFINITY, &tol).unwrap();
    assert!(((r.value - SINH_CUBE_TAIL) / SINH_CUBE_TAIL).abs() < 1e-8);
}

#[test]
fn converged_results_honour_their_tolerance() {
    let tol = Tolerances::default();
    for alpha in [-0.9, -0.3, 0.0, 1.5, 4.0] {
        let f = PositiveFn::new(move |x: f64| x.powf(alpha) * (-x).exp());
        let r = integrate(&f, 0.0, f64::INFINITY, &tol).unwrap();
        assert!(r.converged);
        assert!(
            r.abs_err <= tol.abs_tol.max(tol.rel_tol * r.value.abs()),
            "alpha {alpha}: {r:?}"
        );
    }
}

fn piecewise_integral(inner: f64, outer: f64) -> f64 {
    1.0 / (inner + 1.0) - 1.0 / (outer + 1.0)
}

/// `∫_0^∞ f` for `f = ρ^s` on `(0, 1)` and `ρ^{-2}` beyond, or the mirror.
fn zero_probe(s: f64) -> FinitenessVerdict {
    let w = RadialWeight::piecewise(s, -2.0);
    classify_finiteness(
        &LogFn::new(move |r: Radius| w.ln_value(r)).with_breakpoints(vec![1.0]),
        Chart::Log,
        &Tolerances::default(),
        &ClassifyOptions::default(),
    )
    .unwrap()
}

fn infinity_probe(s: f64) -> FinitenessVerdict {
    let w = RadialWeight::piecewise(0.0, s);
    classify_finiteness(
        &LogFn::new(move |r: Radius| w.ln_value(r)).with_breakpoints(vec![1.0]),
        Chart::Log,
        &Tolerances::default(),
        &ClassifyOptions::default(),
    )
    .unwrap()
}

/// `e^{cρ}` beyond 1 and `1` below, classified in the sinh chart.
fn exponential_probe(c: f64) -> FinitenessVerdict {
    classify_finiteness(
        &LogFn::new(move |r: Radius| if r.value < 1.0 { 0.0 } else { c * (r.value - 1.0) }).with_breakpoints(vec![1.0]),
        Chart::LogSinh { scale: 1.0 },
        &Tolerances::default(),
        &ClassifyOptions::default(),
    )
    .unwrap()
}

#[test]
fn classification_stress_grid() {
    let mut checked = 0;
    // Exponents at zero, band |s + 1| ≤ 0.05 excluded.
    for i in 0..20 {
        let s = -2.5 + 0.13 * f64::from(i);
        if (s + 1.0).abs() <= 0.05 {
            continue;
        }
        let v = zero_probe(s);
        if s > -1.0 {
            let want = piecewise_integral(s, -2.0);
            assert!(((v.value().unwrap() - want) / want).abs() < 1e-8, "s {s}: {v:?}");
        } else {
            assert!(matches!(v, FinitenessVerdict::DivergentNearZero { .. }), "s {s}: {v:?}");
        }
        checked += 1;
    }
    for i in 0..11 {
        let s = -3.0 + 0.19 * f64::from(i);
        if (s + 1.0).abs() <= 0.05 {
            continue;
        }
        let v = infinity_probe(s);
        assert_eq!(v.is_finite(), s < -1.0, "s {s}: {v:?}");
        if s >= -1.0 {
            assert!(matches!(v, FinitenessVerdict::DivergentAtInfinity { .. }));
        }
        checked += 1;
    }
    for c in [-3.0, -1.0, -0.5, -0.2, -0.08, 0.08, 0.3, 1.0, 2.0, 5.0] {
        let v = exponential_probe(c);
        assert_eq!(v.is_finite(), c < 0.0, "c {c}: {v:?}");
        if c < 0.0 {
            let want = 1.0 - 1.0 / c;
            assert!(((v.value().unwrap() - want) / want).abs() < 1e-8, "c {c}: {v:?}");
        }
        checked += 1;
    }
    assert!(checked >= 40, "only {checked} grid points");
}

#[test]
fn fitted_exponents_are_reported() {
    match zero_probe(-1.5) {
        FinitenessVerdict::DivergentNearZero { fitted_exponent } => assert!((fitted_exponent + 1.5).abs() < 1e-6),
        v => panic!("{v:?}"),
    }
    match infinity_probe(-1.0) {
        FinitenessVerdict::DivergentAtInfinity { fitted_rate, .. } => assert!((fitted_rate + 1.0).abs() < 1e-6),
        v => panic!("{v:?}"),
    }
    assert!(matches!(infinity_probe(-1.03), FinitenessVerdict::Indeterminate { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exact_on_pure_powers(alpha in -0.95f64..3.0, eps in 1e-3f64..0.5, big in 1.0f64..50.0) {
        prop_assume!((alpha + 1.0).abs() > 0.05);
        let tol = Tolerances { abs_tol: 0.0, rel_tol: 1e-12, ..Tolerances::default() };
        let r = integrate(&PositiveFn::new(move |x: f64| x.powf(alpha)), eps, big, &tol).unwrap();
        let want = (big.powf(alpha + 1.0) - eps.powf(alpha + 1.0)) / (alpha + 1.0);
        prop_assert!(((r.value - want) / want).abs() < 1e-10, "got {} want {}", r.value, want);
    }

    #[test]
    fn linear_in_the_integrand(
        a in 0.1f64..10.0, b in 0.1f64..10.0,
        s1 in -0.9f64..2.0, t1 in -4.0f64..-1.1,
        s2 in -0.9f64..2.0, t2 in -4.0f64..-1.1,
    ) {
        let tol = Tolerances::default();
        let f = RadialWeight::piecewise(s1, t1);
        let g = RadialWeight::piecewise(s2, t2);
        let (la, lb) = (a.ln(), b.ln());
        let fi = integrate(&LogFn::new(|r: Radius| f.ln_value(r)).with_breakpoints(vec![1.0]), 0.0, f64::INFINITY, &tol).unwrap();
        let gi = integrate(&LogFn::new(|r: Radius| g.ln_value(r)).with_breakpoints(vec![1.0]), 0.0, f64::INFINITY, &tol).unwrap();
        let sum = LogFn::new(|r: Radius| ln_add_exp(la + f.ln_value(r), lb + g.ln_value(r))).with_breakpoints(vec![1.0]);
        let si = integrate(&sum, 0.0, f64::INFINITY, &tol).unwrap();
        let combined = si.abs_err + a * fi.abs_err + b * gi.abs_err;
        prop_assert!((si.value - a * fi.value - b * gi.value).abs() <= 10.0 * combined,
            "diff {} vs err {}", (si.value - a * fi.value - b * gi.value).abs(), combined);
    }
}
