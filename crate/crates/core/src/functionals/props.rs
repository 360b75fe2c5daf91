//! Numerical checks of the two auxiliary inequalities: the weighted
//! Hardy-type inequality with a `b`-weight and a monotone `F`, and the
//! averaging inequality with constant `p′`.

use serde::Serialize;

use super::{merged_breaks, RadialWeight};
use super::{root_verdict, scaled_ln, FunctionalError, ShapeDensity, TestFunction, WeightedDensity};
use crate::exponents::ExponentConfig;
use crate::quadrature::{
    classify_end, classify_finiteness, ClassifyOptions, Cumulative, CumulativeError, Direction, End, FinitenessVerdict,
    LogFn, Radius, Tolerances,
};
use crate::spaces::SpaceModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop2Report {
    /// `(∫ F^p W^{−p} λ₁ w)^{1/p}` with `F`, `W` the ball integrals of `f`, `w`.
    pub lhs: FinitenessVerdict,
    /// `(∫ λ₁ f^p w^{1−p})^{1/p}`
    pub rhs: FinitenessVerdict,
    pub ratio: Option<f64>,
    /// The constant `p′`.
    pub bound: f64,
    pub ok: bool,
    /// The right-hand side is infinite, so the inequality says nothing.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop1Report {
    /// `(∫ F^q λ₁ u)^{1/q}`
    pub lhs: FinitenessVerdict,
    /// `(∫ Ũ^{r/q} B̃^{−r/q} λ₁ b)^{1/r}`
    pub mixed: FinitenessVerdict,
    /// `(∫ λ₁ F^p b)^{1/p}`
    pub energy: FinitenessVerdict,
    /// `(r/p)^{1/r} · mixed · energy`, when both are finite.
    pub rhs: Option<f64>,
    pub ok: bool,
    pub vacuous: bool,
}

fn value_of(v: &FinitenessVerdict) -> Option<f64> {
    v.result().map(|q| q.value)
}

/// `ok` rule shared by both checks. Only a right-hand side known to be
/// infinite makes the inequality vacuous; an indeterminate one decides nothing.
fn judge(lhs: Option<f64>, rhs: Option<f64>, rhs_infinite: bool, tol: f64) -> (bool, bool) {
    match (lhs, rhs) {
        (Some(l), Some(r)) => (l <= r * (1.0 + tol), false),
        (Some(_), None) => (rhs_infinite, rhs_infinite),
        (None, _) => (false, rhs.is_none() && rhs_infinite),
    }
}

pub fn check_prop2(
    f: &TestFunction,
    w: &RadialWeight,
    p: f64,
    space: &SpaceModel,
    tol: f64,
) -> Result<Prop2Report, FunctionalError> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(FunctionalError::InvalidInput(format!(
            "exponent p must satisfy 1 < p < inf, got {p}"
        )));
    }
    w.validate().map_err(FunctionalError::InvalidInput)?;
    f.validate().map_err(FunctionalError::InvalidInput)?;
    let tolerances = Tolerances::default().relative_only();
    let opts = ClassifyOptions::default();
    let chart = space.chart().merge(w.chart()).merge(f.chart());
    let breaks = merged_breaks(&[f.breakpoints(), w.breakpoints()]);
    let w_density = WeightedDensity::new(space.clone(), w.clone(), 1.0);

    if let Some(v) = classify_end(&w_density, chart, End::Infinity, &opts)? {
        if !v.is_divergent() {
            return Err(FunctionalError::Precondition(format!(
                "weight condition: cannot confirm that the integral of w over the space is infinite ({})",
                v.label()
            )));
        }
    } else {
        return Err(FunctionalError::Precondition(
            "weight condition: the integral of w over the space is finite".into(),
        ));
    }
    let w_ball = Cumulative::build(w_density, chart, Direction::FromZero, &tolerances, &opts).map_err(|e| match e {
        CumulativeError::NotIntegrable(v) => FunctionalError::Precondition(format!(
            "weight condition: the integral of w over small balls is not finite ({})",
            v.label()
        )),
        CumulativeError::Quad(q) => q.into(),
    })?;

    let rhs_integrand = LogFn::new(|t: Radius| {
        let l = f.ln_value(t);
        if l == f64::NEG_INFINITY {
            return l;
        }
        space.ln_density_at(t) + p * l + (1.0 - p) * w.ln_value(t)
    })
    .with_breakpoints(breaks.clone());
    let rhs = root_verdict(classify_finiteness(&rhs_integrand, chart, &tolerances, &opts)?, p);

    let f_ball = Cumulative::build(
        ShapeDensity {
            space: space.clone(),
            f: f.clone(),
            power: 1.0,
        },
        chart,
        Direction::FromZero,
        &tolerances,
        &opts,
    );
    let lhs = match f_ball {
        Ok(f_ball) => {
            let ln_scale = f.ln_scale;
            let integrand = LogFn::new(|t: Radius| {
                let big_f = f_ball.ln_at_radius(t).unwrap_or(f64::NAN);
                if big_f == f64::NEG_INFINITY {
                    return big_f;
                }
                let big_w = w_ball.ln_at_radius(t).unwrap_or(f64::NAN);
                p * (big_f + ln_scale - big_w) + space.ln_density_at(t) + w.ln_value(t)
            })
            .with_breakpoints(breaks);
            root_verdict(classify_finiteness(&integrand, chart, &tolerances, &opts)?, p)
        }
        Err(CumulativeError::NotIntegrable(v)) => v,
        Err(CumulativeError::Quad(q)) => return Err(q.into()),
    };

    let bound = p / (p - 1.0);
    let (l, r) = (value_of(&lhs), value_of(&rhs));
    let ratio = match (l, r) {
        (Some(l), Some(r)) if r > 0.0 => Some(l / r),
        _ => None,
    };
    let (ok, vacuous) = judge(l, r.map(|r| bound * r), rhs.is_divergent(), tol);
    Ok(Prop2Report {
        lhs,
        rhs,
        ratio,
        bound,
        ok,
        vacuous,
    })
}

/// Samples `F` on a log grid and rejects visible decreases.
fn assert_nondecreasing(f: &TestFunction) -> Result<(), FunctionalError> {
    let mut prev = f64::NEG_INFINITY;
    for k in 0..=1000 {
        let t = Radius::from_ln(-14.0 + 28.0 * k as f64 / 1000.0);
        let l = f.ln_value(t);
        if l < prev - 1e-12 * prev.abs().max(1.0) {
            return Err(FunctionalError::Precondition(format!(
                "F must be nondecreasing, but decreases near t = {:.6e}",
                t.value
            )));
        }
        prev = l;
    }
    Ok(())
}

pub fn check_prop1(
    big_f: &TestFunction,
    u: &RadialWeight,
    b: &RadialWeight,
    e: &ExponentConfig,
    space: &SpaceModel,
    tol: f64,
) -> Result<Prop1Report, FunctionalError> {
    if !big_f.monotone {
        return Err(FunctionalError::Precondition("F must be declared nondecreasing".into()));
    }
    big_f.validate().map_err(FunctionalError::InvalidInput)?;
    u.validate().map_err(FunctionalError::InvalidInput)?;
    b.validate().map_err(FunctionalError::InvalidInput)?;
    assert_nondecreasing(big_f)?;
    let tolerances = Tolerances::default().relative_only();
    let opts = ClassifyOptions::default();
    let chart = space.chart().merge(u.chart()).merge(b.chart()).merge(big_f.chart());
    let breaks = merged_breaks(&[big_f.breakpoints(), u.breakpoints(), b.breakpoints()]);

    let b_density = WeightedDensity::new(space.clone(), b.clone(), 1.0);
    match classify_end(&b_density, chart, End::Zero, &opts)? {
        Some(v) if v.is_divergent() => {}
        Some(v) => {
            return Err(FunctionalError::Precondition(format!(
                "b condition: cannot confirm that the integral of b over the space is infinite ({})",
                v.label()
            )))
        }
        None => {
            return Err(FunctionalError::Precondition(
                "b condition: the integral of b over the space is finite".into(),
            ))
        }
    }
    let b_tail =
        Cumulative::build(b_density, chart, Direction::ToInfinity, &tolerances, &opts).map_err(|e| match e {
            CumulativeError::NotIntegrable(v) => FunctionalError::Precondition(format!(
                "b condition: the integral of b outside balls is not finite ({})",
                v.label()
            )),
            CumulativeError::Quad(q) => q.into(),
        })?;
    let u_tail = Cumulative::build(
        WeightedDensity::new(space.clone(), u.clone(), 1.0),
        chart,
        Direction::ToInfinity,
        &tolerances,
        &opts,
    )
    .map_err(|e| match e {
        CumulativeError::NotIntegrable(v) => FunctionalError::DivergentU(v),
        CumulativeError::Quad(q) => q.into(),
    })?;

    let (p, q, r) = (e.p, e.q, e.r);
    let lhs_integrand = LogFn::new(|t: Radius| {
        let l = big_f.ln_value(t);
        if l == f64::NEG_INFINITY {
            return l;
        }
        q * l + space.ln_density_at(t) + u.ln_value(t)
    })
    .with_breakpoints(breaks.clone());
    let lhs = root_verdict(classify_finiteness(&lhs_integrand, chart, &tolerances, &opts)?, q);

    let k = e.ratio_rq;
    let mixed_integrand = LogFn::new(|t: Radius| {
        let du = u_tail.ln_at_radius(t).unwrap_or(f64::NAN);
        let db = b_tail.ln_at_radius(t).unwrap_or(f64::NAN);
        k * (du - db) + space.ln_density_at(t) + b.ln_value(t)
    })
    .with_breakpoints(breaks.clone());
    let mixed = root_verdict(classify_finiteness(&mixed_integrand, chart, &tolerances, &opts)?, r);

    let energy_integrand = LogFn::new(|t: Radius| {
        let l = big_f.ln_value(t);
        if l == f64::NEG_INFINITY {
            return l;
        }
        scaled_ln(p, l) + space.ln_density_at(t) + b.ln_value(t)
    })
    .with_breakpoints(breaks);
    let energy = root_verdict(classify_finiteness(&energy_integrand, chart, &tolerances, &opts)?, p);

    let rhs = match (value_of(&mixed), value_of(&energy)) {
        (Some(m), Some(en)) => Some((r / p).powf(1.0 / r) * m * en),
        _ => None,
    };
    let unknown = |v: &FinitenessVerdict| matches!(v, FinitenessVerdict::Indeterminate { .. });
    let rhs_infinite = (mixed.is_divergent() || energy.is_divergent()) && !unknown(&mixed) && !unknown(&energy);
    let (ok, vacuous) = judge(value_of(&lhs), rhs, rhs_infinite, tol);
    Ok(Prop1Report {
        lhs,
        mixed,
        energy,
        rhs,
        ok,
        vacuous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn line() -> SpaceModel {
        SpaceModel::homogeneous(1.0).unwrap()
    }

    #[test]
    fn prop2_exponential_on_line() {
        let rep = check_prop2(&TestFunction::exp_decay(1.0), &RadialWeight::unit(), 2.0, &line(), 1e-6).unwrap();
        // lhs² = ∫ (1-e^{-t})²/t² = 2 ln 2
        assert_relative_eq!(
            value_of(&rep.lhs).unwrap(),
            (2.0 * 2f64.ln()).sqrt(),
            max_relative = 1e-8
        );
        assert_relative_eq!(value_of(&rep.rhs).unwrap(), 0.5f64.sqrt(), max_relative = 1e-8);
        assert!(rep.ok && !rep.vacuous);
        assert!(rep.ratio.unwrap() <= 2.0);
    }

    #[test]
    fn prop2_constant_function_is_vacuous() {
        let rep = check_prop2(&TestFunction::constant(), &RadialWeight::unit(), 2.0, &line(), 1e-6).unwrap();
        assert!(rep.lhs.is_divergent() || matches!(rep.lhs, FinitenessVerdict::Indeterminate { .. }));
        assert!(!rep.ok);
        assert!(rep.vacuous);
    }

    #[test]
    fn prop2_rejects_integrable_weight() {
        let w = RadialWeight::piecewise(0.0, -2.0);
        let err = check_prop2(&TestFunction::exp_decay(1.0), &w, 2.0, &line(), 1e-6).unwrap_err();
        assert!(matches!(err, FunctionalError::Precondition(_)));
    }

    #[test]
    fn prop1_precondition_on_b() {
        let e = ExponentConfig::new(2.0, 1.0).unwrap();
        let u = RadialWeight::piecewise(0.0, -2.0);
        let b = RadialWeight::piecewise(0.0, -2.0);
        let err = check_prop1(&TestFunction::constant(), &u, &b, &e, &line(), 1e-6).unwrap_err();
        assert!(matches!(err, FunctionalError::Precondition(_)), "{err}");
        let not_monotone = TestFunction::exp_decay(1.0);
        assert!(check_prop1(&not_monotone, &u, &RadialWeight::power(-2.0), &e, &line(), 1e-6).is_err());
    }

    #[test]
    fn prop1_ramp_on_line() {
        let e = ExponentConfig::new(2.0, 1.0).unwrap();
        let u = RadialWeight::piecewise(0.0, -2.0);
        let b = RadialWeight::power(-2.0);
        let rep = check_prop1(&TestFunction::ramp(1.0, 1.0), &u, &b, &e, &line(), 1e-6).unwrap();
        // lhs = ∫_0^1 t dt + ∫_1^∞ t^{-2} = 3/2; mixed² = ∫ Ũ² = 10/3; energy² = ∫_0^1 1 + ∫_1^∞ t^{-2} = 2
        assert_relative_eq!(value_of(&rep.lhs).unwrap(), 1.5, max_relative = 1e-8);
        assert_relative_eq!(
            value_of(&rep.mixed).unwrap(),
            (10.0f64 / 3.0).sqrt(),
            max_relative = 1e-8
        );
        assert_relative_eq!(value_of(&rep.energy).unwrap(), 2f64.sqrt(), max_relative = 1e-8);
        assert!(rep.ok && !rep.vacuous);
    }
}
