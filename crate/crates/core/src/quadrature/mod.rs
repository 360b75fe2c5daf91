//! Adaptive quadrature for positive integrands on `(0, ∞)`.
//!
//! Integrands are evaluated through their logarithm ([`LogIntegrand`]) and
//! integrated in a chart coordinate ([`Chart`]) in which both endpoint regions
//! look like exponentials. The finite core is covered by unit panels, split at
//! the integrand's breakpoints and refined globally by bisection of the panel
//! with the largest error. Each tail is covered by panels of doubling width
//! until a panel and the extrapolated remainder are both negligible; the
//! remainder is charged to the error estimate.

mod chart;
mod cumulative;
mod kronrod;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chart::{Chart, Radius, TailFamily};
pub use cumulative::{Cumulative, CumulativeError, Direction};
pub use kronrod::{gk15, PanelEstimate};

use crate::special::ln_add_exp;

/// Chart coordinates are confined to `[-CHART_LIMIT, CHART_LIMIT]`.
pub const CHART_LIMIT: f64 = 700.0;

/// Fraction of `rel_tol` below which a tail panel counts as negligible.
const TAIL_FRACTION: f64 = 1e-3;
const MAX_TAIL_WIDTH: f64 = 32.0;
/// Fitted slopes this close to zero are read as an exact critical power.
const CRITICAL_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature: invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("quadrature: integrand returned {value} at rho = {rho}")]
    NonFinite { rho: f64, value: f64 },
}

/// A positive integrand, evaluated through `ln f(ρ)`.
///
/// Returning `-∞` means `f(ρ) = 0`; `NaN` or `+∞` is reported as an
/// evaluation error at that radius.
pub trait LogIntegrand: Sync {
    fn ln_value(&self, rho: Radius) -> f64;

    /// Radii where the integrand is not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<T: LogIntegrand + ?Sized> LogIntegrand for &T {
    fn ln_value(&self, rho: Radius) -> f64 {
        (**self).ln_value(rho)
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

/// Wraps a plain `f(ρ) ≥ 0`.
pub struct PositiveFn<F> {
    f: F,
    breaks: Vec<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> PositiveFn<F> {
    pub fn new(f: F) -> Self {
        Self { f, breaks: Vec::new() }
    }

    pub fn with_breakpoints(mut self, breaks: Vec<f64>) -> Self {
        self.breaks = breaks;
        self
    }
}

impl<F: Fn(f64) -> f64 + Sync> LogIntegrand for PositiveFn<F> {
    fn ln_value(&self, rho: Radius) -> f64 {
        let v = (self.f)(rho.value);
        if v < 0.0 {
            f64::NAN
        } else {
            v.ln()
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }
}

/// Wraps a log-evaluator `ρ ↦ ln f(ρ)`.
pub struct LogFn<F> {
    f: F,
    breaks: Vec<f64>,
}

impl<F: Fn(Radius) -> f64 + Sync> LogFn<F> {
    pub fn new(f: F) -> Self {
        Self { f, breaks: Vec::new() }
    }

    pub fn with_breakpoints(mut self, breaks: Vec<f64>) -> Self {
        self.breaks = breaks;
        self
    }
}

impl<F: Fn(Radius) -> f64 + Sync> LogIntegrand for LogFn<F> {
    fn ln_value(&self, rho: Radius) -> f64 {
        (self.f)(rho)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_evals: 2_000_000,
        }
    }
}

impl Tolerances {
    /// Same tolerances with no absolute floor: only relative accuracy counts.
    pub fn relative_only(&self) -> Self {
        Self { abs_tol: 0.0, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    /// `ln value`; stays finite when `value` itself over- or underflows.
    pub ln_value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Integral in log form together with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LogQuad {
    pub ln_value: f64,
    pub ln_err: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// A tail reached the chart limit without becoming negligible.
    pub tail_unresolved: bool,
}

impl LogQuad {
    pub fn into_result(self) -> QuadResult {
        QuadResult {
            value: self.ln_value.exp(),
            abs_err: self.ln_err.exp(),
            ln_value: self.ln_value,
            evaluations: self.evaluations,
            converged: self.converged,
        }
    }
}

/// `∫_lo^hi f(ρ) dρ` with `0 ≤ lo < hi ≤ ∞`, in the log chart.
pub fn integrate<F: LogIntegrand + ?Sized>(f: &F, lo: f64, hi: f64, tol: &Tolerances) -> Result<QuadResult, QuadError> {
    integrate_in(f, Chart::Log, lo, hi, tol)
}

pub fn integrate_in<F: LogIntegrand + ?Sized>(
    f: &F,
    chart: Chart,
    lo: f64,
    hi: f64,
    tol: &Tolerances,
) -> Result<QuadResult, QuadError> {
    if !(lo >= 0.0) || !(hi > lo) || lo.is_infinite() {
        return Err(QuadError::InvalidInterval { lo, hi });
    }
    let u_lo = if lo == 0.0 {
        f64::NEG_INFINITY
    } else {
        chart.coordinate(lo)
    };
    let u_hi = if hi.is_infinite() {
        f64::INFINITY
    } else {
        chart.coordinate(hi)
    };
    integrate_chart(f, chart, u_lo, u_hi, tol).map(LogQuad::into_result)
}

/// Evaluation of `ln g(u) = ln f(ρ(u)) + ln ρ'(u)` with bookkeeping.
pub(crate) struct ChartFn<'a, F: ?Sized> {
    pub f: &'a F,
    pub chart: Chart,
}

impl<'a, F: LogIntegrand + ?Sized> ChartFn<'a, F> {
    pub fn new(f: &'a F, chart: Chart) -> Self {
        Self { f, chart }
    }

    pub fn ln_g(&self, u: f64) -> f64 {
        let (rho, ln_jac) = self.chart.point(u);
        let l = self.f.ln_value(rho);
        if l == f64::NEG_INFINITY {
            l
        } else {
            l + ln_jac
        }
    }

    pub fn panel(&self, a: f64, b: f64) -> Result<PanelEstimate, QuadError> {
        gk15(&|u| self.ln_g(u), a, b).map_err(|bad| QuadError::NonFinite {
            rho: self.chart.point(bad.at).0.value,
            value: bad.ln_value.exp(),
        })
    }

    /// Breakpoints mapped to chart coordinates, sorted, restricted to `(lo, hi)`.
    pub fn break_coordinates(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .f
            .breakpoints()
            .into_iter()
            .filter(|&b| b > 0.0 && b.is_finite())
            .map(|b| self.chart.coordinate(b))
            .filter(|&u| u > lo && u < hi && u.abs() < CHART_LIMIT)
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        out.dedup();
        out
    }

    /// Outward log-slope at `u` (direction `dir = ±1`).
    pub fn outward_slope(&self, u: f64, dir: f64) -> (f64, f64) {
        let h = 1e-3;
        let at = self.ln_g(u);
        let inner = self.ln_g(u - dir * h);
        (at, (at - inner) / h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapKey {
    ln_err: f64,
    index: usize,
}

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ln_err
            .partial_cmp(&other.ln_err)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.index.cmp(&self.index))
    }
}

fn ln_sum<I: Iterator<Item = f64>>(it: I) -> f64 {
    let v: Vec<f64> = it.collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

struct TailOutcome {
    ln_remainder: f64,
    unresolved: bool,
}

/// Integrates over `[u_lo, u_hi]` in chart coordinates; either end may be
/// infinite.
pub(crate) fn integrate_chart<F: LogIntegrand + ?Sized>(
    f: &F,
    chart: Chart,
    u_lo: f64,
    u_hi: f64,
    tol: &Tolerances,
) -> Result<LogQuad, QuadError> {
    if !(u_hi > u_lo) {
        return Err(QuadError::InvalidInterval { lo: u_lo, hi: u_hi });
    }
    let g = ChartFn::new(f, chart);
    let lo_bound = u_lo.max(-CHART_LIMIT);
    let hi_bound = u_hi.min(CHART_LIMIT);
    let breaks = g.break_coordinates(u_lo, u_hi);

    let core_lo = if u_lo.is_finite() {
        lo_bound
    } else {
        let mut c: f64 = -4.0;
        if let Some(&b) = breaks.first() {
            c = c.min(b - 1.0);
        }
        if u_hi.is_finite() {
            c = c.min(u_hi - 1.0);
        }
        c.max(-CHART_LIMIT)
    };
    let core_hi = if u_hi.is_finite() {
        hi_bound
    } else {
        let mut c: f64 = 4.0;
        if let Some(&b) = breaks.last() {
            c = c.max(b + 1.0);
        }
        c = c.max(core_lo + 1.0);
        c.min(CHART_LIMIT)
    };

    let mut cuts = vec![core_lo];
    cuts.extend(breaks.iter().copied().filter(|&b| b > core_lo && b < core_hi));
    cuts.push(core_hi);

    let mut panels: Vec<PanelEstimate> = Vec::new();
    let mut evaluations = 0usize;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = ((b - a).ceil() as usize).max(1);
        for k in 0..n {
            let pa = a + (b - a) * k as f64 / n as f64;
            let pb = if k + 1 == n {
                b
            } else {
                a + (b - a) * (k + 1) as f64 / n as f64
            };
            panels.push(g.panel(pa, pb)?);
            evaluations += 15;
        }
    }

    let core_total = ln_sum(panels.iter().map(|p| p.ln_value()));
    let mut ln_remainder = f64::NEG_INFINITY;
    let mut unresolved = false;
    let mut running = core_total;
    let tails: [(f64, f64, bool); 2] = [(core_hi, 1.0, u_hi.is_infinite()), (core_lo, -1.0, u_lo.is_infinite())];
    for (start, dir, open) in tails {
        let limit = if dir > 0.0 { hi_bound } else { lo_bound };
        if (limit - start) * dir <= 0.0 {
            continue;
        }
        let outcome = extend_tail(
            &g,
            start,
            dir,
            limit,
            open,
            tol,
            &mut running,
            &mut panels,
            &mut evaluations,
        )?;
        ln_remainder = ln_add_exp(ln_remainder, outcome.ln_remainder);
        unresolved |= outcome.unresolved;
    }

    let (ln_value, ln_err, converged) = refine(&g, &mut panels, tol, &mut evaluations, ln_remainder)?;
    Ok(LogQuad {
        ln_value,
        ln_err,
        evaluations,
        converged: converged && !unresolved,
        tail_unresolved: unresolved,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_tail<F: LogIntegrand + ?Sized>(
    g: &ChartFn<'_, F>,
    start: f64,
    dir: f64,
    limit: f64,
    open: bool,
    tol: &Tolerances,
    running: &mut f64,
    panels: &mut Vec<PanelEstimate>,
    evaluations: &mut usize,
) -> Result<TailOutcome, QuadError> {
    let negligible = (TAIL_FRACTION * tol.rel_tol).ln();
    let mut x = start;
    let mut width = 1.0;
    loop {
        let mut end = x + dir * width;
        let at_limit = (end - limit) * dir >= 0.0;
        if at_limit {
            end = limit;
        }
        let (a, b) = if dir > 0.0 { (x, end) } else { (end, x) };
        let p = g.panel(a, b)?;
        *evaluations += 15;
        let ln_p = p.ln_value();
        panels.push(p);
        *running = ln_add_exp(*running, ln_p);
        if at_limit {
            if !open {
                return Ok(TailOutcome {
                    ln_remainder: f64::NEG_INFINITY,
                    unresolved: false,
                });
            }
            let (at, slope) = g.outward_slope(end, dir);
            *evaluations += 2;
            if at == f64::NEG_INFINITY {
                return Ok(TailOutcome {
                    ln_remainder: f64::NEG_INFINITY,
                    unresolved: false,
                });
            }
            let resolved = slope < 0.0 && at - (-slope).ln() < *running + negligible;
            return Ok(TailOutcome {
                ln_remainder: if slope < 0.0 { at - (-slope).ln() } else { at },
                unresolved: !resolved,
            });
        }
        let (at, slope) = g.outward_slope(end, dir);
        *evaluations += 2;
        if at == f64::NEG_INFINITY && ln_p == f64::NEG_INFINITY {
            return Ok(TailOutcome {
                ln_remainder: f64::NEG_INFINITY,
                unresolved: false,
            });
        }
        if slope < 0.0 {
            let ln_rem = at - (-slope).ln();
            if ln_p < *running + negligible && ln_rem < *running + negligible {
                return Ok(TailOutcome {
                    ln_remainder: ln_rem,
                    unresolved: false,
                });
            }
        }
        x = end;
        width = (2.0 * width).min(MAX_TAIL_WIDTH);
    }
}

/// Global bisection of the worst panel until the summed error meets the
/// tolerance. Returns `(ln value, ln err, converged)`.
fn refine<F: LogIntegrand + ?Sized>(
    g: &ChartFn<'_, F>,
    panels: &mut Vec<PanelEstimate>,
    tol: &Tolerances,
    evaluations: &mut usize,
    ln_extra_err: f64,
) -> Result<(f64, f64, bool), QuadError> {
    let ln_abs = if tol.abs_tol > 0.0 {
        tol.abs_tol.ln()
    } else {
        f64::NEG_INFINITY
    };
    let ln_rel = tol.rel_tol.ln();
    let mut heap: BinaryHeap<HeapKey> = panels
        .iter()
        .enumerate()
        .map(|(index, p)| HeapKey {
            ln_err: p.ln_err(),
            index,
        })
        .collect();
    let mut ln_total = ln_sum(panels.iter().map(|p| p.ln_value()));
    let mut ln_err = ln_add_exp(ln_sum(panels.iter().map(|p| p.ln_err())), ln_extra_err);
    loop {
        let target = ln_abs.max(ln_rel + ln_total);
        if ln_err <= target || ln_total == f64::NEG_INFINITY {
            return Ok((ln_total, ln_err, true));
        }
        if *evaluations + 30 > tol.max_evals {
            return Ok((ln_total, ln_err, false));
        }
        let Some(worst) = heap.pop() else {
            return Ok((ln_total, ln_err, false));
        };
        let p = panels[worst.index];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) || (p.b - p.a) < 1e-12 * (1.0 + p.a.abs()) {
            // cannot be split any further; leave it out of the queue
            continue;
        }
        let left = g.panel(p.a, mid)?;
        let right = g.panel(mid, p.b)?;
        *evaluations += 30;
        panels[worst.index] = left;
        panels.push(right);
        heap.push(HeapKey {
            ln_err: left.ln_err(),
            index: worst.index,
        });
        heap.push(HeapKey {
            ln_err: right.ln_err(),
            index: panels.len() - 1,
        });
        // Full recomputation keeps the totals free of cancellation drift.
        ln_total = ln_sum(panels.iter().map(|p| p.ln_value()));
        ln_err = ln_add_exp(ln_sum(panels.iter().map(|p| p.ln_err())), ln_extra_err);
    }
}

/// Classification of `∫_0^∞ f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum FinitenessVerdict {
    Finite(QuadResult),
    DivergentNearZero { fitted_exponent: f64 },
    DivergentAtInfinity { fitted_rate: f64, family: TailFamily },
    Indeterminate { reason: String },
}

impl FinitenessVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, FinitenessVerdict::Finite(_))
    }

    pub fn is_divergent(&self) -> bool {
        matches!(
            self,
            FinitenessVerdict::DivergentNearZero { .. } | FinitenessVerdict::DivergentAtInfinity { .. }
        )
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            FinitenessVerdict::Finite(q) => Some(q.value),
            _ => None,
        }
    }

    pub fn result(&self) -> Option<&QuadResult> {
        match self {
            FinitenessVerdict::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FinitenessVerdict::Finite(_) => "finite",
            FinitenessVerdict::DivergentNearZero { .. } => "divergent_near_zero",
            FinitenessVerdict::DivergentAtInfinity { .. } => "divergent_at_infinity",
            FinitenessVerdict::Indeterminate { .. } => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Zero,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// Half-width of the band around criticality reported as indeterminate.
    pub margin: f64,
    pub zero_window: (f64, f64),
    /// Start `R` of the window `[R, 4R]` at infinity; `None` picks the
    /// chart's default.
    pub far_window_start: Option<f64>,
    pub samples: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            margin: 0.05,
            zero_window: (1e-8, 1e-4),
            far_window_start: None,
            samples: 9,
        }
    }
}

/// Least-squares description of an integrand over an end window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndFit {
    /// Slope of `ln(f·dρ/du)` against the chart coordinate `u`.
    pub chart_slope: f64,
    /// Slope of `ln f` against `ln ρ` (local power exponent).
    pub exponent: f64,
    /// Slope of `ln f` against `ρ` (local exponential rate).
    pub log_slope: f64,
    pub residual: f64,
    pub spread: f64,
    /// Extreme slopes between neighbouring samples.
    pub local_slopes: (f64, f64),
    /// The integrand vanishes identically on the window.
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EndBehaviour {
    Integrable,
    Divergent,
    Ambiguous(String),
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let d = y - (my + slope * (x - mx));
            d * d
        })
        .sum();
    (slope, (rss / n).sqrt())
}

pub fn fit_end<F: LogIntegrand + ?Sized>(
    f: &F,
    chart: Chart,
    end: End,
    opts: &ClassifyOptions,
) -> Result<EndFit, QuadError> {
    let (r0, r1) = match end {
        End::Zero => opts.zero_window,
        End::Infinity => {
            let r = opts.far_window_start.unwrap_or_else(|| chart.far_window_start());
            (r, 4.0 * r)
        }
    };
    let (u0, u1) = (chart.coordinate(r0), chart.coordinate(r1));
    let n = opts.samples.max(3);
    let mut us = Vec::with_capacity(n);
    let mut lg = Vec::with_capacity(n);
    let mut lnr = Vec::with_capacity(n);
    let mut rs = Vec::with_capacity(n);
    let mut lf = Vec::with_capacity(n);
    let mut vanished = 0;
    for k in 0..n {
        let u = u0 + (u1 - u0) * k as f64 / (n - 1) as f64;
        let (rho, ln_jac) = chart.point(u);
        let l = f.ln_value(rho);
        if l.is_nan() || l == f64::INFINITY {
            return Err(QuadError::NonFinite {
                rho: rho.value,
                value: l.exp(),
            });
        }
        if l == f64::NEG_INFINITY {
            vanished += 1;
            continue;
        }
        us.push(u);
        lg.push(l + ln_jac);
        lnr.push(rho.ln);
        rs.push(rho.value);
        lf.push(l);
    }
    if vanished == n {
        return Ok(EndFit {
            chart_slope: 0.0,
            exponent: 0.0,
            log_slope: 0.0,
            residual: 0.0,
            spread: 0.0,
            local_slopes: (0.0, 0.0),
            vanishes: true,
        });
    }
    if us.len() < 3 {
        return Ok(EndFit {
            chart_slope: f64::NAN,
            exponent: f64::NAN,
            log_slope: f64::NAN,
            residual: f64::INFINITY,
            spread: 0.0,
            local_slopes: (f64::NAN, f64::NAN),
            vanishes: false,
        });
    }
    let (chart_slope, residual) = least_squares(&us, &lg);
    let (exponent, _) = least_squares(&lnr, &lf);
    let (log_slope, _) = least_squares(&rs, &lf);
    let spread = (lg[lg.len() - 1] - lg[0]).abs();
    let local_slopes = us
        .windows(2)
        .zip(lg.windows(2))
        .map(|(u, l)| (l[1] - l[0]) / (u[1] - u[0]))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
    Ok(EndFit {
        chart_slope,
        exponent,
        log_slope,
        residual,
        spread,
        local_slopes,
        vanishes: false,
    })
}

pub fn end_behaviour(fit: &EndFit, end: End, opts: &ClassifyOptions) -> EndBehaviour {
    if fit.vanishes {
        return EndBehaviour::Integrable;
    }
    if !fit.chart_slope.is_finite() {
        return EndBehaviour::Ambiguous("integrand vanishes on part of the fit window".into());
    }
    // Uniform decay (or growth) across the whole window settles the question
    // even when the profile is not a clean exponential in the chart.
    let (lo, hi) = fit.local_slopes;
    let (out_lo, out_hi) = match end {
        End::Zero => (-hi, -lo),
        End::Infinity => (lo, hi),
    };
    if out_hi < -opts.margin {
        return EndBehaviour::Integrable;
    }
    if out_lo > opts.margin {
        return EndBehaviour::Divergent;
    }
    if fit.residual > 0.05 + 0.01 * fit.spread {
        return EndBehaviour::Ambiguous(format!(
            "fit residual {:.3e} too large for a clean asymptotic law",
            fit.residual
        ));
    }
    // Decay outwards: positive slope at zero, negative slope at infinity.
    let outward = match end {
        End::Zero => -fit.chart_slope,
        End::Infinity => fit.chart_slope,
    };
    // An exactly critical power law diverges logarithmically.
    if outward < -opts.margin {
        EndBehaviour::Integrable
    } else if outward > opts.margin || outward.abs() <= CRITICAL_SLACK {
        EndBehaviour::Divergent
    } else {
        EndBehaviour::Ambiguous(format!(
            "fitted slope {:.4} within ±{} of criticality",
            fit.chart_slope, opts.margin
        ))
    }
}

/// Verdict for one end alone: `None` when the end is integrable.
pub fn classify_end<F: LogIntegrand + ?Sized>(
    f: &F,
    chart: Chart,
    end: End,
    opts: &ClassifyOptions,
) -> Result<Option<FinitenessVerdict>, QuadError> {
    let fit = fit_end(f, chart, end, opts)?;
    Ok(match end_behaviour(&fit, end, opts) {
        EndBehaviour::Integrable => None,
        EndBehaviour::Divergent => Some(match end {
            End::Zero => FinitenessVerdict::DivergentNearZero {
                fitted_exponent: fit.exponent,
            },
            End::Infinity => FinitenessVerdict::DivergentAtInfinity {
                fitted_rate: match chart.family() {
                    TailFamily::Power => fit.exponent,
                    TailFamily::Exponential => fit.log_slope,
                },
                family: chart.family(),
            },
        }),
        EndBehaviour::Ambiguous(reason) => Some(FinitenessVerdict::Indeterminate {
            reason: format!("{} end: {reason}", if end == End::Zero { "zero" } else { "infinity" }),
        }),
    })
}

/// Decides whether `∫_0^∞ f` is finite and, if so, evaluates it.
pub fn classify_finiteness<F: LogIntegrand + ?Sized>(
    f: &F,
    chart: Chart,
    tol: &Tolerances,
    opts: &ClassifyOptions,
) -> Result<FinitenessVerdict, QuadError> {
    if let Some(v) = classify_end(f, chart, End::Zero, opts)? {
        return Ok(v);
    }
    if let Some(v) = classify_end(f, chart, End::Infinity, opts)? {
        return Ok(v);
    }
    let q = integrate_chart(f, chart, f64::NEG_INFINITY, f64::INFINITY, tol)?;
    if q.tail_unresolved {
        return Ok(FinitenessVerdict::Indeterminate {
            reason: "a tail did not decay before the chart limit".into(),
        });
    }
    Ok(FinitenessVerdict::Finite(q.into_result()))
}
