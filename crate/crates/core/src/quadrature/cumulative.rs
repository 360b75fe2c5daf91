//! Running integrals `∫_0^t f` and `∫_t^∞ f` answered for arbitrary `t`.
//!
//! The chart line is covered once by panels refined to a tolerance relative
//! to the running total, and partial sums are stored in log form at every
//! panel boundary. A query adds the stored prefix to one short Gauss–Kronrod
//! integral over the remaining piece of its panel, so values keep the full
//! quadrature accuracy instead of an interpolation error.

use thiserror::Error;

use super::{classify_end, ChartFn, ClassifyOptions, End, FinitenessVerdict, LogIntegrand, QuadError, Tolerances};
use super::{Chart, Radius, CHART_LIMIT};
use crate::special::ln_add_exp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `t ↦ ∫_0^t f`
    FromZero,
    /// `t ↦ ∫_t^∞ f`
    ToInfinity,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CumulativeError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("cumulative integral is not finite: {}", .0.label())]
    NotIntegrable(FinitenessVerdict),
}

const MAX_DEPTH: u32 = 40;

/// Inner width of the initial grid; panels get wider beyond `|u| > 40`.
fn initial_grid(breaks: &[f64]) -> Vec<f64> {
    let mut cuts = Vec::new();
    let mut u = -CHART_LIMIT;
    while u < CHART_LIMIT {
        cuts.push(u);
        u += if u.abs() >= 40.0 { 2.0 } else { 1.0 };
    }
    cuts.push(CHART_LIMIT);
    cuts.extend(breaks.iter().copied());
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    cuts
}

/// Immutable table of a running integral; safe to share across threads.
pub struct Cumulative<F> {
    f: F,
    chart: Chart,
    direction: Direction,
    rel_tol: f64,
    cuts: Vec<f64>,
    /// Log of the accumulated integral at each cut, counted from the end the
    /// direction starts at.
    ln_acc: Vec<f64>,
    evaluations: usize,
}

impl<F> std::fmt::Debug for Cumulative<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cumulative")
            .field("chart", &self.chart)
            .field("direction", &self.direction)
            .field("panels", &(self.cuts.len() - 1))
            .finish_non_exhaustive()
    }
}

impl<F: LogIntegrand> Cumulative<F> {
    pub fn build(
        f: F,
        chart: Chart,
        direction: Direction,
        tol: &Tolerances,
        opts: &ClassifyOptions,
    ) -> Result<Self, CumulativeError> {
        let end = match direction {
            Direction::FromZero => End::Zero,
            Direction::ToInfinity => End::Infinity,
        };
        if let Some(v) = classify_end(&f, chart, end, opts)? {
            return Err(CumulativeError::NotIntegrable(v));
        }
        let g = ChartFn::new(&f, chart);
        let breaks = g.break_coordinates(-CHART_LIMIT, CHART_LIMIT);
        let grid = initial_grid(&breaks);
        let rel = tol.rel_tol;
        let mut evaluations = 0usize;

        // Contribution beyond the chart limit at the starting end.
        let (start, dir) = match direction {
            Direction::FromZero => (-CHART_LIMIT, -1.0),
            Direction::ToInfinity => (CHART_LIMIT, 1.0),
        };
        let mut acc = extrapolated_end(&g, start, dir);
        evaluations += 2;

        let mut leaves: Vec<(f64, f64, f64)> = Vec::with_capacity(2 * grid.len());
        let n = grid.len() - 1;
        for k in 0..n {
            let i = match direction {
                Direction::FromZero => k,
                Direction::ToInfinity => n - 1 - k,
            };
            let (a, b) = (grid[i], grid[i + 1]);
            refine_leaf(&g, a, b, direction, rel, 0, &mut acc, &mut leaves, &mut evaluations)?;
        }
        if direction == Direction::ToInfinity {
            leaves.reverse();
        }

        let mut cuts = Vec::with_capacity(leaves.len() + 1);
        cuts.push(leaves[0].0);
        cuts.extend(leaves.iter().map(|l| l.1));
        let mut ln_acc = vec![f64::NEG_INFINITY; cuts.len()];
        match direction {
            Direction::FromZero => {
                let mut s = extrapolated_end(&g, -CHART_LIMIT, -1.0);
                ln_acc[0] = s;
                for (j, l) in leaves.iter().enumerate() {
                    s = ln_add_exp(s, l.2);
                    ln_acc[j + 1] = s;
                }
            }
            Direction::ToInfinity => {
                let mut s = extrapolated_end(&g, CHART_LIMIT, 1.0);
                let last = cuts.len() - 1;
                ln_acc[last] = s;
                for (j, l) in leaves.iter().enumerate().rev() {
                    s = ln_add_exp(s, l.2);
                    ln_acc[j] = s;
                }
            }
        }
        Ok(Self {
            f,
            chart,
            direction,
            rel_tol: rel,
            cuts,
            ln_acc,
            evaluations,
        })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn integrand(&self) -> &F {
        &self.f
    }

    /// Integrand evaluations spent while building the table.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// `ln` of the integral accumulated over the whole chart grid, i.e. up
    /// to the chart limit on the side opposite to the starting end.
    pub fn ln_total(&self) -> f64 {
        match self.direction {
            Direction::FromZero => *self.ln_acc.last().unwrap(),
            Direction::ToInfinity => self.ln_acc[0],
        }
    }

    /// `ln` of the running integral at radius `t > 0`.
    pub fn ln_at(&self, t: f64) -> Result<f64, QuadError> {
        if !(t > 0.0) {
            return Err(QuadError::InvalidInterval { lo: 0.0, hi: t });
        }
        let u = if t.is_infinite() {
            f64::INFINITY
        } else {
            self.chart.coordinate(t)
        };
        self.ln_at_coordinate(u)
    }

    pub fn ln_at_radius(&self, t: Radius) -> Result<f64, QuadError> {
        self.ln_at_coordinate(self.chart.coordinate_of(t))
    }

    pub fn at(&self, t: f64) -> Result<f64, QuadError> {
        self.ln_at(t).map(f64::exp)
    }

    /// `ln` of the running integral at chart coordinate `u`.
    pub fn ln_at_coordinate(&self, u: f64) -> Result<f64, QuadError> {
        let g = ChartFn::new(&self.f, self.chart);
        let first = self.cuts[0];
        let last = *self.cuts.last().unwrap();
        match self.direction {
            Direction::FromZero => {
                if u <= first {
                    return Ok(extrapolated_end(&g, u, -1.0));
                }
                if u >= last {
                    if u.is_infinite() {
                        return Ok(f64::INFINITY);
                    }
                    let tail = adaptive(&g, last, u, self.ln_acc[self.cuts.len() - 1], self.rel_tol, 0)?;
                    return Ok(ln_add_exp(self.ln_acc[self.cuts.len() - 1], tail));
                }
                let i = self.cuts.partition_point(|&c| c <= u) - 1;
                let base = self.ln_acc[i];
                if u == self.cuts[i] {
                    return Ok(base);
                }
                let part = adaptive(&g, self.cuts[i], u, base, self.rel_tol, 0)?;
                Ok(ln_add_exp(base, part))
            }
            Direction::ToInfinity => {
                if u >= last {
                    if u.is_infinite() {
                        return Ok(f64::NEG_INFINITY);
                    }
                    return Ok(extrapolated_end(&g, u, 1.0));
                }
                if u <= first {
                    let head = adaptive(&g, u, first, self.ln_acc[0], self.rel_tol, 0)?;
                    return Ok(ln_add_exp(self.ln_acc[0], head));
                }
                let i = self.cuts.partition_point(|&c| c < u);
                let base = self.ln_acc[i];
                if u == self.cuts[i] {
                    return Ok(base);
                }
                let part = adaptive(&g, u, self.cuts[i], base, self.rel_tol, 0)?;
                Ok(ln_add_exp(base, part))
            }
        }
    }
}

/// `ln ∫` over the part of the chart line beyond `u` in direction `dir`,
/// assuming the integrand continues exponentially with its local slope.
fn extrapolated_end<F: LogIntegrand + ?Sized>(g: &ChartFn<'_, F>, u: f64, dir: f64) -> f64 {
    let (at, slope) = g.outward_slope(u, dir);
    if at == f64::NEG_INFINITY || !(slope < 0.0) {
        // Nothing there, or a non-decaying end that the integrability check
        // has already ruled out.
        return f64::NEG_INFINITY;
    }
    at - (-slope).ln()
}

#[allow(clippy::too_many_arguments)]
fn refine_leaf<F: LogIntegrand + ?Sized>(
    g: &ChartFn<'_, F>,
    a: f64,
    b: f64,
    direction: Direction,
    rel: f64,
    depth: u32,
    acc: &mut f64,
    leaves: &mut Vec<(f64, f64, f64)>,
    evaluations: &mut usize,
) -> Result<(), QuadError> {
    let p = g.panel(a, b)?;
    *evaluations += 15;
    let ln_v = p.ln_value();
    let target = rel.ln() + ln_add_exp(*acc, ln_v);
    if p.ln_err() <= target || depth >= MAX_DEPTH || ln_v == f64::NEG_INFINITY && p.err == 0.0 {
        leaves.push((a, b, ln_v));
        *acc = ln_add_exp(*acc, ln_v);
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    let halves = match direction {
        Direction::FromZero => [(a, mid), (mid, b)],
        Direction::ToInfinity => [(mid, b), (a, mid)],
    };
    for (x, y) in halves {
        refine_leaf(g, x, y, direction, rel, depth + 1, acc, leaves, evaluations)?;
    }
    Ok(())
}

/// `ln ∫_a^b g` to a tolerance relative to `exp(ln_base) + ∫_a^b g`.
fn adaptive<F: LogIntegrand + ?Sized>(
    g: &ChartFn<'_, F>,
    a: f64,
    b: f64,
    ln_base: f64,
    rel: f64,
    depth: u32,
) -> Result<f64, QuadError> {
    let p = g.panel(a, b)?;
    let ln_v = p.ln_value();
    if p.ln_err() <= rel.ln() + ln_add_exp(ln_base, ln_v) || depth >= MAX_DEPTH {
        return Ok(ln_v);
    }
    let mid = 0.5 * (a + b);
    let left = adaptive(g, a, mid, ln_base, rel, depth + 1)?;
    let right = adaptive(g, mid, b, ln_base, rel, depth + 1)?;
    Ok(ln_add_exp(left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{LogFn, Radius};
    use crate::special::ln_sinh_with_ln;
    use approx::assert_relative_eq;

    #[test]
    fn hyperbolic_volume_from_zero() {
        let f = LogFn::new(|r: Radius| ln_sinh_with_ln(r.value, r.ln));
        let c = Cumulative::build(
            f,
            Chart::LogSinh { scale: 1.0 },
            Direction::FromZero,
            &Tolerances::default(),
            &ClassifyOptions::default(),
        )
        .unwrap();
        for &t in &[1e-6f64, 0.1, 1.0, 10.0, 300.0] {
            let exact = if t < 1e-3 { t * t / 2.0 } else { t.cosh() - 1.0 };
            assert_relative_eq!(c.at(t).unwrap(), exact, max_relative = 1e-9);
        }
    }

    #[test]
    fn piecewise_tail_to_infinity() {
        let f = LogFn::new(|r: Radius| if r.value < 1.0 { 0.0 } else { -2.0 * r.ln }).with_breakpoints(vec![1.0]);
        let c = Cumulative::build(
            f,
            Chart::Log,
            Direction::ToInfinity,
            &Tolerances::default(),
            &ClassifyOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(c.at(0.5).unwrap(), 1.5, max_relative = 1e-10);
        assert_relative_eq!(c.at(2.0).unwrap(), 0.5, max_relative = 1e-10);
        assert_relative_eq!(c.at(1.0).unwrap(), 1.0, max_relative = 1e-10);
        assert_relative_eq!(c.at(1e-9).unwrap(), 2.0 - 1e-9, max_relative = 1e-10);
        assert_relative_eq!(c.ln_total().exp(), 2.0, max_relative = 1e-10);
    }

    #[test]
    fn harmonic_tail_is_rejected() {
        let f = LogFn::new(|r: Radius| if r.value < 1.0 { 0.0 } else { -r.ln });
        let err = Cumulative::build(
            f,
            Chart::Log,
            Direction::ToInfinity,
            &Tolerances::default(),
            &ClassifyOptions::default(),
        )
        .err()
        .unwrap();
        assert!(matches!(
            err,
            CumulativeError::NotIntegrable(FinitenessVerdict::DivergentAtInfinity { .. })
        ));
    }
}
