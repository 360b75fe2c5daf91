//! Coordinate charts on the half-line `(0, ∞)`.
//!
//! Integrals over the radius are carried out in a coordinate `u` in which the
//! integrands of interest have roughly linear logarithms at both ends:
//!
//! * [`Chart::Log`]: `u = ln ρ`. Power laws `ρ^s` become exponentials
//!   `e^{(s+1)u}` at both ends.
//! * [`Chart::LogSinh`]: `u = ln sinh(sρ)`. Near zero it agrees with the log
//!   chart; for large `ρ` it is linear in `ρ`, so `e^{kρ}` tails also become
//!   exponentials in `u` with slope `k/s`.

use serde::{Deserialize, Serialize};

use crate::special::{asinh_exp, ln_asinh_exp, ln_sinh_with_ln, ln_tanh};

/// A radius together with its logarithm. Integrands read whichever is more
/// convenient; `ln` stays exact when `value` under- or overflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radius {
    pub value: f64,
    pub ln: f64,
}

impl Radius {
    pub fn new(value: f64) -> Self {
        Self { value, ln: value.ln() }
    }

    pub fn from_ln(ln: f64) -> Self {
        Self { value: ln.exp(), ln }
    }
}

/// Asymptotic family of the integrands living on a chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailFamily {
    Power,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Chart {
    #[default]
    Log,
    LogSinh {
        scale: f64,
    },
}

impl Chart {
    /// Radius at coordinate `u` and `ln(dρ/du)`.
    pub fn point(&self, u: f64) -> (Radius, f64) {
        match *self {
            Chart::Log => (Radius::from_ln(u), u),
            Chart::LogSinh { scale } => {
                let y = asinh_exp(u);
                let ln_s = scale.ln();
                let ln_rho = ln_asinh_exp(u) - ln_s;
                let rho = Radius {
                    value: y / scale,
                    ln: ln_rho,
                };
                (rho, ln_tanh(y) - ln_s)
            }
        }
    }

    pub fn coordinate(&self, rho: f64) -> f64 {
        match *self {
            Chart::Log => rho.ln(),
            Chart::LogSinh { scale } => {
                let y = scale * rho;
                ln_sinh_with_ln(y, rho.ln() + scale.ln())
            }
        }
    }

    /// Same as [`Chart::coordinate`], reading `ln ρ` from the radius.
    pub fn coordinate_of(&self, rho: Radius) -> f64 {
        match *self {
            Chart::Log => rho.ln,
            Chart::LogSinh { scale } => ln_sinh_with_ln(scale * rho.value, rho.ln + scale.ln()),
        }
    }

    pub fn family(&self) -> TailFamily {
        match self {
            Chart::Log => TailFamily::Power,
            Chart::LogSinh { .. } => TailFamily::Exponential,
        }
    }

    /// Left end of the window used to fit the behaviour at infinity.
    pub fn far_window_start(&self) -> f64 {
        match *self {
            Chart::Log => 1e6,
            Chart::LogSinh { scale } => 100.0 / scale,
        }
    }

    /// The finer of two charts: exponential beats power, larger scale beats
    /// smaller.
    pub fn merge(self, other: Chart) -> Chart {
        match (self, other) {
            (Chart::Log, c) | (c, Chart::Log) => c,
            (Chart::LogSinh { scale: a }, Chart::LogSinh { scale: b }) => Chart::LogSinh { scale: a.max(b) },
        }
    }
}
