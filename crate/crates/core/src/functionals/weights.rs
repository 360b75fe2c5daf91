//! Radial weights `u`, `v`, `w`, `b`.

use std::fmt;
use std::sync::Arc;

use crate::quadrature::{Chart, Radius};
use crate::special::ln_sinh_scaled;

type LnFn = dyn Fn(Radius) -> f64 + Send + Sync;

/// User weight given through its logarithm.
#[derive(Clone)]
pub struct CustomWeight {
    ln: Arc<LnFn>,
    breakpoints: Vec<f64>,
    chart: Chart,
}

impl CustomWeight {
    pub fn new<F>(ln: F, breakpoints: Vec<f64>, chart: Chart) -> Self
    where
        F: Fn(Radius) -> f64 + Send + Sync + 'static,
    {
        Self {
            ln: Arc::new(ln),
            breakpoints,
            chart,
        }
    }
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeight")
            .field("breakpoints", &self.breakpoints)
            .field("chart", &self.chart)
            .finish_non_exhaustive()
    }
}

/// A strictly positive function of the radius.
///
/// The sinh variants use the profile `sinh(sρ)/s`, which behaves like `ρ`
/// near zero for every scale and like `e^{sρ}` at infinity.
#[derive(Debug, Clone)]
pub enum RadialWeight {
    Power {
        exponent: f64,
    },
    /// `ρ^inner` below `break_radius`, `ρ^outer` from there on.
    PiecewisePower {
        inner: f64,
        outer: f64,
        break_radius: f64,
    },
    SinhPower {
        exponent: f64,
        scale: f64,
    },
    SinhPiecewisePower {
        inner: f64,
        outer: f64,
        scale: f64,
        break_radius: f64,
    },
    Custom(CustomWeight),
}

impl RadialWeight {
    pub fn power(exponent: f64) -> Self {
        RadialWeight::Power { exponent }
    }

    /// Piecewise power with the break at radius 1.
    pub fn piecewise(inner: f64, outer: f64) -> Self {
        RadialWeight::PiecewisePower {
            inner,
            outer,
            break_radius: 1.0,
        }
    }

    pub fn sinh_power(exponent: f64, scale: f64) -> Self {
        RadialWeight::SinhPower { exponent, scale }
    }

    pub fn sinh_piecewise(inner: f64, outer: f64, scale: f64) -> Self {
        RadialWeight::SinhPiecewisePower {
            inner,
            outer,
            scale,
            break_radius: 1.0,
        }
    }

    pub fn unit() -> Self {
        RadialWeight::Power { exponent: 0.0 }
    }

    /// `ln w(ρ)`.
    pub fn ln_value(&self, rho: Radius) -> f64 {
        match self {
            RadialWeight::Power { exponent } => scaled_ln(*exponent, rho.ln),
            RadialWeight::PiecewisePower {
                inner,
                outer,
                break_radius,
            } => {
                let a = if rho.value < *break_radius { inner } else { outer };
                scaled_ln(*a, rho.ln)
            }
            RadialWeight::SinhPower { exponent, scale } => {
                scaled_ln(*exponent, ln_sinh_scaled(rho.value, rho.ln, *scale))
            }
            RadialWeight::SinhPiecewisePower {
                inner,
                outer,
                scale,
                break_radius,
            } => {
                let a = if rho.value < *break_radius { inner } else { outer };
                scaled_ln(*a, ln_sinh_scaled(rho.value, rho.ln, *scale))
            }
            RadialWeight::Custom(c) => (c.ln)(rho),
        }
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.ln_value(Radius::new(rho)).exp()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            RadialWeight::PiecewisePower {
                inner,
                outer,
                break_radius,
            }
            | RadialWeight::SinhPiecewisePower {
                inner,
                outer,
                break_radius,
                ..
            } if inner != outer => vec![*break_radius],
            RadialWeight::Custom(c) => c.breakpoints.clone(),
            _ => Vec::new(),
        }
    }

    /// Chart suited to the weight's growth at infinity.
    pub fn chart(&self) -> Chart {
        match self {
            RadialWeight::SinhPower { exponent, scale } if *exponent != 0.0 => Chart::LogSinh { scale: *scale },
            RadialWeight::SinhPiecewisePower { outer, scale, .. } if *outer != 0.0 => Chart::LogSinh { scale: *scale },
            RadialWeight::Custom(c) => c.chart,
            _ => Chart::Log,
        }
    }

    /// Checks parameters for finiteness and positivity of scales.
    pub fn validate(&self) -> Result<(), String> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(format!("weight parameter {name} must be finite, got {x}"))
            }
        };
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(format!("weight parameter {name} must be positive, got {x}"))
            }
        };
        match self {
            RadialWeight::Power { exponent } => finite("exponent", *exponent),
            RadialWeight::PiecewisePower {
                inner,
                outer,
                break_radius,
            } => {
                finite("inner", *inner)?;
                finite("outer", *outer)?;
                positive("break_radius", *break_radius)
            }
            RadialWeight::SinhPower { exponent, scale } => {
                finite("exponent", *exponent)?;
                positive("scale", *scale)
            }
            RadialWeight::SinhPiecewisePower {
                inner,
                outer,
                scale,
                break_radius,
            } => {
                finite("inner", *inner)?;
                finite("outer", *outer)?;
                positive("scale", *scale)?;
                positive("break_radius", *break_radius)
            }
            RadialWeight::Custom(_) => Ok(()),
        }
    }
}

/// `a · l` with the convention `0 · (±∞) = 0`, so `w^0 ≡ 1`.
pub(crate) fn scaled_ln(a: f64, l: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * l
    }
}
