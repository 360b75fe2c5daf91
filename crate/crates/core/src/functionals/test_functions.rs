//! Radial test functions `f` for the Hardy ratio and the single-weight and
//! monotone-function inequalities.

use std::fmt;
use std::sync::Arc;

use crate::quadrature::{Chart, Radius};

use super::NearExtremalProfile;

type LnFn = dyn Fn(Radius) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum TestKind {
    /// Witness function of the necessity argument, built from `Ũ`, `Ṽ`, `v`.
    NearExtremal(Arc<NearExtremalProfile>),
    /// `t^exponent` on `(0, cutoff)`, zero beyond.
    PowerBump {
        exponent: f64,
        cutoff: f64,
    },
    /// `e^{-rate·t}`
    ExpDecay {
        rate: f64,
    },
    /// `min(t, knee)^exponent`
    Ramp {
        exponent: f64,
        knee: f64,
    },
    /// `1 - e^{-rate·t}`
    Saturating {
        rate: f64,
    },
    Custom {
        ln: Arc<LnFn>,
        breakpoints: Vec<f64>,
    },
}

impl fmt::Debug for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestKind::NearExtremal(_) => f.write_str("NearExtremal"),
            TestKind::PowerBump { exponent, cutoff } => f
                .debug_struct("PowerBump")
                .field("exponent", exponent)
                .field("cutoff", cutoff)
                .finish(),
            TestKind::ExpDecay { rate } => f.debug_struct("ExpDecay").field("rate", rate).finish(),
            TestKind::Ramp { exponent, knee } => f
                .debug_struct("Ramp")
                .field("exponent", exponent)
                .field("knee", knee)
                .finish(),
            TestKind::Saturating { rate } => f.debug_struct("Saturating").field("rate", rate).finish(),
            TestKind::Custom { breakpoints, .. } => f
                .debug_struct("Custom")
                .field("breakpoints", breakpoints)
                .finish_non_exhaustive(),
        }
    }
}

/// A nonnegative radial function `c · g(t)`, with `ln c` kept separately so
/// that rescaling is exact.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub kind: TestKind,
    pub ln_scale: f64,
    /// Declared nondecreasing (required by the monotone-function inequality).
    pub monotone: bool,
}

impl TestFunction {
    fn with_kind(kind: TestKind, monotone: bool) -> Self {
        Self {
            kind,
            ln_scale: 0.0,
            monotone,
        }
    }

    pub fn power_bump(exponent: f64, cutoff: f64) -> Self {
        let monotone = exponent >= 0.0 && cutoff.is_infinite();
        Self::with_kind(TestKind::PowerBump { exponent, cutoff }, monotone)
    }

    /// `f ≡ 1`.
    pub fn constant() -> Self {
        Self::power_bump(0.0, f64::INFINITY)
    }

    pub fn exp_decay(rate: f64) -> Self {
        Self::with_kind(TestKind::ExpDecay { rate }, rate <= 0.0)
    }

    pub fn ramp(exponent: f64, knee: f64) -> Self {
        Self::with_kind(TestKind::Ramp { exponent, knee }, exponent >= 0.0)
    }

    pub fn saturating(rate: f64) -> Self {
        Self::with_kind(TestKind::Saturating { rate }, true)
    }

    pub fn custom<F>(ln: F, breakpoints: Vec<f64>, monotone: bool) -> Self
    where
        F: Fn(Radius) -> f64 + Send + Sync + 'static,
    {
        Self::with_kind(
            TestKind::Custom {
                ln: Arc::new(ln),
                breakpoints,
            },
            monotone,
        )
    }

    pub(crate) fn near_extremal(profile: Arc<NearExtremalProfile>) -> Self {
        Self::with_kind(TestKind::NearExtremal(profile), false)
    }

    /// `c · f` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.ln_scale += c.ln();
        out
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            TestKind::NearExtremal(_) => "near_extremal",
            TestKind::PowerBump { .. } => "power_bump",
            TestKind::ExpDecay { .. } => "exp_decay",
            TestKind::Ramp { .. } => "ramp",
            TestKind::Saturating { .. } => "saturating",
            TestKind::Custom { .. } => "custom",
        }
    }

    /// `ln g(t)` without the scale factor; `-∞` where `g` vanishes.
    pub fn ln_shape(&self, t: Radius) -> f64 {
        match &self.kind {
            TestKind::NearExtremal(p) => p.ln_value(t),
            TestKind::PowerBump { exponent, cutoff } => {
                if t.value < *cutoff {
                    super::weights::scaled_ln(*exponent, t.ln)
                } else {
                    f64::NEG_INFINITY
                }
            }
            TestKind::ExpDecay { rate } => -rate * t.value,
            TestKind::Ramp { exponent, knee } => {
                let l = if t.value < *knee { t.ln } else { knee.ln() };
                super::weights::scaled_ln(*exponent, l)
            }
            TestKind::Saturating { rate } => {
                let x = rate * t.value;
                if x < 1e-300 {
                    rate.ln() + t.ln
                } else {
                    (-(-x).exp_m1()).ln()
                }
            }
            TestKind::Custom { ln, .. } => ln(t),
        }
    }

    pub fn ln_value(&self, t: Radius) -> f64 {
        self.ln_scale + self.ln_shape(t)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.ln_value(Radius::new(t)).exp()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            TestKind::NearExtremal(p) => p.breakpoints(),
            TestKind::PowerBump { cutoff, .. } if cutoff.is_finite() => vec![*cutoff],
            TestKind::Ramp { knee, .. } => vec![*knee],
            TestKind::Custom { breakpoints, .. } => breakpoints.clone(),
            _ => Vec::new(),
        }
    }

    /// Chart preference. Decaying profiles need no special chart: in the log
    /// chart they fall off faster than any exponential.
    pub fn chart(&self) -> Chart {
        match &self.kind {
            TestKind::NearExtremal(p) => p.chart(),
            _ => Chart::Log,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok = match &self.kind {
            TestKind::PowerBump { exponent, cutoff } => exponent.is_finite() && *cutoff > 0.0,
            TestKind::ExpDecay { rate } => rate.is_finite() && *rate != 0.0,
            TestKind::Ramp { exponent, knee } => exponent.is_finite() && *knee > 0.0 && knee.is_finite(),
            TestKind::Saturating { rate } => *rate > 0.0 && rate.is_finite(),
            _ => true,
        };
        if ok && self.ln_scale.is_finite() {
            Ok(())
        } else {
            Err(format!("invalid parameters for test function {:?}", self.kind))
        }
    }
}
