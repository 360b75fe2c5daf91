//! TOML run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::admissibility::{PowerWeightParams, Sweep};
use crate::exponents::ExponentConfig;
use crate::functionals::{RadialWeight, TestFunction};
use crate::quadrature::Tolerances;
use crate::spaces::{SpaceModel, TabulatedSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    A2,
    A1,
    Lemma1,
    Sandwich,
    Admissible,
    Scan,
    Prop1,
    Prop2,
    Ratio,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::A2,
        Task::A1,
        Task::Lemma1,
        Task::Sandwich,
        Task::Admissible,
        Task::Scan,
        Task::Prop1,
        Task::Prop2,
        Task::Ratio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::A2 => "a2",
            Task::A1 => "a1",
            Task::Lemma1 => "lemma1",
            Task::Sandwich => "sandwich",
            Task::Admissible => "admissible",
            Task::Scan => "scan",
            Task::Prop1 => "prop1",
            Task::Prop2 => "prop2",
            Task::Ratio => "ratio",
        }
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    /// `homogeneous`, `hyperbolic`, `cartan_hadamard` or `tabulated`.
    pub kind: String,
    /// Homogeneous dimension `Q` or manifold dimension `n`.
    pub dim: Option<f64>,
    /// Curvature parameter `b`; the sectional curvature is `−b`.
    pub curvature: Option<f64>,
    pub angular_mass: Option<f64>,
    /// CSV file for tabulated spaces, relative to the config file.
    pub tabulated_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSpec {
    pub p: f64,
    pub q: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Power {
        exponent: f64,
    },
    PiecewisePower {
        inner: f64,
        outer: f64,
        #[serde(default = "one")]
        break_radius: f64,
    },
    SinhPower {
        exponent: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    SinhPiecewisePower {
        inner: f64,
        outer: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default = "one")]
        break_radius: f64,
    },
}

impl WeightSpec {
    pub fn build(&self) -> Result<RadialWeight, HarnessError> {
        let w = match *self {
            WeightSpec::Power { exponent } => RadialWeight::Power { exponent },
            WeightSpec::PiecewisePower {
                inner,
                outer,
                break_radius,
            } => RadialWeight::PiecewisePower {
                inner,
                outer,
                break_radius,
            },
            WeightSpec::SinhPower { exponent, scale } => RadialWeight::SinhPower { exponent, scale },
            WeightSpec::SinhPiecewisePower {
                inner,
                outer,
                scale,
                break_radius,
            } => RadialWeight::SinhPiecewisePower {
                inner,
                outer,
                scale,
                break_radius,
            },
        };
        w.validate().map_err(HarnessError::Config)?;
        Ok(w)
    }

    /// Inner and outer exponents, for reading power-weight parameters off `u`.
    fn exponents(&self) -> (f64, f64) {
        match *self {
            WeightSpec::Power { exponent } | WeightSpec::SinhPower { exponent, .. } => (exponent, exponent),
            WeightSpec::PiecewisePower { inner, outer, .. } | WeightSpec::SinhPiecewisePower { inner, outer, .. } => {
                (inner, outer)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSpec {
    pub u: Option<WeightSpec>,
    pub v: Option<WeightSpec>,
    /// The weight `w` of the single-weight check.
    pub w: Option<WeightSpec>,
    /// The weight `b` of the monotone check.
    pub b: Option<WeightSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    NearExtremal,
    Constant,
    PowerBump { exponent: f64, cutoff: f64 },
    ExpDecay { rate: f64 },
    Ramp { exponent: f64, knee: f64 },
    Saturating { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    #[serde(flatten)]
    pub shape: ShapeSpec,
    #[serde(default = "one")]
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_max_evals")]
    pub max_evals: usize,
    /// Relative slack of the constant bracket check.
    #[serde(default = "default_sandwich_tol")]
    pub sandwich_tol: f64,
    /// Relative slack of the single- and monotone-weight inequality checks.
    #[serde(default = "default_inequality_tol")]
    pub inequality_tol: f64,
}

fn default_abs_tol() -> f64 {
    Tolerances::default().abs_tol
}
fn default_rel_tol() -> f64 {
    Tolerances::default().rel_tol
}
fn default_max_evals() -> usize {
    Tolerances::default().max_evals
}
fn default_sandwich_tol() -> f64 {
    1e-3
}
fn default_inequality_tol() -> f64 {
    1e-6
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec {
            abs_tol: default_abs_tol(),
            rel_tol: default_rel_tol(),
            max_evals: default_max_evals(),
            sandwich_tol: default_sandwich_tol(),
            inequality_tol: default_inequality_tol(),
        }
    }
}

impl ToleranceSpec {
    pub fn quadrature(&self) -> Tolerances {
        Tolerances {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_evals: self.max_evals,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub sweeps: Vec<Sweep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Option<Task>,
    pub space: SpaceSpec,
    pub exponents: ExponentSpec,
    #[serde(default)]
    pub weights: Option<WeightsSpec>,
    /// Power-weight exponents for `admissible` and `scan`; read off the
    /// weights when absent.
    pub params: Option<PowerWeightParams>,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    pub scan: Option<ScanSpec>,
    pub test_function: Option<TestFunctionSpec>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(format!("cannot parse config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = Self::from_toml(&text)?;
        // Tabulated data is looked up next to the config.
        if let (Some(rel), Some(dir)) = (config.space.tabulated_path.as_mut(), path.parent()) {
            if rel.is_relative() {
                *rel = dir.join(&*rel);
            }
        }
        Ok(config)
    }

    pub fn exponents(&self) -> Result<ExponentConfig, HarnessError> {
        ExponentConfig::new(self.exponents.p, self.exponents.q).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn space(&self) -> Result<SpaceModel, HarnessError> {
        let s = &self.space;
        let config = |msg: String| HarnessError::Config(format!("space: {msg}"));
        let dim = || s.dim.ok_or_else(|| config(format!("{} needs 'dim'", s.kind)));
        let integer_dim = || {
            let d = dim()?;
            if d.fract() != 0.0 || d < 0.0 || d > f64::from(u32::MAX) {
                return Err(config(format!("{} needs an integer 'dim', got {d}", s.kind)));
            }
            Ok(d as u32)
        };
        let model = match s.kind.as_str() {
            "homogeneous" => SpaceModel::homogeneous(dim()?),
            "hyperbolic" => SpaceModel::hyperbolic(integer_dim()?),
            "cartan_hadamard" => SpaceModel::cartan_hadamard(integer_dim()?, s.curvature.unwrap_or(0.0)),
            "tabulated" => {
                let path = s
                    .tabulated_path
                    .as_ref()
                    .ok_or_else(|| config("tabulated needs 'tabulated_path'".into()))?;
                if !path.exists() {
                    return Err(config(format!("tabulated file {} does not exist", path.display())));
                }
                return TabulatedSpace::from_csv(path)
                    .map(SpaceModel::SeparableTabulated)
                    .map_err(|e| config(e.to_string()));
            }
            other => return Err(config(format!("unknown kind '{other}'"))),
        }
        .map_err(|e| config(e.to_string()))?;
        match s.angular_mass {
            Some(m) => model.with_angular_mass(m).map_err(|e| config(e.to_string())),
            None => Ok(model),
        }
    }

    fn weight(&self, name: &str, pick: fn(&WeightsSpec) -> Option<WeightSpec>) -> Result<WeightSpec, HarnessError> {
        self.weights
            .as_ref()
            .and_then(pick)
            .ok_or_else(|| HarnessError::Config(format!("weights: task needs weight '{name}'")))
    }

    pub fn u(&self) -> Result<RadialWeight, HarnessError> {
        self.weight("u", |w| w.u)?.build()
    }

    pub fn v(&self) -> Result<RadialWeight, HarnessError> {
        self.weight("v", |w| w.v)?.build()
    }

    pub fn w(&self) -> Result<RadialWeight, HarnessError> {
        self.weight("w", |w| w.w)?.build()
    }

    pub fn b(&self) -> Result<RadialWeight, HarnessError> {
        self.weight("b", |w| w.b)?.build()
    }

    pub fn params(&self) -> Result<PowerWeightParams, HarnessError> {
        if let Some(p) = self.params {
            return Ok(p);
        }
        let (alpha1, alpha2) = self.weight("u", |w| w.u)?.exponents();
        let (beta, outer) = self.weight("v", |w| w.v)?.exponents();
        if beta != outer {
            return Err(HarnessError::Config(
                "params: v must be a single power to read beta off it; give [params] instead".into(),
            ));
        }
        Ok(PowerWeightParams { alpha1, alpha2, beta })
    }

    /// The configured test function; `near_extremal` is resolved by the caller.
    pub fn test_function(&self) -> Result<TestFunctionSpec, HarnessError> {
        self.test_function
            .ok_or_else(|| HarnessError::Config("test_function: task needs a test function".into()))
    }
}

impl TestFunctionSpec {
    /// Builds a closed-form test function; `None` for `near_extremal`.
    pub fn build(&self) -> Result<Option<TestFunction>, HarnessError> {
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(HarnessError::Config(format!(
                "test_function: scale must be positive, got {}",
                self.scale
            )));
        }
        let f = match self.shape {
            ShapeSpec::NearExtremal => return Ok(None),
            ShapeSpec::Constant => TestFunction::constant(),
            ShapeSpec::PowerBump { exponent, cutoff } => TestFunction::power_bump(exponent, cutoff),
            ShapeSpec::ExpDecay { rate } => TestFunction::exp_decay(rate),
            ShapeSpec::Ramp { exponent, knee } => TestFunction::ramp(exponent, knee),
            ShapeSpec::Saturating { rate } => TestFunction::saturating(rate),
        };
        f.validate()
            .map_err(|e| HarnessError::Config(format!("test_function: {e}")))?;
        Ok(Some(f.scaled(self.scale)))
    }
}
