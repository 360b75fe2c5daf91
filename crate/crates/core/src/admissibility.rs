//! Closed-form admissibility of power weights.
//!
//! For `u = ρ^{α₁}` inside the unit ball and `ρ^{α₂}` outside, and
//! `v = ρ^β`, finiteness of `A₂` reduces to four strict sign conditions on
//! affine combinations of the exponents. On exponential-volume spaces the
//! powers are taken of `sinh` instead and two of the offsets drop by one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::ExponentConfig;
use crate::functionals::{a2_verdict, FunctionalError, HardyProblem, RadialWeight};
use crate::quadrature::FinitenessVerdict;
use crate::spaces::SpaceModel;

/// Values with `|value|` below this count as sitting on a condition boundary.
pub const BOUNDARY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdmissibilityError {
    #[error("admissibility: no closed-form conditions for a {0} space")]
    UnsupportedSpace(&'static str),
    #[error("admissibility: sweep of {param} is empty (start {start}, stop {stop})")]
    EmptyRange { param: SweptParam, start: f64, stop: f64 },
    #[error("admissibility: sweep of {param} needs a positive finite step, got {step}")]
    BadStep { param: SweptParam, step: f64 },
    #[error("admissibility: sweep bounds must be finite")]
    NonFiniteBound,
    #[error("admissibility: a scan sweeps one or two parameters, got {0}")]
    SweepCount(usize),
    #[error("admissibility: {0} is swept twice")]
    DuplicateParam(SweptParam),
    #[error("admissibility: numeric check failed: {0}")]
    Numeric(#[from] FunctionalError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerWeightParams {
    /// Exponent of `u` inside the unit ball.
    pub alpha1: f64,
    /// Exponent of `u` outside the unit ball.
    pub alpha2: f64,
    /// Exponent of `v`.
    pub beta: f64,
}

impl PowerWeightParams {
    pub fn new(alpha1: f64, alpha2: f64, beta: f64) -> Self {
        PowerWeightParams { alpha1, alpha2, beta }
    }

    pub fn get(&self, param: SweptParam) -> f64 {
        match param {
            SweptParam::Alpha1 => self.alpha1,
            SweptParam::Alpha2 => self.alpha2,
            SweptParam::Beta => self.beta,
        }
    }

    pub fn with(mut self, param: SweptParam, value: f64) -> Self {
        match param {
            SweptParam::Alpha1 => self.alpha1 = value,
            SweptParam::Alpha2 => self.alpha2 = value,
            SweptParam::Beta => self.beta = value,
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<0")]
    Negative,
    #[serde(rename = ">0")]
    Positive,
}

impl Relation {
    fn holds(self, value: f64) -> bool {
        match self {
            Relation::Negative => value < 0.0,
            Relation::Positive => value > 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub satisfied: bool,
    /// Partial derivatives of `value` in `(α₁, α₂, β)`.
    #[serde(skip)]
    pub gradient: [f64; 3],
}

impl Condition {
    fn new(name: &str, value: f64, relation: Relation, gradient: [f64; 3]) -> Self {
        Condition {
            name: name.to_string(),
            value,
            relation,
            satisfied: relation.holds(value),
            gradient,
        }
    }

    /// Euclidean distance in parameter space to the hyperplane `value = 0`.
    pub fn distance(&self) -> f64 {
        let norm = self.gradient.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm == 0.0 {
            f64::INFINITY
        } else {
            self.value.abs() / norm
        }
    }
}

/// Which list of conditions produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Homogeneous,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub conditions: Vec<Condition>,
    pub boundary: bool,
    pub unsupported: Option<String>,
    pub branch: Branch,
    /// Signed offset `α₁ + dim` whose vanishing is the unsupported case.
    pub inner_offset: f64,
}

impl AdmissibilityVerdict {
    fn assemble(conditions: Vec<Condition>, branch: Branch, inner_offset: f64, unsupported: Option<String>) -> Self {
        let boundary = conditions.iter().any(|c| c.value.abs() < BOUNDARY_EPS);
        let admissible = conditions.iter().all(|c| c.satisfied) && !boundary && unsupported.is_none();
        AdmissibilityVerdict {
            admissible,
            conditions,
            boundary,
            unsupported,
            branch,
            inner_offset,
        }
    }

    /// Distance in `(α₁, α₂, β)` to the nearest condition boundary, including
    /// the unsupported plane `α₁ + dim = 0`.
    pub fn boundary_distance(&self) -> f64 {
        self.conditions
            .iter()
            .map(Condition::distance)
            .fold(self.inner_offset.abs(), f64::min)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// The outer and dual offsets, then their mixes weighted by `r/q` and `r/p′`.
/// `outer_shift` is 1 on exponential-volume spaces, where the far-field
/// offsets lose one.
fn four_conditions(
    names: [&str; 4],
    params: PowerWeightParams,
    dim: f64,
    outer_shift: f64,
    e: &ExponentConfig,
) -> Vec<Condition> {
    let dual = 1.0 - e.p_conj;
    let (rq, rpc) = (e.ratio_rq, e.ratio_rpc);
    let outer = params.alpha2 + dim - outer_shift;
    let dual_near = params.beta * dual + dim;
    let dual_far = params.beta * dual + dim - outer_shift;
    let inner = params.alpha1 + dim;
    vec![
        Condition::new(names[0], outer, Relation::Negative, [0.0, 1.0, 0.0]),
        Condition::new(names[1], dual_near, Relation::Positive, [0.0, 0.0, dual]),
        Condition::new(
            names[2],
            inner * rq + dual_near * rpc,
            Relation::Positive,
            [rq, 0.0, dual * rpc],
        ),
        Condition::new(
            names[3],
            outer * rq + dual_far * rpc,
            Relation::Negative,
            [0.0, rq, dual * rpc],
        ),
    ]
}

/// Conditions for a homogeneous group of homogeneous dimension `dim`.
pub fn check_homogeneous(params: PowerWeightParams, dim: f64, e: &ExponentConfig) -> AdmissibilityVerdict {
    let conditions = four_conditions(["C1", "C2", "C3", "C4"], params, dim, 0.0, e);
    let inner_offset = params.alpha1 + dim;
    let unsupported = (inner_offset.abs() < BOUNDARY_EPS).then(|| "alpha1+Q=0 boundary case".to_string());
    AdmissibilityVerdict::assemble(conditions, Branch::Homogeneous, inner_offset, unsupported)
}

/// Conditions for hyperbolic space of dimension `dim` with sinh-power weights.
pub fn check_hyperbolic(params: PowerWeightParams, dim: u32, e: &ExponentConfig) -> AdmissibilityVerdict {
    let n = f64::from(dim);
    let conditions = four_conditions(["H1", "H2", "H3", "H4"], params, n, 1.0, e);
    let inner_offset = params.alpha1 + n;
    let unsupported = (inner_offset.abs() < BOUNDARY_EPS).then(|| "alpha1+n=0 boundary case".to_string());
    AdmissibilityVerdict::assemble(conditions, Branch::Hyperbolic, inner_offset, unsupported)
}

/// Constant curvature `−b`: flat conditions at `b = 0`, hyperbolic ones otherwise.
pub fn check_cartan_hadamard(
    params: PowerWeightParams,
    dim: u32,
    curvature: f64,
    e: &ExponentConfig,
) -> AdmissibilityVerdict {
    if curvature == 0.0 {
        check_homogeneous(params, f64::from(dim), e)
    } else {
        check_hyperbolic(params, dim, e)
    }
}

/// Dispatches on a closed-form geometry.
pub fn check_space(
    params: PowerWeightParams,
    space: &SpaceModel,
    e: &ExponentConfig,
) -> Result<AdmissibilityVerdict, AdmissibilityError> {
    match space {
        SpaceModel::HomogeneousGroup { dim, .. } => Ok(check_homogeneous(params, *dim, e)),
        SpaceModel::Hyperbolic { dim, .. } => Ok(check_hyperbolic(params, *dim, e)),
        SpaceModel::CartanHadamard { dim, curvature, .. } => Ok(check_cartan_hadamard(params, *dim, *curvature, e)),
        other => Err(AdmissibilityError::UnsupportedSpace(other.kind())),
    }
}

/// The weights `(u, v)` the conditions speak about on `space`.
pub fn power_weights(
    params: PowerWeightParams,
    space: &SpaceModel,
) -> Result<(RadialWeight, RadialWeight), AdmissibilityError> {
    let sinh = |scale: f64| {
        (
            RadialWeight::sinh_piecewise(params.alpha1, params.alpha2, scale),
            RadialWeight::sinh_power(params.beta, scale),
        )
    };
    match space {
        SpaceModel::HomogeneousGroup { .. } | SpaceModel::CartanHadamard { curvature: 0.0, .. } => Ok((
            RadialWeight::piecewise(params.alpha1, params.alpha2),
            RadialWeight::power(params.beta),
        )),
        SpaceModel::Hyperbolic { .. } => Ok(sinh(1.0)),
        SpaceModel::CartanHadamard { curvature, .. } => Ok(sinh(curvature.sqrt())),
        other => Err(AdmissibilityError::UnsupportedSpace(other.kind())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweptParam {
    Alpha1,
    Alpha2,
    Beta,
}

impl SweptParam {
    pub fn name(self) -> &'static str {
        match self {
            SweptParam::Alpha1 => "alpha1",
            SweptParam::Alpha2 => "alpha2",
            SweptParam::Beta => "beta",
        }
    }
}

impl std::fmt::Display for SweptParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweptParam,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    /// Grid values `start + i·step`, computed from the index so no rounding
    /// accumulates. The count tolerates `stop` landing a hair below a node.
    pub fn values(&self) -> Result<Vec<f64>, AdmissibilityError> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(AdmissibilityError::NonFiniteBound);
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(AdmissibilityError::BadStep {
                param: self.param,
                step: self.step,
            });
        }
        if self.stop < self.start {
            return Err(AdmissibilityError::EmptyRange {
                param: self.param,
                start: self.start,
                stop: self.stop,
            });
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| self.start + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// Swept values, in the order of the sweeps.
    pub values: Vec<f64>,
    pub verdict: AdmissibilityVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub params: Vec<SweptParam>,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn condition_names(&self) -> Vec<String> {
        self.rows
            .first()
            .map(|r| r.verdict.conditions.iter().map(|c| c.name.clone()).collect())
            .unwrap_or_default()
    }
}

/// Evaluates the conditions on a one- or two-parameter grid. Rows are
/// ordered lexicographically by the swept values, first sweep outermost.
pub fn region_scan(
    space: &SpaceModel,
    base: PowerWeightParams,
    sweeps: &[Sweep],
    e: &ExponentConfig,
) -> Result<ScanTable, AdmissibilityError> {
    if sweeps.is_empty() || sweeps.len() > 2 {
        return Err(AdmissibilityError::SweepCount(sweeps.len()));
    }
    if sweeps.len() == 2 && sweeps[0].param == sweeps[1].param {
        return Err(AdmissibilityError::DuplicateParam(sweeps[0].param));
    }
    // Validates the geometry before any work is fanned out.
    check_space(base, space, e)?;

    let axes = sweeps.iter().map(Sweep::values).collect::<Result<Vec<_>, _>>()?;
    let points: Vec<Vec<f64>> = match axes.as_slice() {
        [a] => a.iter().map(|&x| vec![x]).collect(),
        [a, b] => a.iter().flat_map(|&x| b.iter().map(move |&y| vec![x, y])).collect(),
        _ => unreachable!(),
    };
    let rows = points
        .into_par_iter()
        .map(|values| {
            let params = sweeps
                .iter()
                .zip(&values)
                .fold(base, |acc, (s, &v)| acc.with(s.param, v));
            let verdict = check_space(params, space, e)?;
            Ok(ScanRow { values, verdict })
        })
        .collect::<Result<Vec<_>, AdmissibilityError>>()?;
    Ok(ScanTable {
        params: sweeps.iter().map(|s| s.param).collect(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub params: PowerWeightParams,
    pub symbolic: AdmissibilityVerdict,
    pub numeric: FinitenessVerdict,
    /// `None` when the numeric verdict is indeterminate or the point is on a
    /// boundary where the symbolic side asserts nothing.
    pub agree: Option<bool>,
}

/// Compares the closed-form verdict with the numeric classification of `A₂`.
pub fn cross_validate(
    params: PowerWeightParams,
    space: &SpaceModel,
    e: &ExponentConfig,
) -> Result<CrossValidation, AdmissibilityError> {
    let symbolic = check_space(params, space, e)?;
    let (u, v) = power_weights(params, space)?;
    let numeric = a2_verdict(&HardyProblem::new(space.clone(), u, v, *e))?;
    let agree = if symbolic.boundary || symbolic.unsupported.is_some() {
        None
    } else {
        match &numeric {
            FinitenessVerdict::Indeterminate { .. } => None,
            n => Some(symbolic.admissible == n.is_finite()),
        }
    };
    Ok(CrossValidation {
        params,
        symbolic,
        numeric,
        agree,
    })
}
