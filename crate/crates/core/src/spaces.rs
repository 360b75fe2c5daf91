//! Radial densities of polarizable spaces.
//!
//! Every functional here only needs the measure of spheres around the base
//! point, `λ₁(ρ) = ∫_{Σ_ρ} λ(ρ, σ) dσ`. Closed-form geometries are evaluated in
//! log form so that exponential volume growth never overflows.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::interp::MonotoneCubic;
use crate::quadrature::{Chart, Radius, TailFamily};
use crate::special::{ln_sinh_scaled, ln_sinh_with_ln};

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("spaces: radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("spaces: radius {rho} outside tabulated range [{lo}, {hi}] (no extrapolation)")]
    OutOfRange { rho: f64, lo: f64, hi: f64 },
    #[error("spaces: invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("spaces: malformed table: {0}")]
    Table(String),
    #[error("spaces: cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("spaces: csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

type LnDensity = dyn Fn(Radius) -> f64 + Send + Sync;

/// A user-supplied radial density `ρ ↦ ln λ₁(ρ)`.
#[derive(Clone)]
pub struct CustomDensity {
    ln_density: Arc<LnDensity>,
    chart: Chart,
}

impl CustomDensity {
    /// `chart` tells the quadrature how the density behaves at infinity:
    /// [`Chart::Log`] for power growth, [`Chart::LogSinh`] with the growth
    /// rate for exponential growth.
    pub fn new<F>(ln_density: F, chart: Chart) -> Self
    where
        F: Fn(Radius) -> f64 + Send + Sync + 'static,
    {
        Self {
            ln_density: Arc::new(ln_density),
            chart,
        }
    }
}

impl fmt::Debug for CustomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("chart", &self.chart)
            .finish_non_exhaustive()
    }
}

/// Density tabulated on a radial grid times a finite set of angular nodes.
#[derive(Debug, Clone)]
pub struct TabulatedSpace {
    r_grid: Vec<f64>,
    labels: Vec<String>,
    /// `lambda[i][j] = λ(r_i, ω_j)`
    lambda: Vec<Vec<f64>>,
    angular_weights: Vec<f64>,
    radial: MonotoneCubic,
}

impl TabulatedSpace {
    pub fn new(
        r_grid: Vec<f64>,
        labels: Vec<String>,
        lambda: Vec<Vec<f64>>,
        angular_weights: Vec<f64>,
    ) -> Result<Self, SpaceError> {
        if r_grid.len() < 2 {
            return Err(SpaceError::Table("need at least two radial nodes".into()));
        }
        if r_grid.iter().any(|&r| !(r > 0.0) || !r.is_finite()) || r_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SpaceError::Table(
                "radial grid must be positive and strictly increasing".into(),
            ));
        }
        let m = angular_weights.len();
        if m == 0 || labels.len() != m {
            return Err(SpaceError::Table(format!(
                "{} angular labels for {} angular weights",
                labels.len(),
                m
            )));
        }
        if angular_weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(SpaceError::Table("angular weights must be positive".into()));
        }
        if lambda.len() != r_grid.len() || lambda.iter().any(|row| row.len() != m) {
            return Err(SpaceError::Table(format!(
                "density matrix must be {} x {}",
                r_grid.len(),
                m
            )));
        }
        if lambda.iter().flatten().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(SpaceError::Table("density values must be strictly positive".into()));
        }
        let radial = log_log_interpolant(&r_grid, &lambda, &angular_weights, None)?;
        Ok(Self {
            r_grid,
            labels,
            lambda,
            angular_weights,
            radial,
        })
    }

    /// Reads the CSV layout
    ///
    /// ```text
    /// r,east,north,...
    /// weight,0.5,0.5,...
    /// 0.1,1.0,1.2,...
    /// ```
    ///
    /// The first row names the angular nodes, the second carries their
    /// weights, and every following row is `r, λ(r, ω₁), λ(r, ω₂), ...`.
    pub fn from_csv(path: &Path) -> Result<Self, SpaceError> {
        let file = std::fs::File::open(path).map_err(|source| SpaceError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file).map_err(|e| match e {
            SpaceError::Csv { source, .. } => SpaceError::Csv {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self, SpaceError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let csv_err = |source| SpaceError::Csv {
            path: PathBuf::from("<reader>"),
            source,
        };
        let headers = rdr.headers().map_err(csv_err)?.clone();
        let labels: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut records = rdr.records();
        let weights_row = records
            .next()
            .ok_or_else(|| SpaceError::Table("missing angular weight row".into()))?
            .map_err(csv_err)?;
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| SpaceError::Table(format!("not a number: {s:?}")))
        };
        let angular_weights = weights_row.iter().skip(1).map(parse).collect::<Result<Vec<_>, _>>()?;
        let mut r_grid = Vec::new();
        let mut lambda = Vec::new();
        for rec in records {
            let rec = rec.map_err(csv_err)?;
            let mut it = rec.iter();
            let r = parse(it.next().unwrap_or(""))?;
            r_grid.push(r);
            lambda.push(it.map(parse).collect::<Result<Vec<_>, _>>()?);
        }
        Self::new(r_grid, labels, lambda, angular_weights)
    }

    pub fn r_range(&self) -> (f64, f64) {
        (self.r_grid[0], self.r_grid[self.r_grid.len() - 1])
    }

    pub fn r_grid(&self) -> &[f64] {
        &self.r_grid
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn angular_mass(&self) -> f64 {
        self.angular_weights.iter().sum()
    }

    /// Sphere integral of a tabulated weight:
    /// `ρ ↦ Σ_j a_j · λ(ρ, ω_j) · weight(ρ, ω_j)`, interpolated monotone-cubically
    /// in `(ln ρ, ln value)`.
    pub fn radialize_weight(&self, weight_values: &[Vec<f64>]) -> Result<TabulatedRadial, SpaceError> {
        if weight_values.len() != self.r_grid.len()
            || weight_values.iter().any(|row| row.len() != self.angular_weights.len())
        {
            return Err(SpaceError::Table(format!(
                "weight matrix must be {} x {}",
                self.r_grid.len(),
                self.angular_weights.len()
            )));
        }
        if weight_values.iter().flatten().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(SpaceError::Table("weight values must be strictly positive".into()));
        }
        let curve = log_log_interpolant(&self.r_grid, &self.lambda, &self.angular_weights, Some(weight_values))?;
        Ok(TabulatedRadial {
            range: self.r_range(),
            curve,
        })
    }

    fn ln_radial(&self, rho: Radius) -> f64 {
        self.radial.eval(rho.ln).unwrap_or(f64::NAN)
    }
}

fn log_log_interpolant(
    r_grid: &[f64],
    lambda: &[Vec<f64>],
    angular_weights: &[f64],
    weight: Option<&[Vec<f64>]>,
) -> Result<MonotoneCubic, SpaceError> {
    let xs: Vec<f64> = r_grid.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = lambda
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .zip(angular_weights)
                .enumerate()
                .map(|(j, (l, a))| a * l * weight.map_or(1.0, |w| w[i][j]))
                .sum::<f64>()
                .ln()
        })
        .collect();
    MonotoneCubic::new(xs, ys).ok_or_else(|| SpaceError::Table("cannot interpolate table".into()))
}

/// Radial function produced by [`TabulatedSpace::radialize_weight`].
#[derive(Debug, Clone)]
pub struct TabulatedRadial {
    range: (f64, f64),
    curve: MonotoneCubic,
}

impl TabulatedRadial {
    pub fn eval(&self, rho: f64) -> Result<f64, SpaceError> {
        self.ln_eval(rho).map(f64::exp)
    }

    pub fn ln_eval(&self, rho: f64) -> Result<f64, SpaceError> {
        if !(rho > 0.0) {
            return Err(SpaceError::NonPositiveRadius(rho));
        }
        self.curve.eval(rho.ln()).ok_or(SpaceError::OutOfRange {
            rho,
            lo: self.range.0,
            hi: self.range.1,
        })
    }
}

#[derive(Debug, Clone)]
pub enum SpaceModel {
    /// Homogeneous group of homogeneous dimension `dim`; `λ₁ = m·ρ^{dim−1}`.
    HomogeneousGroup {
        dim: f64,
        angular_mass: f64,
    },
    /// Real hyperbolic space; `λ₁ = m·sinh^{n−1} ρ`.
    Hyperbolic {
        dim: u32,
        angular_mass: f64,
    },
    /// Cartan–Hadamard manifold of constant curvature `−curvature`.
    CartanHadamard {
        dim: u32,
        curvature: f64,
        angular_mass: f64,
    },
    CustomRadial(CustomDensity),
    SeparableTabulated(TabulatedSpace),
}

impl SpaceModel {
    pub fn homogeneous(dim: f64) -> Result<Self, SpaceError> {
        if !(dim > 0.0) || !dim.is_finite() {
            return Err(SpaceError::InvalidParameter(format!(
                "homogeneous dimension must be positive, got {dim}"
            )));
        }
        Ok(SpaceModel::HomogeneousGroup { dim, angular_mass: 1.0 })
    }

    pub fn hyperbolic(dim: u32) -> Result<Self, SpaceError> {
        if dim < 2 {
            return Err(SpaceError::InvalidParameter(format!(
                "hyperbolic dimension must be at least 2, got {dim}"
            )));
        }
        Ok(SpaceModel::Hyperbolic { dim, angular_mass: 1.0 })
    }

    pub fn cartan_hadamard(dim: u32, curvature: f64) -> Result<Self, SpaceError> {
        if dim < 2 {
            return Err(SpaceError::InvalidParameter(format!(
                "manifold dimension must be at least 2, got {dim}"
            )));
        }
        if !(curvature >= 0.0) || !curvature.is_finite() {
            return Err(SpaceError::InvalidParameter(format!(
                "curvature parameter b must be finite and >= 0, got {curvature}"
            )));
        }
        Ok(SpaceModel::CartanHadamard {
            dim,
            curvature,
            angular_mass: 1.0,
        })
    }

    /// Replaces the angular mass of a closed-form geometry.
    pub fn with_angular_mass(self, mass: f64) -> Result<Self, SpaceError> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(SpaceError::InvalidParameter(format!(
                "angular mass must be positive, got {mass}"
            )));
        }
        Ok(match self {
            SpaceModel::HomogeneousGroup { dim, .. } => SpaceModel::HomogeneousGroup {
                dim,
                angular_mass: mass,
            },
            SpaceModel::Hyperbolic { dim, .. } => SpaceModel::Hyperbolic {
                dim,
                angular_mass: mass,
            },
            SpaceModel::CartanHadamard { dim, curvature, .. } => SpaceModel::CartanHadamard {
                dim,
                curvature,
                angular_mass: mass,
            },
            other => {
                return Err(SpaceError::InvalidParameter(format!(
                    "angular mass is fixed by the data for {}",
                    other.kind()
                )))
            }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpaceModel::HomogeneousGroup { .. } => "homogeneous",
            SpaceModel::Hyperbolic { .. } => "hyperbolic",
            SpaceModel::CartanHadamard { .. } => "cartan_hadamard",
            SpaceModel::CustomRadial(_) => "custom",
            SpaceModel::SeparableTabulated(_) => "tabulated",
        }
    }

    pub fn angular_mass(&self) -> Option<f64> {
        match self {
            SpaceModel::HomogeneousGroup { angular_mass, .. }
            | SpaceModel::Hyperbolic { angular_mass, .. }
            | SpaceModel::CartanHadamard { angular_mass, .. } => Some(*angular_mass),
            SpaceModel::SeparableTabulated(t) => Some(t.angular_mass()),
            SpaceModel::CustomRadial(_) => None,
        }
    }

    /// `ln λ₁(ρ)`, used inside integrands. Out-of-range tabulated radii give
    /// `NaN`, which the quadrature reports with the offending radius.
    pub fn ln_density_at(&self, rho: Radius) -> f64 {
        match self {
            SpaceModel::HomogeneousGroup { dim, angular_mass } => power_density(*dim, *angular_mass, rho),
            SpaceModel::Hyperbolic { dim, angular_mass } => {
                angular_mass.ln() + f64::from(dim - 1) * ln_sinh_radius(rho)
            }
            SpaceModel::CartanHadamard {
                dim,
                curvature,
                angular_mass,
            } => {
                if *curvature == 0.0 {
                    power_density(f64::from(*dim), *angular_mass, rho)
                } else {
                    let ln_profile = ln_sinh_scaled(rho.value, rho.ln, curvature.sqrt());
                    angular_mass.ln() + f64::from(dim - 1) * ln_profile
                }
            }
            SpaceModel::CustomRadial(c) => (c.ln_density)(rho),
            SpaceModel::SeparableTabulated(t) => t.ln_radial(rho),
        }
    }

    pub fn log_radial_density(&self, rho: f64) -> Result<f64, SpaceError> {
        if !(rho > 0.0) {
            return Err(SpaceError::NonPositiveRadius(rho));
        }
        if let SpaceModel::SeparableTabulated(t) = self {
            let (lo, hi) = t.r_range();
            if rho < lo || rho > hi {
                return Err(SpaceError::OutOfRange { rho, lo, hi });
            }
        }
        Ok(self.ln_density_at(Radius::new(rho)))
    }

    pub fn radial_density(&self, rho: f64) -> Result<f64, SpaceError> {
        self.log_radial_density(rho).map(f64::exp)
    }

    /// Chart in which integrals against this density are carried out.
    pub fn chart(&self) -> Chart {
        match self {
            SpaceModel::HomogeneousGroup { .. } | SpaceModel::SeparableTabulated(_) => Chart::Log,
            SpaceModel::Hyperbolic { .. } => Chart::LogSinh { scale: 1.0 },
            SpaceModel::CartanHadamard { curvature, .. } => {
                if *curvature == 0.0 {
                    Chart::Log
                } else {
                    Chart::LogSinh {
                        scale: curvature.sqrt(),
                    }
                }
            }
            SpaceModel::CustomRadial(c) => c.chart,
        }
    }

    pub fn tail_family(&self) -> TailFamily {
        self.chart().family()
    }
}

fn power_density(dim: f64, mass: f64, rho: Radius) -> f64 {
    mass.ln() + (dim - 1.0) * rho.ln
}

fn ln_sinh_radius(rho: Radius) -> f64 {
    ln_sinh_with_ln(rho.value, rho.ln)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_examples() {
        let h = SpaceModel::homogeneous(2.0).unwrap();
        assert_relative_eq!(h.radial_density(0.5).unwrap(), 0.5, max_relative = 1e-15);
        let hyp = SpaceModel::hyperbolic(2).unwrap();
        assert_relative_eq!(hyp.radial_density(1.0).unwrap(), 1f64.sinh(), max_relative = 1e-15);
        assert_relative_eq!(hyp.radial_density(1.0).unwrap(), 1.17520, max_relative = 1e-5);
        let ch = SpaceModel::cartan_hadamard(3, 0.0).unwrap();
        assert_eq!(ch.radial_density(2.0).unwrap(), 4.0);
    }

    #[test]
    fn flat_cartan_hadamard_is_bit_identical_to_group() {
        let ch = SpaceModel::cartan_hadamard(3, 0.0)
            .unwrap()
            .with_angular_mass(2.5)
            .unwrap();
        let g = SpaceModel::homogeneous(3.0).unwrap().with_angular_mass(2.5).unwrap();
        for k in -40..40 {
            let rho = 1.3f64.powi(k);
            assert_eq!(
                ch.log_radial_density(rho).unwrap().to_bits(),
                g.log_radial_density(rho).unwrap().to_bits()
            );
        }
        assert_eq!(ch.chart(), g.chart());
    }

    #[test]
    fn curvature_continuity() {
        let g = SpaceModel::homogeneous(3.0).unwrap();
        let ch = SpaceModel::cartan_hadamard(3, 1e-8).unwrap();
        for k in 0..=40 {
            let rho = 0.1 * 100f64.powf(k as f64 / 40.0);
            let a = ch.radial_density(rho).unwrap();
            let b = g.radial_density(rho).unwrap();
            assert!(((a - b) / b).abs() < 1e-6);
        }
    }

    #[test]
    fn hyperbolic_far_field_without_overflow() {
        for n in 2..6u32 {
            let s = SpaceModel::hyperbolic(n).unwrap().with_angular_mass(3.0).unwrap();
            let l = s.log_radial_density(50.0).unwrap();
            assert!((l - f64::from(n - 1) * (50.0 - 2f64.ln()) - 3f64.ln()).abs() < 1e-6);
            assert!(s.log_radial_density(5000.0).unwrap().is_finite());
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(SpaceModel::homogeneous(0.0).is_err());
        assert!(SpaceModel::hyperbolic(1).is_err());
        assert!(SpaceModel::cartan_hadamard(3, -1.0).is_err());
        let h = SpaceModel::homogeneous(1.0).unwrap();
        assert!(matches!(h.radial_density(0.0), Err(SpaceError::NonPositiveRadius(_))));
        assert!(h.clone().with_angular_mass(0.0).is_err());
    }

    fn grid() -> Vec<f64> {
        (0..=60).map(|i| 0.01 * 1.1f64.powi(i)).collect()
    }

    #[test]
    fn tabulated_constant_density() {
        let r = grid();
        let two_pi = std::f64::consts::TAU;
        let lambda = vec![vec![1.0; 4]; r.len()];
        let t = TabulatedSpace::new(
            r.clone(),
            (0..4).map(|j| j.to_string()).collect(),
            lambda,
            vec![two_pi / 4.0; 4],
        )
        .unwrap();
        let radial = t.radialize_weight(&vec![vec![1.0; 4]; r.len()]).unwrap();
        for &x in &[0.011, 0.5, 2.0] {
            assert_relative_eq!(radial.eval(x).unwrap(), two_pi, max_relative = 1e-12);
        }
        assert!(matches!(radial.eval(1e3), Err(SpaceError::OutOfRange { .. })));
    }

    #[test]
    fn tabulated_separable_factor() {
        let r = grid();
        let s = [0.5, 1.5, 2.0];
        let a = [1.0, 2.0, 0.25];
        let lambda: Vec<Vec<f64>> = r.iter().map(|&x| s.iter().map(|&sj| x * sj).collect()).collect();
        let t = TabulatedSpace::new(r.clone(), vec!["a".into(), "b".into(), "c".into()], lambda, a.to_vec()).unwrap();
        let ones = vec![vec![1.0; 3]; r.len()];
        let radial = t.radialize_weight(&ones).unwrap();
        let sum: f64 = a.iter().zip(&s).map(|(x, y)| x * y).sum();
        for &x in &[0.02, 0.3, 2.5] {
            assert_relative_eq!(radial.eval(x).unwrap(), x * sum, max_relative = 1e-10);
        }
    }

    #[test]
    fn tabulated_group_against_closed_form() {
        let r = grid();
        let g = SpaceModel::homogeneous(3.0).unwrap().with_angular_mass(4.0).unwrap();
        let lambda: Vec<Vec<f64>> = r.iter().map(|&x| vec![x * x; 2]).collect();
        let t = TabulatedSpace::new(r.clone(), vec!["n".into(), "s".into()], lambda, vec![2.0, 2.0]).unwrap();
        let weight: Vec<Vec<f64>> = r.iter().map(|&x| vec![x.powi(-4); 2]).collect();
        let radial = t.radialize_weight(&weight).unwrap();
        for k in 0..200 {
            let x = 0.0101 * (1.1f64.powi(60) * 0.99 / 1.01).powf(k as f64 / 199.0);
            let exact = g.radial_density(x).unwrap() * x.powi(-4);
            assert_relative_eq!(radial.eval(x).unwrap(), exact, max_relative = 1e-6);
        }
        let space = SpaceModel::SeparableTabulated(t);
        for &x in &r {
            assert_relative_eq!(
                space.radial_density(x).unwrap(),
                g.radial_density(x).unwrap(),
                max_relative = 1e-6
            );
        }
        assert!(matches!(space.radial_density(1e-4), Err(SpaceError::OutOfRange { .. })));
    }

    #[test]
    fn csv_layout() {
        let text = "r,north,south\nweight,1.5,0.5\n0.5,1,3\n1,2,6\n2,4,12\n";
        let t = TabulatedSpace::from_reader(text.as_bytes()).unwrap();
        assert_eq!(t.labels(), ["north", "south"]);
        assert_relative_eq!(t.angular_mass(), 2.0);
        let s = SpaceModel::SeparableTabulated(t);
        assert_relative_eq!(
            s.radial_density(1.0).unwrap(),
            1.5 * 2.0 + 0.5 * 6.0,
            max_relative = 1e-12
        );
        assert!(TabulatedSpace::from_reader("r,a\nweight,1\n1,-2\n2,1\n".as_bytes()).is_err());
        assert!(TabulatedSpace::from_reader("r,a\n".as_bytes()).is_err());
    }
}
