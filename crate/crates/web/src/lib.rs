//! Browser bindings: an admissibility map over `(α₂, β)`, the constant
//! bracket report for a TOML config, and log radial density curves.
//!
//! Each export is a thin wrapper over a plain function returning
//! `Result<_, String>`, so the logic is testable off the browser.

use hardy_core::admissibility::{region_scan, PowerWeightParams, Sweep, SweptParam};
use hardy_core::exponents::ExponentConfig;
use hardy_core::harness::{run, RunConfig, Task};
use hardy_core::spaces::SpaceModel;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn space(kind: &str, dim: f64, curvature: f64) -> Result<SpaceModel, String> {
    let integer = || {
        if dim.fract() != 0.0 || dim < 2.0 {
            Err(format!("{kind} needs an integer dimension of at least 2"))
        } else {
            Ok(dim as u32)
        }
    };
    match kind {
        "homogeneous" => SpaceModel::homogeneous(dim),
        "hyperbolic" => SpaceModel::hyperbolic(integer()?),
        "cartan_hadamard" => SpaceModel::cartan_hadamard(integer()?, curvature),
        other => return Err(format!("unknown space kind '{other}'")),
    }
    .map_err(|e| e.to_string())
}

/// Cell codes: 0 inadmissible, 1 admissible, 2 on a boundary, 3 unsupported.
#[allow(clippy::too_many_arguments)]
pub fn admissibility_map_json(
    kind: &str,
    dim: f64,
    curvature: f64,
    p: f64,
    q: f64,
    alpha1: f64,
    alpha2_range: (f64, f64),
    beta_range: (f64, f64),
    steps: u32,
) -> Result<String, String> {
    if steps < 1 {
        return Err("need at least one step per axis".into());
    }
    let space = space(kind, dim, curvature)?;
    let e = ExponentConfig::new(p, q).map_err(|e| e.to_string())?;
    let sweep = |param, (lo, hi): (f64, f64)| Sweep {
        param,
        start: lo,
        stop: hi,
        step: (hi - lo) / f64::from(steps),
    };
    let sweeps = [
        sweep(SweptParam::Alpha2, alpha2_range),
        sweep(SweptParam::Beta, beta_range),
    ];
    let base = PowerWeightParams::new(alpha1, 0.0, 0.0);
    let table = region_scan(&space, base, &sweeps, &e).map_err(|e| e.to_string())?;
    let alpha2 = sweeps[0].values().map_err(|e| e.to_string())?;
    let beta = sweeps[1].values().map_err(|e| e.to_string())?;
    let codes: Vec<u8> = table
        .rows
        .iter()
        .map(|r| {
            let v = &r.verdict;
            if v.unsupported.is_some() {
                3
            } else if v.boundary {
                2
            } else {
                u8::from(v.admissible)
            }
        })
        .collect();
    let failing: Vec<Option<String>> = table
        .rows
        .iter()
        .map(|r| {
            r.verdict
                .conditions
                .iter()
                .find(|c| !c.satisfied)
                .map(|c| c.name.clone())
        })
        .collect();
    Ok(json!({
        "alpha2": alpha2,
        "beta": beta,
        "conditions": table.condition_names(),
        "cells": codes.chunks(beta.len()).collect::<Vec<_>>(),
        "first_failure": failing.chunks(beta.len()).collect::<Vec<_>>(),
    })
    .to_string())
}

/// Runs the sandwich task on a TOML config and returns the JSON report.
pub fn sandwich_json(config_toml: &str) -> Result<String, String> {
    let config = RunConfig::from_toml(config_toml).map_err(|e| e.to_string())?;
    if config.space.kind == "tabulated" {
        return Err("tabulated spaces need file access and are not available here".into());
    }
    let report = run(&config, Some(Task::Sandwich)).map_err(|e| e.to_string())?;
    Ok(report.to_json())
}

/// `ln λ₁(ρ)` at `ρ = rho_max·i/samples` for `i = 1..=samples`.
pub fn log_density(kind: &str, dim: f64, curvature: f64, rho_max: f64, samples: u32) -> Result<Vec<f64>, String> {
    if !(rho_max > 0.0) || samples == 0 {
        return Err("need rho_max > 0 and at least one sample".into());
    }
    let space = space(kind, dim, curvature)?;
    (1..=samples)
        .map(|i| {
            space
                .log_radial_density(rho_max * f64::from(i) / f64::from(samples))
                .map_err(|e| e.to_string())
        })
        .collect()
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn admissibility_map(
    kind: &str,
    dim: f64,
    curvature: f64,
    p: f64,
    q: f64,
    alpha1: f64,
    alpha2_lo: f64,
    alpha2_hi: f64,
    beta_lo: f64,
    beta_hi: f64,
    steps: u32,
) -> Result<String, JsValue> {
    admissibility_map_json(
        kind,
        dim,
        curvature,
        p,
        q,
        alpha1,
        (alpha2_lo, alpha2_hi),
        (beta_lo, beta_hi),
        steps,
    )
    .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sandwich(config_toml: &str) -> Result<String, JsValue> {
    sandwich_json(config_toml).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn density_curve(kind: &str, dim: f64, curvature: f64, rho_max: f64, samples: u32) -> Result<Vec<f64>, JsValue> {
    log_density(kind, dim, curvature, rho_max, samples).map_err(|e| JsValue::from_str(&e))
}
