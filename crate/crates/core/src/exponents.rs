//! Exponent bookkeeping for the range `0 < q < p`, `1 < p < ∞`.
//!
//! Every functional in the crate is parametrised by the pair `(p, q)` and a
//! handful of derived quantities: the gap exponent `r` with
//! `1/r = 1/q - 1/p`, the conjugate `p' = p/(p-1)` and several ratios. They
//! are computed once here so that the rest of the code never re-derives them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExponentError {
    #[error("exponents: p = {0} violates 1 < p < ∞")]
    OuterExponent(f64),
    #[error("exponents: q = {0} violates q > 0")]
    NonPositiveInner(f64),
    #[error("exponents: q = {q} violates q < p = {p}")]
    InnerNotBelowOuter { p: f64, q: f64 },
}

/// The pair `(p, q)` together with all derived exponents.
///
/// `q'` itself is never stored: it is infinite at `q = 1` and negative for
/// `q < 1`. Formulas only ever need `r/q'`, kept as `r·(1 - 1/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentConfig {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub p_conj: f64,
    pub ratio_rp: f64,
    pub ratio_rpc: f64,
    pub ratio_rq: f64,
    pub ratio_rqc: f64,
}

impl ExponentConfig {
    /// Validates `1 < p < ∞`, `0 < q < p` (strictly, no slack) and derives
    /// the remaining fields.
    pub fn new(p: f64, q: f64) -> Result<Self, ExponentError> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(ExponentError::OuterExponent(p));
        }
        if !(q > 0.0) {
            return Err(ExponentError::NonPositiveInner(q));
        }
        if !(q < p) {
            return Err(ExponentError::InnerNotBelowOuter { p, q });
        }
        let r = p * q / (p - q);
        let p_conj = p / (p - 1.0);
        let ratio_rp = q / (p - q);
        Ok(Self {
            p,
            q,
            r,
            p_conj,
            ratio_rp,
            ratio_rpc: r / p_conj,
            // r/q = r/p + 1 exactly in real arithmetic; computing it this way
            // keeps the identity exact in floating point too.
            ratio_rq: ratio_rp + 1.0,
            ratio_rqc: r * (1.0 - 1.0 / q),
        })
    }

    /// `1 - p'`, the exponent turning `v` into `v^{1-p'}`.
    pub fn dual_weight_exponent(&self) -> f64 {
        -1.0 / (self.p - 1.0)
    }

    /// `q/p'`, the factor in `A₂ʳ = (q/p')·A₁ʳ`.
    pub fn lemma_factor(&self) -> f64 {
        self.q / self.p_conj
    }

    /// Closed-form constants bracketing the best Hardy constant in units of `A₂`.
    pub fn constants(&self) -> ConstantBracket {
        theorem_constants(self)
    }
}

/// `derive_exponents` under its operational name.
pub fn derive_exponents(p: f64, q: f64) -> Result<ExponentConfig, ExponentError> {
    ExponentConfig::new(p, q)
}

/// Factors `c_lo`, `c_hi` with `c_lo·A₂ ≤ C ≤ c_hi·A₂` for the best constant `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantBracket {
    pub lower_factor: f64,
    pub upper_factor: f64,
}

impl ConstantBracket {
    pub fn scaled(&self, a2: f64) -> (f64, f64) {
        (self.lower_factor * a2, self.upper_factor * a2)
    }
}

pub fn theorem_constants(e: &ExponentConfig) -> ConstantBracket {
    let ExponentConfig { p, q, r, p_conj, .. } = *e;
    // (p')^{1/p'} q^{1/p} (1 - q/p)
    let lower_factor = p_conj.powf(1.0 / p_conj) * q.powf(1.0 / p) * (1.0 - q / p);
    // (r/q)^{1/r} p^{1/p} (p')^{1/p'}
    let upper_factor = (r / q).powf(1.0 / r) * p.powf(1.0 / p) * p_conj.powf(1.0 / p_conj);
    ConstantBracket {
        lower_factor,
        upper_factor,
    }
}
