//! Overflow-safe logarithms of hyperbolic functions.

use std::f64::consts::LN_2;

/// `ln(sinh(x)/x)` for `x ≥ 0`, accurate near zero and finite for huge `x`.
pub fn ln_sinhc(x: f64) -> f64 {
    if x < 1e-4 {
        let x2 = x * x;
        x2 / 6.0 - x2 * x2 / 180.0
    } else if x < 20.0 {
        (x.sinh() / x).ln()
    } else {
        x - LN_2 - x.ln() + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// `ln(sinh x)` for `x > 0`; `ln_x` must equal `ln x` (passed separately so
/// that tiny arguments keep full relative precision).
pub fn ln_sinh_with_ln(x: f64, ln_x: f64) -> f64 {
    if x < 1.0 {
        ln_x + ln_sinhc(x)
    } else {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

pub fn ln_sinh(x: f64) -> f64 {
    ln_sinh_with_ln(x, x.ln())
}

/// `ln(sinh(k x)/k)` for `x, k > 0`; tends to `ln x` as `k → 0`.
pub fn ln_sinh_scaled(x: f64, ln_x: f64, k: f64) -> f64 {
    let y = k * x;
    if y < 1.0 {
        ln_x + ln_sinhc(y)
    } else {
        ln_sinh(y) - k.ln()
    }
}

/// `ln(tanh z)` for `z > 0`.
pub fn ln_tanh(z: f64) -> f64 {
    if z < 1e-4 {
        z.ln() - z * z / 3.0
    } else if z < 0.5 {
        z.tanh().ln()
    } else {
        // tanh z = 1 - 2/(e^{2z}+1)
        (-2.0 / ((2.0 * z).exp() + 1.0)).ln_1p()
    }
}

/// `ln(asinh(e^u))`, i.e. the log of the inverse of `u = ln sinh(y)`.
pub fn ln_asinh_exp(u: f64) -> f64 {
    if u < -20.0 {
        // asinh(y) = y (1 - y²/6 + ...)
        let y2 = (2.0 * u).exp();
        u + (-y2 / 6.0).ln_1p()
    } else if u > 20.0 {
        asinh_exp(u).ln()
    } else {
        u.exp().asinh().ln()
    }
}

/// `asinh(e^u)` without overflowing for large `u`.
pub fn asinh_exp(u: f64) -> f64 {
    if u > 20.0 {
        // asinh(y) = ln(y + sqrt(y²+1)) = u + ln(1 + sqrt(1 + e^{-2u}))
        u + (1.0 + (1.0 + (-2.0 * u).exp()).sqrt()).ln()
    } else {
        u.exp().asinh()
    }
}

/// `ln(e^a + e^b)`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
