//! 7/15-point Gauss–Kronrod rule evaluated on log-scaled integrands.
//!
//! Integrands are supplied through their logarithm. Each panel is scaled by
//! the largest log-value among its nodes before exponentiation, so panels
//! whose values lie far outside the `f64` range still integrate correctly;
//! the scale is carried separately as `ln_scale`.

/// Kronrod abscissae on [-1, 1] (positive half, descending; last is 0).
pub(crate) const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

pub(crate) const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5]` and the centre.
pub(crate) const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Integral of one panel as `exp(ln_scale) · value ± exp(ln_scale) · err`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelEstimate {
    pub a: f64,
    pub b: f64,
    pub ln_scale: f64,
    pub value: f64,
    pub err: f64,
}

impl PanelEstimate {
    pub fn ln_value(&self) -> f64 {
        if self.value > 0.0 {
            self.ln_scale + self.value.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn ln_err(&self) -> f64 {
        if self.err > 0.0 {
            self.ln_scale + self.err.ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Reason a panel could not be evaluated: the position (in chart
/// coordinates) of the first non-finite log-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BadNode {
    pub at: f64,
    pub ln_value: f64,
}

/// Integrates `exp(ln_g)` over `[a, b]`.
pub fn gk15<G: Fn(f64) -> f64>(ln_g: &G, a: f64, b: f64) -> Result<PanelEstimate, BadNode> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut nodes = [0.0f64; 15];
    let mut logs = [0.0f64; 15];
    for j in 0..7 {
        nodes[2 * j] = centre - half * XGK[j];
        nodes[2 * j + 1] = centre + half * XGK[j];
    }
    nodes[14] = centre;
    let mut ln_scale = f64::NEG_INFINITY;
    for (slot, &u) in logs.iter_mut().zip(nodes.iter()) {
        let l = ln_g(u);
        if l.is_nan() || l == f64::INFINITY {
            return Err(BadNode { at: u, ln_value: l });
        }
        *slot = l;
        ln_scale = ln_scale.max(l);
    }
    if ln_scale == f64::NEG_INFINITY {
        return Ok(PanelEstimate {
            a,
            b,
            ln_scale: 0.0,
            value: 0.0,
            err: 0.0,
        });
    }
    let f: Vec<f64> = logs.iter().map(|l| (l - ln_scale).exp()).collect();

    let fc = f[14];
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = WGK[7] * fc.abs();
    for j in 0..7 {
        let pair = f[2 * j] + f[2 * j + 1];
        kronrod += WGK[j] * pair;
        abs_sum += WGK[j] * (f[2 * j].abs() + f[2 * j + 1].abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((f[2 * j] - mean).abs() + (f[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half.abs();
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let err = rescale_error((kronrod - gauss) * half, res_abs, res_asc);
    Ok(PanelEstimate {
        a,
        b,
        ln_scale,
        value,
        err,
    })
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let ratio = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if ratio < 1.0 { res_asc * ratio } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}
