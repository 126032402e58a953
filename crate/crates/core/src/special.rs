//! Scalar kernels: the principal branch of the Lambert W function and
//! overflow-safe compositions of `ln`, `exp` and their `1p`/`m1` variants.

use std::f64::consts::{E, LN_2};

use crate::error::{Error, Result};

/// `1/e`, the branch point of W.
const INV_E: f64 = 1.0 / E;

const HALLEY_MAX_ITER: usize = 50;
const RESIDUAL_TOL: f64 = 1e-14;

/// Principal branch `W0(x)`, the solution `w >= -1` of `w e^w = x`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(x >= -INV_E) || !x.is_finite() {
        return Err(Error::domain("x", x, "[-1/e, +inf)"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x > E {
        return Ok(w0_of_log(x.ln()));
    }
    Ok(halley(x, initial_guess(x)))
}

/// `W0(e^t)` without forming `e^t`, so arguments far beyond `f64::MAX` are fine.
pub fn lambert_w0_exp(t: f64) -> Result<f64> {
    if t.is_nan() || t == f64::INFINITY {
        return Err(Error::domain("t", t, "finite"));
    }
    if t > 1.0 {
        Ok(w0_of_log(t))
    } else {
        lambert_w0(t.exp())
    }
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.32 {
        // branch-point series in p = sqrt(2(ex + 1))
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0))
    } else {
        // Pade-type start, good on (-0.32, e]
        x * (1.0 + 4.0 / 3.0 * x) / (1.0 + x * (7.0 / 3.0 + 5.0 / 6.0 * x))
    }
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..HALLEY_MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= RESIDUAL_TOL * x.abs() {
            break;
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = (w - step).max(-1.0);
        if next == w {
            break;
        }
        w = next;
    }
    w
}

/// Solves `w + ln w = t` for `t > 1` (i.e. `w > 1`).
fn w0_of_log(t: f64) -> f64 {
    let lt = t.ln();
    let mut w = (t - lt + lt / t).max(1.0);
    for _ in 0..HALLEY_MAX_ITER {
        let h = w + w.ln() - t;
        // Halley on h: h' = 1 + 1/w, h'' = -1/w^2
        let d1 = 1.0 + 1.0 / w;
        let d2 = -1.0 / (w * w);
        let step = h / (d1 - 0.5 * h * d2 / d1);
        let next = w - step;
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * w;
        w = next;
        if done {
            break;
        }
    }
    w
}

/// `ln(1 - e^{-x})` for `x > 0`.
pub fn log1mexp(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("x", x, "(0, +inf]"));
    }
    if x <= LN_2 {
        Ok((-(-x).exp_m1()).ln())
    } else {
        Ok((-(-x).exp()).ln_1p())
    }
}

/// `ln(e^x - 1)` for `x > 0`; finite where `e^x` overflows.
pub fn log_expm1(x: f64) -> Result<f64> {
    if !(x > 0.0) || x == f64::INFINITY {
        return Err(Error::domain("x", x, "(0, +inf)"));
    }
    if x <= 36.0 {
        Ok(x.exp_m1().ln())
    } else {
        Ok(x + (-(-x).exp()).ln_1p())
    }
}

/// `ln(e^a + e^b)`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `tanh(y1) - tanh(y0)` for `y0, y1 >= 0`, free of the cancellation that
/// the direct difference suffers when both arguments are large.
pub(crate) fn tanh_diff(y1: f64, y0: f64) -> f64 {
    // tanh(y) = (1 - u) / (1 + u), u = e^{-2y}
    let u0 = (-2.0 * y0).exp();
    let u1 = (-2.0 * y1).exp();
    let num = -2.0 * u0 * (-2.0 * (y1 - y0)).exp_m1();
    num / ((1.0 + u0) * (1.0 + u1))
}
