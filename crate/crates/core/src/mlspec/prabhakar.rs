//! Three-parameter Mittag-Leffler (Prabhakar) function
//!
//! ```text
//! E_{a,b}^c(z) = Σ_k (c)_k z^k / (k! Γ(ak + b))
//! ```
//!
//! for real `z`. Evaluation regimes:
//!
//! * `z ≥ 0`, or `z < 0` with `|z|^{1/a}` small: the power series with
//!   compensated summation. A cancellation monitor rejects the series when
//!   the largest term dwarfs the sum.
//! * `z < 0` otherwise, `0 < a < 1`: the Bromwich integral of the Laplace
//!   pair `t^{b−1} E_{a,b}^c(−x t^a) ↔ s^{ac−b} / (s^a + x)^c`, collapsed
//!   onto the negative real axis. This is a real integral with an `e^{−r}`
//!   weight and no cancellation; for `c = 1, b = 1` and `c = 1, b = a` it is
//!   the spectral (completely monotone) representation. When the collapsed
//!   contour does not converge at the origin (`b ≥ 1 + ac`), two-parameter
//!   functions are shifted down with `E_{a,b}(z) = (E_{a,b−a}(z) − 1/Γ(b−a))/z`
//!   and three-parameter ones keep a unit circle around the branch point.
//! * `z < 0`, `a = 1`: Kummer's function, `E_{1,b}^c(z) = M(c, b, z)/Γ(b)`,
//!   through Kummer's transformation or its large-argument expansion.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{cospi, ln_gamma, rgamma, sinpi};
use super::PrabhakarArgs;
use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadOptions};

/// Overflow guard and internal tolerances.
#[derive(Debug, Clone, Copy)]
pub struct PrabhakarOptions {
    /// Largest accepted `|z|` for negative arguments.
    pub z_max: f64,
    /// Relative tolerance of the contour quadrature.
    pub quad_rel_tol: f64,
}

impl Default for PrabhakarOptions {
    fn default() -> Self {
        Self {
            z_max: 1e8,
            quad_rel_tol: 1e-13,
        }
    }
}

/// Largest `|z|` for which the series is tried on the negative axis.
pub const SERIES_RADIUS: f64 = 5.0;
/// Series is tried on the negative axis while `|z|^{1/a}` stays below this;
/// the largest term is then at most about `e^8` times the result.
const SERIES_SCALE: f64 = 8.0;
/// Positive arguments overflow once `z^{1/a}` approaches `ln(f64::MAX)`.
const POSITIVE_SCALE_MAX: f64 = 600.0;
/// Beyond this peak-term / |sum| ratio the series result is discarded.
const CANCELLATION_LIMIT: f64 = 1e5;
/// The `e^{−r}` weight is below 1e-26 past this point.
const RAY_CUTOFF: f64 = 60.0;

/// `E_{a,b}^c(z)` with default options.
pub fn prabhakar(args: PrabhakarArgs) -> Result<f64> {
    prabhakar_with(args, &PrabhakarOptions::default())
}

/// One-parameter Mittag-Leffler function `E_β(z) = E_{β,1}^1(z)`.
pub fn ml_one(beta: f64, z: f64) -> Result<f64> {
    prabhakar(PrabhakarArgs::new(beta, 1.0, 1.0, z))
}

/// Two-parameter Mittag-Leffler function `E_{a,b}(z)`.
pub fn ml_two(a: f64, b: f64, z: f64) -> Result<f64> {
    prabhakar(PrabhakarArgs::new(a, b, 1.0, z))
}

pub fn prabhakar_with(args: PrabhakarArgs, opts: &PrabhakarOptions) -> Result<f64> {
    args.validate()?;
    let PrabhakarArgs { a, b, c, z } = args;
    if z == 0.0 {
        return Ok(rgamma(b));
    }
    if z > 0.0 {
        if z.powf(1.0 / a) > POSITIVE_SCALE_MAX {
            return Err(Error::domain(format!("E_{{{a},{b}}}^{c}({z}) overflows")));
        }
        return series(a, b, c, z).map(|s| s.value);
    }
    let x = -z;
    if x > opts.z_max {
        return Err(Error::domain(format!("|z| = {x:e} exceeds the guard {:e}", opts.z_max)));
    }
    if a == 1.0 {
        return kummer_negative(b, c, x);
    }
    if x <= SERIES_RADIUS && x.powf(1.0 / a) <= SERIES_SCALE {
        if let Ok(s) = series(a, b, c, z) {
            if s.peak <= CANCELLATION_LIMIT * s.value.abs() {
                return Ok(s.value);
            }
        }
    }
    if a > 1.0 {
        return Err(Error::domain(format!(
            "order a = {a} > 1 is only supported where the series converges cleanly"
        )));
    }
    negative_axis(a, b, c, x, opts)
}

pub(crate) struct SeriesSum {
    pub value: f64,
    /// Largest term magnitude encountered.
    pub peak: f64,
}

/// `x · 2^e` without intermediate overflow for `|e| ≤ 2000`.
fn ldexp(x: f64, e: i32) -> f64 {
    let h = e / 2;
    x * 2f64.powi(h) * 2f64.powi(e - h)
}

/// `1/Γ(x)` as `mantissa · 2^exp`, so that arguments far past the
/// underflow point of `1/Γ` still give usable terms.
fn rgamma_scaled(x: f64) -> (f64, i32) {
    if x <= 170.0 {
        return (rgamma(x), 0);
    }
    let l = -ln_gamma(x);
    let e = (l / std::f64::consts::LN_2).floor();
    ((l - e * std::f64::consts::LN_2).exp(), e as i32)
}

/// Neumaier-compensated power series. The running prefactor
/// `(c)_k z^k / k!` is kept as `pre · 2^scale` so that series with terms
/// near the overflow threshold still sum correctly.
pub(crate) fn series(a: f64, b: f64, c: f64, z: f64) -> Result<SeriesSum> {
    const MAX_TERMS: usize = 10_000;
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut peak = 0.0_f64;
    let mut pre = 1.0_f64;
    let mut scale: i32 = 0;
    let mut prev = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let (g, ge) = rgamma_scaled(a * kf + b);
        let term = ldexp(pre * g, scale + ge);
        if !term.is_finite() {
            return Err(Error::Accuracy(format!("series term overflow at k = {k}")));
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        peak = peak.max(term.abs());
        let total = sum + comp;
        if k > 2 && term.abs() <= prev && term.abs() <= 1e-17 * total.abs() {
            return Ok(SeriesSum { value: total, peak });
        }
        if k > 2 && total == 0.0 && term == 0.0 && pre == 0.0 {
            return Ok(SeriesSum { value: 0.0, peak });
        }
        if term != 0.0 {
            prev = term.abs();
        }
        pre *= z * (c + kf) / (kf + 1.0);
        if pre.abs() > 1e150 {
            pre = ldexp(pre, -500);
            scale += 500;
        }
    }
    Err(Error::Accuracy(format!(
        "series for E_{{{a},{b}}}^{c}({z}) did not converge in {MAX_TERMS} terms"
    )))
}

/// Negative real axis, `0 < a < 1`.
fn negative_axis(a: f64, b: f64, c: f64, x: f64, opts: &PrabhakarOptions) -> Result<f64> {
    if c == 1.0 {
        let mut shifts = Vec::new();
        let mut b_red = b;
        while b_red >= 1.0 + a {
            b_red -= a;
            shifts.push(b_red);
        }
        let mut value = ray_two_param(a, b_red, x, opts)?;
        // Walk back up: E_{a,β+a}(z) = (E_{a,β}(z) − 1/Γ(β)) / z, z = −x.
        for &beta in shifts.iter().rev() {
            value = (value - rgamma(beta)) / (-x);
        }
        return Ok(value);
    }
    if 1.0 + a * c - b > 0.0 {
        ray_general(a, b, c, x, opts)
    } else {
        hankel_with_circle(a, b, c, x, opts)
    }
}

/// Location of the near-pole of `1/|s^a + x|` along the cut, in `r`.
fn peak_radius(a: f64, x: f64) -> Option<f64> {
    let cos = cospi(a);
    if cos < 0.0 {
        Some((-cos * x).powf(1.0 / a))
    } else {
        None
    }
}

/// Breakpoints in the substituted variable `u = r^{1/m}`.
fn ray_breaks(a: f64, x: f64, m: f64) -> Vec<f64> {
    let to_u = |r: f64| r.powf(1.0 / m);
    let mut pts = vec![0.0];
    let mut interior = vec![1.0];
    if let Some(rp) = peak_radius(a, x) {
        if rp < RAY_CUTOFF {
            interior.push(rp);
        }
    }
    interior.sort_by(f64::total_cmp);
    for r in interior {
        if r > 0.0 && r < RAY_CUTOFF {
            pts.push(to_u(r));
        }
    }
    pts.push(to_u(RAY_CUTOFF));
    pts
}

fn quad_opts(opts: &PrabhakarOptions) -> QuadOptions {
    QuadOptions {
        abs_tol: f64::MIN_POSITIVE,
        rel_tol: opts.quad_rel_tol,
        max_intervals: 4000,
    }
}

/// `E_{a,b}(−x)` for `0 < a < 1`, `0 < b < 1 + a`:
///
/// ```text
/// (1/π) ∫_0^∞ e^{−r} r^{a−b} [r^a sin(πb) + x sin(π(b−a))] / (r^{2a} + 2 x r^a cos(πa) + x²) dr
/// ```
///
/// integrated in `u` with `r = u^m`, `m = 1/(1 + a − b)`, which absorbs
/// the `r^{a−b}` endpoint behaviour.
fn ray_two_param(a: f64, b: f64, x: f64, opts: &PrabhakarOptions) -> Result<f64> {
    let m = 1.0 / (1.0 + a - b);
    let sin_b = sinpi(b);
    let sin_ba = sinpi(b - a);
    let cos_a = cospi(a);
    let integrand = |u: f64| {
        let r = u.powf(m);
        let w = r.powf(a);
        let num = w * sin_b + x * sin_ba;
        let den = w * (w + 2.0 * x * cos_a) + x * x;
        (-r).exp() * num / den
    };
    let breaks = ray_breaks(a, x, m);
    let res = integrate_with_breaks(integrand, &breaks, quad_opts(opts))
        .map_err(|e| Error::Accuracy(format!("E_{{{a},{b}}}(−{x}): {e}")))?;
    Ok(m * res.value / PI)
}

/// `E_{a,b}^c(−x)` for `0 < a < 1`, `b < 1 + ac` via the collapsed contour.
fn ray_general(a: f64, b: f64, c: f64, x: f64, opts: &PrabhakarOptions) -> Result<f64> {
    let p = a * c - b;
    let m = 1.0 / (1.0 + p);
    let phase_p = Complex64::from_polar(1.0, -PI * p);
    let phase_a = Complex64::from_polar(1.0, -PI * a);
    let integrand = |u: f64| {
        let r = u.powf(m);
        let w = r.powf(a);
        let base = phase_a * w + x;
        let v = phase_p * base.powf(-c);
        (-r).exp() * v.im
    };
    let breaks = ray_breaks(a, x, m);
    let res = integrate_with_breaks(integrand, &breaks, quad_opts(opts))
        .map_err(|e| Error::Accuracy(format!("E_{{{a},{b}}}^{c}(−{x}): {e}")))?;
    Ok(m * res.value / PI)
}

/// Hankel contour with a unit circle around the origin; used when the
/// collapsed contour diverges at `s = 0`.
fn hankel_with_circle(a: f64, b: f64, c: f64, x: f64, opts: &PrabhakarOptions) -> Result<f64> {
    let p = a * c - b;
    let image = |s: Complex64| s.powf(p) * (s.powf(a) + x).powf(-c);
    let lower = Complex64::from_polar(1.0, -PI);
    let ray = |r: f64| (-r).exp() * image(lower * r).im;
    let mut breaks = vec![1.0];
    if let Some(rp) = peak_radius(a, x) {
        if rp > 1.0 && rp < RAY_CUTOFF {
            breaks.push(rp);
        }
    }
    breaks.push(RAY_CUTOFF);
    let ray_part = integrate_with_breaks(ray, &breaks, quad_opts(opts))
        .map_err(|e| Error::Accuracy(format!("E_{{{a},{b}}}^{c}(−{x}) ray: {e}")))?;
    let circle = |phi: f64| {
        let s = Complex64::from_polar(1.0, phi);
        (s.exp() * image(s) * s).re
    };
    let circle_part = integrate_with_breaks(circle, &[-PI, 0.0, PI], quad_opts(opts))
        .map_err(|e| Error::Accuracy(format!("E_{{{a},{b}}}^{c}(−{x}) circle: {e}")))?;
    Ok(ray_part.value / PI + circle_part.value / (2.0 * PI))
}

/// `E_{1,b}^c(−x) = M(c, b, −x) / Γ(b)`.
fn kummer_negative(b: f64, c: f64, x: f64) -> Result<f64> {
    if b == 1.0 && c == 1.0 {
        return Ok((-x).exp());
    }
    let p = b - c;
    let terminating = p <= 0.0 && p == p.floor();
    if terminating || x <= 40.0 {
        // Kummer: M(c, b, −x) = e^{−x} M(b − c, b, x); all terms positive
        // once k exceeds b − c.
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        let mut k = 0.0;
        loop {
            term *= (p + k) * x / ((b + k) * (k + 1.0));
            sum += term;
            k += 1.0;
            if term == 0.0 || (k > -p && term.abs() <= 1e-17 * sum.abs()) {
                break;
            }
            if k > 20_000.0 {
                return Err(Error::Accuracy(format!("Kummer series M({p}, {b}, {x}) did not converge")));
            }
        }
        return Ok((-x).exp() * sum * rgamma(b));
    }
    // M(c, b, −x) ~ Γ(b)/Γ(b−c) x^{−c} Σ (c)_k (c−b+1)_k / k! x^{−k};
    // the omitted e^{−x} part is below 1e-17 relative for x > 40.
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut k = 0.0;
    loop {
        let next = term * (c + k) * (c - b + 1.0 + k) / ((k + 1.0) * x);
        if next.abs() >= term.abs() && k > 0.0 {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
        if term == 0.0 || term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    Ok(rgamma(p) * x.powf(-c) * sum)
}
