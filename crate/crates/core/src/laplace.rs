//! Numerical Laplace inversion on the real time axis, and forward
//! transforms by quadrature.
//!
//! The inverse is the Bromwich integral discretised with the midpoint rule
//! at nodes `ω_k = (k + ½) π / t` on the line `Re s = σ`:
//!
//! ```text
//! f(t) ≈ (e^{σt} / t) Σ_k (−1)^{k+1} Im F(σ + i ω_k)
//! ```
//!
//! The discretisation aliases `f` with copies of itself at `t + 2nt`, damped
//! by `e^{−2nσt}`; placing the contour at `σ = σ₀ + A/(2t)` makes that error
//! about `e^{−A}` relative. The alternating tail is summed by Euler
//! (binomial) averaging of the last partial sums.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadOptions};

type ImageFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;

/// A Laplace-domain function `s ↦ F(s)`, finite for `Re s > abscissa`.
#[derive(Clone)]
pub struct LaplaceImage {
    f: Arc<ImageFn>,
    abscissa: f64,
}

impl fmt::Debug for LaplaceImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaplaceImage").field("abscissa", &self.abscissa).finish_non_exhaustive()
    }
}

impl LaplaceImage {
    pub fn new(abscissa: f64, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            abscissa,
        }
    }

    #[inline]
    pub fn eval(&self, s: Complex64) -> Complex64 {
        (self.f)(s)
    }

    pub fn abscissa(&self) -> f64 {
        self.abscissa
    }

    /// `c · F`.
    pub fn scale(&self, c: f64) -> Self {
        let f = Arc::clone(&self.f);
        Self::new(self.abscissa, move |s| f(s) * c)
    }

    /// `F + G`, convergent right of both abscissae.
    pub fn add(&self, other: &Self) -> Self {
        let (f, g) = (Arc::clone(&self.f), Arc::clone(&other.f));
        Self::new(self.abscissa.max(other.abscissa), move |s| f(s) + g(s))
    }

    /// `F(s) / s`, the image of `∫_0^t f`.
    pub fn integrated(&self) -> Self {
        let f = Arc::clone(&self.f);
        Self::new(self.abscissa.max(0.0), move |s| f(s) / s)
    }
}

/// How the contour abscissa is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TScaleMode {
    /// `σ = contour_offset` for every `t` (or `σ₀ + 1` if unset).
    Fixed,
    /// `σ = σ₀ + damping / (2t)`.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IltConfig {
    /// Absolute contour abscissa used in [`TScaleMode::Fixed`].
    pub contour_offset: Option<f64>,
    /// Midpoint nodes before acceleration; even, at least 8.
    pub n_terms: usize,
    pub t_scale_mode: TScaleMode,
    /// The aliasing error is about `e^{−damping}` in adaptive mode.
    pub damping: f64,
    /// Partial sums entering the Euler average.
    pub euler_terms: usize,
    /// Target relative accuracy; the convergence warning fires at ten times this.
    pub tolerance: f64,
}

impl Default for IltConfig {
    fn default() -> Self {
        Self {
            contour_offset: None,
            n_terms: 2000,
            t_scale_mode: TScaleMode::Adaptive,
            damping: 18.4,
            euler_terms: 12,
            tolerance: 1e-6,
        }
    }
}

impl IltConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_terms < 8 || !self.n_terms.is_multiple_of(2) {
            return Err(Error::domain(format!("n_terms = {} must be even and ≥ 8", self.n_terms)));
        }
        if !(self.damping > 0.0) || !(self.tolerance > 0.0) {
            return Err(Error::domain("damping and tolerance must be positive"));
        }
        Ok(())
    }

    fn sigma(&self, image: &LaplaceImage, t: f64) -> Result<f64> {
        let s0 = image.abscissa();
        let sigma = match self.t_scale_mode {
            TScaleMode::Adaptive => s0 + self.damping / (2.0 * t),
            TScaleMode::Fixed => self.contour_offset.unwrap_or(s0 + 1.0),
        };
        if !(sigma > s0) {
            return Err(Error::domain(format!("contour abscissa {sigma} not right of σ₀ = {s0}")));
        }
        Ok(sigma)
    }
}

/// Set when doubling the node count moved the result by more than ten
/// times the configured tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceWarning {
    pub change: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IltResult {
    pub value: f64,
    /// `|f_{2n} − f_n|` from node doubling.
    pub error_estimate: f64,
    /// `t` is below the range where the midpoint rule is reliable.
    pub low_confidence: bool,
    pub warning: Option<ConvergenceWarning>,
}

/// Below this time results are flagged low-confidence.
pub const SMALL_T: f64 = 1e-3;

/// Invert `image` at `t > 0`.
pub fn ilt(image: &LaplaceImage, t: f64, cfg: &IltConfig) -> Result<IltResult> {
    cfg.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("inversion time t = {t} must be positive")));
    }
    let sigma = cfg.sigma(image, t)?;
    let h = std::f64::consts::PI / t;
    let n = cfg.n_terms;
    let m = cfg.euler_terms;
    let total = 2 * n + m;
    // partial[j] = Σ_{k ≤ j} (−1)^{k+1} Im F(σ + i ω_k)
    let mut partial = Vec::with_capacity(total + 1);
    let mut acc = 0.0;
    for k in 0..=total {
        let s = Complex64::new(sigma, (k as f64 + 0.5) * h);
        let v = image.eval(s);
        if !v.is_finite() {
            return Err(Error::Contour { re: s.re, im: s.im });
        }
        let term = if k % 2 == 0 { -v.im } else { v.im };
        acc += term;
        partial.push(acc);
    }
    let weights = euler_weights(m);
    let euler = |start: usize| -> f64 { weights.iter().enumerate().map(|(j, w)| w * partial[start + j]).sum() };
    let pref = (sigma * t).exp() / t;
    let coarse = pref * euler(n);
    let fine = pref * euler(2 * n);
    let change = (fine - coarse).abs();
    let threshold = 10.0 * cfg.tolerance * coarse.abs().max(f64::MIN_POSITIVE);
    Ok(IltResult {
        value: coarse,
        error_estimate: change,
        low_confidence: t < SMALL_T,
        warning: (change > threshold).then_some(ConvergenceWarning { change, threshold }),
    })
}

/// Binomial weights `C(m, j) / 2^m`, `j = 0..=m`.
fn euler_weights(m: usize) -> Vec<f64> {
    let mut w = vec![1.0; m + 1];
    for j in 1..=m {
        w[j] = w[j - 1] * (m + 1 - j) as f64 / j as f64;
    }
    let norm = 2f64.powi(m as i32);
    w.iter().map(|x| x / norm).collect()
}

/// Below this time a substitution `t = v^4` flattens integrable power
/// singularities at the origin.
const FORWARD_CUT: f64 = 1.0;

/// `∫_0^∞ e^{−st} f(t) dt` by adaptive quadrature.
///
/// The range is cut where `e^{−st}` drops below `e^{−60}`. Near the origin
/// the substitution `t = v^4` turns a `t^{β−1}` singularity into
/// `v^{4β−1}`, which is bounded for `β ≥ 1/4`. `f` is never evaluated at `t = 0`.
pub fn forward_lt(f: impl Fn(f64) -> f64, s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("forward transform needs s > 0, got {s}")));
    }
    let opts = QuadOptions {
        abs_tol: 1e-11,
        rel_tol: 1e-12,
        max_intervals: 4000,
    };
    let scale = 1.0 / s;
    let t1 = FORWARD_CUT * scale;
    let v1 = t1.powf(0.25);
    let vbreaks: Vec<f64> = [0.0, 1e-3, 1e-2, 0.1, 0.5, 1.0].iter().map(|r| r * v1).collect();
    let near = integrate_with_breaks(
        |v: f64| {
            let t = v * v * v * v;
            if t == 0.0 {
                return 0.0;
            }
            (-s * t).exp() * f(t) * 4.0 * v * v * v
        },
        &vbreaks,
        opts,
    )?;
    let tbreaks: Vec<f64> = [1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0].iter().map(|r| r * scale).collect();
    let far = integrate_with_breaks(|t: f64| (-s * t).exp() * f(t), &tbreaks, opts)?;
    Ok(near.value + far.value)
}
