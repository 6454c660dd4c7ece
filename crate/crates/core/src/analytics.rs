//! Closed forms for the expected intensity `λ(t) = E[Λ(t | H_t)]` and the
//! expected count `E[N(t)]`.
//!
//! With kernel image `γ / (γ + s^β)` the renewal equation
//! `λ = Λ0 + α f * λ` gives
//!
//! ```text
//! λ̃(s) = (Λ0 / s) (γ + s^β) / ((1 − α) γ + s^β)
//! λ(t)  = Λ0/(1−α) − αΛ0/(1−α) · E_β(−(1−α) γ t^β)
//! E[N(t)] = Λ0 t/(1−α) − αΛ0/(1−α) · t E_{β,2}(−(1−α) γ t^β)
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplace::{ilt, IltConfig, LaplaceImage};
use crate::mlspec::{erfcx, ml_one, ml_two, MLKernelParams};
use crate::sim::Engine;

/// `(Λ0, α, β, γ)`: baseline rate, branching ratio, kernel exponent and
/// kernel time scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub lambda0: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(lambda0: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            lambda0,
            alpha,
            beta,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    /// `α = 0` is admitted as the Poisson case.
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::domain(format!("lambda0 = {} must be positive", self.lambda0)));
        }
        if !(self.alpha >= 0.0 && self.alpha < 1.0) {
            return Err(Error::domain(format!("alpha = {} outside [0, 1)", self.alpha)));
        }
        self.kernel_unchecked().validate()
    }

    fn kernel_unchecked(&self) -> MLKernelParams {
        MLKernelParams {
            beta: self.beta,
            gamma: self.gamma,
        }
    }

    pub fn kernel(&self) -> MLKernelParams {
        self.kernel_unchecked()
    }

    /// `(1 − α) γ t^β`, the argument of the Mittag-Leffler functions.
    fn scaled(&self, t: f64) -> f64 {
        (1.0 - self.alpha) * self.gamma * t.powf(self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Ilt,
    #[serde(rename = "montecarlo")]
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
}

/// Values of `λ(t)` or `E[N(t)]` on an increasing grid, from one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub method: Method,
    /// Simulator behind a Monte Carlo curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<Engine>,
    pub points: Vec<CurvePoint>,
}

impl CurveSample {
    pub fn validate(&self) -> Result<()> {
        for w in self.points.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::domain("curve grid must be strictly increasing"));
            }
        }
        if self.points.iter().any(|p| !p.value.is_finite() || p.t < 0.0) {
            return Err(Error::domain("curve values must be finite on t ≥ 0"));
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time t = {t} must be finite and ≥ 0")));
    }
    Ok(())
}

fn require_half(p: &ModelParams) -> Result<()> {
    p.validate()?;
    if p.beta != 0.5 {
        return Err(Error::domain(format!("closed form needs beta = 1/2, got {}", p.beta)));
    }
    Ok(())
}

/// `λ̃(s)` with the principal branch of `s^β`; abscissa 0.
pub fn lambda_image(p: ModelParams) -> Result<LaplaceImage> {
    p.validate()?;
    let ModelParams {
        lambda0,
        alpha,
        beta,
        gamma,
    } = p;
    Ok(LaplaceImage::new(0.0, move |s: Complex64| {
        let sb = s.powf(beta);
        (lambda0 / s) * (gamma + sb) / ((1.0 - alpha) * gamma + sb)
    }))
}

/// `lim_{t→∞} λ(t) = Λ0 / (1 − α)`.
pub fn asymptote(p: ModelParams) -> f64 {
    p.lambda0 / (1.0 - p.alpha)
}

/// `λ(t)` at `β = 1/2`: `Λ0/(1−α) − αΛ0/(1−α) · erfcx((1−α) γ √t)`.
pub fn lambda_exact_half(t: f64, p: ModelParams) -> Result<f64> {
    require_half(&p)?;
    check_time(t)?;
    let y = (1.0 - p.alpha) * p.gamma * t.sqrt();
    let a = asymptote(p);
    Ok(a - p.alpha * a * erfcx(y))
}

/// `λ(t)` for any `β ∈ (0, 1]`.
pub fn lambda_exact(t: f64, p: ModelParams) -> Result<f64> {
    p.validate()?;
    check_time(t)?;
    if t == 0.0 || p.alpha == 0.0 {
        return Ok(p.lambda0);
    }
    let a = asymptote(p);
    let e = if p.beta == 1.0 {
        (-(1.0 - p.alpha) * p.gamma * t).exp()
    } else {
        ml_one(p.beta, -p.scaled(t))?
    };
    Ok(a - p.alpha * a * e)
}

/// `E[N(t)]` at `β = 1/2`, with `y = (1−α) γ √t`:
///
/// ```text
/// Λ0 t/(1−α) − αΛ0 / ((1−α)³ γ² √π) · (√π erfcx(y) + 2y − √π)
/// ```
///
/// For small `y` the bracket is summed as `√π Σ_{k≥2} (−y)^k / Γ(k/2 + 1)`
/// to avoid cancellation.
pub fn expected_n_half(t: f64, p: ModelParams) -> Result<f64> {
    require_half(&p)?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if p.alpha == 0.0 {
        return Ok(p.lambda0 * t);
    }
    let om = 1.0 - p.alpha;
    let y = om * p.gamma * t.sqrt();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let bracket = if y < 0.5 {
        // (−y)^k / Γ(k/2 + 1), k ≥ 2, by the two interleaved recurrences
        // Γ(k/2 + 2) = (k/2 + 1) Γ(k/2 + 1).
        let mut even = y * y; // k = 2: y²/Γ(2)
        let mut odd = -y * y * y / (0.75 * sqrt_pi); // k = 3: −y³/Γ(5/2)
        let mut sum = even + odd;
        let mut k = 2.0;
        while even.abs() > 1e-18 * sum.abs() || odd.abs() > 1e-18 * sum.abs() {
            even *= y * y / (k / 2.0 + 1.0);
            odd *= y * y / (k / 2.0 + 1.5);
            sum += even + odd;
            k += 2.0;
        }
        sqrt_pi * sum
    } else {
        sqrt_pi * erfcx(y) + 2.0 * y - sqrt_pi
    };
    Ok(p.lambda0 * t / om - p.alpha * p.lambda0 / (om.powi(3) * p.gamma * p.gamma * sqrt_pi) * bracket)
}

/// `E[N(t)]` for any `β ∈ (0, 1]`.
pub fn expected_n(t: f64, p: ModelParams) -> Result<f64> {
    p.validate()?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if p.alpha == 0.0 {
        return Ok(p.lambda0 * t);
    }
    let z = -p.scaled(t);
    let e2 = if p.beta == 1.0 { z.exp_m1() / z } else { ml_two(p.beta, 2.0, z)? };
    let a = asymptote(p);
    Ok(a * t - p.alpha * a * t * e2)
}

/// `λ(t)` by numerical inversion of [`lambda_image`].
pub fn lambda_ilt(t: f64, p: ModelParams, cfg: &IltConfig) -> Result<crate::laplace::IltResult> {
    ilt(&lambda_image(p)?, t, cfg)
}

/// `λ` on a grid by the requested method. `Method::MonteCarlo` is not a
/// closed form and is rejected here.
pub fn lambda_curve(p: ModelParams, grid: &[f64], method: Method, cfg: &IltConfig) -> Result<CurveSample> {
    let image = lambda_image(p)?;
    let points = grid
        .iter()
        .map(|&t| match method {
            Method::Exact => Ok(CurvePoint {
                t,
                value: lambda_exact(t, p)?,
                error_estimate: None,
            }),
            Method::Ilt => {
                let r = ilt(&image, t, cfg)?;
                Ok(CurvePoint {
                    t,
                    value: r.value,
                    error_estimate: Some(r.error_estimate),
                })
            }
            Method::MonteCarlo => Err(Error::domain("Monte Carlo curves come from the harness")),
        })
        .collect::<Result<Vec<_>>>()?;
    let curve = CurveSample {
        method,
        engine: None,
        points,
    };
    curve.validate()?;
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(beta: f64, gamma: f64) -> ModelParams {
        ModelParams::new(1.0, 0.1, beta, gamma).unwrap()
    }

    #[test]
    fn image_at_one_for_base_parameters() {
        let img = lambda_image(base(0.5, 0.8)).unwrap();
        let v = img.eval(Complex64::new(1.0, 0.0));
        assert!((v.re - 1.8 / 1.72).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn image_without_excitation_is_poisson() {
        let p = ModelParams::new(2.0, 0.0, 0.7, 1.0).unwrap();
        let img = lambda_image(p).unwrap();
        for s in [Complex64::new(0.3, 0.0), Complex64::new(1.0, 4.0)] {
            let d = img.eval(s) - 2.0 / s;
            assert!(d.norm() < 1e-14);
        }
    }

    #[test]
    fn half_form_known_values() {
        let p = base(0.5, 0.1);
        assert_eq!(lambda_exact_half(0.0, p).unwrap(), 1.0);
        let v = lambda_exact_half(1.0, p).unwrap();
        assert!((v - 1.010_441_267_163_448_7).abs() < 1e-14, "{v}");
        assert!(lambda_exact_half(1.0, base(0.9, 0.1)).is_err());
        assert!((lambda_exact_half(1e12, p).unwrap() - 10.0 / 9.0).abs() < 1e-6);
    }

    #[test]
    fn exponential_kernel_limit() {
        let p = ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap();
        let v = lambda_exact(2.0, p).unwrap();
        assert!((v - (2.0 - (-1.0f64).exp())).abs() < 1e-15);
        let n = expected_n(3.0, p).unwrap();
        assert!((n - 4.446_260_320_296_859_7).abs() < 1e-13, "{n}");
    }

    #[test]
    fn general_beta_point_value() {
        let v = lambda_exact(1.0, base(0.9, 0.8)).unwrap();
        let want = 10.0 / 9.0 - (1.0 / 9.0) * 0.487_995_138_026_064_50;
        assert!((v - want).abs() < 1e-14, "{v} vs {want}");
    }

    #[test]
    fn asymptote_arithmetic() {
        assert!((asymptote(base(0.5, 1.0)) - 10.0 / 9.0).abs() < 1e-15);
        assert_eq!(asymptote(ModelParams::new(1.0, 0.0, 0.5, 1.0).unwrap()), 1.0);
        assert_eq!(asymptote(ModelParams::new(2.0, 0.5, 0.5, 1.0).unwrap()), 4.0);
    }

    #[test]
    fn expected_count_edge_cases() {
        let p = base(0.5, 0.8);
        assert_eq!(expected_n_half(0.0, p).unwrap(), 0.0);
        assert_eq!(expected_n(0.0, p).unwrap(), 0.0);
        let q = ModelParams::new(1.5, 0.0, 0.5, 0.8).unwrap();
        assert_eq!(expected_n_half(4.0, q).unwrap(), 6.0);
        // Small-y series and direct form agree where they meet.
        let y_half = 0.5 / (0.9 * 0.8);
        let t = y_half * y_half;
        let below = expected_n_half(t * (1.0 - 1e-15), p).unwrap();
        let above = expected_n_half(t * (1.0 + 1e-15), p).unwrap();
        assert!(((below - above) / above).abs() < 1e-12, "{below} vs {above}");
    }

    #[test]
    fn parameter_validation() {
        assert!(ModelParams::new(0.0, 0.1, 0.5, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.5, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.1, 1.5, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.1, 0.5, -1.0).is_err());
        assert!(lambda_exact(-1.0, base(0.5, 1.0)).is_err());
    }

    #[test]
    fn method_serialises_lowercase() {
        assert_eq!(serde_json::to_string(&Method::MonteCarlo).unwrap(), "\"montecarlo\"");
        assert_eq!(serde_json::to_string(&Method::Ilt).unwrap(), "\"ilt\"");
    }
}
