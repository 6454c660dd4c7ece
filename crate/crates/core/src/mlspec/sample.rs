use rand::Rng;

use super::gamma::sinpi;
use super::MLKernelParams;

/// Exact Mittag-Leffler variate with survival `E_β(−γ t^β)`.
///
/// Kozubowski's mixture: `T = γ^{−1/β} X (sin(βπ(1−U)) / sin(βπU))^{1/β}`
/// with `X ~ Exp(1)` and `U ~ U(0, 1)`; at `β = 1` this is `Exp(γ)`.
pub fn ml_sample<R: Rng + ?Sized>(rng: &mut R, k: MLKernelParams) -> f64 {
    let MLKernelParams { beta, gamma } = k;
    let x = -(1.0 - rng.random::<f64>()).ln();
    if beta == 1.0 {
        return x / gamma;
    }
    let u = loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            break u;
        }
    };
    let ratio = sinpi(beta * (1.0 - u)) / sinpi(beta * u);
    gamma.powf(-1.0 / beta) * x * ratio.powf(1.0 / beta)
}
