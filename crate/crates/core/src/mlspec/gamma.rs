//! Gamma function at near machine precision.
//!
//! A Taylor expansion of `1/Γ` about 1.5 covers `[1, 2]`. Other arguments
//! are reached by recurrence and reflection; past the overflow threshold
//! only `ln Γ` is available, from the Stirling series.

use statrs::function::gamma as sg;

/// `sin(πx)` with argument reduction so that zeros land exactly.
pub fn sinpi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (std::f64::consts::PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `cos(πx)` with argument reduction.
pub fn cospi(x: f64) -> f64 {
    sinpi(x + 0.5)
}

/// Taylor coefficients of `1/Γ(1.5 + u)` about `u = 0`; on `|u| ≤ 1/2` the
/// truncation error is below 1e-19.
const RGAMMA_MID: [f64; 22] = [
    std::f64::consts::FRAC_2_SQRT_PI,
    -4.117_452_644_528_310_145_02e-2,
    -5.266_544_355_255_444_792_63e-1,
    1.751_020_260_439_345_614_95e-1,
    5.096_686_024_770_607_677_47e-2,
    -4.215_516_936_853_560_099_32e-2,
    6.612_897_826_824_127_276_57e-3,
    2.120_731_442_572_938_336_01e-3,
    -1.110_730_254_594_890_717_12e-3,
    1.523_576_207_674_768_721_66e-4,
    2.535_520_492_381_416_527_83e-5,
    -1.389_680_571_791_375_602_2e-5,
    2.156_203_290_514_172_453_46e-6,
    5.794_264_054_052_672_504_23e-8,
    -8.913_551_118_311_116_054_07e-8,
    1.710_346_941_591_537_374_93e-8,
    -9.313_686_445_241_901_568_48e-10,
    -2.680_474_103_349_662_556_5e-10,
    7.458_932_233_316_326_050_69e-11,
    -8.012_807_061_414_718_370_92e-12,
    -8.382_343_033_451_854_930_49e-14,
    1.694_634_090_432_052_226_77e-13,
];

/// Above this the product recurrence gives way to `exp(−ln Γ)`.
const PRODUCT_MAX: f64 = 171.6;

/// `1/Γ(x)` for `x ∈ [1, 2]`.
fn rgamma_unit(x: f64) -> f64 {
    let u = x - 1.5;
    RGAMMA_MID.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// `Γ(x)` for `1 ≤ x ≤ PRODUCT_MAX` by upward recurrence from `[1, 2)`.
fn gamma_product(x: f64) -> f64 {
    let n = (x.floor() - 1.0).max(0.0) as usize;
    let f = x - n as f64;
    let mut p = 1.0;
    for i in 0..n {
        p *= f + i as f64;
    }
    p / rgamma_unit(f)
}

/// Stirling series for `ln Γ(x)`, `x ≥ 100`; truncation error below 1e-30.
fn ln_gamma_stirling(x: f64) -> f64 {
    const C: [f64; 5] = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0];
    let r = 1.0 / (x * x);
    let series = C.iter().rev().fold(0.0, |acc, &c| acc * r + c) / x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if x > 0.0 && x <= PRODUCT_MAX {
        return gamma(x).abs().ln();
    }
    if x > PRODUCT_MAX {
        return ln_gamma_stirling(x);
    }
    sg::ln_gamma(x)
}

/// Reciprocal gamma function, entire: zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1 − x) / π
        let g = gamma(1.0 - x);
        if g.is_infinite() {
            return 0.0 * sinpi(x);
        }
        return sinpi(x) * g / std::f64::consts::PI;
    }
    if x < 1.0 {
        return x * rgamma_unit(x + 1.0);
    }
    if x <= 2.0 {
        return rgamma_unit(x);
    }
    if x > PRODUCT_MAX {
        return (-ln_gamma_stirling(x)).exp();
    }
    1.0 / gamma_product(x)
}

/// Gamma function; `+∞` past the overflow threshold.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > PRODUCT_MAX {
        return f64::INFINITY;
    }
    if x >= 1.0 {
        return gamma_product(x);
    }
    if x > 0.0 {
        return 1.0 / (x * rgamma_unit(x + 1.0));
    }
    if x == x.floor() {
        return f64::NAN;
    }
    // Γ(x) = π / (sin(πx) Γ(1 − x))
    std::f64::consts::PI / (sinpi(x) * gamma(1.0 - x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rgamma_known_values() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
        assert!((rgamma(1.0) - 1.0).abs() < 1e-15);
        assert!((rgamma(5.0) - 1.0 / 24.0).abs() < 1e-16);
        // Γ(1/2) = √π, Γ(−1/2) = −2√π
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((rgamma(0.5) * sqrt_pi - 1.0).abs() < 1e-14);
        assert!((rgamma(-0.5) * (-2.0 * sqrt_pi) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_near_machine_precision() {
        // 20-digit reference values
        let cases = [
            (0.3, 2.991_568_987_687_590_744_6),
            (0.6, 1.489_192_248_812_817_153_3),
            (1.2, 0.918_168_742_399_760_622_43),
            (3.7, 4.170_651_783_796_604_030_1),
            (7.3, 1_271.423_633_663_908_839_9),
            (11.1, 4_593_083.589_560_014_250_7),
            (40.25, 5.117_762_131_845_141_518_4e46),
            (97.5, 9.754_316_922_718_726_113_6e150),
            (-2.7, -0.931_082_784_838_963_965_46),
        ];
        for (x, want) in cases {
            let rel = (gamma(x) - want).abs() / want.abs();
            assert!(rel < 4e-15, "Γ({x}): rel error {rel:e}");
            let rel = (rgamma(x) * want - 1.0).abs();
            assert!(rel < 4e-15, "1/Γ({x}): rel error {rel:e}");
        }
    }

    #[test]
    fn sinpi_exact_zeros() {
        assert_eq!(sinpi(3.0), 0.0);
        assert!((sinpi(0.5) - 1.0).abs() < 1e-16);
        assert!((sinpi(1.5) + 1.0).abs() < 1e-16);
        assert!(cospi(0.5).abs() < 1e-16);
    }
}
