//! Scaled complementary error function `erfcx(x) = e^{x²} erfc(x)`.
//!
//! W. J. Cody's rational Chebyshev approximations (CALERF): a rational
//! approximation of `erf` near zero, and rational forms of `erfcx` itself on
//! `(0.46875, 4]` and `(4, ∞)`. The last interval is an expansion in `1/x²`
//! so no exponential is ever formed and the result cannot overflow.

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_95;
const SMALL: f64 = 0.468_75;

const A: [f64; 5] = [
    3.161_123_743_870_565_6,
    1.138_641_541_510_501_56e2,
    3.774_852_376_853_020_21e2,
    3.209_377_589_138_469_47e3,
    1.857_777_061_846_031_53e-1,
];
const B: [f64; 4] = [
    2.360_129_095_234_412_09e1,
    2.440_246_379_344_441_73e2,
    1.282_616_526_077_372_28e3,
    2.844_236_833_439_170_62e3,
];
const C: [f64; 9] = [
    5.641_884_969_886_700_89e-1,
    8.883_149_794_388_375_94,
    6.611_919_063_714_162_95e1,
    2.986_351_381_974_001_31e2,
    8.819_522_212_417_690_9e2,
    1.712_047_612_634_070_58e3,
    2.051_078_377_826_071_47e3,
    1.230_339_354_797_997_25e3,
    2.153_115_354_744_038_46e-8,
];
const D: [f64; 8] = [
    1.574_492_611_070_983_47e1,
    1.176_939_508_913_124_99e2,
    5.371_811_018_620_098_58e2,
    1.621_389_574_566_690_19e3,
    3.290_799_235_733_459_63e3,
    4.362_619_090_143_247_16e3,
    3.439_367_674_143_721_64e3,
    1.230_339_354_803_749_42e3,
];
const P: [f64; 6] = [
    3.053_266_349_612_323_44e-1,
    3.603_448_999_498_044_39e-1,
    1.257_817_261_112_292_46e-1,
    1.608_378_514_874_227_66e-2,
    6.587_491_615_298_378_03e-4,
    1.631_538_713_730_209_78e-2,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822_42,
    1.872_952_849_923_460_47,
    5.279_051_029_514_284_12e-1,
    6.051_834_131_244_131_91e-2,
    2.335_204_976_268_691_85e-3,
];

/// `erf(x) / x` for `|x| ≤ 0.46875`, as a rational function of `x²`.
fn erf_over_x_small(z: f64) -> f64 {
    let num = (((A[4] * z + A[0]) * z + A[1]) * z + A[2]) * z + A[3];
    let den = (((z + B[0]) * z + B[1]) * z + B[2]) * z + B[3];
    num / den
}

fn erfcx_mid(y: f64) -> f64 {
    let mut num = C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + C[i]) * y;
        den = (den + D[i]) * y;
    }
    (num + C[7]) / (den + D[7])
}

fn erfcx_large(y: f64) -> f64 {
    let z = 1.0 / (y * y);
    let mut num = P[5] * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + P[i]) * z;
        den = (den + Q[i]) * z;
    }
    let r = z * (num + P[4]) / (den + Q[4]);
    (FRAC_1_SQRT_PI - r) / y
}

/// `e^{x²} erfc(x)`; finite for every `x ≥ 0`, `+∞` only when `e^{x²}`
/// itself overflows for very negative `x`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let y = x.abs();
    if y <= SMALL {
        let z = y * y;
        return z.exp() * (1.0 - x * erf_over_x_small(z));
    }
    let r = if y <= 4.0 { erfcx_mid(y) } else { erfcx_large(y) };
    if x > 0.0 {
        r
    } else {
        // erfcx(−y) = 2 e^{y²} − erfcx(y)
        let e = (y * y).exp();
        2.0 * e - r
    }
}

/// `erfc(x)` built on [`erfcx`].
pub fn erfc(x: f64) -> f64 {
    if x.abs() <= SMALL {
        return 1.0 - x * erf_over_x_small(x * x);
    }
    if x > 0.0 {
        if x > 27.3 {
            return 0.0;
        }
        erfcx(x) * (-x * x).exp()
    } else {
        2.0 - erfc(-x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfcx_at_zero_is_one() {
        assert_eq!(erfcx(0.0), 1.0);
    }

    #[test]
    fn erfcx_large_argument_tracks_leading_asymptote() {
        for x in [1e3, 1e8, 1e150, f64::MAX] {
            let lead = FRAC_1_SQRT_PI / x;
            assert!(((erfcx(x) - lead) / lead).abs() < 1e-6, "{x}");
        }
        assert!(erfcx(f64::MAX) > 0.0);
    }

    #[test]
    fn continuous_across_branch_boundaries() {
        for edge in [SMALL, 4.0] {
            let lo = erfcx(edge * (1.0 - 1e-15));
            let hi = erfcx(edge * (1.0 + 1e-15));
            assert!(((lo - hi) / lo).abs() < 1e-14, "edge {edge}: {lo} vs {hi}");
        }
    }

    #[test]
    fn negative_arguments_reflect() {
        let x = 1.3;
        let lhs = erfcx(-x);
        let rhs = 2.0 * (x * x).exp() - erfcx(x);
        assert!(((lhs - rhs) / rhs).abs() < 1e-15);
        assert!((erfc(-1.0) + erfc(1.0) - 2.0).abs() < 1e-15);
    }
}
