use std::f64::consts::PI;

use fhawkes_core::mlspec::{
    erfcx, gamma::rgamma, ml_density, ml_one, ml_sample, ml_spectral, ml_survival, ml_two, prabhakar,
};
use fhawkes_core::quad::{integrate, integrate_with_breaks, QuadOptions};
use fhawkes_core::stats::ks_one_sample;
use fhawkes_core::{MLKernelParams, PrabhakarArgs};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn fixture(name: &str) -> csv::Reader<std::fs::File> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    csv::Reader::from_path(path).unwrap()
}

#[test]
fn prabhakar_matches_high_precision_table() {
    let mut worst = (0.0, String::new());
    let mut rows = 0;
    for rec in fixture("prabhakar_oracle.csv").records() {
        let rec = rec.unwrap();
        let v: Vec<f64> = rec.iter().map(|f| f.parse().unwrap()).collect();
        let (a, b, c, z, want) = (v[0], v[1], v[2], v[3], v[4]);
        let got = prabhakar(PrabhakarArgs::new(a, b, c, z)).unwrap_or_else(|e| panic!("({a},{b},{c},{z}): {e}"));
        let r = rel(got, want);
        if r > worst.0 {
            worst = (r, format!("({a},{b},{c},{z}) got {got:e} want {want:e}"));
        }
        rows += 1;
    }
    assert!(rows > 400);
    assert!(worst.0 <= 1e-10, "worst relative error {:e} at {}", worst.0, worst.1);
}

#[test]
fn erfcx_matches_high_precision_table() {
    for rec in fixture("erfcx_oracle.csv").records() {
        let rec = rec.unwrap();
        let x: f64 = rec[0].parse().unwrap();
        let want: f64 = rec[1].parse().unwrap();
        assert!(rel(erfcx(x), want) <= 1e-12, "erfcx({x}) = {:e}, want {want:e}", erfcx(x));
    }
}

#[test]
fn half_order_function_is_erfcx() {
    for i in 0..=200 {
        let x = 0.5 * i as f64;
        let got = ml_one(0.5, -x).unwrap();
        assert!(rel(got, erfcx(x)) <= 1e-10, "x={x}: {got} vs {}", erfcx(x));
    }
    assert!(rel(ml_one(0.5, -1.0).unwrap(), 0.427_583_576_155_807) < 1e-12);
}

#[test]
fn value_at_zero_is_reciprocal_gamma_of_b() {
    for a in [0.3, 0.7, 1.0] {
        for b in [0.4, 1.0, 1.3, 2.5] {
            for c in [0.5, 1.0, 2.0] {
                let v = prabhakar(PrabhakarArgs::new(a, b, c, 0.0)).unwrap();
                assert_eq!(v, rgamma(b));
            }
        }
    }
}

#[test]
fn order_one_is_exponential() {
    let mut z = -30.0;
    while z <= 3.0 {
        assert!(rel(ml_one(1.0, z).unwrap(), f64::exp(z)) <= 1e-12, "z={z}");
        assert!(rel(prabhakar(PrabhakarArgs::new(1.0, 1.0, 1.0, z)).unwrap(), f64::exp(z)) <= 1e-12);
        z += 0.25;
    }
    assert!(rel(ml_one(1.0, -3.0).unwrap(), (-3.0f64).exp()) < 1e-15);
    assert_eq!(ml_one(0.9, 0.0).unwrap(), 1.0);
}

#[test]
fn two_parameter_recurrence() {
    // E_{a,b}(z) = z E_{a,a+b}(z) + 1/Γ(b)
    for a in [0.3, 0.5, 0.9] {
        for i in 0..=100 {
            let z = -(i as f64);
            let lhs = ml_two(a, 1.0, z).unwrap();
            let rhs = z * ml_two(a, a + 1.0, z).unwrap() + 1.0;
            // Compare on the scale of the terms: at large |z| the right side
            // is a difference of two O(1) quantities.
            let scale = lhs.abs().max(1.0);
            assert!((lhs - rhs).abs() / scale <= 1e-10 || rel(rhs, lhs) <= 1e-10, "a={a} z={z}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn one_parameter_function_is_completely_monotone_on_grid() {
    for beta in [0.3, 0.5, 0.7, 0.9, 1.0] {
        let h = 0.05;
        let vals: Vec<f64> = (0..400).map(|i| ml_one(beta, -(i as f64) * h).unwrap()).collect();
        let mut prev = f64::INFINITY;
        for &v in &vals {
            assert!(v > 0.0 && v <= 1.0 && v < prev, "β={beta}");
            prev = v;
        }
        for order in 1..=3 {
            let mut d = vals.clone();
            for _ in 0..order {
                d = d.windows(2).map(|w| w[1] - w[0]).collect();
            }
            let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
            // Differences eventually reach roundoff; check where they are resolvable.
            for (i, v) in d.iter().enumerate() {
                if v.abs() > 1e-12 {
                    assert!(v * sign > 0.0, "β={beta} order {order} index {i}: {v}");
                }
            }
        }
    }
}

/// `∫_0^∞ f` in log time over the range where the density argument stays
/// evaluable; the neglected mass is below 1e-8 at both ends.
fn density_mass(k: MLKernelParams) -> f64 {
    let MLKernelParams { beta, gamma } = k;
    let t_of_x = |x: f64| (x / gamma).powf(1.0 / beta);
    let (lo, hi) = (t_of_x(1e-12).ln(), t_of_x(1e8).ln());
    let f = |u: f64| {
        let t = u.exp();
        ml_density(t, k).unwrap() * t
    };
    let n = 32;
    let pts: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    integrate_with_breaks(f, &pts, QuadOptions::new(1e-12, 1e-11)).unwrap().value
}

#[test]
fn density_normalises() {
    for beta in [0.3, 0.5, 0.7, 0.9, 0.99] {
        for gamma in [0.1, 1.0, 1.7] {
            let k = MLKernelParams::new(beta, gamma).unwrap();
            let m = density_mass(k);
            assert!((m - 1.0).abs() <= 1e-6, "β={beta} γ={gamma}: mass {m}");
        }
    }
}

#[test]
fn spectral_density_integrates_to_one() {
    for beta in [0.3, 0.5, 0.7, 0.9] {
        // θ = v^{1/β} removes the θ^{β−1} singularity; the tail ~θ^{−1−β} is
        // mapped the same way by θ = w^{−1/β}.
        let p = 1.0 / beta;
        let left = integrate(|v: f64| ml_spectral(v.powf(p), beta).unwrap() * p * v.powf(p - 1.0), 0.0, 1.0, QuadOptions::default())
            .unwrap()
            .value;
        let right = integrate(
            |w: f64| {
                if w == 0.0 {
                    return 0.0;
                }
                let th = w.powf(-p);
                ml_spectral(th, beta).unwrap() * p * w.powf(-p - 1.0)
            },
            0.0,
            1.0,
            QuadOptions::default(),
        )
        .unwrap()
        .value;
        assert!((left + right - 1.0).abs() <= 1e-6, "β={beta}: {}", left + right);
    }
}

#[test]
fn density_equals_spectral_mixture() {
    for beta in [0.5, 0.7] {
        let k = MLKernelParams::new(beta, 1.0).unwrap();
        let p = 1.0 / beta;
        for t in [0.01, 0.1, 0.5, 2.0, 10.0, 100.0] {
            let f = |th: f64| th * (-th * t).exp() * ml_spectral(th, beta).unwrap();
            let left = integrate(|v: f64| f(v.powf(p)) * p * v.powf(p - 1.0), 0.0, 1.0, QuadOptions::new(0.0, 1e-12))
                .unwrap()
                .value;
            let cut = 60.0 / t;
            let right = integrate_with_breaks(f, &[1.0, (1.0f64).max(1.0 / t), cut.max(2.0)], QuadOptions::new(0.0, 1e-12))
                .unwrap()
                .value;
            let want = left + right;
            let got = ml_density(t, k).unwrap();
            assert!(rel(got, want) <= 1e-8, "β={beta} t={t}: {got} vs {want}");
        }
    }
    // The documented point value at β = 1/2, t = 2.
    let k = MLKernelParams::new(0.5, 1.0).unwrap();
    let f2 = ml_density(2.0, k).unwrap();
    // E_{1/2,1/2}(−x) = 1/√π − x erfcx(x), x = √2
    let x = 2f64.sqrt();
    let want = (1.0 / PI.sqrt() - x * erfcx(x)) / x;
    assert!(rel(f2, want) < 1e-12, "{f2} vs {want}");
}

#[test]
fn survival_and_density_are_consistent() {
    let k = MLKernelParams::new(0.6, 1.3).unwrap();
    let (t0, t1) = (0.5, 3.0);
    let mass = integrate(|t| ml_density(t, k).unwrap(), t0, t1, QuadOptions::default()).unwrap().value;
    let drop = ml_survival(t0, k).unwrap() - ml_survival(t1, k).unwrap();
    assert!(rel(mass, drop) < 1e-10);
    assert_eq!(ml_survival(0.0, k).unwrap(), 1.0);
}

#[test]
fn exponential_sampler_mean() {
    let k = MLKernelParams::new(1.0, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 100_000;
    let xs: Vec<f64> = (0..n).map(|_| ml_sample(&mut rng, k)).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let se = sd / (n as f64).sqrt();
    assert!((mean - 0.5).abs() <= 3.0 * se, "{mean} ± {se}");
}

#[test]
fn sampler_survival_at_one() {
    let k = MLKernelParams::new(0.5, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 100_000;
    let hits = (0..n).filter(|_| ml_sample(&mut rng, k) > 1.0).count();
    let p = hits as f64 / n as f64;
    let want = ml_one(0.5, -1.0).unwrap();
    let se = (want * (1.0 - want) / n as f64).sqrt();
    assert!((p - want).abs() <= 3.0 * se, "{p} vs {want}");
}

#[test]
fn sampler_passes_ks_against_survival() {
    let k = MLKernelParams::new(0.6, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let xs: Vec<f64> = (0..10_000).map(|_| ml_sample(&mut rng, k)).collect();
    let ks = ks_one_sample(&xs, |t| 1.0 - ml_survival(t, k).unwrap());
    assert!(ks.p_value > 0.01, "KS p = {}", ks.p_value);
}
