use fhawkes_core::analytics::{asymptote, expected_n, expected_n_half, lambda_exact, lambda_exact_half};
use fhawkes_core::quad::{integrate_with_breaks, QuadOptions};
use fhawkes_core::ModelParams;

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn base_sets() -> Vec<ModelParams> {
    let mut v = Vec::new();
    for beta in [0.5, 0.9] {
        for gamma in [0.1, 0.8, 1.7] {
            v.push(ModelParams::new(1.0, 0.1, beta, gamma).unwrap());
        }
    }
    v
}

fn log_grid_with_zero(hi: f64, n: usize) -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend((0..n).map(|i| 1e-4 * (hi / 1e-4f64).powf(i as f64 / (n - 1) as f64)));
    g
}

#[test]
fn half_order_forms_agree() {
    for p in base_sets().into_iter().filter(|p| p.beta == 0.5) {
        for t in log_grid_with_zero(100.0, 200) {
            let a = lambda_exact_half(t, p).unwrap();
            let b = lambda_exact(t, p).unwrap();
            assert!(rel(a, b) <= 1e-9, "γ={} t={t}: {a} vs {b}", p.gamma);
            let a = expected_n_half(t, p).unwrap();
            let b = expected_n(t, p).unwrap();
            if t > 0.0 {
                assert!(rel(a, b) <= 1e-9, "γ={} t={t}: {a} vs {b}", p.gamma);
            } else {
                assert_eq!((a, b), (0.0, 0.0));
            }
        }
    }
}

#[test]
fn intensity_rises_strictly_to_its_limit() {
    for p in base_sets() {
        assert_eq!(lambda_exact(0.0, p).unwrap(), p.lambda0);
        let lim = asymptote(p);
        let mut prev = p.lambda0;
        for i in 1..=500 {
            let t = 0.1 * i as f64;
            let v = lambda_exact(t, p).unwrap();
            assert!(v > prev && v < lim, "β={} γ={} t={t}", p.beta, p.gamma);
            prev = v;
        }
    }
}

#[test]
fn large_time_gap_follows_mittag_leffler_tail() {
    // β = 1/2, α = 0.1, γ = 1.7, t = 100: gap / limit = α erfcx(15.3)
    let p = ModelParams::new(1.0, 0.1, 0.5, 1.7).unwrap();
    let lim = asymptote(p);
    let gap = (lim - lambda_exact(100.0, p).unwrap()) / lim;
    let oracle = 0.003_679_687_283_122_908_6;
    assert!(rel(gap, oracle) < 1e-10, "{gap}");
}

#[test]
fn count_rate_increases_to_limit() {
    for p in base_sets() {
        let lim = asymptote(p);
        let mut prev = 0.0;
        for i in 1..=200 {
            let t = 0.25 * i as f64;
            let r = expected_n(t, p).unwrap() / t;
            assert!(r >= prev && r < lim, "β={} γ={} t={t}: {r}", p.beta, p.gamma);
            prev = r;
        }
        let far = expected_n(1e8, p).unwrap() / 1e8;
        assert!(rel(far, lim) < 1e-2);
    }
}

#[test]
fn expected_count_is_integral_of_intensity() {
    for p in base_sets() {
        for t in [0.5f64, 2.0, 10.0, 50.0] {
            // u = v² softens the u^β behaviour of λ at the origin.
            let q = integrate_with_breaks(
                |v: f64| 2.0 * v * lambda_exact(v * v, p).unwrap(),
                &[0.0, 0.1 * t.sqrt(), t.sqrt()],
                QuadOptions::new(1e-12, 1e-12),
            )
            .unwrap()
            .value;
            let n = expected_n(t, p).unwrap();
            assert!((q - n).abs() <= 1e-6, "β={} γ={} t={t}: {q} vs {n}", p.beta, p.gamma);
        }
    }
}

#[test]
fn exponential_kernel_count() {
    let p = ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let z: f64 = -1.5;
    let want = 6.0 - 3.0 * (z.exp() - 1.0) / z;
    assert!(rel(expected_n(3.0, p).unwrap(), want) < 1e-14);
}
