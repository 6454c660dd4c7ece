use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use super::{Comparison, CountDistribution, ExperimentConfig, ReferenceKind, ReferencePmf};
use crate::analytics::{expected_n, lambda_image, CurvePoint, CurveSample, Method, ModelParams};
use crate::error::{Error, Result};
use crate::laplace::{ilt, IltConfig};
use crate::quad::{integrate, QuadOptions};
use crate::sim::{simulate_counts_each, Engine};
use crate::stats::{chi_square_gof, mean_se, pmf, poisson_pmf, tv_distance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaFailure {
    pub engine: Engine,
    pub replica: u64,
    pub error: String,
}

/// Curves from [`run_expected_n`], with anything that went wrong on the way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedNRun {
    pub params: ModelParams,
    /// Monte Carlo curves (one per engine) followed by the exact and ILT
    /// curves when requested.
    pub curves: Vec<CurveSample>,
    /// Replicas excluded from the Monte Carlo means.
    pub failures: Vec<ReplicaFailure>,
    /// Inverse-transform evaluations that raised a convergence warning.
    pub ilt_warnings: u64,
}

impl ExpectedNRun {
    pub fn curve(&self, method: Method) -> Option<&CurveSample> {
        self.curves.iter().find(|c| c.method == method)
    }
}

/// Simulate every engine, keeping successful replicas and recording the rest.
/// Fails only if no replica of an engine succeeds.
fn count_samples(
    engine: Engine,
    cfg: &ExperimentConfig,
    stream: Engine,
    failures: &mut Vec<ReplicaFailure>,
) -> Result<Vec<Vec<u64>>> {
    // The exponential engine reads γ as its decay rate, the β = 1 limit.
    let each = simulate_counts_each(engine, cfg.params, &cfg.times, cfg.seed, cfg.replicas, stream)?;
    let mut ok = Vec::with_capacity(each.len());
    let mut first_err = None;
    for (r, res) in each.into_iter().enumerate() {
        match res {
            Ok(row) => ok.push(row),
            Err(e) => {
                failures.push(ReplicaFailure {
                    engine,
                    replica: r as u64,
                    error: e.to_string(),
                });
                first_err.get_or_insert(e);
            }
        }
    }
    match (ok.is_empty(), first_err) {
        (true, Some(e)) => Err(e),
        _ => Ok(ok),
    }
}

/// Monte Carlo mean of `N(t)` with its standard error for each engine, plus
/// the exact and ILT-quadrature curves when the comparisons ask for them.
pub fn run_expected_n(cfg: &ExperimentConfig) -> Result<ExpectedNRun> {
    cfg.validate()?;
    let mut failures = Vec::new();
    let mut curves = Vec::new();
    for &engine in &cfg.engines {
        let rows = count_samples(engine, cfg, engine, &mut failures)?;
        let points = cfg
            .times
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let col: Vec<f64> = rows.iter().map(|r| r[j] as f64).collect();
                let (m, se) = mean_se(&col);
                CurvePoint {
                    t,
                    value: m,
                    error_estimate: se.is_finite().then_some(se),
                }
            })
            .collect();
        curves.push(CurveSample {
            method: Method::MonteCarlo,
            engine: Some(engine),
            points,
        });
    }
    if cfg.comparisons.contains(&Comparison::Exact) {
        let points = cfg
            .times
            .iter()
            .map(|&t| {
                Ok(CurvePoint {
                    t,
                    value: expected_n(t, cfg.params)?,
                    error_estimate: None,
                })
            })
            .collect::<Result<_>>()?;
        curves.push(CurveSample {
            method: Method::Exact,
            engine: None,
            points,
        });
    }
    let mut ilt_warnings = 0;
    if cfg.comparisons.contains(&Comparison::Ilt) {
        let (curve, warned) = ilt_count_curve(cfg.params, &cfg.times, &cfg.ilt)?;
        curves.push(curve);
        ilt_warnings = warned;
    }
    Ok(ExpectedNRun {
        params: cfg.params,
        curves,
        failures,
        ilt_warnings,
    })
}

/// `∫_0^t λ(u) du` with `λ` from numerical inversion, accumulated interval by
/// interval over the sorted `times`. Returns the curve and the number of
/// inversions that raised a convergence warning.
pub fn ilt_count_curve(p: ModelParams, times: &[f64], cfg: &IltConfig) -> Result<(CurveSample, u64)> {
    let image = lambda_image(p)?;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let warned = RefCell::new(0u64);
    let lambda = |u: f64| -> f64 {
        match ilt(&image, u, cfg) {
            Ok(r) => {
                if r.warning.is_some() {
                    *warned.borrow_mut() += 1;
                }
                r.value
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    // The inverse is accurate to roughly 1e-9 relative, so ask no more of the
    // quadrature than that.
    let opts = QuadOptions::new(1e-10, 1e-8);
    let mut acc = 0.0;
    let mut err = 0.0;
    let mut prev = 0.0;
    let mut points = Vec::with_capacity(times.len());
    for &t in times {
        let piece = if prev == 0.0 {
            // u = t v² absorbs the u^β growth of λ − Λ0 at the origin.
            integrate(|v: f64| 2.0 * t * v * lambda(t * v * v), 0.0, 1.0, opts)?
        } else {
            integrate(lambda, prev, t, opts)?
        };
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        acc += piece.value;
        err += piece.error;
        points.push(CurvePoint {
            t,
            value: acc,
            error_estimate: Some(err),
        });
        prev = t;
    }
    let curve = CurveSample {
        method: Method::Ilt,
        engine: None,
        points,
    };
    curve.validate()?;
    let n = *warned.borrow();
    Ok((curve, n))
}

/// Poisson pmf with mean `m` on `0..=K`, with `K ≥ kmax` chosen so that the
/// neglected upper tail is below 1e-15.
fn poisson_reference(m: f64, kmax: u64) -> ReferencePmf {
    let mut pmf = std::collections::BTreeMap::new();
    let mut k = 0u64;
    let mut mass = 0.0;
    loop {
        let pk = poisson_pmf(m, k);
        mass += pk;
        pmf.insert(k, pk);
        if k >= kmax && k as f64 > m && 1.0 - mass < 1e-15 {
            break;
        }
        k += 1;
    }
    ReferencePmf {
        kind: ReferenceKind::Poisson,
        pmf,
    }
}

/// Empirical pmf of `N(t)` at every requested time for every engine, with the
/// requested reference attached together with the total-variation distance.
/// Against the Poisson reference the chi-square statistic is also given.
/// The exponential-kernel reference is simulated on the same random streams
/// as the engine it is compared with.
pub fn run_distribution(cfg: &ExperimentConfig) -> Result<Vec<CountDistribution>> {
    cfg.validate()?;
    let poisson = cfg.comparisons.contains(&Comparison::Poisson);
    let exp = cfg.comparisons.contains(&Comparison::ExpHawkes);
    if poisson && exp {
        return Err(Error::domain("choose one reference: poisson or exp_hawkes"));
    }
    let mut out = Vec::new();
    for &engine in &cfg.engines {
        let mut failures = Vec::new();
        let rows = count_samples(engine, cfg, engine, &mut failures)?;
        let reference_rows = if exp {
            let mut ref_fail = Vec::new();
            let r = count_samples(Engine::ExpHawkes, cfg, engine, &mut ref_fail)?;
            failures.extend(ref_fail);
            Some(r)
        } else {
            None
        };
        for (j, &t) in cfg.times.iter().enumerate() {
            let col: Vec<u64> = rows.iter().map(|r| r[j]).collect();
            let mut d = CountDistribution::from_samples(t, engine, cfg.params, &col);
            d.failed_replicas = failures.iter().filter(|f| f.engine == engine).count() as u64;
            let kmax = d.counts.keys().next_back().copied().unwrap_or(0);
            if poisson {
                let m = cfg.params.lambda0 * t;
                let reference = poisson_reference(m, kmax);
                d.tv_distance = Some(tv_distance(&d.pmf(), &reference.pmf));
                d.chi_square = Some(chi_square_gof(&d.counts, |k| poisson_pmf(m, k), 5.0));
                d.reference = Some(reference);
            } else if let Some(rr) = &reference_rows {
                let other = CountDistribution::from_samples(t, Engine::ExpHawkes, cfg.params, &rr.iter().map(|r| r[j]).collect::<Vec<_>>());
                let reference = ReferencePmf {
                    kind: ReferenceKind::ExpHawkesEmpirical,
                    pmf: pmf(&other.counts),
                };
                d.tv_distance = Some(tv_distance(&d.pmf(), &reference.pmf));
                d.reference = Some(reference);
            }
            out.push(d);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_reference_covers_tail() {
        let r = poisson_reference(3.0, 1);
        let s: f64 = r.pmf.values().sum();
        assert!((s - 1.0).abs() < 1e-14);
        assert!(*r.pmf.keys().next_back().unwrap() > 10);
    }

    #[test]
    fn ilt_count_curve_matches_exact() {
        let p = ModelParams::new(1.0, 0.3, 0.7, 1.2).unwrap();
        let times = [0.5, 1.0, 3.0];
        let (c, warned) = ilt_count_curve(p, &times, &IltConfig::default()).unwrap();
        assert_eq!(warned, 0);
        for pt in &c.points {
            let want = expected_n(pt.t, p).unwrap();
            assert!((pt.value - want).abs() < 1e-6 * want, "t={}: {} vs {want}", pt.t, pt.value);
        }
    }

    #[test]
    fn no_excitation_curve_is_linear_in_expectation() {
        let p = ModelParams::new(2.0, 0.0, 0.5, 1.0).unwrap();
        let cfg = ExperimentConfig::new(p, vec![1.0, 2.0], 2_000, 5).with_comparisons([Comparison::Exact]);
        let run = run_expected_n(&cfg).unwrap();
        let exact = run.curve(Method::Exact).unwrap();
        assert_eq!(exact.points[1].value, 4.0);
        let mc = run.curve(Method::MonteCarlo).unwrap();
        for (a, b) in mc.points.iter().zip(&exact.points) {
            assert!((a.value - b.value).abs() <= 3.0 * a.error_estimate.unwrap());
        }
        assert!(run.failures.is_empty());
    }

    #[test]
    fn standard_error_shrinks_with_replicas() {
        let p = ModelParams::new(1.0, 0.3, 0.5, 1.0).unwrap();
        let se = |n| {
            let run = run_expected_n(&ExperimentConfig::new(p, vec![5.0], n, 21)).unwrap();
            run.curves[0].points[0].error_estimate.unwrap()
        };
        let ratio = se(4_000) / se(8_000);
        assert!((ratio / 2f64.sqrt() - 1.0).abs() <= 0.1, "ratio {ratio}");
    }

    #[test]
    fn both_references_rejected() {
        let p = ModelParams::new(1.0, 0.1, 0.5, 1.0).unwrap();
        let cfg = ExperimentConfig::new(p, vec![1.0], 10, 0).with_comparisons([Comparison::Poisson, Comparison::ExpHawkes]);
        assert!(run_distribution(&cfg).is_err());
    }
}
