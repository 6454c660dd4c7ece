use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{check_horizon, replica_rng, Engine, EventSequence, DEFAULT_BUDGET};
use crate::analytics::ModelParams;
use crate::error::{Error, Result};
use crate::mlspec::ml_sample;

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| Error::domain(format!("Poisson mean {mean}: {e}")))?;
    Ok(d.sample(rng) as u64)
}

/// Immigration-birth construction: Poisson(Λ0) immigrants on `(0, horizon]`,
/// each event with Poisson(α) children at Mittag-Leffler delays. Children
/// past the horizon are dropped with their whole line of descent, which
/// cannot reach back inside the window.
pub fn cluster_path<R: Rng + ?Sized>(p: ModelParams, horizon: f64, budget: usize, rng: &mut R) -> Result<Vec<f64>> {
    p.validate()?;
    check_horizon(horizon)?;
    let k = p.kernel();
    let n0 = poisson_count(p.lambda0 * horizon, rng)?;
    let mut events: Vec<f64> = (0..n0).map(|_| horizon * (1.0 - rng.random::<f64>())).collect();
    if events.len() > budget {
        return Err(Error::Budget { cap: budget });
    }
    let mut next = 0;
    while next < events.len() {
        let parent = events[next];
        next += 1;
        for _ in 0..poisson_count(p.alpha, rng)? {
            let child = parent + ml_sample(rng, k);
            if child <= horizon {
                events.push(child);
                if events.len() > budget {
                    return Err(Error::Budget { cap: budget });
                }
            }
        }
    }
    events.sort_by(f64::total_cmp);
    // Exact ties have probability zero; drop any produced by rounding so the
    // sequence stays strictly increasing.
    events.dedup();
    Ok(events)
}

/// One cluster path, replica 0 of `seed`.
pub fn simulate_cluster(p: ModelParams, horizon: f64, seed: u64) -> Result<EventSequence> {
    let mut rng = replica_rng(seed, Engine::Cluster, 0);
    Ok(EventSequence {
        epochs: cluster_path(p, horizon, DEFAULT_BUDGET, &mut rng)?,
        horizon,
        seed,
        replica: 0,
        engine: Engine::Cluster,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_inside_window() {
        let p = ModelParams::new(2.0, 0.6, 0.7, 1.0).unwrap();
        let a = simulate_cluster(p, 15.0, 5).unwrap();
        assert_eq!(a, simulate_cluster(p, 15.0, 5).unwrap());
        a.validate().unwrap();
    }

    #[test]
    fn mean_offspring_is_alpha() {
        let mut rng = replica_rng(3, Engine::Cluster, 0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| poisson_count(0.5, &mut rng).unwrap() as f64).collect();
        let (m, se) = crate::stats::mean_se(&xs);
        assert!((m - 0.5).abs() <= 3.0 * se, "{m} ± {se}");
    }

    #[test]
    fn budget_is_enforced() {
        let p = ModelParams::new(100.0, 0.5, 0.5, 1.0).unwrap();
        let mut rng = replica_rng(3, Engine::Cluster, 0);
        assert!(matches!(cluster_path(p, 10.0, 50, &mut rng), Err(Error::Budget { cap: 50 })));
    }
}
