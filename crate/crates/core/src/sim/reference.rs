use rand::Rng;

use super::{check_horizon, replica_rng, Engine, EventSequence, DEFAULT_BUDGET};
use crate::analytics::ModelParams;
use crate::error::{Error, Result};

fn exp_gap<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    -(1.0 - rng.random::<f64>()).ln() / rate
}

/// Homogeneous Poisson process of rate `lambda0` on `(0, horizon]`.
pub fn poisson_path<R: Rng + ?Sized>(lambda0: f64, horizon: f64, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = exp_gap(lambda0, rng);
    while t <= horizon {
        out.push(t);
        t += exp_gap(lambda0, rng);
    }
    out
}

/// Hawkes process with kernel `γ e^{−γt}` by thinning with the exact
/// piecewise bound: the excitation `S(t) = Σ γ e^{−γ(t − T_k)}` decays
/// between events and jumps by `γ` at each one, so it is carried
/// recursively in O(1) per proposal.
pub fn exp_hawkes_path<R: Rng + ?Sized>(
    lambda0: f64,
    alpha: f64,
    gamma: f64,
    horizon: f64,
    budget: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut s = 0.0;
    let mut t = 0.0;
    loop {
        let bound = lambda0 + alpha * s;
        let u = t + exp_gap(bound, rng);
        if u > horizon {
            break;
        }
        s *= (-gamma * (u - t)).exp();
        t = u;
        if rng.random::<f64>() * bound <= lambda0 + alpha * s {
            out.push(u);
            if out.len() > budget {
                return Err(Error::Budget { cap: budget });
            }
            s += gamma;
        }
    }
    Ok(out)
}

fn check_rates(lambda0: f64, alpha: f64, gamma: f64) -> Result<()> {
    ModelParams::new(lambda0, alpha, 1.0, gamma).map(|_| ())
}

pub fn simulate_exp_hawkes(lambda0: f64, alpha: f64, gamma: f64, horizon: f64, seed: u64) -> Result<EventSequence> {
    check_rates(lambda0, alpha, gamma)?;
    check_horizon(horizon)?;
    let mut rng = replica_rng(seed, Engine::ExpHawkes, 0);
    Ok(EventSequence {
        epochs: exp_hawkes_path(lambda0, alpha, gamma, horizon, DEFAULT_BUDGET, &mut rng)?,
        horizon,
        seed,
        replica: 0,
        engine: Engine::ExpHawkes,
    })
}

pub fn simulate_poisson(lambda0: f64, horizon: f64, seed: u64) -> Result<EventSequence> {
    check_rates(lambda0, 0.0, 1.0)?;
    check_horizon(horizon)?;
    let mut rng = replica_rng(seed, Engine::Poisson, 0);
    Ok(EventSequence {
        epochs: poisson_path(lambda0, horizon, &mut rng),
        horizon,
        seed,
        replica: 0,
        engine: Engine::Poisson,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_is_seed_deterministic() {
        let a = simulate_poisson(1.0, 50.0, 9).unwrap();
        assert_eq!(a, simulate_poisson(1.0, 50.0, 9).unwrap());
        a.validate().unwrap();
    }

    #[test]
    fn exp_hawkes_jump_is_alpha_gamma() {
        // Reconstruct the intensity just after the first event of a path.
        let (l0, a, g) = (1.0, 0.5, 2.0);
        let seq = simulate_exp_hawkes(l0, a, g, 20.0, 4).unwrap();
        seq.validate().unwrap();
        let t1 = seq.epochs[0];
        let lam = |t: f64| l0 + a * seq.epochs.iter().filter(|&&tk| tk < t).map(|tk| g * (-g * (t - tk)).exp()).sum::<f64>();
        let jump = lam(t1 + 1e-12) - lam(t1);
        assert!((jump - a * g).abs() < 1e-9, "{jump}");
    }

    #[test]
    fn no_excitation_is_poisson_rate() {
        let mut rng = replica_rng(2, Engine::ExpHawkes, 0);
        let n: usize = (0..2000)
            .map(|_| exp_hawkes_path(1.0, 0.0, 1.0, 10.0, DEFAULT_BUDGET, &mut rng).unwrap().len())
            .sum();
        let mean = n as f64 / 2000.0;
        // SE = √(10 / 2000)
        assert!((mean - 10.0).abs() < 3.0 * (10.0f64 / 2000.0).sqrt(), "{mean}");
    }
}
