//! Sample paths of the fractional Hawkes process and its reference limits.
//!
//! Two independent constructions of the same law:
//!
//! * [`simulate_thinning`]: Ogata thinning of the conditional intensity,
//! * [`simulate_cluster`]: the immigration-birth (branching) representation
//!   with exact Mittag-Leffler delays.
//!
//! plus [`simulate_poisson`] and [`simulate_exp_hawkes`] for the `α → 0` and
//! `β → 1` comparisons. Every replica draws from its own ChaCha8 stream
//! keyed by `(seed, engine, replica)`, so results do not depend on how
//! replicas are scheduled across threads.

mod cluster;
mod io;
mod reference;
mod thinning;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::ModelParams;
use crate::error::{Error, Result};
use crate::mlspec::ml_density;

pub use cluster::{cluster_path, simulate_cluster};
pub use io::{read_events_csv, write_events_csv, SimulationRecord};
pub use reference::{exp_hawkes_path, poisson_path, simulate_exp_hawkes, simulate_poisson};
pub use thinning::{simulate_thinning, ThinningSimulator, DELTA};

/// Default cap on accepted events per path.
pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Thinning,
    Cluster,
    Poisson,
    ExpHawkes,
}

impl Engine {
    fn tag(self) -> u64 {
        match self {
            Engine::Thinning => 1,
            Engine::Cluster => 2,
            Engine::Poisson => 3,
            Engine::ExpHawkes => 4,
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thinning" => Ok(Engine::Thinning),
            "cluster" => Ok(Engine::Cluster),
            "poisson" => Ok(Engine::Poisson),
            "exp_hawkes" | "exp-hawkes" => Ok(Engine::ExpHawkes),
            _ => Err(Error::Parse(format!("unknown engine '{s}'"))),
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Thinning => "thinning",
            Engine::Cluster => "cluster",
            Engine::Poisson => "poisson",
            Engine::ExpHawkes => "exp_hawkes",
        })
    }
}

/// Ordered epochs `T_1 < T_2 < …` in `(0, horizon]` with their provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSequence {
    pub epochs: Vec<f64>,
    pub horizon: f64,
    pub seed: u64,
    pub replica: u64,
    pub engine: Engine,
}

impl EventSequence {
    /// `N(t) = #{k : T_k ≤ t}`.
    pub fn count_at(&self, t: f64) -> u64 {
        self.epochs.partition_point(|&x| x <= t) as u64
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("epochs must be strictly increasing"));
        }
        if self.epochs.iter().any(|&x| !(x > 0.0 && x <= self.horizon)) {
            return Err(Error::domain("epochs must lie in (0, horizon]"));
        }
        Ok(())
    }
}

/// Independent stream for one replica.
pub fn replica_rng(seed: u64, engine: Engine, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((engine.tag() << 48) | (replica & ((1 << 48) - 1)));
    rng
}

pub(crate) fn check_horizon(horizon: f64) -> Result<()> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::domain(format!("horizon = {horizon} must be positive and finite")));
    }
    Ok(())
}

/// `Λ(t | H_t) = Λ0 + α Σ_{T_k < t} f_β(t − T_k)`: epochs at or after `t`
/// are ignored, so at an epoch the left limit is returned.
pub fn intensity(t: f64, history: &[f64], p: ModelParams) -> Result<f64> {
    p.validate()?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!("intensity at negative time {t}")));
    }
    let k = p.kernel();
    let mut sum = 0.0;
    for &tk in history.iter().take_while(|&&tk| tk < t) {
        sum += ml_density(t - tk, k)?;
    }
    Ok(p.lambda0 + p.alpha * sum)
}

/// Simulator selection for [`simulate_many`]; the exponential-kernel engine
/// reads `(Λ0, α, γ)` from the parameters and ignores `β`.
pub fn simulate_one(engine: Engine, p: ModelParams, horizon: f64, seed: u64, replica: u64) -> Result<EventSequence> {
    let sim = match engine {
        Engine::Thinning => Some(ThinningSimulator::new(p)?),
        _ => None,
    };
    run(engine, sim.as_ref(), p, horizon, seed, replica, engine)
}

fn run(
    engine: Engine,
    sim: Option<&ThinningSimulator>,
    p: ModelParams,
    horizon: f64,
    seed: u64,
    replica: u64,
    stream: Engine,
) -> Result<EventSequence> {
    let mut rng = replica_rng(seed, stream, replica);
    let epochs = match engine {
        Engine::Thinning => sim.expect("thinning simulator").path(horizon, &mut rng)?,
        Engine::Cluster => cluster_path(p, horizon, DEFAULT_BUDGET, &mut rng)?,
        Engine::Poisson => poisson_path(p.lambda0, horizon, &mut rng),
        Engine::ExpHawkes => exp_hawkes_path(p.lambda0, p.alpha, p.gamma, horizon, DEFAULT_BUDGET, &mut rng)?,
    };
    Ok(EventSequence {
        epochs,
        horizon,
        seed,
        replica,
        engine,
    })
}

/// Replicas `0..replicas` in parallel, returned in replica order.
///
/// `stream` chooses whose random streams are used; passing the same
/// `stream` for two engines gives paired (common random number) runs.
pub fn simulate_many(
    engine: Engine,
    p: ModelParams,
    horizon: f64,
    seed: u64,
    replicas: u64,
    stream: Engine,
) -> Result<Vec<EventSequence>> {
    p.validate()?;
    check_horizon(horizon)?;
    let sim = match engine {
        Engine::Thinning => Some(ThinningSimulator::new(p)?),
        _ => None,
    };
    (0..replicas)
        .into_par_iter()
        .map(|r| run(engine, sim.as_ref(), p, horizon, seed, r, stream))
        .collect()
}

/// `N(t)` at each of `times` (sorted) for every replica; rows are replicas.
/// Fails if any replica fails.
pub fn simulate_counts(
    engine: Engine,
    p: ModelParams,
    times: &[f64],
    seed: u64,
    replicas: u64,
    stream: Engine,
) -> Result<Vec<Vec<u64>>> {
    simulate_counts_each(engine, p, times, seed, replicas, stream)?.into_iter().collect()
}

/// As [`simulate_counts`], but with one result per replica so that a
/// failed replica (e.g. an exhausted event budget) does not discard the rest.
pub fn simulate_counts_each(
    engine: Engine,
    p: ModelParams,
    times: &[f64],
    seed: u64,
    replicas: u64,
    stream: Engine,
) -> Result<Vec<Result<Vec<u64>>>> {
    p.validate()?;
    let horizon = times.iter().copied().fold(f64::NAN, f64::max);
    check_horizon(horizon)?;
    let sim = match engine {
        Engine::Thinning => Some(ThinningSimulator::new(p)?),
        _ => None,
    };
    Ok((0..replicas)
        .into_par_iter()
        .map(|r| {
            let seq = run(engine, sim.as_ref(), p, horizon, seed, r, stream)?;
            Ok(times.iter().map(|&t| seq.count_at(t)).collect())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn empty_history_gives_baseline() {
        let p = ModelParams::new(1.3, 0.4, 0.5, 1.0).unwrap();
        assert_eq!(intensity(2.0, &[], p).unwrap(), 1.3);
    }

    #[test]
    fn exponential_kernel_intensity() {
        let p = ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap();
        let v = intensity(2.0, &[1.0], p).unwrap();
        assert!((v - (1.0 + 0.5 * (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn left_limit_at_epoch() {
        let p = ModelParams::new(1.0, 0.5, 0.5, 1.0).unwrap();
        let h = [0.5, 1.0];
        let at = intensity(1.0, &h, p).unwrap();
        let only_first = 1.0 + 0.5 * ml_density(0.5, p.kernel()).unwrap();
        assert_eq!(at, only_first);
        assert!(intensity(-0.1, &h, p).is_err());
    }

    #[test]
    fn short_time_blow_up_is_finite() {
        let p = ModelParams::new(1.0, 0.5, 0.5, 1.0).unwrap();
        let v = intensity(0.01, &[0.0], p).unwrap();
        // γ t^{β−1} E_{1/2,1/2}(−0.1), E_{1/2,1/2}(−x) = 1/√π − x erfcx(x)
        let e = 1.0 / std::f64::consts::PI.sqrt() - 0.1 * crate::mlspec::erfcx(0.1);
        let want = 1.0 + 0.5 * 10.0 * e;
        assert!(((v - want) / want).abs() < 1e-13, "{v} vs {want}");
    }

    #[test]
    fn streams_differ_by_engine_and_replica() {
        let mut a = replica_rng(7, Engine::Thinning, 0);
        let mut b = replica_rng(7, Engine::Thinning, 1);
        let mut c = replica_rng(7, Engine::Cluster, 0);
        let (x, y, z): (u64, u64, u64) = (a.random(), b.random(), c.random());
        assert!(x != y && x != z && y != z);
        let mut a2 = replica_rng(7, Engine::Thinning, 0);
        assert_eq!(a2.random::<u64>(), x);
    }

    #[test]
    fn count_at_uses_closed_intervals() {
        let s = EventSequence {
            epochs: vec![0.5, 1.0, 2.0],
            horizon: 3.0,
            seed: 0,
            replica: 0,
            engine: Engine::Poisson,
        };
        assert_eq!(s.count_at(1.0), 2);
        assert_eq!(s.count_at(0.1), 0);
        assert_eq!(s.count_at(3.0), 3);
    }

    #[test]
    fn engine_names_round_trip() {
        for e in [Engine::Thinning, Engine::Cluster, Engine::Poisson, Engine::ExpHawkes] {
            assert_eq!(e.to_string().parse::<Engine>().unwrap(), e);
        }
        assert!("gibbs".parse::<Engine>().is_err());
    }
}
