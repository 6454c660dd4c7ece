use rand::Rng;

use super::{check_horizon, replica_rng, Engine, EventSequence, DEFAULT_BUDGET};
use crate::analytics::ModelParams;
use crate::error::{Error, Result};
use crate::mlspec::MlDensity;

/// Guard after each accepted event. Kernel-driven events in `(T_k, T_k + δ]`
/// are lost; the expected loss per event is `α F_β(δ) ≈ α γ δ^β / Γ(1 + β)`.
pub const DELTA: f64 = 1e-10;

/// Ogata thinning with a bound refreshed at every proposal.
///
/// Between events every kernel summand decreases, so the intensity just
/// after the current time bounds it on the rest of the inter-event gap.
/// Right after an event the newest summand is singular for `β < 1`; the
/// next proposal therefore starts at `T_k + δ`, and the newest-event offset
/// in the bound is never smaller than `δ`.
#[derive(Debug, Clone)]
pub struct ThinningSimulator {
    params: ModelParams,
    density: MlDensity,
    delta: f64,
    budget: usize,
}

impl ThinningSimulator {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            density: MlDensity::new(params.kernel())?,
            delta: DELTA,
            budget: DEFAULT_BUDGET,
        })
    }

    /// Cap on accepted events per path.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::domain(format!("guard δ = {delta} must be positive")));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    /// `Λ0 + α Σ f(max(u − T_k, δ))`.
    #[inline]
    fn intensity(&self, u: f64, epochs: &[f64]) -> f64 {
        let mut sum = 0.0;
        for &tk in epochs {
            sum += self.density.eval((u - tk).max(self.delta));
        }
        self.params.lambda0 + self.params.alpha * sum
    }

    /// One path on `(0, horizon]`.
    pub fn path<R: Rng + ?Sized>(&self, horizon: f64, rng: &mut R) -> Result<Vec<f64>> {
        check_horizon(horizon)?;
        let mut epochs = Vec::new();
        let mut t = 0.0;
        loop {
            let bound = self.intensity(t, &epochs);
            let gap = -(1.0 - rng.random::<f64>()).ln() / bound;
            let u = t + gap;
            if u > horizon {
                break;
            }
            let lam = self.intensity(u, &epochs);
            if rng.random::<f64>() * bound <= lam {
                epochs.push(u);
                if epochs.len() > self.budget {
                    return Err(Error::Budget { cap: self.budget });
                }
                t = u + self.delta;
            } else {
                t = u;
            }
        }
        Ok(epochs)
    }
}

/// One thinning path, replica 0 of `seed`.
pub fn simulate_thinning(p: ModelParams, horizon: f64, seed: u64) -> Result<EventSequence> {
    let sim = ThinningSimulator::new(p)?;
    let mut rng = replica_rng(seed, Engine::Thinning, 0);
    Ok(EventSequence {
        epochs: sim.path(horizon, &mut rng)?,
        horizon,
        seed,
        replica: 0,
        engine: Engine::Thinning,
    })
}
