//! Mittag-Leffler special functions and the Mittag-Leffler kernel.

mod erfcx;
pub mod gamma;
mod kernel;
mod prabhakar;
mod sample;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use erfcx::{erfc, erfcx};
pub use kernel::{ml_density, ml_spectral, ml_survival, MlDensity};
pub use prabhakar::{ml_one, ml_two, prabhakar, prabhakar_with, PrabhakarOptions, SERIES_RADIUS};
pub use sample::ml_sample;

/// Arguments of `E_{a,b}^c(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrabhakarArgs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl PrabhakarArgs {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.a) || !ok(self.b) || !ok(self.c) {
            return Err(Error::domain(format!(
                "Prabhakar parameters must be positive: a = {}, b = {}, c = {}",
                self.a, self.b, self.c
            )));
        }
        if !self.z.is_finite() {
            return Err(Error::domain(format!("argument z = {} is not finite", self.z)));
        }
        Ok(())
    }
}

/// Tail exponent `beta ∈ (0, 1]` and time scale `gamma > 0` of the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLKernelParams {
    pub beta: f64,
    pub gamma: f64,
}

impl MLKernelParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        let k = Self { beta, gamma };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::domain(format!("beta = {} outside (0, 1]", self.beta)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::domain(format!("gamma = {} must be positive", self.gamma)));
        }
        Ok(())
    }
}
