//! Fractional Hawkes process with a Mittag-Leffler memory kernel.
//!
//! The conditional intensity is
//!
//! ```text
//! Λ(t | H_t) = Λ0 + α Σ_{T_k < t} f_β(t − T_k),
//! ```
//!
//! where `f_β(t; γ) = γ t^{β−1} E_{β,β}(−γ t^β)` is the Mittag-Leffler
//! density with Laplace transform `γ / (γ + s^β)`. At an epoch the intensity
//! takes its left limit, which keeps it finite even though `f_β(0+) = ∞`.
//!
//! Modules:
//! - [`mlspec`]: Prabhakar functions and the kernel built on them, including
//!   an exact sampler for the kernel law.
//! - [`laplace`]: numerical inversion of Laplace transforms and forward
//!   transforms by quadrature.
//! - [`analytics`]: closed-form expected intensity and expected event count.
//! - [`sim`]: the two fractional-kernel simulators (Ogata thinning and the
//!   branching cluster) plus reference processes.
//! - [`harness`]: Monte Carlo experiments with their emitters, and the
//!   validation suite.
//! - [`stats`] and [`quad`]: goodness-of-fit tests and adaptive quadrature.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Published coefficient tables are kept digit for digit.
#![allow(clippy::excessive_precision)]

pub mod analytics;
pub mod error;
pub mod harness;
pub mod laplace;
pub mod mlspec;
pub mod quad;
pub mod sim;
pub mod stats;

pub use analytics::{CurvePoint, CurveSample, Method, ModelParams};
pub use error::{Error, Result};
pub use harness::{CountDistribution, ExperimentConfig};
pub use laplace::{IltConfig, LaplaceImage};
pub use mlspec::{MLKernelParams, PrabhakarArgs};
pub use sim::{Engine, EventSequence};
