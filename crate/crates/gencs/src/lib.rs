//! Compressed-sensing recovery with trained auto-encoder priors.
//!
//! The crate covers the full experimental loop:
//!
//! - [`numerics`]: dense linear algebra, seeded sampling, DCT basis.
//! - [`model`]: fully-connected auto-encoders — training, gradients,
//!   Lipschitz and representation-error estimates, weight serialization.
//! - [`sensing`]: Gaussian measurement operators and noise models.
//! - [`recovery`]: the recovery algorithms — auto-encoder projected
//!   gradient descent, latent gradient descent, exhaustive quantized-latent
//!   search, ISTA on a DCT basis, and block-wise composition.
//! - [`theory`]: quantization, closed-form recovery-bound evaluators, and
//!   Monte-Carlo verification of the concentration lemmas behind them.
//! - [`data`]: IDX and raw-f64 signal ingestion, synthetic manifolds.
//! - [`bench`]: the config-driven experiment harness behind the `gencs` CLI.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod bench;
pub mod data;
pub mod error;
pub mod model;
pub mod numerics;
pub mod recovery;
pub mod sensing;
pub mod theory;

pub use error::{Error, Result};
