//! Synthetic ground truth: signals generated by a known random decoder, so
//! the latent dimension is known exactly and the representation error of the
//! family is zero by construction.

use crate::data::SignalSet;
use crate::error::{Error, Result};
use crate::model::{Activation, LayerSpec, Mlp};
use crate::numerics::{Rng, Vector};

/// A random two-layer sigmoid decoder `g: [0,1]^k → (0,1)^n` together with
/// its generation seed. Samples are `x = g(u)` with `u` uniform on the
/// latent cube.
#[derive(Debug, Clone)]
pub struct SyntheticManifold {
    decoder: Mlp,
    latent_dim: usize,
    seed: u64,
}

/// Builds the manifold decoder with the standard Glorot initialization.
pub fn make_synthetic(k: usize, n: usize, hidden: usize, seed: u64) -> Result<SyntheticManifold> {
    if k == 0 || n == 0 || hidden == 0 {
        return Err(Error::Parameter {
            name: "k/n/hidden",
            reason: "dimensions must be >= 1".into(),
        });
    }
    let mut rng = Rng::new(seed, 0);
    let decoder = Mlp::glorot(
        vec![
            LayerSpec::new(k, hidden, Activation::Sigmoid),
            LayerSpec::new(hidden, n, Activation::Sigmoid),
        ],
        &mut rng,
    )?;
    Ok(SyntheticManifold {
        decoder,
        latent_dim: k,
        seed,
    })
}

impl SyntheticManifold {
    pub fn decoder(&self) -> &Mlp {
        &self.decoder
    }

    pub fn latent_dim(&self) -> usize {
        self.latent_dim
    }

    pub fn signal_dim(&self) -> usize {
        self.decoder.output_dim()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Deterministic sample `x = g(u)`.
    pub fn sample(&self, u: &[f64]) -> Result<Vector> {
        self.decoder.forward(u)
    }

    pub fn random_latent(&self, rng: &mut Rng) -> Vector {
        (0..self.latent_dim).map(|_| rng.uniform()).collect()
    }

    /// Draws `count` signals along with their generating latents.
    pub fn sample_set(&self, count: usize, rng: &mut Rng) -> Result<(Vec<Vector>, SignalSet)> {
        let mut latents = Vec::with_capacity(count);
        let mut signals = Vec::with_capacity(count);
        for _ in 0..count {
            let u = self.random_latent(rng);
            signals.push(self.sample(&u)?);
            latents.push(u);
        }
        let set = SignalSet::new(
            self.signal_dim(),
            signals,
            None,
            format!("synthetic:k={},seed={}", self.latent_dim, self.seed),
        )?;
        Ok((latents, set))
    }
}
