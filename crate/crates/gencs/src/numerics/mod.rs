//! Deterministic dense linear algebra, seeded sampling, and transform kernels.
//!
//! Everything here is pure: matrices and vectors are plain owned values, and
//! every sampling routine is driven by an explicit [`Rng`] so that re-running
//! with the same `(seed, stream)` reproduces results bit for bit.

mod dct;
mod matrix;
mod rng;

pub use dct::dct_basis;
pub use matrix::{matmul, matmul_nt, matmul_tn, matvec, matvec_t, operator_norm, Matrix};
pub use rng::Rng;

use crate::error::{Error, Result};

/// Real vector; all public operations keep entries finite.
pub type Vector = Vec<f64>;

/// Samples `len` i.i.d. N(mean, variance) values.
///
/// With `variance == 0` the result is a constant vector and no draws are
/// consumed from `rng`.
pub fn gaussian_vector(rng: &mut Rng, len: usize, mean: f64, variance: f64) -> Result<Vector> {
    if !mean.is_finite() || !variance.is_finite() {
        return Err(Error::Parameter {
            name: "mean/variance",
            reason: "must be finite".into(),
        });
    }
    if variance < 0.0 {
        return Err(Error::Parameter {
            name: "variance",
            reason: format!("must be non-negative, got {variance}"),
        });
    }
    if variance == 0.0 {
        return Ok(vec![mean; len]);
    }
    let sd = variance.sqrt();
    Ok((0..len).map(|_| mean + sd * rng.normal()).collect())
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_scaled(x: &[f64], factor: f64, d: &[f64]) -> Vector {
    debug_assert_eq!(x.len(), d.len());
    x.iter().zip(d).map(|(a, b)| a + factor * b).collect()
}

pub fn scale(x: &[f64], factor: f64) -> Vector {
    x.iter().map(|a| a * factor).collect()
}

/// Euclidean distance.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dimension-normalized distance `(1/√n)‖a − b‖`.
pub fn normalized_dist(a: &[f64], b: &[f64]) -> f64 {
    dist(a, b) / (a.len() as f64).sqrt()
}

pub fn clamp01(x: &mut [f64]) {
    for v in x {
        *v = v.clamp(0.0, 1.0);
    }
}

pub fn all_finite(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite())
}
