//! Gaussian measurement model: operator construction, noisy measurement,
//! SNR ↔ noise-level conversion.

use crate::error::{Error, Result};
use crate::numerics::{self, Matrix, Rng, Vector};

/// Dense random measurement operator `A ∈ R^{m×n}`.
///
/// Operators are cheap to rebuild: experiment outputs record `(m, n, seed)`
/// instead of persisting the matrix itself.
#[derive(Debug, Clone)]
pub struct SensingOperator {
    matrix: Matrix,
    m: usize,
    n: usize,
    seed: u64,
}

impl SensingOperator {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Wraps an explicit matrix (e.g. identity or pre-scaled operators in tests).
    pub fn from_matrix(matrix: Matrix, seed: u64) -> Self {
        let (m, n) = (matrix.rows(), matrix.cols());
        Self { matrix, m, n, seed }
    }

    /// Applies the operator: `A x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vector> {
        numerics::matvec(&self.matrix, x)
    }

    /// Applies the adjoint: `Aᵀ y`.
    pub fn apply_t(&self, y: &[f64]) -> Result<Vector> {
        numerics::matvec_t(&self.matrix, y)
    }
}

/// Standard operator with i.i.d. N(0, 1/n) entries, reproducible from the seed.
///
/// `m > n` leaves the compressed regime; it is allowed (the convergence
/// analyses ask for large m at small scale) but logged as a warning.
pub fn make_operator(m: usize, n: usize, seed: u64) -> Result<SensingOperator> {
    make_operator_with_variance(m, n, 1.0 / n as f64, seed)
}

/// Operator with i.i.d. N(0, entry_variance) entries. The per-iteration
/// convergence analysis is stated for unit-variance entries; pass
/// `entry_variance = 1.0` to reproduce that setting.
pub fn make_operator_with_variance(
    m: usize,
    n: usize,
    entry_variance: f64,
    seed: u64,
) -> Result<SensingOperator> {
    if m == 0 || n == 0 {
        return Err(Error::Parameter {
            name: "m/n",
            reason: "operator dimensions must be >= 1".into(),
        });
    }
    if m > n {
        log::warn!("sensing operator is overdetermined: m={m} > n={n}");
    }
    let mut rng = Rng::new(seed, 0);
    let matrix = Matrix::gaussian(m, n, 0.0, entry_variance, &mut rng)?;
    Ok(SensingOperator { matrix, m, n, seed })
}

/// Additive white Gaussian noise level (per-component standard deviation).
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    sigma: f64,
}

impl NoiseModel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::Parameter {
                name: "sigma",
                reason: format!("must be finite and >= 0, got {sigma}"),
            });
        }
        Ok(Self { sigma })
    }

    pub fn noiseless() -> Self {
        Self { sigma: 0.0 }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Measures `y = A x + z` with `z` i.i.d. N(0, σ²).
///
/// With `σ = 0` the result is exactly `A x` and no draws are consumed from
/// `rng`, so noiseless paths stay bit-stable regardless of rng usage.
pub fn measure(op: &SensingOperator, x: &[f64], noise: NoiseModel, rng: &mut Rng) -> Result<Vector> {
    let mut y = op.apply(x)?;
    if noise.sigma > 0.0 {
        for v in &mut y {
            *v += noise.sigma * rng.normal();
        }
    }
    Ok(y)
}

/// Noise level matching a requested measurement-domain SNR:
/// `σ = √(‖Ax‖² / (m · 10^{snr_db/10}))`, so that per-component signal power
/// over noise power equals the requested ratio.
pub fn snr_to_sigma(snr_db: f64, op: &SensingOperator, x: &[f64]) -> Result<f64> {
    if !snr_db.is_finite() {
        return Err(Error::Parameter {
            name: "snr_db",
            reason: format!("must be finite, got {snr_db}"),
        });
    }
    let ax = op.apply(x)?;
    let energy = numerics::dot(&ax, &ax);
    if energy == 0.0 {
        return Err(Error::DegenerateSignal {
            context: "snr_to_sigma",
        });
    }
    Ok((energy / (op.m as f64 * 10f64.powf(snr_db / 10.0))).sqrt())
}
