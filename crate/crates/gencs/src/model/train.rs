use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Autoencoder, Mlp, MlpGradients};
use crate::numerics::{Matrix, Rng, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimizer {
    Sgd,
    Adam,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: Optimizer,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 30,
            batch_size: 32,
            learning_rate: 1e-3,
            optimizer: Optimizer::Adam,
            seed: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::Parameter {
                name: "epochs/batch_size",
                reason: "must be >= 1".into(),
            });
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Parameter {
                name: "learning_rate",
                reason: format!("must be finite and > 0, got {}", self.learning_rate),
            });
        }
        Ok(())
    }
}

/// Adam moment buffers for one Mlp; plain SGD leaves them unused.
struct OptimizerState {
    m_w: Vec<Matrix>,
    v_w: Vec<Matrix>,
    m_b: Vec<Vector>,
    v_b: Vec<Vector>,
}

impl OptimizerState {
    fn zeros_like(mlp: &Mlp) -> Self {
        Self {
            m_w: mlp.weights().iter().map(|w| Matrix::zeros(w.rows(), w.cols())).collect(),
            v_w: mlp.weights().iter().map(|w| Matrix::zeros(w.rows(), w.cols())).collect(),
            m_b: mlp.biases().iter().map(|b| vec![0.0; b.len()]).collect(),
            v_b: mlp.biases().iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }
}

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

fn adam_update(p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64], lr: f64, t: f64) {
    let bc1 = 1.0 - ADAM_BETA1.powf(t);
    let bc2 = 1.0 - ADAM_BETA2.powf(t);
    for i in 0..p.len() {
        m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * g[i];
        v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * g[i] * g[i];
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        p[i] -= lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
    }
}

fn sgd_update(p: &mut [f64], g: &[f64], lr: f64) {
    for i in 0..p.len() {
        p[i] -= lr * g[i];
    }
}

fn apply_gradients(
    mlp: &mut Mlp,
    grads: &MlpGradients,
    state: &mut OptimizerState,
    optimizer: Optimizer,
    lr: f64,
    t: f64,
) {
    let (weights, biases) = mlp.params_mut();
    for l in 0..weights.len() {
        match optimizer {
            Optimizer::Adam => {
                adam_update(
                    weights[l].as_mut_slice(),
                    grads.d_weights[l].as_slice(),
                    state.m_w[l].as_mut_slice(),
                    state.v_w[l].as_mut_slice(),
                    lr,
                    t,
                );
                adam_update(&mut biases[l], &grads.d_biases[l], &mut state.m_b[l], &mut state.v_b[l], lr, t);
            }
            Optimizer::Sgd => {
                sgd_update(weights[l].as_mut_slice(), grads.d_weights[l].as_slice(), lr);
                sgd_update(&mut biases[l], &grads.d_biases[l], lr);
            }
        }
    }
}

fn batch_matrix(signals: &[Vector], idx: &[usize], n: usize) -> Matrix {
    let mut m = Matrix::zeros(idx.len(), n);
    for (r, &i) in idx.iter().enumerate() {
        m.row_mut(r).copy_from_slice(&signals[i]);
    }
    m
}

/// Mean per-pixel reconstruction error `mean ‖g(f(x)) − x‖²/n` over a dataset.
pub(crate) fn dataset_loss(ae: &Autoencoder, signals: &[Vector]) -> Result<f64> {
    let n = ae.signal_dim();
    let mut total = 0.0;
    for chunk in signals.chunks(256) {
        let idx: Vec<usize> = (0..chunk.len()).collect();
        let x = batch_matrix(chunk, &idx, n);
        let (_, enc_posts) = ae.encoder.forward_batch(&x)?;
        let (_, dec_posts) = ae.decoder.forward_batch(enc_posts.last().unwrap())?;
        let out = dec_posts.last().unwrap();
        for (ov, xv) in out.as_slice().iter().zip(x.as_slice()) {
            let d = ov - xv;
            total += d * d;
        }
    }
    Ok(total / (signals.len() * n) as f64)
}

/// Minimizes the mean per-pixel squared reconstruction error over minibatches.
///
/// Single-threaded and fully deterministic for a fixed config seed. The
/// returned history holds the full-dataset loss after each epoch.
pub fn train(ae: Autoencoder, signals: &[Vector], cfg: &TrainConfig) -> Result<(Autoencoder, Vec<f64>)> {
    cfg.validate()?;
    if signals.is_empty() {
        return Err(Error::Parameter {
            name: "signals",
            reason: "empty dataset".into(),
        });
    }
    let n = ae.signal_dim();
    for (i, s) in signals.iter().enumerate() {
        if s.len() != n {
            return Err(Error::Shape {
                context: "train",
                detail: format!("signal {i} has length {}, auto-encoder expects {n}", s.len()),
            });
        }
    }

    let mut ae = ae;
    let mut enc_state = OptimizerState::zeros_like(&ae.encoder);
    let mut dec_state = OptimizerState::zeros_like(&ae.decoder);
    let mut shuffle_rng = Rng::new(cfg.seed, 1);
    let mut order: Vec<usize> = (0..signals.len()).collect();
    let mut loss_history = Vec::with_capacity(cfg.epochs);
    let mut step = 0u64;

    for _ in 0..cfg.epochs {
        shuffle_rng.shuffle(&mut order);
        for batch_idx in order.chunks(cfg.batch_size) {
            step += 1;
            let x = batch_matrix(signals, batch_idx, n);
            let (enc_pres, enc_posts) = ae.encoder.forward_batch(&x)?;
            let latent = enc_posts.last().unwrap().clone();
            let (dec_pres, dec_posts) = ae.decoder.forward_batch(&latent)?;
            let out = dec_posts.last().unwrap();

            // d/d_out of mean ‖out − x‖²/n over the batch
            let scale = 2.0 / (batch_idx.len() * n) as f64;
            let mut d_out = Matrix::zeros(out.rows(), out.cols());
            for ((dv, ov), xv) in d_out
                .as_mut_slice()
                .iter_mut()
                .zip(out.as_slice())
                .zip(x.as_slice())
            {
                *dv = scale * (ov - xv);
            }

            let (dec_grads, d_latent) = ae.decoder.backward_batch(&latent, &dec_pres, &dec_posts, &d_out)?;
            let (enc_grads, _) = ae.encoder.backward_batch(&x, &enc_pres, &enc_posts, &d_latent)?;

            let t = step as f64;
            apply_gradients(&mut ae.decoder, &dec_grads, &mut dec_state, cfg.optimizer, cfg.learning_rate, t);
            apply_gradients(&mut ae.encoder, &enc_grads, &mut enc_state, cfg.optimizer, cfg.learning_rate, t);
        }
        loss_history.push(dataset_loss(&ae, signals)?);
    }
    Ok((ae, loss_history))
}
