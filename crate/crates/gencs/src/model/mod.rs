//! Fully-connected auto-encoders: construction, forward/backward passes,
//! training, Lipschitz and representation-error estimates, serialization.

mod io;
mod train;

pub use io::{load_weights, save_weights};
pub use train::{train, Optimizer, TrainConfig};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, matmul, matmul_nt, matmul_tn, Matrix, Rng, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Sigmoid,
    Relu,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Activation::Relu => x.max(0.0),
            Activation::Identity => x,
        }
    }

    /// Derivative at pre-activation `pre`, given the already computed output `post`.
    #[inline]
    fn derivative(self, pre: f64, post: f64) -> f64 {
        match self {
            Activation::Sigmoid => post * (1.0 - post),
            Activation::Relu => {
                if pre > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Identity => 1.0,
        }
    }

    /// Lipschitz constant of the scalar activation.
    pub fn lipschitz(self) -> f64 {
        match self {
            Activation::Sigmoid => 0.25,
            Activation::Relu | Activation::Identity => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    #[serde(rename = "in")]
    pub in_dim: usize,
    #[serde(rename = "out")]
    pub out_dim: usize,
    pub activation: Activation,
}

impl LayerSpec {
    pub fn new(in_dim: usize, out_dim: usize, activation: Activation) -> Self {
        Self {
            in_dim,
            out_dim,
            activation,
        }
    }
}

/// A stack of affine layers with element-wise activations.
#[derive(Debug, Clone)]
pub struct Mlp {
    specs: Vec<LayerSpec>,
    /// Per layer, `out_dim x in_dim`.
    weights: Vec<Matrix>,
    biases: Vec<Vector>,
}

/// Parameter gradients mirroring an [`Mlp`]'s weight and bias shapes.
#[derive(Debug, Clone)]
pub struct MlpGradients {
    pub d_weights: Vec<Matrix>,
    pub d_biases: Vec<Vector>,
}

fn validate_specs(specs: &[LayerSpec]) -> Result<()> {
    if specs.is_empty() {
        return Err(Error::Parameter {
            name: "specs",
            reason: "an Mlp needs at least one layer".into(),
        });
    }
    for (i, s) in specs.iter().enumerate() {
        if s.in_dim == 0 || s.out_dim == 0 {
            return Err(Error::Parameter {
                name: "specs",
                reason: format!("layer {i} has a zero dimension"),
            });
        }
    }
    for (i, pair) in specs.windows(2).enumerate() {
        if pair[0].out_dim != pair[1].in_dim {
            return Err(Error::Shape {
                context: "Mlp",
                detail: format!(
                    "layer {i} outputs {} but layer {} expects {}",
                    pair[0].out_dim,
                    i + 1,
                    pair[1].in_dim
                ),
            });
        }
    }
    Ok(())
}

impl Mlp {
    /// Initializes weights uniformly in ±√(6/(fan_in+fan_out)), biases at zero.
    pub fn glorot(specs: Vec<LayerSpec>, rng: &mut Rng) -> Result<Self> {
        validate_specs(&specs)?;
        let mut weights = Vec::with_capacity(specs.len());
        let mut biases = Vec::with_capacity(specs.len());
        for s in &specs {
            let limit = (6.0 / (s.in_dim + s.out_dim) as f64).sqrt();
            weights.push(Matrix::from_fn(s.out_dim, s.in_dim, |_, _| {
                rng.uniform_in(-limit, limit)
            }));
            biases.push(vec![0.0; s.out_dim]);
        }
        Ok(Self {
            specs,
            weights,
            biases,
        })
    }

    pub fn from_parts(specs: Vec<LayerSpec>, weights: Vec<Matrix>, biases: Vec<Vector>) -> Result<Self> {
        validate_specs(&specs)?;
        if weights.len() != specs.len() || biases.len() != specs.len() {
            return Err(Error::Shape {
                context: "Mlp::from_parts",
                detail: format!(
                    "{} specs but {} weight and {} bias tensors",
                    specs.len(),
                    weights.len(),
                    biases.len()
                ),
            });
        }
        for (i, s) in specs.iter().enumerate() {
            if weights[i].rows() != s.out_dim || weights[i].cols() != s.in_dim {
                return Err(Error::Shape {
                    context: "Mlp::from_parts",
                    detail: format!(
                        "layer {i} weight is {}x{}, spec says {}x{}",
                        weights[i].rows(),
                        weights[i].cols(),
                        s.out_dim,
                        s.in_dim
                    ),
                });
            }
            if biases[i].len() != s.out_dim {
                return Err(Error::Shape {
                    context: "Mlp::from_parts",
                    detail: format!("layer {i} bias has length {}, spec says {}", biases[i].len(), s.out_dim),
                });
            }
            if !numerics::all_finite(weights[i].as_slice()) || !numerics::all_finite(&biases[i]) {
                return Err(Error::Parameter {
                    name: "weights/biases",
                    reason: format!("layer {i} holds non-finite parameters"),
                });
            }
        }
        Ok(Self {
            specs,
            weights,
            biases,
        })
    }

    pub fn specs(&self) -> &[LayerSpec] {
        &self.specs
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vector] {
        &self.biases
    }

    pub(crate) fn params_mut(&mut self) -> (&mut Vec<Matrix>, &mut Vec<Vector>) {
        (&mut self.weights, &mut self.biases)
    }

    pub fn input_dim(&self) -> usize {
        self.specs[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.specs[self.specs.len() - 1].out_dim
    }

    fn check_input(&self, x: &[f64], context: &'static str) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::Shape {
                context,
                detail: format!("input has length {}, network expects {}", x.len(), self.input_dim()),
            });
        }
        Ok(())
    }

    /// Affine-plus-activation composition.
    pub fn forward(&self, x: &[f64]) -> Result<Vector> {
        self.check_input(x, "Mlp::forward")?;
        let mut a = x.to_vec();
        for (l, spec) in self.specs.iter().enumerate() {
            let mut z = numerics::matvec(&self.weights[l], &a)?;
            for (zv, b) in z.iter_mut().zip(&self.biases[l]) {
                *zv += b;
            }
            for zv in &mut z {
                *zv = spec.activation.apply(*zv);
            }
            a = z;
        }
        Ok(a)
    }

    /// Forward pass that keeps pre- and post-activations for backprop.
    fn forward_trace(&self, x: &[f64]) -> Result<(Vec<Vector>, Vec<Vector>)> {
        let mut pres = Vec::with_capacity(self.specs.len());
        let mut posts = Vec::with_capacity(self.specs.len());
        let mut a = x.to_vec();
        for (l, spec) in self.specs.iter().enumerate() {
            let mut z = numerics::matvec(&self.weights[l], &a)?;
            for (zv, b) in z.iter_mut().zip(&self.biases[l]) {
                *zv += b;
            }
            let post: Vector = z.iter().map(|&zv| spec.activation.apply(zv)).collect();
            pres.push(z);
            a = post.clone();
            posts.push(post);
        }
        Ok((pres, posts))
    }

    /// Exact reverse-mode gradients of `⟨grad_out, mlp(x)⟩` with respect to
    /// all parameters, plus the gradient with respect to the input
    /// (`grad_in = Jᵀ grad_out`).
    pub fn backward(&self, x: &[f64], grad_out: &[f64]) -> Result<(MlpGradients, Vector)> {
        self.check_input(x, "Mlp::backward")?;
        if grad_out.len() != self.output_dim() {
            return Err(Error::Shape {
                context: "Mlp::backward",
                detail: format!(
                    "grad_out has length {}, network outputs {}",
                    grad_out.len(),
                    self.output_dim()
                ),
            });
        }
        let (pres, posts) = self.forward_trace(x)?;

        let mut d_weights = Vec::with_capacity(self.specs.len());
        let mut d_biases = Vec::with_capacity(self.specs.len());
        let mut delta = grad_out.to_vec();
        for l in (0..self.specs.len()).rev() {
            let act = self.specs[l].activation;
            for (d, (&pre, &post)) in delta.iter_mut().zip(pres[l].iter().zip(&posts[l])) {
                *d *= act.derivative(pre, post);
            }
            let below: &[f64] = if l == 0 { x } else { &posts[l - 1] };
            let dw = Matrix::from_fn(self.specs[l].out_dim, self.specs[l].in_dim, |r, c| {
                delta[r] * below[c]
            });
            d_weights.push(dw);
            d_biases.push(delta.clone());
            delta = numerics::matvec_t(&self.weights[l], &delta)?;
        }
        d_weights.reverse();
        d_biases.reverse();
        Ok((
            MlpGradients {
                d_weights,
                d_biases,
            },
            delta,
        ))
    }

    /// Batched forward pass; rows of `x` are samples. Returns per-layer
    /// pre- and post-activation matrices.
    pub(crate) fn forward_batch(&self, x: &Matrix) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
        if x.cols() != self.input_dim() {
            return Err(Error::Shape {
                context: "Mlp::forward_batch",
                detail: format!("batch has {} columns, network expects {}", x.cols(), self.input_dim()),
            });
        }
        let mut pres = Vec::with_capacity(self.specs.len());
        let mut posts = Vec::with_capacity(self.specs.len());
        let mut a = x.clone();
        for (l, spec) in self.specs.iter().enumerate() {
            let mut z = matmul_nt(&a, &self.weights[l])?;
            for r in 0..z.rows() {
                let row = z.row_mut(r);
                for (zv, b) in row.iter_mut().zip(&self.biases[l]) {
                    *zv += b;
                }
            }
            let mut post = z.clone();
            for v in post.as_mut_slice() {
                *v = spec.activation.apply(*v);
            }
            pres.push(z);
            a = post.clone();
            posts.push(post);
        }
        Ok((pres, posts))
    }

    /// Batched reverse pass matching [`Mlp::forward_batch`]. Gradients are
    /// summed over the batch rows.
    pub(crate) fn backward_batch(
        &self,
        x: &Matrix,
        pres: &[Matrix],
        posts: &[Matrix],
        grad_out: &Matrix,
    ) -> Result<(MlpGradients, Matrix)> {
        let mut d_weights = Vec::with_capacity(self.specs.len());
        let mut d_biases = Vec::with_capacity(self.specs.len());
        let mut delta = grad_out.clone();
        for l in (0..self.specs.len()).rev() {
            let act = self.specs[l].activation;
            {
                let d = delta.as_mut_slice();
                let pre = pres[l].as_slice();
                let post = posts[l].as_slice();
                for i in 0..d.len() {
                    d[i] *= act.derivative(pre[i], post[i]);
                }
            }
            let below = if l == 0 { x } else { &posts[l - 1] };
            d_weights.push(matmul_tn(&delta, below)?);
            let mut db = vec![0.0; self.specs[l].out_dim];
            for r in 0..delta.rows() {
                for (acc, v) in db.iter_mut().zip(delta.row(r)) {
                    *acc += v;
                }
            }
            d_biases.push(db);
            delta = matmul(&delta, &self.weights[l])?;
        }
        d_weights.reverse();
        d_biases.reverse();
        Ok((
            MlpGradients {
                d_weights,
                d_biases,
            },
            delta,
        ))
    }
}

/// Encoder/decoder pair. The encoder maps signals into the latent unit cube,
/// the decoder back to signal space.
#[derive(Debug, Clone)]
pub struct Autoencoder {
    pub encoder: Mlp,
    pub decoder: Mlp,
}

impl Autoencoder {
    /// Couples an encoder and decoder, checking that their dimensions chain.
    pub fn new(encoder: Mlp, decoder: Mlp) -> Result<Self> {
        if encoder.output_dim() != decoder.input_dim() {
            return Err(Error::Shape {
                context: "Autoencoder",
                detail: format!(
                    "encoder outputs {} but decoder expects {}",
                    encoder.output_dim(),
                    decoder.input_dim()
                ),
            });
        }
        if encoder.input_dim() != decoder.output_dim() {
            return Err(Error::Shape {
                context: "Autoencoder",
                detail: format!(
                    "encoder consumes {} but decoder produces {}",
                    encoder.input_dim(),
                    decoder.output_dim()
                ),
            });
        }
        Ok(Self { encoder, decoder })
    }

    /// Standard architecture: mirrored hidden stacks with sigmoid final
    /// layers on both halves, so latents live in [0,1]^k and outputs in
    /// [0,1]^n.
    pub fn init(
        n: usize,
        hidden: &[usize],
        k: usize,
        hidden_activation: Activation,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = Rng::new(seed, 0);
        let mut enc_specs = Vec::new();
        let mut dims = vec![n];
        dims.extend_from_slice(hidden);
        dims.push(k);
        for w in dims.windows(2) {
            enc_specs.push(LayerSpec::new(w[0], w[1], hidden_activation));
        }
        enc_specs.last_mut().unwrap().activation = Activation::Sigmoid;

        let mut dec_specs = Vec::new();
        let mut rev: Vec<usize> = dims.clone();
        rev.reverse();
        for w in rev.windows(2) {
            dec_specs.push(LayerSpec::new(w[0], w[1], hidden_activation));
        }
        dec_specs.last_mut().unwrap().activation = Activation::Sigmoid;

        let encoder = Mlp::glorot(enc_specs, &mut rng)?;
        let decoder = Mlp::glorot(dec_specs, &mut rng)?;
        Autoencoder::new(encoder, decoder)
    }

    pub fn latent_dim(&self) -> usize {
        self.encoder.output_dim()
    }

    pub fn signal_dim(&self) -> usize {
        self.encoder.input_dim()
    }

    pub fn encode(&self, x: &[f64]) -> Result<Vector> {
        self.encoder.forward(x)
    }

    pub fn decode(&self, u: &[f64]) -> Result<Vector> {
        self.decoder.forward(u)
    }

    /// `decode(encode(x))`.
    pub fn reconstruct(&self, x: &[f64]) -> Result<Vector> {
        self.decoder.forward(&self.encoder.forward(x)?)
    }
}

/// Product of per-layer operator norms and activation Lipschitz constants:
/// an upper bound on the network's Lipschitz constant in Euclidean norm.
pub fn lipschitz_upper_bound(mlp: &Mlp) -> f64 {
    let mut product = 1.0;
    for (l, (w, spec)) in mlp.weights().iter().zip(mlp.specs()).enumerate() {
        let mut rng = Rng::new(0x11b5, l as u64);
        let sigma = crate::numerics::operator_norm(w, 50, &mut rng)
            .expect("validated Mlp has non-empty weights");
        product *= sigma * spec.activation.lipschitz();
    }
    product
}

/// Worst-case normalized reconstruction error `max_x (1/√n)‖g(f(x)) − x‖`
/// over the given signals, using the encoder as the latent projection.
///
/// The encoder stands in for the intractable minimization over latents, so
/// the estimate upper-bounds the true covering distortion on this dataset.
pub fn representation_error(ae: &Autoencoder, signals: &[Vector]) -> Result<f64> {
    if signals.is_empty() {
        return Err(Error::Parameter {
            name: "signals",
            reason: "empty dataset".into(),
        });
    }
    let mut worst: f64 = 0.0;
    for x in signals {
        let rec = ae.reconstruct(x)?;
        worst = worst.max(numerics::normalized_dist(&rec, x));
    }
    Ok(worst)
}

/// Like [`representation_error`], but refines each encoder latent with a few
/// projected gradient-descent steps on `‖g(u) − x‖²` before measuring.
pub fn representation_error_refined(
    ae: &Autoencoder,
    signals: &[Vector],
    steps: usize,
    lr: f64,
) -> Result<f64> {
    if signals.is_empty() {
        return Err(Error::Parameter {
            name: "signals",
            reason: "empty dataset".into(),
        });
    }
    let mut worst: f64 = 0.0;
    for x in signals {
        let mut u = ae.encode(x)?;
        let mut best = numerics::normalized_dist(&ae.decode(&u)?, x);
        for _ in 0..steps {
            let g = ae.decode(&u)?;
            let grad_out: Vector = g.iter().zip(x).map(|(gv, xv)| 2.0 * (gv - xv)).collect();
            let (_, grad_u) = ae.decoder.backward(&u, &grad_out)?;
            for (uv, gv) in u.iter_mut().zip(&grad_u) {
                *uv = (*uv - lr * gv).clamp(0.0, 1.0);
            }
            best = best.min(numerics::normalized_dist(&ae.decode(&u)?, x));
        }
        worst = worst.max(best);
    }
    Ok(worst)
}
