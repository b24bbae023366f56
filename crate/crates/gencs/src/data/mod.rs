//! Dataset ingestion and synthetic ground-truth generation.

mod idx;
mod sig;
mod synthetic;

pub use idx::load_mnist_idx;
pub use sig::{load_signals, save_signals};
pub use synthetic::{make_synthetic, SyntheticManifold};

use crate::error::{Error, Result};
use crate::numerics::{Rng, Vector};

/// A uniform-dimension collection of signals with values in [0,1].
#[derive(Debug, Clone)]
pub struct SignalSet {
    n: usize,
    signals: Vec<Vector>,
    labels: Option<Vec<u8>>,
    source: String,
}

impl SignalSet {
    pub fn new(
        n: usize,
        signals: Vec<Vector>,
        labels: Option<Vec<u8>>,
        source: impl Into<String>,
    ) -> Result<Self> {
        for (i, s) in signals.iter().enumerate() {
            if s.len() != n {
                return Err(Error::Data(format!(
                    "signal {i} has dimension {}, set expects {n}",
                    s.len()
                )));
            }
            if s.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::Data(format!("signal {i} has values outside [0,1]")));
            }
        }
        if let Some(l) = &labels {
            if l.len() != signals.len() {
                return Err(Error::Data(format!(
                    "{} labels for {} signals",
                    l.len(),
                    signals.len()
                )));
            }
        }
        Ok(Self {
            n,
            signals,
            labels,
            source: source.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn signals(&self) -> &[Vector] {
        &self.signals
    }

    pub fn signal(&self, i: usize) -> &Vector {
        &self.signals[i]
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Keeps the first `count` signals (after any split/shuffle already applied).
    pub fn truncated(mut self, count: usize) -> Self {
        self.signals.truncate(count);
        if let Some(l) = &mut self.labels {
            l.truncate(count);
        }
        self
    }
}

/// Seeded permutation split into disjoint train/test subsets whose union is
/// the input. The train side receives `⌊train_frac · len⌋` signals.
pub fn split(set: &SignalSet, train_frac: f64, seed: u64) -> Result<(SignalSet, SignalSet)> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(Error::Parameter {
            name: "train_frac",
            reason: format!("must lie in (0,1), got {train_frac}"),
        });
    }
    let mut order: Vec<usize> = (0..set.len()).collect();
    let mut rng = Rng::new(seed, 0);
    rng.shuffle(&mut order);
    let train_count = (train_frac * set.len() as f64).floor() as usize;

    let pick = |idx: &[usize], tag: &str| -> Result<SignalSet> {
        let signals = idx.iter().map(|&i| set.signals[i].clone()).collect();
        let labels = set
            .labels
            .as_ref()
            .map(|l| idx.iter().map(|&i| l[i]).collect());
        SignalSet::new(set.n, signals, labels, format!("{}:{tag}", set.source))
    };
    Ok((
        pick(&order[..train_count], "train")?,
        pick(&order[train_count..], "test")?,
    ))
}

/// Bilinear resampling of every signal from `from` to `to` pixel dimensions
/// (row-major images). Interpolation is convex, so values stay in [0,1].
pub fn upsample_bilinear(
    set: &SignalSet,
    from: (usize, usize),
    to: (usize, usize),
) -> Result<SignalSet> {
    let (h0, w0) = from;
    let (h1, w1) = to;
    if h0 * w0 != set.n() {
        return Err(Error::Data(format!(
            "source dims {h0}x{w0} do not match signal dimension {}",
            set.n()
        )));
    }
    if h1 == 0 || w1 == 0 {
        return Err(Error::Parameter {
            name: "to",
            reason: "target dims must be >= 1".into(),
        });
    }
    let resized: Vec<Vector> = set
        .signals
        .iter()
        .map(|img| {
            let mut out = Vec::with_capacity(h1 * w1);
            for r in 0..h1 {
                // map pixel centers
                let sy = if h1 == 1 {
                    0.0
                } else {
                    r as f64 * (h0 - 1) as f64 / (h1 - 1) as f64
                };
                let y0 = sy.floor() as usize;
                let y1 = (y0 + 1).min(h0 - 1);
                let fy = sy - y0 as f64;
                for c in 0..w1 {
                    let sx = if w1 == 1 {
                        0.0
                    } else {
                        c as f64 * (w0 - 1) as f64 / (w1 - 1) as f64
                    };
                    let x0 = sx.floor() as usize;
                    let x1 = (x0 + 1).min(w0 - 1);
                    let fx = sx - x0 as f64;
                    let v = img[y0 * w0 + x0] * (1.0 - fy) * (1.0 - fx)
                        + img[y0 * w0 + x1] * (1.0 - fy) * fx
                        + img[y1 * w0 + x0] * fy * (1.0 - fx)
                        + img[y1 * w0 + x1] * fy * fx;
                    out.push(v.clamp(0.0, 1.0));
                }
            }
            out
        })
        .collect();
    SignalSet::new(
        h1 * w1,
        resized,
        set.labels.clone(),
        format!("{}:resized{}x{}", set.source, h1, w1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_set(count: usize, n: usize) -> SignalSet {
        let signals = (0..count)
            .map(|i| (0..n).map(|j| ((i * n + j) as f64 * 0.173).fract()).collect())
            .collect();
        SignalSet::new(n, signals, Some((0..count as u8).collect()), "toy").unwrap()
    }

    #[test]
    fn set_validation_rejects_ragged_and_out_of_range() {
        assert!(SignalSet::new(3, vec![vec![0.0, 0.5]], None, "x").is_err());
        assert!(SignalSet::new(2, vec![vec![0.0, 1.5]], None, "x").is_err());
        assert!(SignalSet::new(2, vec![vec![0.0, 1.0]], Some(vec![1, 2]), "x").is_err());
    }

    #[test]
    fn split_half_of_ten_is_five_five() {
        let set = toy_set(10, 4);
        let (train, test) = split(&set, 0.5, 3).unwrap();
        assert_eq!(train.len(), 5);
        assert_eq!(test.len(), 5);
    }

    #[test]
    fn split_is_seeded_disjoint_and_covering() {
        let set = toy_set(20, 3);
        let (tr1, te1) = split(&set, 0.7, 9).unwrap();
        let (tr2, _) = split(&set, 0.7, 9).unwrap();
        assert_eq!(tr1.signals(), tr2.signals());

        let mut seen: Vec<&Vector> = tr1.signals().iter().chain(te1.signals()).collect();
        assert_eq!(seen.len(), 20);
        // every original signal appears exactly once
        for s in set.signals() {
            let pos = seen.iter().position(|t| *t == s).expect("missing signal");
            seen.remove(pos);
        }
        assert!(seen.is_empty());
    }

    #[test]
    fn split_rejects_degenerate_fractions() {
        let set = toy_set(4, 2);
        assert!(split(&set, 0.0, 0).is_err());
        assert!(split(&set, 1.0, 0).is_err());
    }

    #[test]
    fn upsample_preserves_constants_and_range() {
        let set = SignalSet::new(4, vec![vec![0.6; 4], vec![0.0, 1.0, 1.0, 0.0]], None, "t").unwrap();
        let up = upsample_bilinear(&set, (2, 2), (5, 5)).unwrap();
        assert_eq!(up.n(), 25);
        assert!(up.signal(0).iter().all(|v| (v - 0.6).abs() < 1e-12));
        assert!(up.signal(1).iter().all(|v| (0.0..=1.0).contains(v)));
        // corners are interpolation fixed points
        assert_eq!(up.signal(1)[0], 0.0);
        assert_eq!(up.signal(1)[4], 1.0);
    }
}
