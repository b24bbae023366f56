//! Weight-file format:
//!
//! ```text
//! magic   9 bytes  "GENCS-AE\0"
//! version u32 LE   currently 1
//! hlen    u32 LE   byte length of the JSON header
//! header  hlen bytes of UTF-8 JSON: k, n, encoder/decoder layer specs,
//!         and the tensor layout (name, rows, cols, offset, len)
//! payload little-endian f64 values, tensors contiguous in declared order
//! ```
//!
//! `offset` is a byte offset into the payload; `len` counts f64 elements.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Autoencoder, LayerSpec, Mlp};
use crate::numerics::Matrix;

const MAGIC: &[u8; 9] = b"GENCS-AE\0";
const VERSION: u32 = 1;
const FORMAT: &str = "weight file";

#[derive(Debug, Serialize, Deserialize)]
struct TensorEntry {
    name: String,
    rows: usize,
    cols: usize,
    /// byte offset into the payload
    offset: usize,
    /// element count
    len: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    k: usize,
    n: usize,
    encoder: Vec<LayerSpec>,
    decoder: Vec<LayerSpec>,
    tensors: Vec<TensorEntry>,
}

/// The tensor sequence implied by a pair of layer-spec stacks: weight then
/// bias per layer, encoder first.
fn expected_tensors(encoder: &[LayerSpec], decoder: &[LayerSpec]) -> Vec<TensorEntry> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    for (prefix, specs) in [("encoder", encoder), ("decoder", decoder)] {
        for (l, s) in specs.iter().enumerate() {
            let wlen = s.out_dim * s.in_dim;
            out.push(TensorEntry {
                name: format!("{prefix}.{l}.weight"),
                rows: s.out_dim,
                cols: s.in_dim,
                offset,
                len: wlen,
            });
            offset += wlen * 8;
            out.push(TensorEntry {
                name: format!("{prefix}.{l}.bias"),
                rows: s.out_dim,
                cols: 1,
                offset,
                len: s.out_dim,
            });
            offset += s.out_dim * 8;
        }
    }
    out
}

/// Serializes an auto-encoder; the round trip through [`load_weights`] is
/// bit-exact on all parameters.
pub fn save_weights(ae: &Autoencoder, path: &Path) -> Result<()> {
    let header = Header {
        k: ae.latent_dim(),
        n: ae.signal_dim(),
        encoder: ae.encoder.specs().to_vec(),
        decoder: ae.decoder.specs().to_vec(),
        tensors: expected_tensors(ae.encoder.specs(), ae.decoder.specs()),
    };
    let header_json = serde_json::to_vec(&header)
        .map_err(|e| Error::MalformedHeader {
            format: FORMAT,
            detail: e.to_string(),
        })?;

    let mut bytes = Vec::new();
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&VERSION.to_le_bytes());
    bytes.extend_from_slice(&(header_json.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&header_json);
    for mlp in [&ae.encoder, &ae.decoder] {
        for (w, b) in mlp.weights().iter().zip(mlp.biases()) {
            for v in w.as_slice() {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            for v in b {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    fs::write(path, bytes)?;
    Ok(())
}

/// Loads an auto-encoder saved by [`save_weights`]. A malformed header, a
/// dimension mismatch, and a truncated payload raise distinct errors; no
/// partial model is ever returned.
pub fn load_weights(path: &Path) -> Result<Autoencoder> {
    let bytes = fs::read(path)?;
    if bytes.len() < MAGIC.len() + 8 {
        return Err(Error::Truncated {
            format: FORMAT,
            detail: format!("file holds {} bytes, fixed prelude needs {}", bytes.len(), MAGIC.len() + 8),
        });
    }
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(Error::BadMagic { format: FORMAT });
    }
    let version = u32::from_le_bytes(bytes[9..13].try_into().unwrap());
    if version != VERSION {
        return Err(Error::UnsupportedVersion {
            format: FORMAT,
            version,
        });
    }
    let hlen = u32::from_le_bytes(bytes[13..17].try_into().unwrap()) as usize;
    let payload_start = 17 + hlen;
    if bytes.len() < payload_start {
        return Err(Error::Truncated {
            format: FORMAT,
            detail: format!("declared header length {hlen} extends past end of file"),
        });
    }
    let header: Header = serde_json::from_slice(&bytes[17..payload_start]).map_err(|e| {
        Error::MalformedHeader {
            format: FORMAT,
            detail: e.to_string(),
        }
    })?;

    // header self-consistency: specs must chain n -> k -> n and the tensor
    // table must be exactly the layout those specs imply
    let enc_in = header.encoder.first().map(|s| s.in_dim);
    let enc_out = header.encoder.last().map(|s| s.out_dim);
    let dec_in = header.decoder.first().map(|s| s.in_dim);
    let dec_out = header.decoder.last().map(|s| s.out_dim);
    if enc_in != Some(header.n)
        || enc_out != Some(header.k)
        || dec_in != Some(header.k)
        || dec_out != Some(header.n)
    {
        return Err(Error::DimensionMismatch {
            format: FORMAT,
            detail: format!(
                "header declares k={}, n={} but layer stacks run {:?}->{:?} and {:?}->{:?}",
                header.k, header.n, enc_in, enc_out, dec_in, dec_out
            ),
        });
    }
    let expected = expected_tensors(&header.encoder, &header.decoder);
    if expected.len() != header.tensors.len() {
        return Err(Error::DimensionMismatch {
            format: FORMAT,
            detail: format!(
                "layer specs imply {} tensors, header lists {}",
                expected.len(),
                header.tensors.len()
            ),
        });
    }
    for (e, g) in expected.iter().zip(&header.tensors) {
        if e.name != g.name || e.rows != g.rows || e.cols != g.cols || e.offset != g.offset || e.len != g.len {
            return Err(Error::DimensionMismatch {
                format: FORMAT,
                detail: format!("tensor {}: expected {e:?}, header says {g:?}", g.name),
            });
        }
    }

    let payload = &bytes[payload_start..];
    let total_bytes: usize = expected.iter().map(|t| t.len * 8).sum();
    if payload.len() < total_bytes {
        return Err(Error::Truncated {
            format: FORMAT,
            detail: format!("payload holds {} bytes, tensors need {}", payload.len(), total_bytes),
        });
    }
    if payload.len() > total_bytes {
        return Err(Error::MalformedHeader {
            format: FORMAT,
            detail: format!("{} trailing bytes after payload", payload.len() - total_bytes),
        });
    }

    let read_tensor = |entry: &TensorEntry| -> Vec<f64> {
        let start = entry.offset;
        (0..entry.len)
            .map(|i| f64::from_le_bytes(payload[start + 8 * i..start + 8 * (i + 1)].try_into().unwrap()))
            .collect()
    };

    let mut idx = 0usize;
    let mut build_mlp = |specs: &[LayerSpec]| -> Result<Mlp> {
        let mut weights = Vec::with_capacity(specs.len());
        let mut biases = Vec::with_capacity(specs.len());
        for s in specs {
            let w = read_tensor(&header.tensors[idx]);
            idx += 1;
            let b = read_tensor(&header.tensors[idx]);
            idx += 1;
            weights.push(Matrix::from_vec(s.out_dim, s.in_dim, w)?);
            biases.push(b);
        }
        Mlp::from_parts(specs.to_vec(), weights, biases)
    };
    let encoder = build_mlp(&header.encoder)?;
    let decoder = build_mlp(&header.decoder)?;
    Autoencoder::new(encoder, decoder)
}
