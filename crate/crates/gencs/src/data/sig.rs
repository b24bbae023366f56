//! Generic raw-f64 signal container for arbitrary image sets:
//! magic "GENCS-SIG", u32 count LE, u32 n LE, then count·n little-endian
//! f64 values in [0,1].

use std::path::Path;

use crate::data::SignalSet;
use crate::error::{Error, Result};
use crate::numerics::Vector;

const MAGIC: &[u8; 9] = b"GENCS-SIG";
const FORMAT: &str = "signal file";

pub fn save_signals(set: &SignalSet, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(17 + set.len() * set.n() * 8);
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&(set.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&(set.n() as u32).to_le_bytes());
    for s in set.signals() {
        for v in s {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn load_signals(path: &Path) -> Result<SignalSet> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 17 {
        return Err(Error::Truncated {
            format: FORMAT,
            detail: format!("file holds {} bytes, header needs 17", bytes.len()),
        });
    }
    if &bytes[..9] != MAGIC {
        return Err(Error::BadMagic { format: FORMAT });
    }
    let count = u32::from_le_bytes(bytes[9..13].try_into().unwrap()) as usize;
    let n = u32::from_le_bytes(bytes[13..17].try_into().unwrap()) as usize;
    let total = count
        .checked_mul(n)
        .and_then(|t| t.checked_mul(8))
        .ok_or_else(|| Error::DimOverflow {
            format: FORMAT,
            detail: format!("{count} signals of dimension {n} overflow"),
        })?;
    let payload = &bytes[17..];
    if payload.len() < total {
        return Err(Error::Truncated {
            format: FORMAT,
            detail: format!("payload holds {} bytes, header declares {total}", payload.len()),
        });
    }
    if payload.len() > total {
        return Err(Error::MalformedHeader {
            format: FORMAT,
            detail: format!("{} trailing bytes after payload", payload.len() - total),
        });
    }
    let signals: Vec<Vector> = payload
        .chunks_exact(n * 8)
        .map(|sig| {
            sig.chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
                .collect()
        })
        .collect();
    SignalSet::new(n, signals, None, format!("sig:{}", path.display()))
}
