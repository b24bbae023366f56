//! IDX image/label ingestion (the MNIST container format).
//!
//! Layout is big-endian: a u32 magic (0x00000803 for u8 image tensors,
//! 0x00000801 for u8 label vectors), one u32 per declared dimension, then
//! the raw byte payload.

use std::path::Path;

use crate::data::SignalSet;
use crate::error::{Error, Result};
use crate::numerics::Vector;

const FORMAT: &str = "idx file";
const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

fn read_u32_be(bytes: &[u8], pos: usize, what: &str) -> Result<u32> {
    bytes
        .get(pos..pos + 4)
        .map(|b| u32::from_be_bytes(b.try_into().unwrap()))
        .ok_or_else(|| Error::Truncated {
            format: FORMAT,
            detail: format!("file ends inside {what}"),
        })
}

fn parse_images(bytes: &[u8]) -> Result<(usize, usize, usize, Vec<Vector>)> {
    let magic = read_u32_be(bytes, 0, "magic")?;
    if magic != IMAGES_MAGIC {
        return Err(Error::BadMagic { format: FORMAT });
    }
    let count = read_u32_be(bytes, 4, "count")? as usize;
    let rows = read_u32_be(bytes, 8, "rows")? as usize;
    let cols = read_u32_be(bytes, 12, "cols")? as usize;
    let pixels = rows.checked_mul(cols).ok_or_else(|| Error::DimOverflow {
        format: FORMAT,
        detail: format!("{rows}x{cols} pixels overflow"),
    })?;
    let total = count.checked_mul(pixels).ok_or_else(|| Error::DimOverflow {
        format: FORMAT,
        detail: format!("{count} images of {pixels} pixels overflow"),
    })?;
    let payload = &bytes[16..];
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
    let signals = payload
        .chunks_exact(pixels)
        .map(|img| img.iter().map(|&b| b as f64 / 255.0).collect())
        .collect();
    Ok((count, rows, cols, signals))
}

fn parse_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let magic = read_u32_be(bytes, 0, "magic")?;
    if magic != LABELS_MAGIC {
        return Err(Error::BadMagic { format: FORMAT });
    }
    let count = read_u32_be(bytes, 4, "count")? as usize;
    let payload = &bytes[8..];
    if payload.len() < count {
        return Err(Error::Truncated {
            format: FORMAT,
            detail: format!("label payload holds {} bytes, header declares {count}", payload.len()),
        });
    }
    if payload.len() > count {
        return Err(Error::MalformedHeader {
            format: FORMAT,
            detail: format!("{} trailing bytes after labels", payload.len() - count),
        });
    }
    Ok(payload.to_vec())
}

/// Loads an IDX image file (and optionally its label file) into a
/// [`SignalSet`]. Pixels are scaled to [0,1] by /255 and flattened
/// row-major.
pub fn load_mnist_idx(images_path: &Path, labels_path: Option<&Path>) -> Result<SignalSet> {
    let bytes = std::fs::read(images_path)?;
    let (count, rows, cols, signals) = parse_images(&bytes)?;
    let labels = match labels_path {
        Some(p) => {
            let l = parse_labels(&std::fs::read(p)?)?;
            if l.len() != count {
                return Err(Error::DimensionMismatch {
                    format: FORMAT,
                    detail: format!("{} labels for {count} images", l.len()),
                });
            }
            Some(l)
        }
        None => None,
    };
    SignalSet::new(
        rows * cols,
        signals,
        labels,
        format!("idx:{}", images_path.display()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image_bytes(count: u32, rows: u32, cols: u32, payload: &[u8]) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
        b.extend_from_slice(&count.to_be_bytes());
        b.extend_from_slice(&rows.to_be_bytes());
        b.extend_from_slice(&cols.to_be_bytes());
        b.extend_from_slice(payload);
        b
    }

    #[test]
    fn parses_a_single_28x28_image() {
        let payload = vec![0u8; 784];
        let (count, rows, cols, signals) = parse_images(&image_bytes(1, 28, 28, &payload)).unwrap();
        assert_eq!((count, rows, cols), (1, 28, 28));
        assert_eq!(signals.len(), 1);
        assert_eq!(signals[0].len(), 784);
    }

    #[test]
    fn byte_255_scales_to_one() {
        let payload = vec![255u8, 0, 128, 51];
        let (_, _, _, signals) = parse_images(&image_bytes(1, 2, 2, &payload)).unwrap();
        assert_eq!(signals[0][0], 1.0);
        assert_eq!(signals[0][1], 0.0);
        assert_eq!(signals[0][3], 0.2);
    }

    #[test]
    fn label_magic_passed_as_images_is_rejected() {
        let mut b = Vec::new();
        b.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
        b.extend_from_slice(&1u32.to_be_bytes());
        b.extend_from_slice(&[3u8]);
        match parse_images(&b) {
            Err(Error::BadMagic { .. }) => {}
            other => panic!("expected bad magic, got {other:?}"),
        }
    }

    #[test]
    fn truncated_payload_is_detected() {
        let payload = vec![0u8; 700];
        match parse_images(&image_bytes(1, 28, 28, &payload)) {
            Err(Error::Truncated { .. }) => {}
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn dimension_overflow_is_detected() {
        let b = image_bytes(u32::MAX, u32::MAX, u32::MAX, &[]);
        match parse_images(&b) {
            Err(Error::DimOverflow { .. }) | Err(Error::Truncated { .. }) => {}
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn end_to_end_file_with_labels() {
        let dir = tempfile::tempdir().unwrap();
        let images = dir.path().join("img.idx3");
        let labels = dir.path().join("lab.idx1");
        std::fs::write(&images, image_bytes(2, 2, 3, &[10u8; 12])).unwrap();
        let mut lb = Vec::new();
        lb.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
        lb.extend_from_slice(&2u32.to_be_bytes());
        lb.extend_from_slice(&[7u8, 9]);
        std::fs::write(&labels, lb).unwrap();

        let set = load_mnist_idx(&images, Some(&labels)).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.n(), 6);
        assert_eq!(set.labels(), Some(&[7u8, 9][..]));
    }

    #[test]
    fn mismatched_label_count_is_a_dimension_error() {
        let dir = tempfile::tempdir().unwrap();
        let images = dir.path().join("img.idx3");
        let labels = dir.path().join("lab.idx1");
        std::fs::write(&images, image_bytes(2, 2, 2, &[0u8; 8])).unwrap();
        let mut lb = Vec::new();
        lb.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
        lb.extend_from_slice(&3u32.to_be_bytes());
        lb.extend_from_slice(&[1u8, 2, 3]);
        std::fs::write(&labels, lb).unwrap();
        match load_mnist_idx(&images, Some(&labels)) {
            Err(Error::DimensionMismatch { .. }) => {}
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
    }
}
