//! Quantization, closed-form recovery-bound evaluators, and Monte-Carlo
//! verification of the concentration lemmas those bounds rest on.

mod bounds;
mod lemmas;
pub mod stats;

pub use bounds::{
    predict_next_error, theorem1_bound, theorem1_bound_with_latent_range, theorem2_constants,
    theorem2_constants_with_upsilon, Theorem1Bound, Theorem1Params, Theorem2Constants,
};
pub use lemmas::{verify_lemma1, verify_lemma2, verify_lemma3, KsCheck, MonteCarloCheck, Tail};

/// b-bit quantization `[x]_b = 2^{-b} ⌊2^b x⌋`.
///
/// For x ≥ 0 the error satisfies `0 ≤ x − [x]_b < 2^{-b}`; the operator is
/// idempotent and monotone non-decreasing.
pub fn quantize(x: f64, b: u32) -> f64 {
    debug_assert!(b >= 1, "quantize needs b >= 1");
    let scale = (1u64 << b) as f64;
    (scale * x).floor() / scale
}

/// Coordinate-wise b-bit quantization.
pub fn quantize_vec(u: &[f64], b: u32) -> Vec<f64> {
    u.iter().map(|&x| quantize(x, b)).collect()
}
