use crate::numerics::Matrix;

/// Orthonormal type-II DCT synthesis basis.
///
/// Columns are the cosine atoms, so `x = D c` synthesizes a signal from
/// coefficients and `c = Dᵀ x` analyzes it; `DᵀD = I` to within 1e-10
/// for n up to 1024. Column 0 is the DC atom.
pub fn dct_basis(n: usize) -> Matrix {
    assert!(n >= 1, "dct_basis needs n >= 1");
    let nf = n as f64;
    Matrix::from_fn(n, n, |i, j| {
        let scale = if j == 0 {
            (1.0 / nf).sqrt()
        } else {
            (2.0 / nf).sqrt()
        };
        scale * (std::f64::consts::PI * (2.0 * i as f64 + 1.0) * j as f64 / (2.0 * nf)).cos()
    })
}
