use crate::error::{Error, Result};
use crate::numerics::Rng;

/// Dense row-major matrix of 64-bit floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data, checking the length and finiteness.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                context: "Matrix::from_vec",
                detail: format!("{rows}x{cols} needs {} entries, got {}", rows * cols, data.len()),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter {
                name: "data",
                reason: "matrix entries must be finite".into(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 })
    }

    /// Samples a matrix with i.i.d. N(mean, variance) entries, row-major draw order.
    pub fn gaussian(rows: usize, cols: usize, mean: f64, variance: f64, rng: &mut Rng) -> Result<Self> {
        let data = super::gaussian_vector(rng, rows * cols, mean, variance)?;
        Ok(Self { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn scaled(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn transposed(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }
}

fn check_dims(context: &'static str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Shape {
            context,
            detail: detail(),
        })
    }
}

/// Dense product `A x`.
pub fn matvec(a: &Matrix, x: &[f64]) -> Result<Vec<f64>> {
    check_dims("matvec", a.cols == x.len(), || {
        format!("A is {}x{}, x has length {}", a.rows, a.cols, x.len())
    })?;
    let mut y = vec![0.0; a.rows];
    for (r, out) in y.iter_mut().enumerate() {
        let row = a.row(r);
        let mut acc = 0.0;
        for (av, xv) in row.iter().zip(x) {
            acc += av * xv;
        }
        *out = acc;
    }
    Ok(y)
}

/// Dense product `Aᵀ y`.
pub fn matvec_t(a: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    check_dims("matvec_t", a.rows == y.len(), || {
        format!("A is {}x{}, y has length {}", a.rows, a.cols, y.len())
    })?;
    let mut out = vec![0.0; a.cols];
    for (r, &yv) in y.iter().enumerate() {
        let row = a.row(r);
        for (o, av) in out.iter_mut().zip(row) {
            *o += yv * av;
        }
    }
    Ok(out)
}

/// Dense product `A B`.
pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_dims("matmul", a.cols == b.rows, || {
        format!("A is {}x{}, B is {}x{}", a.rows, a.cols, b.rows, b.cols)
    })?;
    let mut c = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let arow = a.row(i);
        let crow = c.row_mut(i);
        for (k, &aik) in arow.iter().enumerate() {
            let brow = b.row(k);
            for (cv, bv) in crow.iter_mut().zip(brow) {
                *cv += aik * bv;
            }
        }
    }
    Ok(c)
}

/// Dense product `Aᵀ B`.
pub fn matmul_tn(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_dims("matmul_tn", a.rows == b.rows, || {
        format!("A is {}x{}, B is {}x{}", a.rows, a.cols, b.rows, b.cols)
    })?;
    let mut c = Matrix::zeros(a.cols, b.cols);
    for k in 0..a.rows {
        let arow = a.row(k);
        let brow = b.row(k);
        for (i, &aki) in arow.iter().enumerate() {
            let crow = c.row_mut(i);
            for (cv, bv) in crow.iter_mut().zip(brow) {
                *cv += aki * bv;
            }
        }
    }
    Ok(c)
}

/// Dense product `A Bᵀ`.
pub fn matmul_nt(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_dims("matmul_nt", a.cols == b.cols, || {
        format!("A is {}x{}, B is {}x{}", a.rows, a.cols, b.rows, b.cols)
    })?;
    let mut c = Matrix::zeros(a.rows, b.rows);
    for i in 0..a.rows {
        let arow = a.row(i);
        let crow = c.row_mut(i);
        for (j, cv) in crow.iter_mut().enumerate() {
            let brow = b.row(j);
            let mut acc = 0.0;
            for (av, bv) in arow.iter().zip(brow) {
                acc += av * bv;
            }
            *cv = acc;
        }
    }
    Ok(c)
}

/// Largest singular value of `A`, estimated by power iteration on `AᵀA`.
///
/// The Rayleigh-quotient estimate is monotone non-decreasing across
/// iterations; iteration stops early once the relative change drops
/// below 1e-9.
pub fn operator_norm(a: &Matrix, iters: usize, rng: &mut Rng) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Shape {
            context: "operator_norm",
            detail: "matrix has a zero dimension".into(),
        });
    }
    if iters == 0 {
        return Err(Error::Parameter {
            name: "iters",
            reason: "power iteration needs at least one iteration".into(),
        });
    }
    let mut v = super::gaussian_vector(rng, a.cols(), 0.0, 1.0)?;
    let nv = super::norm(&v);
    if nv == 0.0 {
        v[0] = 1.0;
    } else {
        for x in &mut v {
            *x /= nv;
        }
    }
    let mut sigma = 0.0;
    for _ in 0..iters {
        let av = matvec(a, &v)?;
        let w = matvec_t(a, &av)?;
        let nw = super::norm(&w);
        if nw == 0.0 {
            return Ok(0.0); // v is in the null space; for a zero matrix the norm is 0
        }
        let next = super::norm(&av); // Rayleigh estimate ‖Av‖ for unit v
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
        if (next - sigma).abs() <= 1e-9 * next.max(1.0) {
            return Ok(next);
        }
        sigma = next;
    }
    Ok(sigma)
}
