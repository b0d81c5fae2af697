//! Dense complex matrices: tensor algebra, partial transpose, Hermitian
//! spectra and PSD tests.
//!
//! Index convention: entries are 0-based in the Rust API. The Kronecker
//! product is first-factor-major, `(A⊗B)[(i,p),(j,q)] = A[i,j]·B[p,q]` with
//! row index `i·rows(B) + p`.

mod eigen;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use eigen::{eigh, singular_values, Eigh};

/// Default absolute tolerance on the minimum eigenvalue for PSD tests.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Hermiticity is checked with this absolute tolerance before any spectral
/// routine runs.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Largest matrix dimension accepted by [`kron`].
pub const MAX_DIM: usize = 1 << 14;

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Ascending real spectrum of a Hermitian matrix with the worst eigenpair
/// residual `max ‖Mv − λv‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Size("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Size(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix unit `E_ij` in `M_n` (0-based `i`, `j`).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    /// `n × n` all-ones matrix.
    pub fn ones(n: usize) -> Self {
        CMatrix {
            rows: n,
            cols: n,
            data: vec![Complex64::new(1.0, 0.0); n * n],
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = CMatrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Builds a real matrix from rows of equal length.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Size("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        CMatrix::new(r, c, data)
    }

    /// Column vector.
    pub fn column(v: &[Complex64]) -> Self {
        CMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// `v v*` for a column vector given as a slice.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M − M*|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Size(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// `M v` for a vector slice.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Size(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    /// `⟨Mv, v⟩ = v* M v`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Result<Complex64> {
        let mv = self.apply(v)?;
        Ok(v.iter().zip(&mv).map(|(x, y)| x.conj() * y).sum())
    }

    /// `Tr(self · other)`.
    pub fn trace_product(&self, other: &CMatrix) -> Result<Complex64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::Size("trace product needs transposed shapes".into()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }

    fn check_same_shape(&self, other: &CMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Size(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_shape(other)?;
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.check_same_shape(other)?;
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; the `try_*` methods return errors.
impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("shape mismatch in +")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("shape mismatch in -")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("shape mismatch in *")
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self[(i, j)];
                    if z.im == 0.0 {
                        format!("{:.4}", z.re)
                    } else {
                        format!("{:.4}{:+.4}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let data = raw
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        CMatrix::new(raw.rows, raw.cols, data).map_err(serde::de::Error::custom)
    }
}

/// Kronecker product, first factor major.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows.checked_mul(b.rows);
    let cols = a.cols.checked_mul(b.cols);
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r <= MAX_DIM && c <= MAX_DIM => (r, c),
        _ => {
            return Err(Error::Size(format!(
                "kron of {}x{} and {}x{} exceeds {MAX_DIM}",
                a.rows, a.cols, b.rows, b.cols
            )))
        }
    };
    let mut out = CMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            if s.re == 0.0 && s.im == 0.0 {
                continue;
            }
            for p in 0..b.rows {
                for q in 0..b.cols {
                    out[(i * b.rows + p, j * b.cols + q)] = s * b[(p, q)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of two vectors.
pub fn kron_vec(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter()
        .flat_map(|&a| y.iter().map(move |&b| a * b))
        .collect()
}

/// `X^Γ = (1_k ⊗ T)(X)` for `X ∈ M_k ⊗ M_n`.
pub fn partial_transpose(x: &CMatrix, k: usize, n: usize) -> Result<CMatrix> {
    let dim = k * n;
    if x.rows != dim || x.cols != dim {
        return Err(Error::Size(format!(
            "partial transpose over M_{k}⊗M_{n} needs {dim}x{dim}, got {}x{}",
            x.rows, x.cols
        )));
    }
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..k {
        for j in 0..k {
            for p in 0..n {
                for q in 0..n {
                    out[(i * n + p, j * n + q)] = x[(i * n + q, j * n + p)];
                }
            }
        }
    }
    Ok(out)
}

fn require_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "expected a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (max |M - M*| = {defect:.3e})"
        )));
    }
    Ok(())
}

pub fn hermitian_spectrum(m: &CMatrix) -> Result<SpectrumResult> {
    require_hermitian(m)?;
    let e = eigh(m);
    let residual = e.residual(m);
    Ok(SpectrumResult {
        eigenvalues: e.values,
        residual,
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    require_hermitian(m)?;
    Ok(eigen::eigenvalues(m)[0])
}

pub fn is_psd(m: &CMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -tol)
}

/// Spectral negative part `M⁻ = Σ_{λ<0} (−λ) v v*` and its operator norm.
pub fn negative_part(m: &CMatrix) -> Result<(CMatrix, f64)> {
    require_hermitian(m)?;
    let e = eigh(m);
    let n = m.rows;
    let mut minus = CMatrix::zeros(n, n);
    let mut norm: f64 = 0.0;
    for (k, &lambda) in e.values.iter().enumerate() {
        if lambda >= 0.0 {
            continue;
        }
        norm = norm.max(-lambda);
        let v = e.vector(k);
        for i in 0..n {
            for j in 0..n {
                minus[(i, j)] += v[i] * v[j].conj() * (-lambda);
            }
        }
    }
    Ok((minus, norm))
}

/// Entrywise (Schur) product.
pub fn schur_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.check_same_shape(b)?;
    Ok(CMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| x * y).collect(),
    })
}

/// Number of singular values above `rel_tol · σ_max`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}
