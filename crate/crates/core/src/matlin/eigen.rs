//! Cyclic Jacobi eigensolver for Hermitian matrices and one-sided Jacobi
//! singular values.

use num_complex::Complex64;

use super::CMatrix;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix; `values` ascending and
/// `vectors[k]` the unit eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k]
    }

    /// `max_k ‖M v_k − λ_k v_k‖`.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(&lambda, v)| {
                let mv = m.apply(v).expect("square");
                mv.iter()
                    .zip(v)
                    .map(|(a, b)| (a - b * lambda).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Unitary 2×2 rotation zeroing the (p, q) entry of a Hermitian pair
/// `[[app, apq], [conj(apq), aqq]]`, stored as `[u_pp, u_pq, u_qp, u_qq]`.
fn rotation(app: f64, aqq: f64, apq: Complex64) -> [Complex64; 4] {
    let r = apq.norm();
    let phase = apq / r; // e^{iφ}
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let back = phase.conj();
    [
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        back * (-s),
        back * c,
    ]
}

fn off_norm_sqr(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc
}

fn jacobi(m: &CMatrix, want_vectors: bool) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = m.rows();
    let mut a = m.entries().to_vec();
    // Symmetrize so round-off in the input cannot bias the result.
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = avg;
            a[j * n + i] = avg.conj();
        }
    }
    let mut v = if want_vectors {
        CMatrix::identity(n).entries().to_vec()
    } else {
        Vec::new()
    };

    let fro_sqr: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let stop = fro_sqr * 1e-32;
    let skip = (fro_sqr.sqrt() * 1e-20).max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_norm_sqr(&a, n) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.norm() <= skip {
                    continue;
                }
                let u = rotation(a[p * n + p].re, a[q * n + q].re, apq);
                // A ← A U
                for k in 0..n {
                    let x = a[k * n + p];
                    let y = a[k * n + q];
                    a[k * n + p] = x * u[0] + y * u[2];
                    a[k * n + q] = x * u[1] + y * u[3];
                }
                // A ← U* A
                for k in 0..n {
                    let x = a[p * n + k];
                    let y = a[q * n + k];
                    a[p * n + k] = u[0].conj() * x + u[2].conj() * y;
                    a[q * n + k] = u[1].conj() * x + u[3].conj() * y;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                if want_vectors {
                    for k in 0..n {
                        let x = v[k * n + p];
                        let y = v[k * n + q];
                        v[k * n + p] = x * u[0] + y * u[2];
                        v[k * n + q] = x * u[1] + y * u[3];
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = if want_vectors {
        order
            .iter()
            .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
            .collect()
    } else {
        Vec::new()
    };
    (values, vectors)
}

/// Full eigen-decomposition. The caller guarantees Hermiticity.
pub fn eigh(m: &CMatrix) -> Eigh {
    let (values, vectors) = jacobi(m, true);
    Eigh { values, vectors }
}

pub(crate) fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    jacobi(m, false).0
}

/// Singular values in descending order (one-sided Jacobi on the columns of
/// `m` or `m*`, whichever has fewer columns).
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let work = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let (rows, cols) = (work.rows(), work.cols());
    let mut columns: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| work[(i, j)]).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = columns[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = columns[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = columns[p]
                    .iter()
                    .zip(&columns[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let u = rotation(alpha, beta, gamma);
                let (left, right) = columns.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * u[0] + yq * u[2];
                    *y = xp * u[1] + yq * u[3];
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
