//! Explicit PSD + PPT splitting of the Choi matrix when σ is an involution.

use serde::Serialize;

use crate::dtype::{choi, MapParams};
use crate::error::{Error, Result};
use crate::matlin::{kron, min_eigenvalue, partial_transpose, CMatrix, DEFAULT_PSD_TOL};

/// Slack allowed on the parameter inequalities.
const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct QBlock {
    /// 1-based transposition `(i, σ(i))` with `i < σ(i)`.
    pub pair: (usize, usize),
    pub matrix: CMatrix,
    pub partial_transpose_min_eigenvalue: f64,
}

/// `C_Θ = P + Σ Q_i` with `P ≥ 0` and every `Q_i^Γ ≥ 0`.
#[derive(Debug, Clone, Serialize)]
pub struct DecomposabilityCertificate {
    pub p: CMatrix,
    pub p_min_eigenvalue: f64,
    pub q_blocks: Vec<QBlock>,
    pub reconstruction_residual: f64,
}

fn eii_eii(n: usize, i: usize, j: usize) -> CMatrix {
    kron(&CMatrix::unit(n, i, i), &CMatrix::unit(n, j, j)).expect("n^2")
}

fn eij_eij(n: usize, i: usize, j: usize) -> CMatrix {
    let e = CMatrix::unit(n, i, j);
    kron(&e, &e).expect("n^2")
}

/// Builds the certificate. Requires `σ² = id`, `a ≥ n − 1`, `c_i ≥ 1` on
/// fixed points and `c_i c_{σ(i)} ≥ 1` on transpositions.
pub fn decompose_involution(p: &MapParams) -> Result<DecomposabilityCertificate> {
    let n = p.n();
    let sigma = p.sigma();
    let (a, c) = (p.a(), p.c());
    if !sigma.is_involution() {
        return Err(Error::Precondition(format!(
            "sigma = {sigma} is not an involution (sigma^2 != id)"
        )));
    }
    if a < n as f64 - 1.0 - BOUNDARY_TOL {
        return Err(Error::Precondition(format!(
            "a >= n-1 fails: a = {a}, n-1 = {}",
            n - 1
        )));
    }
    for i in 0..n {
        let s = sigma.at(i);
        if s == i && c[i] < 1.0 - BOUNDARY_TOL {
            return Err(Error::Precondition(format!(
                "c{} >= 1 fails for fixed point {}: c{} = {}",
                i + 1,
                i + 1,
                i + 1,
                c[i]
            )));
        }
        if s != i && c[i] * c[s] < 1.0 - BOUNDARY_TOL {
            return Err(Error::Precondition(format!(
                "c{}*c{} >= 1 fails: product = {}",
                i + 1,
                s + 1,
                c[i] * c[s]
            )));
        }
    }

    let mut pm = CMatrix::zeros(n * n, n * n);
    for (i, &ci) in c.iter().enumerate() {
        let weight = if sigma.at(i) == i { a + ci - 1.0 } else { a - 1.0 };
        pm = &pm + &eii_eii(n, i, i).scale(weight);
        for j in 0..n {
            if j != i && sigma.at(i) != j {
                pm = &pm - &eij_eij(n, i, j);
            }
        }
    }

    let mut q_blocks = Vec::new();
    for i in 0..n {
        let s = sigma.at(i);
        if s <= i {
            continue;
        }
        let q = &(&(&eii_eii(n, i, s).scale(c[s]) + &eii_eii(n, s, i).scale(c[i]))
            - &eij_eij(n, i, s))
            - &eij_eij(n, s, i);
        let gamma_min = min_eigenvalue(&partial_transpose(&q, n, n)?)?;
        q_blocks.push(QBlock {
            pair: (i + 1, s + 1),
            matrix: q,
            partial_transpose_min_eigenvalue: gamma_min,
        });
    }

    let mut total = pm.clone();
    for q in &q_blocks {
        total = &total + &q.matrix;
    }
    let reconstruction_residual = total.max_abs_diff(&choi(p, false).matrix)?;
    let p_min_eigenvalue = min_eigenvalue(&pm)?;

    let cert = DecomposabilityCertificate {
        p: pm,
        p_min_eigenvalue,
        q_blocks,
        reconstruction_residual,
    };
    cert.verify(DEFAULT_PSD_TOL)?;
    Ok(cert)
}

impl DecomposabilityCertificate {
    /// Checks PSD-ness of `P`, of every `Q_i^Γ`, and exact reconstruction.
    pub fn verify(&self, tol: f64) -> Result<()> {
        if self.p_min_eigenvalue < -tol {
            return Err(Error::InternalConsistency(format!(
                "P has eigenvalue {}",
                self.p_min_eigenvalue
            )));
        }
        if let Some(q) = self
            .q_blocks
            .iter()
            .find(|q| q.partial_transpose_min_eigenvalue < -tol)
        {
            return Err(Error::InternalConsistency(format!(
                "Q{:?} has partial transpose eigenvalue {}",
                q.pair, q.partial_transpose_min_eigenvalue
            )));
        }
        if self.reconstruction_residual > 1e-10 {
            return Err(Error::InternalConsistency(format!(
                "P + sum Q differs from the Choi matrix by {}",
                self.reconstruction_residual
            )));
        }
        Ok(())
    }
}
