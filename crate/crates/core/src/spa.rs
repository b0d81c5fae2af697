//! Structural physical approximation (SPA) of `Θ^(n,σ)` and, at `a = n − 1`,
//! an explicit separable decomposition of it.
//!
//! With `W = C/Tr C` split spectrally as `W⁺ − W⁻`, the segment
//! `W̃(λ) = (1 − λ)/n² · I⊗I + λW` stays PSD up to
//! `λ* = 1/(1 + n²‖W⁻‖)`, and `SPA = W̃(λ*)`.

use serde::Serialize;

use crate::classify::{positivity_verdict, Status};
use crate::dtype::{choi, MapParams};
use crate::error::{Error, Result};
use crate::matlin::{
    kron, min_eigenvalue, negative_part, partial_transpose, CMatrix, DEFAULT_PSD_TOL,
};

#[derive(Debug, Clone, Serialize)]
pub struct SpaState {
    /// Normalized SPA state, trace one.
    pub matrix: CMatrix,
    pub lambda_star: f64,
    /// `‖W⁻‖` with `W = C/Tr C`.
    pub w_minus_norm: f64,
    /// `‖C⁻‖`.
    pub c_minus_norm: f64,
    pub trace_choi: f64,
    /// Positivity status of the map; the SPA is only meaningful for `yes`.
    pub map_positivity: Status,
}

/// `(1 − λ)/n² · I + λ W`.
pub fn w_tilde(w: &CMatrix, n: usize, lambda: f64) -> CMatrix {
    let dim = n * n;
    &CMatrix::identity(dim).scale((1.0 - lambda) / (dim as f64)) + &w.scale(lambda)
}

pub fn spa_state(p: &MapParams) -> Result<SpaState> {
    let n = p.n();
    let c = choi(p, false).matrix;
    let trace_choi = c.trace().re;
    if trace_choi.abs() < 1e-300 {
        return Err(Error::Contract("Choi matrix has zero trace".into()));
    }
    let (_, c_minus_norm) = negative_part(&c)?;
    let w_minus_norm = c_minus_norm / trace_choi;
    let dim = (n * n) as f64;
    let lambda_star = 1.0 / (1.0 + dim * w_minus_norm);
    let scale = 1.0 / (trace_choi + dim * c_minus_norm);
    let matrix = (&CMatrix::identity(n * n).scale(c_minus_norm) + &c).scale(scale);
    Ok(SpaState {
        matrix,
        lambda_star,
        w_minus_norm,
        c_minus_norm,
        trace_choi,
        map_positivity: positivity_verdict(p, None).status,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermKind {
    /// `σ_ij`, 1-based `i < j`.
    SigmaIj { i: usize, j: usize },
    /// `E_ii ⊗ E_jj` with `j = σ⁻¹(i)`, 1-based.
    Diagonal { i: usize, j: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparableTerm {
    #[serde(flatten)]
    pub kind: TermKind,
    pub matrix: CMatrix,
    pub weight: f64,
    pub min_eigenvalue: f64,
    pub partial_transpose_min_eigenvalue: f64,
    /// `max |σ_ij − (D⊗D) R (D⊗D)*|`; zero for diagonal terms.
    pub factorization_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparableDecomposition {
    pub terms: Vec<SeparableTerm>,
    /// `1 / (n(n−2) + Σcᵢ + n²)`.
    pub normalization: f64,
    /// `max |SPA − Σ weight·term|`.
    pub residual: f64,
    pub r_min_eigenvalue: f64,
    pub r_partial_transpose_min_eigenvalue: f64,
}

/// The 4×4 matrix `R = Σ_{k,l} E_kk⊗E_ll − E_12⊗E_12 − E_21⊗E_21` on `M₂⊗M₂`.
pub fn r_matrix() -> CMatrix {
    let mut r = CMatrix::identity(4);
    r[(0, 3)] = (-1.0).into();
    r[(3, 0)] = (-1.0).into();
    r
}

/// `D_ij = e_i e₁* + e_j e₂*`, an `n × 2` isometry (0-based `i`, `j`).
pub fn d_ij(n: usize, i: usize, j: usize) -> CMatrix {
    let mut d = CMatrix::zeros(n, 2);
    d[(i, 0)] = 1.0.into();
    d[(j, 1)] = 1.0.into();
    d
}

/// `σ_ij = E_ii⊗E_ii + E_jj⊗E_jj + E_ii⊗E_jj + E_jj⊗E_ii − E_ij⊗E_ij − E_ji⊗E_ji`
/// (0-based `i`, `j`).
pub fn sigma_ij(n: usize, i: usize, j: usize) -> CMatrix {
    let e = |a: usize, b: usize| CMatrix::unit(n, a, b);
    let k = |x: &CMatrix, y: &CMatrix| kron(x, y).expect("n^2");
    let mut s = k(&e(i, i), &e(i, i));
    for term in [k(&e(j, j), &e(j, j)), k(&e(i, i), &e(j, j)), k(&e(j, j), &e(i, i))] {
        s = &s + &term;
    }
    for term in [k(&e(i, j), &e(i, j)), k(&e(j, i), &e(j, i))] {
        s = &s - &term;
    }
    s
}

/// `(is_ppt, λ_min(M^Γ))` for `M ∈ M_k ⊗ M_n`. On `2⊗2` this is also a
/// separability test; otherwise PPT is only necessary.
pub fn ppt_check(m: &CMatrix, k: usize, n: usize) -> Result<(bool, f64)> {
    let gamma = partial_transpose(m, k, n)?;
    let lam = min_eigenvalue(&gamma)?;
    Ok((lam >= -DEFAULT_PSD_TOL, lam))
}

/// Splits the SPA into `σ_ij` blocks and diagonal product terms. Valid for
/// `a = n − 1`, `l_min(σ) ≥ 2` and a map known to be positive.
pub fn separable_decomposition(p: &MapParams) -> Result<SeparableDecomposition> {
    let n = p.n();
    if (p.a() - (n as f64 - 1.0)).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "separable decomposition requires a = n-1 = {} (got a = {})",
            n - 1,
            p.a()
        )));
    }
    let (l_min, _) = p.sigma().min_max_cycle_length();
    if l_min < 2 {
        return Err(Error::Precondition(format!(
            "separable decomposition requires l_min(sigma) >= 2 (got {l_min})"
        )));
    }
    let positivity = positivity_verdict(p, None);
    if !positivity.is_yes() {
        return Err(Error::Precondition(format!(
            "separable decomposition requires an established positive map (status {:?}: {})",
            positivity.status, positivity.certificate.criterion
        )));
    }

    let normalization = 1.0 / (n as f64 * (n as f64 - 2.0) + p.c().iter().sum::<f64>() + (n * n) as f64);
    let r = r_matrix();
    let r_min_eigenvalue = min_eigenvalue(&r)?;
    let (_, r_partial_transpose_min_eigenvalue) = ppt_check(&r, 2, 2)?;

    let mut terms = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let s = sigma_ij(n, i, j);
            let d = d_ij(n, i, j);
            let dd = kron(&d, &d)?;
            let factored = &(&dd * &r) * &dd.adjoint();
            let (_, gamma_min) = ppt_check(&s, n, n)?;
            terms.push(SeparableTerm {
                kind: TermKind::SigmaIj { i: i + 1, j: j + 1 },
                min_eigenvalue: min_eigenvalue(&s)?,
                partial_transpose_min_eigenvalue: gamma_min,
                factorization_residual: s.max_abs_diff(&factored)?,
                matrix: s,
                weight: normalization,
            });
        }
    }
    for i in 0..n {
        let pre = p.sigma().preimage(i + 1) - 1;
        let m = kron(&CMatrix::unit(n, i, i), &CMatrix::unit(n, pre, pre))?;
        terms.push(SeparableTerm {
            kind: TermKind::Diagonal { i: i + 1, j: pre + 1 },
            matrix: m,
            weight: normalization * p.c()[pre],
            min_eigenvalue: 0.0,
            partial_transpose_min_eigenvalue: 0.0,
            factorization_residual: 0.0,
        });
    }

    let spa = spa_state(p)?;
    let mut sum = CMatrix::zeros(n * n, n * n);
    for t in &terms {
        sum = &sum + &t.matrix.scale(t.weight);
    }
    let residual = sum.max_abs_diff(&spa.matrix)?;

    Ok(SeparableDecomposition {
        terms,
        normalization,
        residual,
        r_min_eigenvalue,
        r_partial_transpose_min_eigenvalue,
    })
}

impl SeparableDecomposition {
    /// Every `σ_ij` PSD and PPT with exact factorization, `R` and `R^Γ` PSD,
    /// diagonal terms nonnegative, reconstruction within `residual_tol`.
    pub fn verify(&self, residual_tol: f64) -> Result<()> {
        let tol = DEFAULT_PSD_TOL;
        if self.r_min_eigenvalue < -tol || self.r_partial_transpose_min_eigenvalue < -tol {
            return Err(Error::InternalConsistency("R or R^Γ is not PSD".into()));
        }
        for t in &self.terms {
            match t.kind {
                TermKind::SigmaIj { i, j } => {
                    if t.min_eigenvalue < -tol || t.partial_transpose_min_eigenvalue < -tol {
                        return Err(Error::InternalConsistency(format!(
                            "sigma_{i}{j} is not PSD and PPT"
                        )));
                    }
                    if t.factorization_residual > 1e-14 {
                        return Err(Error::InternalConsistency(format!(
                            "sigma_{i}{j} does not factor through R"
                        )));
                    }
                }
                TermKind::Diagonal { i, j } => {
                    if t.weight < 0.0 {
                        return Err(Error::InternalConsistency(format!(
                            "diagonal term ({i},{j}) has negative weight"
                        )));
                    }
                }
            }
        }
        if self.residual > residual_tol {
            return Err(Error::InternalConsistency(format!(
                "decomposition misses the SPA by {}",
                self.residual
            )));
        }
        Ok(())
    }
}
