//! The entanglement witness `W = C_{T∘Θ}/n` and its optimality via the
//! spanning property: if the product vectors `ζ` with `⟨Wζ, ζ⟩ = 0` span
//! `ℂⁿ ⊗ ℂⁿ`, then `W` is optimal.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::classify::{positivity_verdict, Status};
use crate::dtype::{choi, MapParams};
use crate::error::{Error, Result};
use crate::matlin::{kron_vec, min_eigenvalue, numerical_rank, CMatrix};
use crate::sampling;

/// Largest `|⟨Wζ, ζ⟩|` accepted as zero.
pub const EXPECTATION_TOL: f64 = 1e-9;
/// Singular values above `RANK_REL_TOL · σ_max` count toward the rank.
pub const RANK_REL_TOL: f64 = 1e-8;

const PHASE_SEED: u64 = 0x5EED;

/// `(1/n)·C_{T∘Θ}`.
pub fn witness(p: &MapParams) -> CMatrix {
    choi(p, true).matrix.scale(1.0 / p.n() as f64)
}

/// `Tr(W ρ)`, real part. Errors on a size mismatch.
pub fn expectation(w: &CMatrix, rho: &CMatrix) -> Result<f64> {
    if rho.rows() != w.rows() || rho.cols() != w.cols() {
        return Err(Error::Size(format!(
            "state is {}x{}, witness is {}x{}",
            rho.rows(),
            rho.cols(),
            w.rows(),
            w.cols()
        )));
    }
    Ok(w.trace_product(rho)?.re)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `ξ_θ ⊗ ξ_θ` with `ξ_θ = Σ e^{iθ_j} e_j`.
    Symmetric { theta: Vec<f64> },
    /// `e_i ⊗ e_j`, 1-based.
    Basis { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductVector {
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
    #[serde(flatten)]
    pub family: Family,
}

impl ProductVector {
    pub fn vector(&self) -> Vec<Complex64> {
        kron_vec(&self.left, &self.right)
    }

    fn symmetric(theta: Vec<f64>) -> Self {
        let xi: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        ProductVector {
            left: xi.clone(),
            right: xi,
            family: Family::Symmetric { theta },
        }
    }

    fn basis(n: usize, i: usize, j: usize) -> Self {
        let e = |k: usize| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[k] = Complex64::new(1.0, 0.0);
            v
        };
        ProductVector {
            left: e(i),
            right: e(j),
            family: Family::Basis { i: i + 1, j: j + 1 },
        }
    }
}

/// `θ = 0`, `θ = π e_k`, `θ = (π/2) e_k` and `θ = (π/2)(e_k + e_l)` for
/// `k < l`.
fn deterministic_phases(n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; n]];
    for value in [PI, FRAC_PI_2] {
        for k in 0..n {
            let mut t = vec![0.0; n];
            t[k] = value;
            out.push(t);
        }
    }
    for k in 0..n {
        for l in (k + 1)..n {
            let mut t = vec![0.0; n];
            t[k] = FRAC_PI_2;
            t[l] = FRAC_PI_2;
            out.push(t);
        }
    }
    out
}

/// Indices `j` (0-based) with `e_i ⊗ e_j ∈ 𝒱ᵢ`, i.e. `j ∉ {i, σ⁻¹(i)}`.
pub fn v_family(p: &MapParams, i: usize) -> Vec<usize> {
    let pre = p.sigma().preimage(i + 1) - 1;
    (0..p.n()).filter(|&j| j != i && j != pre).collect()
}

fn stack(gens: &[ProductVector], n: usize) -> CMatrix {
    let dim = n * n;
    let mut data = Vec::with_capacity(gens.len() * dim);
    for g in gens {
        data.extend(g.vector());
    }
    CMatrix::new(gens.len(), dim, data).expect("rows of length n^2")
}

/// Generators of the zero set of `W`: the symmetric family from the
/// deterministic phase set (topped up with random phases, at most
/// `phase_budget` symmetric vectors in total, while the stack is rank
/// deficient), then every `𝒱ᵢ`.
pub fn spanning_generators(p: &MapParams, phase_budget: usize) -> Result<Vec<ProductVector>> {
    let n = p.n();
    let min_budget = n * (n + 1) / 2;
    if phase_budget < min_budget {
        return Err(Error::param(
            "phase_budget",
            format!("must be at least n(n+1)/2 = {min_budget}, got {phase_budget}"),
        ));
    }
    let mut symmetric: Vec<ProductVector> = deterministic_phases(n)
        .into_iter()
        .map(ProductVector::symmetric)
        .collect();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in v_family(p, i) {
            basis.push(ProductVector::basis(n, i, j));
        }
    }

    let full = |s: &[ProductVector]| {
        let all: Vec<ProductVector> = s.iter().chain(&basis).cloned().collect();
        numerical_rank(&stack(&all, n), RANK_REL_TOL) == n * n
    };
    let mut draw = 0u64;
    while symmetric.len() < phase_budget && !full(&symmetric) {
        let mut rng = sampling::stream(PHASE_SEED, draw);
        draw += 1;
        let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        symmetric.push(ProductVector::symmetric(theta));
    }

    symmetric.extend(basis);
    Ok(symmetric)
}

/// Every pair `i ≠ j` is covered by `e_i⊗e_j ∈ 𝒱ᵢ` or `e_j⊗e_i ∈ 𝒱ⱼ`.
pub fn pairing_claim_holds(p: &MapParams) -> bool {
    let n = p.n();
    let v: Vec<Vec<usize>> = (0..n).map(|i| v_family(p, i)).collect();
    (0..n).all(|i| {
        (0..n)
            .filter(|&j| j != i)
            .all(|j| v[i].contains(&j) || v[j].contains(&i))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimalityVerdict {
    /// Parameters inside the proven range and the spanning check passed.
    OptimalByTheorem,
    /// Outside the proven range, but the spanning property was verified.
    OptimalNumeric,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimalityCertificate {
    pub witness: CMatrix,
    /// Generators with `|⟨Wζ, ζ⟩| ≤ EXPECTATION_TOL`.
    pub generators: Vec<ProductVector>,
    pub expectations: Vec<f64>,
    /// Candidates dropped because their expectation did not vanish.
    pub rejected_generators: usize,
    pub span_rank: usize,
    pub optimal: bool,
    pub verdict: OptimalityVerdict,
    pub within_theorem_range: bool,
    pub map_positivity: Status,
    pub witness_min_eigenvalue: f64,
    pub note: String,
}

/// Uniform `c` with `a = n − c`, `l_min ≥ 3`, `0 < c ≤ n/l_max`; or `Δ_n`.
pub fn within_theorem_range(p: &MapParams) -> bool {
    if p.is_delta() {
        return true;
    }
    let n = p.n() as f64;
    let (l_min, l_max) = p.sigma().min_max_cycle_length();
    match p.uniform_c() {
        Some(c) => {
            (p.a() - (n - c)).abs() <= 1e-12 * n
                && l_min >= 3
                && c > 0.0
                && c <= n / l_max as f64 + 1e-9
        }
        None => false,
    }
}

pub fn certify_optimality(p: &MapParams) -> Result<OptimalityCertificate> {
    let n = p.n();
    let w = witness(p);
    let in_range = within_theorem_range(p);
    let candidates = spanning_generators(p, n * (n + 1) / 2 + 2 * n + 1)?;

    let mut generators = Vec::new();
    let mut expectations = Vec::new();
    let mut rejected = 0;
    for g in candidates {
        let value = w.quadratic_form(&g.vector())?;
        if value.norm() <= EXPECTATION_TOL {
            expectations.push(value.re);
            generators.push(g);
        } else if in_range {
            return Err(Error::InternalConsistency(format!(
                "<W z, z> = {} for generator {:?}",
                value.re, g.family
            )));
        } else {
            rejected += 1;
        }
    }

    let span_rank = if generators.is_empty() {
        0
    } else {
        numerical_rank(&stack(&generators, n), RANK_REL_TOL)
    };
    let optimal = span_rank == n * n;
    let (verdict, note) = match (optimal, in_range) {
        (true, true) => (
            OptimalityVerdict::OptimalByTheorem,
            "spanning property verified inside the proven parameter range".to_string(),
        ),
        (true, false) => (
            OptimalityVerdict::OptimalNumeric,
            "optimal (spanning property verified numerically); these parameters lie outside the proven range".to_string(),
        ),
        (false, _) => (
            OptimalityVerdict::Unknown,
            format!("zero-expectation generators span dimension {span_rank} of {}", n * n),
        ),
    };

    Ok(OptimalityCertificate {
        witness_min_eigenvalue: min_eigenvalue(&w)?,
        witness: w,
        generators,
        expectations,
        rejected_generators: rejected,
        span_rank,
        optimal,
        verdict,
        within_theorem_range: in_range,
        map_positivity: positivity_verdict(p, None).status,
        note,
    })
}
