//! Positivity of `Θ^(n,σ)`: the closed-form threshold and a sampled oracle.
//!
//! `Θ` is positive iff `Δ(P) ≥ P` for every rank-one projection
//! `P = ξξ*`, which for `ξ` supported where `x_i ≠ 0` is equivalent to
//! `S(ξ) = Σ |x_i|² / (a|x_i|² + c_i|x_{σ(i)}|²) ≤ 1`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dtype::{theta_apply, MapParams};
use crate::matlin::{min_eigenvalue, CMatrix};
use crate::sampling;

/// Geometric mean `(c₁⋯cₙ)^{1/n}`; zero if any coefficient is zero.
pub fn geometric_mean(c: &[f64]) -> f64 {
    if c.contains(&0.0) {
        return 0.0;
    }
    (c.iter().map(|x| x.ln()).sum::<f64>() / c.len() as f64).exp()
}

/// `max{n − 1, n − (c₁⋯cₙ)^{1/n}}`.
pub fn positivity_threshold(p: &MapParams) -> f64 {
    let n = p.n() as f64;
    (n - 1.0).max(n - geometric_mean(p.c()))
}

/// `S` evaluated on the squared moduli `w_i = |x_i|²`. Indices with
/// `w_i = 0` contribute nothing.
pub fn ratio_sum(p: &MapParams, weights: &[f64]) -> f64 {
    let sigma = p.sigma();
    weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, &w)| w / (p.a() * w + p.c()[i] * weights[sigma.at(i)]))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityEvidence {
    /// Largest `S(ξ)` over all evaluated vectors.
    pub max_ratio_sum: f64,
    /// Unit vector attaining `max_ratio_sum`.
    pub worst_vector: Vec<Complex64>,
    /// Smallest eigenvalue of `Θ(ξξ*)` over all evaluated vectors.
    pub min_eigenvalue: f64,
    pub random_samples: usize,
    pub adversarial_samples: usize,
    pub tolerance: f64,
}

impl PositivityEvidence {
    /// `max S ≤ 1 + tol`.
    pub fn supports_positivity(&self) -> bool {
        self.max_ratio_sum <= 1.0 + self.tolerance
    }
}

const LADDER_EXPONENTS: [i32; 9] = [1, 2, 4, 8, 12, 16, 24, 32, 40];

/// Per-cycle candidate weight patterns: geometric `λ^{-j}` weights started
/// at every point of the cycle, and the assignment that makes every
/// `c_i w_{σ(i)} / w_i` equal to the cycle's geometric mean of `c`.
fn cycle_candidates(p: &MapParams, cycle: &[usize]) -> Vec<Vec<f64>> {
    let len = cycle.len();
    let mut out = vec![vec![1.0; len]];
    if len == 1 {
        return out;
    }
    for &e in &LADDER_EXPONENTS {
        let lambda = 2f64.powi(e);
        for start in 0..len {
            let mut w = vec![0.0; len];
            for j in 0..len {
                w[(start + j) % len] = lambda.powi(-(j as i32));
            }
            out.push(w);
        }
    }
    let cs: Vec<f64> = cycle.iter().map(|&i| p.c()[i]).collect();
    let d = geometric_mean(&cs);
    if d > 0.0 {
        // w_{j+1} = w_j · d / c_j along the cycle; the product closes up.
        let mut w = vec![1.0; len];
        for j in 1..len {
            w[j] = w[j - 1] * d / cs[j - 1];
        }
        out.push(w);
    }
    out
}

/// Structured vectors (as squared-modulus weights) that saturate the ratio
/// sum: the best candidate chosen independently on every cycle, plus each
/// family applied uniformly across cycles.
pub fn adversarial_weights(p: &MapParams) -> Vec<Vec<f64>> {
    let n = p.n();
    let cycles: Vec<Vec<usize>> = p
        .sigma()
        .cycle_decompose()
        .cycles
        .into_iter()
        .map(|c| c.into_iter().map(|i| i - 1).collect())
        .collect();
    let per_cycle: Vec<Vec<Vec<f64>>> = cycles.iter().map(|c| cycle_candidates(p, c)).collect();

    let embed = |choices: &[&Vec<f64>]| -> Vec<f64> {
        let mut w = vec![0.0; n];
        for (cycle, local) in cycles.iter().zip(choices) {
            // Rescale so the largest weight on each cycle is 1.
            let top = local.iter().cloned().fold(0.0, f64::max);
            for (&i, &x) in cycle.iter().zip(local.iter()) {
                w[i] = x / top;
            }
        }
        w
    };

    let mut out = Vec::new();
    let best: Vec<&Vec<f64>> = cycles
        .iter()
        .zip(&per_cycle)
        .map(|(cycle, cands)| {
            cands
                .iter()
                .max_by(|x, y| {
                    let sx = cycle_ratio_sum(p, cycle, x);
                    let sy = cycle_ratio_sum(p, cycle, y);
                    sx.total_cmp(&sy)
                })
                .expect("nonempty")
        })
        .collect();
    out.push(embed(&best));

    let max_cands = per_cycle.iter().map(Vec::len).max().unwrap_or(0);
    for k in 0..max_cands {
        let choice: Vec<&Vec<f64>> = per_cycle.iter().map(|c| &c[k.min(c.len() - 1)]).collect();
        out.push(embed(&choice));
    }
    out
}

fn cycle_ratio_sum(p: &MapParams, cycle: &[usize], local: &[f64]) -> f64 {
    let len = cycle.len();
    (0..len)
        .map(|j| {
            let w = local[j];
            let next = local[(j + 1) % len];
            w / (p.a() * w + p.c()[cycle[j]] * next)
        })
        .sum()
}

fn weights_to_vector(weights: &[f64]) -> Vec<Complex64> {
    let norm = weights.iter().sum::<f64>().sqrt();
    weights
        .iter()
        .map(|&w| Complex64::new(w.sqrt() / norm, 0.0))
        .collect()
}

struct Sample {
    ratio_sum: f64,
    min_eig: f64,
    index: usize,
    vector: Vec<Complex64>,
}

fn evaluate(p: &MapParams, index: usize, vector: Vec<Complex64>) -> Sample {
    let weights: Vec<f64> = vector.iter().map(|z| z.norm_sqr()).collect();
    let ratio_sum = ratio_sum(p, &weights);
    let image = theta_apply(p, &CMatrix::outer(&vector)).expect("dimension n");
    let min_eig = min_eigenvalue(&image).expect("Hermitian image");
    Sample {
        ratio_sum,
        min_eig,
        index,
        vector,
    }
}

/// Evaluates `S(ξ)` and `λ_min(Θ(ξξ*))` on the adversarial families and on
/// `samples` Gaussian unit vectors drawn from `seed`.
pub fn verify_positivity_numeric(
    p: &MapParams,
    samples: usize,
    tol: f64,
    seed: u64,
) -> PositivityEvidence {
    let n = p.n();
    let structured: Vec<Vec<Complex64>> = adversarial_weights(p)
        .iter()
        .map(|w| weights_to_vector(w))
        .collect();
    let adversarial = structured.len();

    let pick = |x: Sample, y: Sample| -> Sample {
        let min_eig = x.min_eig.min(y.min_eig);
        let better = match x.ratio_sum.total_cmp(&y.ratio_sum) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => x.index <= y.index,
        };
        let mut winner = if better { x } else { y };
        winner.min_eig = min_eig;
        winner
    };

    let best = structured
        .into_par_iter()
        .enumerate()
        .map(|(i, v)| evaluate(p, i, v))
        .chain((0..samples).into_par_iter().map(|s| {
            let mut rng = sampling::stream(seed, s as u64);
            evaluate(p, adversarial + s, sampling::unit_vector(&mut rng, n))
        }))
        .reduce_with(pick)
        .expect("at least one structured sample");

    PositivityEvidence {
        max_ratio_sum: best.ratio_sum,
        worst_vector: best.vector,
        min_eigenvalue: best.min_eig,
        random_samples: samples,
        adversarial_samples: adversarial,
        tolerance: tol,
    }
}
