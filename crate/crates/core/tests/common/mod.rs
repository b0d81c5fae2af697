#![allow(dead_code)]

use num_complex::Complex64;
use posmaps::matlin::CMatrix;
use proptest::prelude::*;

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All permutations of `1..=n` as image lists.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v + 1);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Random image list of degree `n`.
pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<usize>>()).prop_shuffle()
}

pub fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        CMatrix::new(rows, cols, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

pub fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    complex_matrix(n, n).prop_map(|m| (&m + &m.adjoint()).scale(0.5))
}

/// Entrywise bound on `|a − b|`.
pub fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.max_abs_diff(b).map(|d| d <= tol).unwrap_or(false)
}

/// `(images, a, c)` with `n ∈ lo..=hi`, `a ∈ (0.1, n + 2)`, `cᵢ ∈ [0.2, 3]`.
pub fn map_parts(lo: usize, hi: usize) -> impl Strategy<Value = (Vec<usize>, f64, Vec<f64>)> {
    (lo..=hi).prop_flat_map(|n| {
        (
            permutation(n),
            0.1..(n as f64 + 2.0),
            prop::collection::vec(0.2f64..3.0, n),
        )
    })
}

/// Random involution of degree `n ∈ lo..=hi` as an image list.
pub fn involution(lo: usize, hi: usize) -> impl Strategy<Value = Vec<usize>> {
    (lo..=hi)
        .prop_flat_map(|n| (permutation(n), 0..=n / 2))
        .prop_map(|(order, pairs)| {
            let n = order.len();
            let mut images: Vec<usize> = (1..=n).collect();
            for t in 0..pairs {
                let (x, y) = (order[2 * t], order[2 * t + 1]);
                images[x - 1] = y;
                images[y - 1] = x;
            }
            images
        })
}

/// Coefficients meeting `c_i ≥ 1` on fixed points and `c_i c_σ(i) ≥ 1` on
/// transpositions, derived from uniform draws `u ∈ [0, 1)`.
pub fn conforming_c(images: &[usize], u: &[f64]) -> Vec<f64> {
    let n = images.len();
    let mut c = vec![0.0; n];
    for i in 0..n {
        let s = images[i] - 1;
        if s == i {
            c[i] = 1.0 + 2.0 * u[i];
        } else if i < s {
            c[i] = 0.2 + 2.8 * u[i];
            c[s] = (1.0 + 2.0 * u[s]) / c[i];
        }
    }
    c
}
