//! The symmetric function
//! `F(x) = Σ_{m=0}^{n} a^{m−1}(a − m)·e_{n−m}(x)` whose sign decides
//! `Σ (a + x_i)⁻¹ ≤ 1`.

/// Elementary symmetric polynomials `[e_0, e_1, …, e_n]` of `xs`.
pub fn elementary_symmetric(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; xs.len() + 1];
    e[0] = 1.0;
    for (k, &x) in xs.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// Evaluates `F(x₁,…,xₙ)` for `a > 0`.
#[allow(non_snake_case)]
pub fn symmetric_F(a: f64, xs: &[f64]) -> f64 {
    let n = xs.len();
    let e = elementary_symmetric(xs);
    (0..=n)
        .map(|m| a.powi(m as i32 - 1) * (a - m as f64) * e[n - m])
        .sum()
}

/// `n! / (m! (n − m)!)` as a float.
pub fn binomial(n: usize, m: usize) -> f64 {
    let m = m.min(n - m);
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
