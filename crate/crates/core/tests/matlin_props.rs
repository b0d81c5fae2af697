mod common;

use common::{close, complex_matrix, hermitian};
use num_complex::Complex64;
use posmaps::dtype::choi;
use posmaps::matlin::{
    eigh, hermitian_spectrum, is_psd, kron, negative_part, numerical_rank, partial_transpose,
    singular_values, CMatrix,
};
use posmaps::{MapParams, Permutation};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

/// Power sums `Tr(M^k)`, `k = 1..=3`.
fn power_traces(m: &CMatrix) -> [f64; 3] {
    let m2 = m * m;
    let m3 = &m2 * m;
    [m.trace().re, m2.trace().re, m3.trace().re]
}

fn check_spectrum(m: &CMatrix) {
    let s = hermitian_spectrum(m).unwrap();
    let scale = m.frobenius_norm().max(1.0);
    assert!(s.residual <= 1e-10 * scale, "residual {}", s.residual);
    assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    for (k, want) in power_traces(m).iter().enumerate() {
        let got: f64 = s.eigenvalues.iter().map(|l| l.powi(k as i32 + 1)).sum();
        assert!((got - want).abs() <= 1e-9 * scale.powi(k as i32 + 1), "k={k}");
    }
}

#[test]
fn spectrum_residual_on_large_choi_matrices() {
    for (n, k) in [(8, 3), (10, 5), (12, 5), (12, 4)] {
        let p = MapParams::new(
            Permutation::tau(n, k).unwrap(),
            n as f64 - 0.5,
            (0..n).map(|i| 0.3 + 0.2 * i as f64).collect(),
        )
        .unwrap();
        check_spectrum(&choi(&p, false).matrix);
        check_spectrum(&choi(&p, true).matrix);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_transpose_on_3x3(m in hermitian(9)) {
        let g = partial_transpose(&m, 3, 3).unwrap();
        prop_assert!(close(&partial_transpose(&g, 3, 3).unwrap(), &m, 0.0));
        prop_assert!((g.trace() - m.trace()).norm() < 1e-12);
        prop_assert!(g.is_hermitian(1e-14));
    }

    #[test]
    fn partial_transpose_on_4x4(m in hermitian(16)) {
        let g = partial_transpose(&m, 4, 4).unwrap();
        prop_assert!(close(&partial_transpose(&g, 4, 4).unwrap(), &m, 0.0));
        prop_assert!((g.trace() - m.trace()).norm() < 1e-12);
        prop_assert!(g.is_hermitian(1e-14));
    }

    #[test]
    fn partial_transpose_of_products(a in complex_matrix(2, 2), b in complex_matrix(3, 3)) {
        let g = partial_transpose(&kron(&a, &b).unwrap(), 2, 3).unwrap();
        prop_assert!(close(&g, &kron(&a, &b.transpose()).unwrap(), 1e-15));
    }

    #[test]
    fn kron_mixed_product(
        a in complex_matrix(2, 3), b in complex_matrix(3, 2),
        c in complex_matrix(3, 2), d in complex_matrix(2, 4),
    ) {
        let lhs = &kron(&a, &b).unwrap() * &kron(&c, &d).unwrap();
        let rhs = kron(&(&a * &c), &(&b * &d)).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn kron_associative(a in complex_matrix(2, 2), b in complex_matrix(2, 3), c in complex_matrix(3, 2)) {
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(close(&left, &right, 1e-15));
    }

    #[test]
    fn negative_part_splits(m in hermitian(9)) {
        let (minus, norm) = negative_part(&m).unwrap();
        let plus = &m + &minus;
        prop_assert!(is_psd(&minus, 1e-10).unwrap());
        prop_assert!(is_psd(&plus, 1e-10).unwrap());
        prop_assert!((&plus * &minus).max_abs() <= 1e-10);
        prop_assert!(close(&(&plus - &minus), &m, 1e-10));
        let lmin = hermitian_spectrum(&m).unwrap().eigenvalues[0];
        prop_assert!((norm - (-lmin).max(0.0)).abs() <= 1e-10);
    }

    #[test]
    fn eigenpairs_of_random_hermitian(m in (1usize..=12).prop_flat_map(hermitian)) {
        check_spectrum(&m);
        let e = eigh(&m);
        let n = m.rows();
        // Eigenvectors are orthonormal.
        for i in 0..n {
            for j in 0..n {
                let ip: Complex64 = e.vector(i).iter().zip(e.vector(j)).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_values_match_frobenius(m in (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| complex_matrix(r, c))) {
        let sv = singular_values(&m);
        prop_assert_eq!(sv.len(), m.rows().min(m.cols()));
        let sum: f64 = sv.iter().map(|s| s * s).sum();
        prop_assert!((sum - m.frobenius_norm().powi(2)).abs() < 1e-10);
        // σ² are the eigenvalues of M*M.
        let gram = &m.adjoint() * &m;
        let mut ev = hermitian_spectrum(&gram).unwrap().eigenvalues;
        ev.reverse();
        for (s, l) in sv.iter().zip(ev) {
            prop_assert!((s * s - l).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_of_low_rank_products(a in complex_matrix(6, 2), b in complex_matrix(2, 7)) {
        prop_assume!(singular_values(&a)[1] > 1e-3 && singular_values(&b)[1] > 1e-3);
        prop_assert_eq!(numerical_rank(&(&a * &b), 1e-8), 2);
    }
}

#[test]
fn spectrum_of_144x144_random_hermitian() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let m = hermitian(144).new_tree(&mut runner).unwrap().current();
    check_spectrum(&m);
}
