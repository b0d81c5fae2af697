mod common;

use common::{close, complex_matrix, hermitian, map_parts};
use num_complex::Complex64;
use posmaps::dtype::{choi, d_matrix, d_type_apply, delta_apply, theta_apply};
use posmaps::matlin::{hermitian_spectrum, kron, CMatrix};
use posmaps::{MapParams, Permutation};
use proptest::prelude::*;

fn params((images, a, c): (Vec<usize>, f64, Vec<f64>)) -> MapParams {
    MapParams::new(Permutation::from_images(&images).unwrap(), a, c).unwrap()
}

/// `Θ` written out entry by entry from its definition.
fn theta_by_hand(images: &[usize], a: f64, c: &[f64], x: &CMatrix) -> CMatrix {
    let n = images.len();
    let mut out = x.scale(-1.0);
    for i in 0..n {
        let s = images[i] - 1;
        out[(i, i)] += x[(i, i)] * a + x[(s, s)] * c[i];
    }
    out
}

/// `{0^(n²−2n), a^(n−1), a − n, c₁, …, cₙ}`, ascending.
fn expected_spectrum(n: usize, a: f64, c: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; n * n - 2 * n];
    v.extend(vec![a; n - 1]);
    v.push(a - n as f64);
    v.extend_from_slice(c);
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_matches_definition(
        (parts, x) in map_parts(1, 6).prop_flat_map(|parts| {
            let n = parts.0.len();
            (Just(parts), complex_matrix(n, n))
        })
    ) {
        let want = theta_by_hand(&parts.0, parts.1, &parts.2, &x);
        let p = params(parts);
        prop_assert!(close(&theta_apply(&p, &x).unwrap(), &want, 1e-14));
    }

    #[test]
    fn theta_is_linear(
        parts in map_parts(3, 3),
        x in complex_matrix(3, 3),
        y in complex_matrix(3, 3),
        (ar, ai, br, bi) in (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
    ) {
        let p = params(parts);
        let (alpha, beta) = (Complex64::new(ar, ai), Complex64::new(br, bi));
        let lhs = theta_apply(&p, &(&x.scale_complex(alpha) + &y.scale_complex(beta))).unwrap();
        let rhs = &theta_apply(&p, &x).unwrap().scale_complex(alpha)
            + &theta_apply(&p, &y).unwrap().scale_complex(beta);
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn theta_preserves_hermiticity(parts in map_parts(4, 4), x in hermitian(4)) {
        let p = params(parts);
        prop_assert!(theta_apply(&p, &x).unwrap().is_hermitian(1e-14));
    }

    #[test]
    fn d_type_consistency(parts in map_parts(5, 5), x in complex_matrix(5, 5)) {
        let p = params(parts);
        let d = d_matrix(&p);
        prop_assert!(close(&d_type_apply(&d, &x).unwrap(), &theta_apply(&p, &x).unwrap(), 1e-13));
        prop_assert!(close(&(&delta_apply(&p, &x).unwrap() - &x), &theta_apply(&p, &x).unwrap(), 0.0));
    }

    #[test]
    fn choi_is_block_sum_of_unit_images(parts in map_parts(1, 5)) {
        let (images, a, c) = parts.clone();
        let n = images.len();
        let p = params(parts);
        let mut want = CMatrix::zeros(n * n, n * n);
        let mut want_t = CMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let e = CMatrix::unit(n, i, j);
                let img = theta_by_hand(&images, a, &c, &e);
                want = &want + &kron(&e, &img).unwrap();
                want_t = &want_t + &kron(&e, &img.transpose()).unwrap();
            }
        }
        let ch = choi(&p, false);
        prop_assert!(close(&ch.matrix, &want, 0.0));
        prop_assert!(close(&choi(&p, true).matrix, &want_t, 0.0));
        let trace = n as f64 * (a - 1.0) + c.iter().sum::<f64>();
        prop_assert!((ch.trace() - trace).abs() < 1e-12);
        prop_assert!(ch.matrix.is_hermitian(0.0));
    }

    #[test]
    fn choi_spectrum_closed_form(
        (n, k) in (2usize..=7).prop_flat_map(|n| (Just(n), 1..n)),
        a in 0.1f64..9.0,
        seed_c in prop::collection::vec(0.2f64..3.0, 7),
    ) {
        let c = seed_c[..n].to_vec();
        let p = MapParams::new(Permutation::tau(n, k).unwrap(), a, c.clone()).unwrap();
        let got = hermitian_spectrum(&choi(&p, false).matrix).unwrap().eigenvalues;
        let want = expected_spectrum(n, a, &c);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-8, "{:?} vs {:?}", got, want);
        }
        let closed = posmaps::dtype::choi_spectrum_closed_form(&p).unwrap();
        prop_assert_eq!(closed, want);
    }
}

#[test]
fn images_of_matrix_units() {
    // Θ(E_ii) = (a − 1)E_ii + c_{σ⁻¹(i)} E_{σ⁻¹(i)σ⁻¹(i)}, Θ(E_ij) = −E_ij.
    let images = [3, 1, 4, 2];
    let c = [0.5, 1.5, 2.5, 3.5];
    let p = MapParams::new(Permutation::from_images(&images).unwrap(), 2.25, c.to_vec()).unwrap();
    for i in 0..4 {
        let pre = images.iter().position(|&s| s == i + 1).unwrap();
        let mut want = CMatrix::zeros(4, 4);
        want[(i, i)] += Complex64::new(1.25, 0.0);
        want[(pre, pre)] += Complex64::new(c[pre], 0.0);
        assert!(close(&theta_apply(&p, &CMatrix::unit(4, i, i)).unwrap(), &want, 0.0));
        for j in (0..4).filter(|&j| j != i) {
            let got = theta_apply(&p, &CMatrix::unit(4, i, j)).unwrap();
            assert!(close(&got, &CMatrix::unit(4, i, j).scale(-1.0), 0.0));
        }
    }
}

#[test]
fn delta_n_examples() {
    let p = MapParams::delta_n(3).unwrap();
    assert!(close(&theta_apply(&p, &CMatrix::identity(3)).unwrap(), &CMatrix::identity(3).scale(2.0), 0.0));
    let ev = hermitian_spectrum(&choi(&p, false).matrix).unwrap().eigenvalues;
    assert!(ev[0] >= -1e-12);
    assert!(MapParams::delta_n(1).is_err());
}
