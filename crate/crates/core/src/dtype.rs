//! The maps `Θ^(n,σ)[a; c₁,…,cₙ](X) = Δ^(n,σ)(X) − X` where `Δ^(n,σ)` is
//! diagonal with entries `a·x_ii + c_i·x_{σ(i),σ(i)}`, together with their
//! D-type matrix and Choi matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matlin::{kron, CMatrix};
use crate::perm::Permutation;

/// Parameters `(n, σ, a, c)` of `Θ^(n,σ)[a; c]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct MapParams {
    sigma: Permutation,
    a: f64,
    c: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    sigma: String,
    a: f64,
    c: Vec<f64>,
}

impl TryFrom<RawParams> for MapParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        let sigma: Permutation = raw
            .sigma
            .parse()
            .map_err(|e: Error| Error::param("sigma", format!("{:?}: {e}", raw.sigma)))?;
        if sigma.degree() != raw.n {
            return Err(Error::param(
                "sigma",
                format!("degree {} does not match n = {}", sigma.degree(), raw.n),
            ));
        }
        if raw.c.len() == raw.n && raw.c.iter().all(|&x| x == 0.0) && raw.a == raw.n as f64 {
            return MapParams::delta_n(raw.n);
        }
        MapParams::new(sigma, raw.a, raw.c)
    }
}

impl From<MapParams> for RawParams {
    fn from(p: MapParams) -> Self {
        RawParams {
            n: p.n(),
            sigma: p.sigma.to_string(),
            a: p.a,
            c: p.c,
        }
    }
}

impl MapParams {
    /// General constructor; `a` and every `cᵢ` must be strictly positive.
    pub fn new(sigma: Permutation, a: f64, c: Vec<f64>) -> Result<Self> {
        let n = sigma.degree();
        if c.len() != n {
            return Err(Error::param(
                "c",
                format!("expected {n} coefficients, got {}", c.len()),
            ));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::param("a", format!("must be a positive real, got {a}")));
        }
        if let Some((i, ci)) = c.iter().enumerate().find(|(_, ci)| !(ci.is_finite() && **ci > 0.0)) {
            return Err(Error::param(
                "c",
                format!("c{} must be a positive real, got {ci}", i + 1),
            ));
        }
        Ok(MapParams { sigma, a, c })
    }

    /// Uniform coefficients `Θ^(n,σ)[n − c; c, …, c]`.
    pub fn uniform(sigma: Permutation, c: f64) -> Result<Self> {
        let n = sigma.degree() as f64;
        MapParams::new(sigma.clone(), n - c, vec![c; sigma.degree()])
    }

    /// `X ↦ n·diag(X) − X`, i.e. `Θ^(n,σ)[n; 0, …, 0]` (σ is irrelevant once
    /// `c = 0`, so the identity is stored).
    pub fn delta_n(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("n", "delta_n needs n >= 2"));
        }
        Ok(MapParams {
            sigma: Permutation::identity(n)?,
            a: n as f64,
            c: vec![0.0; n],
        })
    }

    pub fn n(&self) -> usize {
        self.sigma.degree()
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// True for the `delta_n` map.
    pub fn is_delta(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    /// `Some(c)` when all coefficients are equal.
    pub fn uniform_c(&self) -> Option<f64> {
        let first = self.c[0];
        self.c
            .iter()
            .all(|&x| (x - first).abs() <= 1e-12 * first.abs().max(1.0))
            .then_some(first)
    }

    /// `Tr Θ(I) = n(a − 1) + Σ cᵢ`.
    pub fn choi_trace(&self) -> f64 {
        self.n() as f64 * (self.a - 1.0) + self.c.iter().sum::<f64>()
    }

    fn check_input(&self, x: &CMatrix) -> Result<()> {
        let n = self.n();
        if x.rows() != n || x.cols() != n {
            return Err(Error::param(
                "X",
                format!("expected a {n}x{n} matrix, got {}x{}", x.rows(), x.cols()),
            ));
        }
        Ok(())
    }
}

/// Choi matrix `Σ E_ij ⊗ ψ(E_ij)` with `ψ = Θ` or `ψ = T∘Θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChoiMatrix {
    pub n: usize,
    pub matrix: CMatrix,
    pub transposed_composition: bool,
}

impl ChoiMatrix {
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

pub fn delta_apply(p: &MapParams, x: &CMatrix) -> Result<CMatrix> {
    p.check_input(x)?;
    let n = p.n();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        let s = p.sigma.at(i);
        out[(i, i)] = x[(i, i)] * p.a + x[(s, s)] * p.c[i];
    }
    Ok(out)
}

pub fn theta_apply(p: &MapParams, x: &CMatrix) -> Result<CMatrix> {
    Ok(&delta_apply(p, x)? - x)
}

/// `D = a·Iₙ + Σ cᵢ E_{σ(i), i}`.
pub fn d_matrix(p: &MapParams) -> CMatrix {
    let n = p.n();
    let mut d = CMatrix::identity(n).scale(p.a);
    for i in 0..n {
        d[(p.sigma.at(i), i)] += p.c[i];
    }
    d
}

/// The generic D-type map `X ↦ diag((x₁₁,…,xₙₙ)·D) − X`.
pub fn d_type_apply(d: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    let n = d.rows();
    if !d.is_square() || x.rows() != n || x.cols() != n {
        return Err(Error::Size("D and X must both be n x n".into()));
    }
    let mut out = -x;
    for j in 0..n {
        let f: num_complex::Complex64 = (0..n).map(|k| x[(k, k)] * d[(k, j)]).sum();
        out[(j, j)] += f;
    }
    Ok(out)
}

pub fn choi(p: &MapParams, compose_transpose: bool) -> ChoiMatrix {
    let n = p.n();
    let mut matrix = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let e = CMatrix::unit(n, i, j);
            let mut image = theta_apply(p, &e).expect("unit has size n");
            if compose_transpose {
                image = image.transpose();
            }
            let block = kron(&e, &image).expect("n^2 fits");
            matrix = &matrix + &block;
        }
    }
    ChoiMatrix {
        n,
        matrix,
        transposed_composition: compose_transpose,
    }
}

/// Closed-form spectrum of `C_Θ`, ascending, when `l_min(σ) ≥ 2`:
/// `{0^(n²−2n), a^(n−1), a − n, c₁, …, cₙ}`.
pub fn choi_spectrum_closed_form(p: &MapParams) -> Option<Vec<f64>> {
    let n = p.n();
    if p.sigma.min_max_cycle_length().0 < 2 {
        return None;
    }
    let mut values = vec![0.0; n * n - 2 * n];
    values.extend(std::iter::repeat_n(p.a, n - 1));
    values.push(p.a - n as f64);
    values.extend_from_slice(&p.c);
    values.sort_by(f64::total_cmp);
    Some(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::hermitian_spectrum;

    fn flagship() -> MapParams {
        MapParams::new(Permutation::tau(3, 2).unwrap(), 2.0, vec![1.0; 3]).unwrap()
    }

    #[test]
    fn constructor_validation() {
        let s = Permutation::tau(3, 2).unwrap();
        assert!(MapParams::new(s.clone(), 0.0, vec![1.0; 3]).is_err());
        assert!(MapParams::new(s.clone(), 2.0, vec![1.0, 0.0, 1.0]).is_err());
        assert!(MapParams::new(s.clone(), 2.0, vec![1.0; 2]).is_err());
        match MapParams::new(s, -1.0, vec![1.0; 3]) {
            Err(Error::Parameter { field, .. }) => assert_eq!(field, "a"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn closed_form_flagship() {
        let got = choi_spectrum_closed_form(&flagship()).unwrap();
        assert_eq!(got, vec![-1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, 2.0]);
        let id = MapParams::new(Permutation::identity(3).unwrap(), 2.0, vec![1.0; 3]).unwrap();
        assert!(choi_spectrum_closed_form(&id).is_none());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n":3,"sigma":"tau:3:2","a":2.0,"c":[1,1,1]}"#;
        let p: MapParams = serde_json::from_str(text).unwrap();
        assert_eq!(p, flagship());
        let back: MapParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"n":4,"sigma":"tau:3:2","a":2.0,"c":[1,1,1]}"#;
        assert!(serde_json::from_str::<MapParams>(bad).is_err());

        let delta = r#"{"n":4,"sigma":"tau:4:1","a":4,"c":[0,0,0,0]}"#;
        assert_eq!(serde_json::from_str::<MapParams>(delta).unwrap(), MapParams::delta_n(4).unwrap());
        let zero = r#"{"n":3,"sigma":"tau:3:1","a":2,"c":[0,0,0]}"#;
        assert!(serde_json::from_str::<MapParams>(zero).is_err());
    }

    #[test]
    fn delta_apply_examples() {
        let p = flagship();
        let out = delta_apply(&p, &CMatrix::unit(3, 0, 0)).unwrap();
        assert_eq!(out, CMatrix::diag(&[2.0, 1.0, 0.0]));
        let out = delta_apply(&p, &CMatrix::identity(3)).unwrap();
        assert_eq!(out, CMatrix::diag(&[3.0, 3.0, 3.0]));
        assert_eq!(delta_apply(&p, &CMatrix::unit(3, 0, 1)).unwrap(), CMatrix::zeros(3, 3));
        assert!(delta_apply(&p, &CMatrix::identity(2)).is_err());
    }

    #[test]
    fn theta_apply_examples() {
        let p = MapParams::new(
            Permutation::from_images(&[2, 3, 4, 1]).unwrap(),
            2.5,
            vec![1.0, 2.0, 3.0, 4.0],
        )
        .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let got = theta_apply(&p, &CMatrix::unit(4, i, j)).unwrap();
                let want = if i != j {
                    CMatrix::unit(4, i, j).scale(-1.0)
                } else {
                    let pre = p.sigma().preimage(i + 1) - 1;
                    &CMatrix::unit(4, i, i).scale(p.a() - 1.0)
                        + &CMatrix::unit(4, pre, pre).scale(p.c()[pre])
                };
                assert_eq!(got, want, "E_{i}{j}");
            }
        }
        let out = theta_apply(&flagship(), &CMatrix::identity(3)).unwrap();
        assert_eq!(out, CMatrix::identity(3).scale(2.0));
    }

    #[test]
    fn d_matrix_examples() {
        let id = MapParams::new(Permutation::identity(3).unwrap(), 2.0, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(d_matrix(&id), CMatrix::diag(&[3.0, 4.0, 5.0]));
        let d = d_matrix(&flagship());
        let mut want = CMatrix::identity(3).scale(2.0);
        want[(2, 0)] += 1.0;
        want[(0, 1)] += 1.0;
        want[(1, 2)] += 1.0;
        assert_eq!(d, want);
    }

    #[test]
    fn choi_flagship_spectrum_and_trace() {
        let c = choi(&flagship(), false);
        assert!((c.trace() - 6.0).abs() < 1e-14);
        let spec = hermitian_spectrum(&c.matrix).unwrap();
        let want = [-1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, 2.0];
        for (g, w) in spec.eigenvalues.iter().zip(want) {
            assert!((g - w).abs() < 1e-10, "{:?}", spec.eigenvalues);
        }
        let t = choi(&flagship(), true);
        assert!(t.matrix.is_hermitian(1e-12));
        assert!(t.transposed_composition);
    }

    #[test]
    fn delta_n_examples() {
        let d2 = MapParams::delta_n(2).unwrap();
        let e12 = CMatrix::unit(2, 0, 1);
        assert_eq!(theta_apply(&d2, &e12).unwrap(), e12.scale(-1.0));
        let d3 = MapParams::delta_n(3).unwrap();
        assert_eq!(
            theta_apply(&d3, &CMatrix::identity(3)).unwrap(),
            CMatrix::identity(3).scale(2.0)
        );
        assert!(crate::matlin::is_psd(&choi(&d3, false).matrix, 1e-9).unwrap());
        assert!(d3.is_delta());
        assert!(MapParams::delta_n(1).is_err());
    }
}
