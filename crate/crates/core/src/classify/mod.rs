//! Positivity, 2-positivity, complete positivity, atomicity and
//! decomposability verdicts for `Θ^(n,σ)[a; c]`.
//!
//! Every verdict names the criterion that produced it. Closed-form criteria
//! are paired with a numeric check (sampled positivity oracle or Choi
//! spectrum) whose numbers travel with the verdict. Where no closed-form
//! criterion is known the status is `unknown` and only the numbers are
//! reported.

mod decompose;
mod positivity;
mod symf;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dtype::{choi, MapParams};
use crate::error::{Error, Result};
use crate::matlin::{min_eigenvalue, CMatrix, DEFAULT_PSD_TOL};

pub use decompose::{decompose_involution, DecomposabilityCertificate, QBlock};
pub use positivity::{
    adversarial_weights, geometric_mean, positivity_threshold, ratio_sum,
    verify_positivity_numeric, PositivityEvidence,
};
pub use symf::{binomial, elementary_symmetric, symmetric_F};

/// Parameters sitting within this distance of a threshold count as meeting
/// it (all thresholds are inclusive).
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
    Unknown,
}

impl Status {
    fn from_bool(b: bool) -> Self {
        if b {
            Status::Yes
        } else {
            Status::No
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// A closed-form criterion decided the verdict.
    Theorem,
    /// Only a numeric test is available.
    NumericOracle,
    /// A closed-form criterion decided it and the numeric test agrees.
    Both,
    /// Follows from another verdict (e.g. CP implies 2-positive).
    Implied,
    /// Nothing applies.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub criterion: String,
    pub inputs: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericEvidence {
    pub values: BTreeMap<String, f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Certificate,
    pub numeric_evidence: Option<NumericEvidence>,
}

impl Verdict {
    fn new(status: Status, kind: CertificateKind, criterion: &str) -> Self {
        Verdict {
            status,
            certificate: Certificate {
                kind,
                criterion: criterion.to_string(),
                inputs: BTreeMap::new(),
            },
            numeric_evidence: None,
        }
    }

    fn input(mut self, key: &str, value: f64) -> Self {
        self.certificate.inputs.insert(key.to_string(), value);
        self
    }

    fn evidence(mut self, values: &[(&str, f64)], tolerance: f64) -> Self {
        self.numeric_evidence = Some(NumericEvidence {
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            tolerance,
        });
        self
    }

    /// Upgrades a theorem certificate to `both` when the numeric evidence
    /// agrees with the status.
    fn corroborate(mut self, numeric_yes: bool) -> Self {
        if self.certificate.kind == CertificateKind::Theorem
            && self.status != Status::Unknown
            && (self.status == Status::Yes) == numeric_yes
        {
            self.certificate.kind = CertificateKind::Both;
        }
        self
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::No
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub params: MapParams,
    pub positive: Verdict,
    pub two_positive: Verdict,
    pub completely_positive: Verdict,
    pub atomic: Verdict,
    pub decomposable: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            samples: 2000,
            tol: DEFAULT_PSD_TOL,
            seed: 0,
        }
    }
}

/// Matrix with diagonal `a + c_i − 1` and off-diagonal `−1`; for σ = id the
/// map is `X ↦ A ∗ X`.
pub fn schur_matrix(p: &MapParams) -> CMatrix {
    let n = p.n();
    let mut m = CMatrix::ones(n).scale(-1.0);
    for i in 0..n {
        m[(i, i)] = (p.a() + p.c()[i] - 1.0).into();
    }
    m
}

fn choi_min_eigenvalue(p: &MapParams) -> f64 {
    min_eigenvalue(&choi(p, false).matrix).expect("Choi matrix is Hermitian")
}

/// Positivity from closed-form criteria only, optionally annotated with the
/// sampled oracle.
pub fn positivity_verdict(p: &MapParams, evidence: Option<&PositivityEvidence>) -> Verdict {
    let n = p.n();
    let a = p.a();
    let threshold = positivity_threshold(p);
    let (l_min, l_max) = p.sigma().min_max_cycle_length();

    let mut v = if p.sigma().is_identity() {
        let lam = min_eigenvalue(&schur_matrix(p)).expect("symmetric");
        Verdict::new(
            Status::from_bool(lam >= -DEFAULT_PSD_TOL),
            CertificateKind::Theorem,
            "identity permutation: positive iff CP iff the Schur matrix A is PSD",
        )
        .input("schur_min_eigenvalue", lam)
    } else if a >= threshold - BOUNDARY_TOL {
        Verdict::new(
            Status::Yes,
            CertificateKind::Theorem,
            "a >= max(n-1, n - (c1...cn)^(1/n)) implies positive for every sigma",
        )
        .input("a", a)
        .input("threshold", threshold)
    } else if let Some(c) = p
        .uniform_c()
        .filter(|&c| (a - (n as f64 - c)).abs() <= BOUNDARY_TOL)
    {
        let bound = n as f64 / l_max as f64;
        Verdict::new(
            Status::from_bool(c <= bound + BOUNDARY_TOL),
            CertificateKind::Theorem,
            "uniform coefficients with a = n - c: positive iff c <= n / l_max(sigma)",
        )
        .input("c", c)
        .input("n_over_l_max", bound)
    } else if p.sigma().is_full_cycle() {
        Verdict::new(
            Status::No,
            CertificateKind::Theorem,
            "sigma is a single n-cycle: positive only if a >= max(n-1, n - (c1...cn)^(1/n))",
        )
        .input("a", a)
        .input("threshold", threshold)
    } else {
        Verdict::new(
            Status::Unknown,
            CertificateKind::NumericOracle,
            "no closed-form positivity criterion for this sigma below the threshold",
        )
        .input("a", a)
        .input("threshold", threshold)
    };
    v = v.input("l_min", l_min as f64);

    if let Some(ev) = evidence {
        v = v
            .evidence(
                &[
                    ("max_ratio_sum", ev.max_ratio_sum),
                    ("min_eigenvalue_of_image", ev.min_eigenvalue),
                    ("random_samples", ev.random_samples as f64),
                    ("adversarial_samples", ev.adversarial_samples as f64),
                ],
                ev.tolerance,
            )
            .corroborate(ev.supports_positivity());
    }
    v
}

/// Complete positivity.
pub fn cp_verdict(p: &MapParams) -> Verdict {
    let n = p.n() as f64;
    let (l_min, _) = p.sigma().min_max_cycle_length();
    let choi_min = choi_min_eigenvalue(p);
    let numeric_yes = choi_min >= -DEFAULT_PSD_TOL;

    let v = if l_min >= 2 {
        Verdict::new(
            Status::from_bool(p.a() >= n - BOUNDARY_TOL),
            CertificateKind::Theorem,
            "l_min(sigma) >= 2: CP iff 2-positive iff a >= n",
        )
        .input("a", p.a())
        .input("n", n)
    } else if p.sigma().is_identity() {
        let lam = min_eigenvalue(&schur_matrix(p)).expect("symmetric");
        Verdict::new(
            Status::from_bool(lam >= -DEFAULT_PSD_TOL),
            CertificateKind::Theorem,
            "identity permutation: CP iff the Schur matrix A is PSD",
        )
        .input("schur_min_eigenvalue", lam)
    } else {
        Verdict::new(
            Status::from_bool(numeric_yes),
            CertificateKind::NumericOracle,
            "numeric-only: Choi matrix PSD test",
        )
    };
    v.input("l_min", l_min as f64)
        .evidence(&[("choi_min_eigenvalue", choi_min)], DEFAULT_PSD_TOL)
        .corroborate(numeric_yes)
}

/// 2-positivity, given the CP verdict.
pub fn two_positive_verdict(p: &MapParams, cp: &Verdict) -> Verdict {
    let (l_min, _) = p.sigma().min_max_cycle_length();
    if l_min >= 2 {
        return Verdict::new(
            Status::from_bool(p.a() >= p.n() as f64 - BOUNDARY_TOL),
            CertificateKind::Theorem,
            "l_min(sigma) >= 2: 2-positive iff a >= n",
        )
        .input("a", p.a())
        .input("n", p.n() as f64);
    }
    if p.sigma().is_identity() {
        // positive ⇔ CP here, and CP ⇒ 2-positive ⇒ positive.
        return Verdict::new(
            cp.status,
            CertificateKind::Theorem,
            "identity permutation: 2-positive iff CP iff the Schur matrix A is PSD",
        );
    }
    if cp.is_yes() {
        return Verdict::new(Status::Yes, CertificateKind::Implied, "CP implies 2-positive");
    }
    Verdict::new(
        Status::Unknown,
        CertificateKind::None,
        "l_min(sigma) = 1 with sigma != id: no 2-positivity criterion",
    )
}

fn atomic_base(p: &MapParams, positive: &Verdict, cp: &Verdict) -> bool {
    let (l_min, _) = p.sigma().min_max_cycle_length();
    p.n() >= 3 && l_min >= 3 && positive.is_yes() && cp.is_no()
}

fn decomposable_from(
    p: &MapParams,
    positive: &Verdict,
    cp: &Verdict,
    atomic: bool,
) -> Verdict {
    if positive.is_no() {
        return Verdict::new(
            Status::No,
            CertificateKind::Implied,
            "not positive, hence not decomposable",
        );
    }
    if cp.is_yes() {
        return Verdict::new(Status::Yes, CertificateKind::Implied, "CP implies decomposable");
    }
    if p.sigma().is_involution() {
        if let Ok(cert) = decompose_involution(p) {
            return Verdict::new(
                Status::Yes,
                CertificateKind::Both,
                "involution with a >= n-1, c_i >= 1 on fixed points, c_i c_sigma(i) >= 1 on pairs: explicit P + sum Q_i splitting",
            )
            .input("a", p.a())
            .evidence(
                &[
                    ("p_min_eigenvalue", cert.p_min_eigenvalue),
                    ("reconstruction_residual", cert.reconstruction_residual),
                ],
                DEFAULT_PSD_TOL,
            );
        }
    }
    if atomic {
        return Verdict::new(
            Status::No,
            CertificateKind::Implied,
            "atomic maps are indecomposable",
        );
    }
    Verdict::new(
        Status::Unknown,
        CertificateKind::None,
        "no decomposability criterion applies",
    )
}

fn atomic_from(p: &MapParams, positive: &Verdict, cp: &Verdict, decomposable: &Verdict) -> Verdict {
    let (l_min, _) = p.sigma().min_max_cycle_length();
    if atomic_base(p, positive, cp) {
        return Verdict::new(
            Status::Yes,
            CertificateKind::Theorem,
            "l_min(sigma) >= 3 and positive but not CP implies atomic",
        )
        .input("l_min", l_min as f64)
        .input("a", p.a());
    }
    if positive.is_no() {
        return Verdict::new(Status::No, CertificateKind::Implied, "atomicity needs positivity");
    }
    if cp.is_yes() {
        return Verdict::new(Status::No, CertificateKind::Implied, "CP maps are not atomic");
    }
    if decomposable.is_yes() {
        return Verdict::new(
            Status::No,
            CertificateKind::Implied,
            "decomposable maps are not atomic",
        );
    }
    Verdict::new(
        Status::Unknown,
        CertificateKind::None,
        "atomicity criterion needs l_min(sigma) >= 3 with positivity established",
    )
    .input("l_min", l_min as f64)
}

fn verdicts(
    p: &MapParams,
    evidence: Option<&PositivityEvidence>,
) -> (Verdict, Verdict, Verdict, Verdict, Verdict) {
    let mut positive = positivity_verdict(p, evidence);
    let cp = cp_verdict(p);
    let mut two_positive = two_positive_verdict(p, &cp);
    if positive.status == Status::Unknown && cp.is_yes() {
        let numeric = positive.numeric_evidence.take();
        positive = Verdict::new(Status::Yes, CertificateKind::Implied, "CP implies positive");
        positive.numeric_evidence = numeric;
    }
    if two_positive.status == Status::Unknown && positive.is_no() {
        two_positive = Verdict::new(
            Status::No,
            CertificateKind::Implied,
            "not positive, hence not 2-positive",
        );
    }
    let base = atomic_base(p, &positive, &cp);
    let decomposable = decomposable_from(p, &positive, &cp, base);
    let atomic = atomic_from(p, &positive, &cp, &decomposable);
    (positive, two_positive, cp, atomic, decomposable)
}

/// Atomicity from the closed-form criteria (no sampling).
pub fn atomic_verdict(p: &MapParams) -> Verdict {
    verdicts(p, None).3
}

/// Atomicity of `Θ^(n,σ)[n − c; c, …, c]`.
pub fn atomic_uniform_c(p: &MapParams) -> Result<Verdict> {
    let n = p.n() as f64;
    let c = p
        .uniform_c()
        .ok_or_else(|| Error::param("c", "coefficients are not uniform"))?;
    if (p.a() - (n - c)).abs() > BOUNDARY_TOL {
        return Err(Error::param(
            "a",
            format!("expected a = n - c = {}, got {}", n - c, p.a()),
        ));
    }
    if c == 0.0 {
        return Ok(Verdict::new(
            Status::No,
            CertificateKind::Theorem,
            "c = 0: the map X -> n diag(X) - X is completely positive",
        )
        .input("c", 0.0));
    }
    let (l_min, l_max) = p.sigma().min_max_cycle_length();
    let bound = n / l_max as f64;
    if l_min >= 3 && c <= bound + BOUNDARY_TOL {
        return Ok(Verdict::new(
            Status::Yes,
            CertificateKind::Theorem,
            "uniform coefficients: l_min(sigma) >= 3 and 0 < c <= n / l_max(sigma) imply atomic",
        )
        .input("c", c)
        .input("n_over_l_max", bound)
        .input("l_min", l_min as f64));
    }
    Ok(Verdict::new(
        Status::Unknown,
        CertificateKind::None,
        "uniform-coefficient atomicity criterion does not apply",
    )
    .input("c", c)
    .input("n_over_l_max", bound)
    .input("l_min", l_min as f64))
}

/// Full report: closed-form verdicts plus the sampled positivity oracle and
/// the Choi spectrum.
pub fn classify(p: &MapParams, opts: &ClassifyOptions) -> ClassificationReport {
    let evidence = verify_positivity_numeric(p, opts.samples, opts.tol, opts.seed);
    let (positive, two_positive, completely_positive, atomic, decomposable) =
        verdicts(p, Some(&evidence));
    ClassificationReport {
        params: p.clone(),
        positive,
        two_positive,
        completely_positive,
        atomic,
        decomposable,
    }
}

impl ClassificationReport {
    /// Logical closure: CP ⇒ 2-positive ⇒ positive; atomic ⇒ ¬decomposable ∧ ¬CP.
    pub fn check_consistency(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InternalConsistency(msg.to_string()));
        if self.completely_positive.is_yes() && !self.two_positive.is_yes() {
            return fail("CP without 2-positivity");
        }
        if self.two_positive.is_yes() && !self.positive.is_yes() {
            return fail("2-positive without positivity");
        }
        if self.atomic.is_yes() && (!self.decomposable.is_no() || !self.completely_positive.is_no()) {
            return fail("atomic but not excluded from decomposable/CP");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn tau(n: usize, k: usize, a: f64, c: Vec<f64>) -> MapParams {
        MapParams::new(Permutation::tau(n, k).unwrap(), a, c).unwrap()
    }

    #[test]
    fn cp_examples() {
        assert!(cp_verdict(&tau(3, 2, 3.0, vec![1.0; 3])).is_yes());
        assert!(cp_verdict(&tau(3, 2, 2.99, vec![1.0; 3])).is_no());
        let id = MapParams::new(Permutation::identity(3).unwrap(), 3.0, vec![1.0; 3]).unwrap();
        let v = cp_verdict(&id);
        assert!(v.is_yes());
        let lam = v.certificate.inputs["schur_min_eigenvalue"];
        assert!((lam - 1.0).abs() < 1e-12);
        assert_eq!(v.certificate.kind, CertificateKind::Both);
    }

    #[test]
    fn schur_examples() {
        let id = |a: f64, c: Vec<f64>| {
            MapParams::new(Permutation::identity(c.len()).unwrap(), a, c).unwrap()
        };
        let m = schur_matrix(&id(3.0, vec![1.0; 3]));
        let want = &CMatrix::identity(3).scale(4.0) - &CMatrix::ones(3);
        assert_eq!(m, want);
        let m = schur_matrix(&id(1.0, vec![1.0; 2]));
        assert!(min_eigenvalue(&m).unwrap().abs() < 1e-14);
        let m = schur_matrix(&id(0.5, vec![1.0; 2]));
        assert!((min_eigenvalue(&m).unwrap() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn atomic_examples() {
        assert!(atomic_verdict(&tau(3, 2, 2.0, vec![1.0; 3])).is_yes());
        // τ₂⁴ = (1 3)(2 4): the atomicity criterion does not apply, but the
        // map is an involution case with an explicit decomposition.
        let v = atomic_verdict(&tau(4, 2, 3.0, vec![1.0; 4]));
        assert!(v.is_no());
        assert_eq!(v.certificate.criterion, "decomposable maps are not atomic");
        // (1 2)(3 4 5) with a above the threshold: l_min = 2, no involution.
        let s = Permutation::from_images(&[2, 1, 4, 5, 3]).unwrap();
        let v = atomic_verdict(&MapParams::new(s, 4.5, vec![1.0; 5]).unwrap());
        assert_eq!(v.status, Status::Unknown);
        assert!(atomic_verdict(&tau(4, 1, 3.5, vec![1.0; 4])).is_yes());
        assert!(atomic_verdict(&tau(4, 1, 4.0, vec![1.0; 4])).is_no());
    }

    #[test]
    fn uniform_atomic_examples() {
        let p = MapParams::uniform(Permutation::tau(6, 2).unwrap(), 2.0).unwrap();
        assert!(atomic_uniform_c(&p).unwrap().is_yes());
        let p = MapParams::uniform(Permutation::tau(4, 2).unwrap(), 1.0).unwrap();
        assert_eq!(atomic_uniform_c(&p).unwrap().status, Status::Unknown);
        let d = MapParams::delta_n(4).unwrap();
        let v = atomic_uniform_c(&d).unwrap();
        assert!(v.is_no());
        assert!(cp_verdict(&d).is_yes());
        let bad = tau(3, 1, 2.0, vec![1.0, 2.0, 1.0]);
        assert!(matches!(atomic_uniform_c(&bad), Err(Error::Parameter { .. })));
    }

    #[test]
    fn uniform_positivity_beyond_threshold() {
        // a = 4 is below max(5, 6 - 2) = 5 yet positive via the uniform criterion.
        let p = MapParams::uniform(Permutation::tau(6, 2).unwrap(), 2.0).unwrap();
        let report = classify(&p, &ClassifyOptions { samples: 500, ..Default::default() });
        assert!(report.positive.is_yes());
        assert!(report.atomic.is_yes());
        assert!(report.decomposable.is_no());
        report.check_consistency().unwrap();
    }

    #[test]
    fn flagship_report() {
        let report = classify(&tau(3, 2, 2.0, vec![1.0; 3]), &ClassifyOptions::default());
        assert!(report.positive.is_yes());
        assert_eq!(report.positive.certificate.kind, CertificateKind::Both);
        assert!(report.completely_positive.is_no());
        assert!(report.two_positive.is_no());
        assert!(report.atomic.is_yes());
        assert!(report.decomposable.is_no());
        report.check_consistency().unwrap();
    }

    #[test]
    fn involution_report_is_decomposable() {
        let s = Permutation::from_images(&[2, 1, 4, 3]).unwrap();
        let p = MapParams::new(s, 3.0, vec![1.0; 4]).unwrap();
        let report = classify(&p, &ClassifyOptions { samples: 200, ..Default::default() });
        assert!(report.decomposable.is_yes());
        assert!(report.atomic.is_no());
        report.check_consistency().unwrap();
    }

    #[test]
    fn general_sigma_below_threshold_is_unknown() {
        // (1 2 3)(4 5): l_min = 2, not a full cycle, a below threshold.
        let s = Permutation::from_images(&[2, 3, 1, 5, 4]).unwrap();
        let p = MapParams::new(s, 3.5, vec![1.0, 1.0, 1.0, 2.0, 0.7]).unwrap();
        let v = positivity_verdict(&p, None);
        assert_eq!(v.status, Status::Unknown);
    }

    #[test]
    fn non_identity_fixed_point_two_positive_unknown() {
        let s = Permutation::from_images(&[2, 3, 1, 4]).unwrap();
        let p = MapParams::new(s, 3.0, vec![1.0; 4]).unwrap();
        let cp = cp_verdict(&p);
        assert_eq!(cp.certificate.kind, CertificateKind::NumericOracle);
        let two = two_positive_verdict(&p, &cp);
        if !cp.is_yes() {
            assert_eq!(two.status, Status::Unknown);
        }
    }
}
