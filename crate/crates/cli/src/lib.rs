//! Command-line frontend for `posmaps`. Every subcommand reads a map file
//! such as `{"n":3,"sigma":"tau:3:2","a":2.0,"c":[1,1,1]}` and writes a JSON
//! report to a file or to stdout.
//!
//! Exit codes: 0 when the requested results were computed (unknown verdicts
//! included), 1 on I/O or parse errors, 2 when a certificate was requested
//! outside its preconditions, 3 when an internal consistency check fails.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::{json, Value};

use posmaps::classify::{classify, decompose_involution, ClassifyOptions, Verdict};
use posmaps::dtype::{choi, choi_spectrum_closed_form};
use posmaps::matlin::{hermitian_spectrum, CMatrix};
use posmaps::{spa, witness, Error, MapParams};

pub const TOOL: &str = "posmaps";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Positivity, 2-positivity, CP, atomicity and decomposability verdicts.
    Classify,
    /// Spectrum of the Choi matrix.
    Spectrum,
    /// Decomposability certificate for an involution σ.
    Decompose,
    /// Structural physical approximation.
    Spa {
        /// Also build the separable decomposition (requires a = n-1).
        #[arg(long)]
        decompose: bool,
    },
    /// Entanglement witness C_{T∘Θ}/n.
    Witness {
        /// Certify optimality through the spanning property.
        #[arg(long)]
        certify: bool,
        /// Density matrix file; reports Tr(W ρ).
        #[arg(long, value_name = "RHO_JSON")]
        state: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Spectrum => "spectrum",
            Command::Decompose => "decompose",
            Command::Spa { .. } => "spa",
            Command::Witness { .. } => "witness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "posmaps", version, about = "Generalized D-type positive maps on M_n")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Map parameters JSON file.
    #[arg(long = "map", global = true, value_name = "PARAMS_JSON")]
    pub map_path: Option<PathBuf>,
    /// Random samples for the positivity oracle.
    #[arg(long, global = true, default_value_t = 2000)]
    pub samples: usize,
    /// Numeric tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent or "-".
    #[arg(long = "out", global = true, value_name = "FILE")]
    pub out_path: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, source: std::io::Error },
    Parse { what: String, message: String },
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Core(Error::Precondition(_)) => 2,
            CliError::Core(Error::InternalConsistency(_)) => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "cannot access {}: {source}", path.display()),
            CliError::Parse { what, message } => write!(f, "cannot parse {what}: {message}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    generated_at: String,
    input: &'a RawValue,
    options: Value,
    certificates: BTreeMap<String, Value>,
    result: Value,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn verdict_summary(v: &Verdict) -> Value {
    json!({
        "status": v.status,
        "kind": v.certificate.kind,
        "criterion": v.certificate.criterion,
    })
}

type Sections = (BTreeMap<String, Value>, Value);

fn classify_section(p: &MapParams, cfg: &RunConfig) -> Result<Sections, CliError> {
    let opts = ClassifyOptions {
        samples: cfg.samples,
        tol: cfg.tol,
        seed: cfg.seed,
    };
    let report = classify(p, &opts);
    report.check_consistency()?;
    let certs = [
        ("positive", &report.positive),
        ("two_positive", &report.two_positive),
        ("completely_positive", &report.completely_positive),
        ("atomic", &report.atomic),
        ("decomposable", &report.decomposable),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), verdict_summary(v)))
    .collect();
    Ok((certs, to_value(&report)))
}

fn spectrum_section(p: &MapParams, cfg: &RunConfig) -> Result<Sections, CliError> {
    let c = choi(p, false);
    let spec = hermitian_spectrum(&c.matrix)?;
    let closed = choi_spectrum_closed_form(p);
    let deviation = closed.as_ref().map(|want| {
        want.iter()
            .zip(&spec.eigenvalues)
            .map(|(w, g)| (w - g).abs())
            .fold(0.0, f64::max)
    });
    let min = spec.eigenvalues.first().copied().unwrap_or(0.0);
    let mut certs = BTreeMap::new();
    if let Some(dev) = deviation {
        certs.insert(
            "closed_form_spectrum".to_string(),
            json!({
                "criterion": "l_min(sigma) >= 2: spectrum {0^(n^2-2n), a^(n-1), a-n, c_1..c_n}",
                "max_deviation": dev,
                "agrees": dev <= 1e-8,
            }),
        );
    }
    let result = json!({
        "eigenvalues": spec.eigenvalues,
        "residual": spec.residual,
        "trace": c.trace(),
        "min_eigenvalue": min,
        "psd": min >= -cfg.tol,
        "closed_form": closed,
    });
    Ok((certs, result))
}

fn decompose_section(p: &MapParams) -> Result<Sections, CliError> {
    let cert = decompose_involution(p)?;
    let mut certs = BTreeMap::new();
    certs.insert(
        "decomposable".to_string(),
        json!({
            "criterion": "sigma an involution: C = P + sum Q_i with P >= 0 and every Q_i^Gamma >= 0",
            "p_min_eigenvalue": cert.p_min_eigenvalue,
            "reconstruction_residual": cert.reconstruction_residual,
        }),
    );
    Ok((certs, to_value(&cert)))
}

fn spa_section(p: &MapParams, decompose: bool) -> Result<Sections, CliError> {
    let state = spa::spa_state(p)?;
    let mut certs = BTreeMap::new();
    certs.insert(
        "lambda_star".to_string(),
        json!({
            "criterion": "lambda* = 1/(1 + n^2 ||W^-||), W = C/Tr C",
            "value": state.lambda_star,
            "map_positivity": state.map_positivity,
        }),
    );
    let mut result = json!({ "state": to_value(&state) });
    if decompose {
        let d = spa::separable_decomposition(p)?;
        d.verify(1e-10)?;
        certs.insert(
            "separable".to_string(),
            json!({
                "criterion": "a = n-1: SPA = normalization * (sum sigma_ij + sum c E_ii x E_jj), each term PSD and PPT",
                "normalization": d.normalization,
                "residual": d.residual,
            }),
        );
        result["decomposition"] = to_value(&d);
    }
    Ok((certs, result))
}

fn witness_section(p: &MapParams, certify: bool, state: Option<&Path>) -> Result<Sections, CliError> {
    let w = witness::witness(p);
    let mut certs = BTreeMap::new();
    let mut result = json!({ "witness": to_value(&w) });
    if let Some(path) = state {
        let text = read(path)?;
        let rho: CMatrix = serde_json::from_str(&text).map_err(|e| CliError::Parse {
            what: format!("state file {}", path.display()),
            message: e.to_string(),
        })?;
        result["state_expectation"] = json!(witness::expectation(&w, &rho)?);
    }
    if certify {
        let cert = witness::certify_optimality(p)?;
        certs.insert(
            "optimality".to_string(),
            json!({
                "criterion": "zero-expectation product vectors span C^n (x) C^n",
                "verdict": cert.verdict,
                "span_rank": cert.span_rank,
                "note": cert.note,
            }),
        );
        result["optimality"] = to_value(&cert);
    }
    Ok((certs, result))
}

/// Builds the report text for `cfg` (timestamp included).
pub fn render(cfg: &RunConfig) -> Result<String, CliError> {
    let map_path = cfg.map_path.as_deref().ok_or_else(|| CliError::Parse {
        what: "arguments".into(),
        message: "missing required option --map".into(),
    })?;
    let text = read(map_path)?;
    let parse_err = |e: serde_json::Error| CliError::Parse {
        what: format!("map file {}", map_path.display()),
        message: e.to_string(),
    };
    let input: Box<RawValue> = serde_json::from_str(&text).map_err(parse_err)?;
    let p: MapParams = serde_json::from_str(input.get()).map_err(parse_err)?;

    let (certificates, result) = match &cfg.command {
        Command::Classify => classify_section(&p, cfg)?,
        Command::Spectrum => spectrum_section(&p, cfg)?,
        Command::Decompose => decompose_section(&p)?,
        Command::Spa { decompose } => spa_section(&p, *decompose)?,
        Command::Witness { certify, state } => witness_section(&p, *certify, state.as_deref())?,
    };
    let report = Report {
        tool: TOOL,
        version: VERSION,
        command: cfg.command.name(),
        generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        input: &input,
        options: json!({ "samples": cfg.samples, "tol": cfg.tol, "seed": cfg.seed }),
        certificates,
        result,
    };
    let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
    out.push('\n');
    Ok(out)
}

fn write_out(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match cfg.out_path.as_deref() {
        Some(path) if path != Path::new("-") => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        _ => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

/// Runs one subcommand and returns the process exit code. Errors go to stderr.
pub fn run(cfg: &RunConfig) -> i32 {
    match render(cfg).and_then(|text| write_out(cfg, &text)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
