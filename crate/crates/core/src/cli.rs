//! Running parsed configs and writing their reports.
//!
//! [`run_command`] turns an [`ExperimentConfig`] into a [`Bundle`] of JSON
//! documents, one per claim or check. [`emit_report`] writes each document as
//! `<name>.json` in the output directory, through a temporary file renamed
//! into place.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    BallInclusionConfig, CheckDominateConfig, CheckPrecedeConfig, ConfigError, ExperimentConfig, HolderConfig,
    InclusionConfig, NormConfig, OracleConfig, ProbeConfig, TranslationConfig, ValidateWeightConfig,
    ValidateYoungConfig,
};
use crate::error::Error;
use crate::grid::{sample_seeded, DistributionProfile, FunctionExpr, GridFunction, GridSpec};
use crate::norms::Gauge;
use crate::theorems::{self, TestFunction, VerificationReport};
use crate::weight::{check_dominates, check_submultiplicative, Weight};
use crate::young::{check_delta2, check_precedes, validate_young, YoungFunction};

/// Process exit codes.
pub mod exit {
    pub const PASSED: i32 = 0;
    pub const FAILED: i32 = 1;
    pub const ERROR: i32 = 2;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{command}: {source}")]
    Run {
        command: &'static str,
        #[source]
        source: Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        exit::ERROR
    }
}

/// One output document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    /// File stem of the report.
    pub name: String,
    /// Verdict, if the document carries one.
    pub passed: Option<bool>,
    pub result: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub command: &'static str,
    pub seed: u64,
    pub documents: Vec<Document>,
    /// `(file stem, profile)` pairs written with `--profile-csv`.
    pub profiles: Vec<(String, DistributionProfile)>,
}

impl Bundle {
    pub fn all_passed(&self) -> bool {
        self.documents.iter().all(|d| d.passed != Some(false))
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            exit::PASSED
        } else {
            exit::FAILED
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn report_document(r: VerificationReport) -> Document {
    Document {
        name: r.claim.id().to_string(),
        passed: Some(r.passed),
        result: to_value(&r),
    }
}

fn gauge_of(phi: &Option<YoungFunction>, p: Option<f64>) -> Gauge {
    match (phi, p) {
        (Some(phi), _) => Gauge::Orlicz(phi.clone()),
        (None, Some(p)) => Gauge::Lebesgue(p),
        (None, None) => unreachable!("validated config has a gauge"),
    }
}

fn sample_all(exprs: &[FunctionExpr], prefix: &str, grid: &GridSpec, seed: u64) -> crate::Result<Vec<TestFunction>> {
    exprs
        .iter()
        .enumerate()
        .map(|(i, e)| Ok(TestFunction::new(format!("{prefix}[{i}]"), sample_seeded(e, grid, seed)?)))
        .collect()
}

/// Runs a validated config. Deterministic given `cfg` and `seed`.
pub fn run_command(cfg: &ExperimentConfig, seed: u64) -> Result<Bundle, CliError> {
    let command = cfg.command();
    let mut profiles = Vec::new();
    let documents = dispatch(cfg, seed, &mut profiles).map_err(|source| CliError::Run { command, source })?;
    Ok(Bundle {
        command,
        seed,
        documents,
        profiles,
    })
}

fn dispatch(
    cfg: &ExperimentConfig,
    seed: u64,
    profiles: &mut Vec<(String, DistributionProfile)>,
) -> crate::Result<Vec<Document>> {
    Ok(match cfg {
        ExperimentConfig::Norm(NormConfig { grid, f, u, phi, p }) => {
            let gauge = gauge_of(phi, *p);
            let u = u.clone().unwrap_or_else(|| Weight::one(grid.n));
            let f = sample_seeded(f, grid, seed)?;
            let weighted = f.apply_weight(&u)?;
            let profile = weighted.distribution_profile();
            let r = gauge.norm_of_profile(&profile);
            let doc = Document {
                name: "norm".into(),
                passed: None,
                result: json!({
                    "gauge": gauge.label(),
                    "weight": u.label(),
                    "grid": grid.describe(),
                    "levels": profile.levels.len(),
                    "norm": to_value(&r),
                }),
            };
            profiles.push(("norm_profile".into(), profile));
            vec![doc]
        }
        ExperimentConfig::Oracle(OracleConfig { phi, ball, grid, u }) => {
            let value = theorems::char_norm_oracle(phi, ball)?;
            let mut docs = vec![Document {
                name: "oracle".into(),
                passed: None,
                result: json!({ "phi": phi.label(), "ball": ball.label(), "value": value }),
            }];
            if let Some(grid) = grid {
                let u = u.clone().unwrap_or_else(|| Weight::one(grid.n));
                docs.push(report_document(theorems::verify_char_norm(phi, &u, ball, grid)?));
            }
            docs
        }
        ExperimentConfig::ValidateYoung(ValidateYoungConfig { phi }) => {
            let v = validate_young(phi);
            let delta2 = v.passed.then(|| check_delta2(phi));
            vec![Document {
                name: "validate-young".into(),
                passed: Some(v.passed),
                result: json!({ "phi": phi.label(), "validation": to_value(&v), "delta2": to_value(&delta2) }),
            }]
        }
        ExperimentConfig::ValidateWeight(ValidateWeightConfig { u, samples }) => {
            let r = check_submultiplicative(u, *samples);
            vec![Document {
                name: "validate-weight".into(),
                passed: Some(r.passed),
                result: json!({ "u": u.label(), "submultiplicative": to_value(&r) }),
            }]
        }
        ExperimentConfig::CheckPrecede(CheckPrecedeConfig { phi1, phi2 }) => {
            let r = check_precedes(phi1, phi2);
            vec![Document {
                name: "check-precede".into(),
                passed: Some(r.holds()),
                result: json!({ "phi1": phi1.label(), "phi2": phi2.label(), "precedence": to_value(&r) }),
            }]
        }
        ExperimentConfig::CheckDominate(CheckDominateConfig { u1, u2 }) => {
            let r = check_dominates(u1, u2)?;
            vec![Document {
                name: "check-dominate".into(),
                passed: Some(r.holds()),
                result: json!({ "u1": u1.label(), "u2": u2.label(), "domination": to_value(&r) }),
            }]
        }
        ExperimentConfig::VerifyInclusion(InclusionConfig { grid, u1, u2, p, phi1, phi2, tests }) => {
            let tests = sample_all(tests, "tests", grid, seed)?;
            let r = match (p, phi1, phi2) {
                (Some(p), _, _) => theorems::verify_inclusion_lebesgue(*p, u1, u2, &tests)?,
                (None, Some(a), Some(b)) => theorems::verify_inclusion_orlicz(a, b, u1, u2, &tests)?,
                _ => unreachable!("validated config has spaces"),
            };
            vec![report_document(r)]
        }
        ExperimentConfig::VerifyHolder(HolderConfig { grid, phi1, phi2, phi3, u1, u2, u3, x, pairs }) => {
            let pairs = pairs
                .iter()
                .enumerate()
                .map(|(i, [a, b])| {
                    Ok((
                        TestFunction::new(format!("pairs[{i}][0]"), sample_seeded(a, grid, seed)?),
                        TestFunction::new(format!("pairs[{i}][1]"), sample_seeded(b, grid, seed)?),
                    ))
                })
                .collect::<crate::Result<Vec<_>>>()?;
            vec![report_document(theorems::verify_holder(
                phi1, phi2, phi3, u1, u2, u3, &pairs, x,
            )?)]
        }
        ExperimentConfig::VerifyBallInclusion(BallInclusionConfig { grid, spaces, x, tests }) => {
            let tests = sample_all(tests, "tests", grid, seed)?;
            vec![report_document(theorems::verify_ball_inclusion(spaces, x, grid, &tests)?)]
        }
        ExperimentConfig::VerifyTranslation(TranslationConfig { grid, f, u, phi, p, shifts }) => {
            let gauge = gauge_of(phi, *p);
            let f: GridFunction = sample_seeded(f, grid, seed)?;
            profiles.push(("translation_profile".into(), f.apply_weight(u)?.distribution_profile()));
            vec![report_document(theorems::verify_translation_bounds(&gauge, u, &f, shifts)?)]
        }
        ExperimentConfig::ProbeNoInclusion(ProbeConfig { p1, p2, u }) => {
            vec![report_document(theorems::probe_no_global_inclusion(*p1, *p2, u)?)]
        }
    })
}

/// RFC 3339 time of day in UTC, second precision.
pub fn timestamp() -> String {
    humantime::format_rfc3339_seconds(SystemTime::now()).to_string()
}

/// Full JSON text of a document as written to disk.
pub fn render(bundle: &Bundle, doc: &Document, timestamp: &str) -> String {
    let body = json!({
        "command": bundle.command,
        "name": doc.name,
        "seed": bundle.seed,
        "timestamp": timestamp,
        "passed": doc.passed,
        "result": doc.result,
    });
    let mut text = serde_json::to_string_pretty(&body).expect("json values serialize");
    text.push('\n');
    text
}

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Writes one JSON file per document (and the profile CSVs when asked).
/// Returns the written paths.
pub fn emit_report(bundle: &Bundle, out_dir: &Path, profile_csv: bool) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let stamp = timestamp();
    let mut written = Vec::new();
    for doc in &bundle.documents {
        let path = out_dir.join(format!("{}.json", doc.name));
        write_atomic(&path, &render(bundle, doc, &stamp))?;
        written.push(path);
    }
    if profile_csv {
        for (name, profile) in &bundle.profiles {
            let path = out_dir.join(format!("{name}.csv"));
            write_atomic(&path, &profile.to_csv())?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Reads, parses, runs and emits; returns the process exit code.
pub fn run(command: &str, config: &Path, out_dir: &Path, profile_csv: bool, seed: u64) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(config).map_err(|source| CliError::Io {
        path: config.to_path_buf(),
        source,
    })?;
    let cfg = crate::config::parse_config(&text)?;
    if cfg.command() != command {
        return Err(CliError::Usage(format!(
            "command `{command}` does not match the config's command `{}`",
            cfg.command()
        )));
    }
    let bundle = run_command(&cfg, seed)?;
    let paths = emit_report(&bundle, out_dir, profile_csv)?;
    for (doc, path) in bundle.documents.iter().zip(&paths) {
        let verdict = match doc.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "done",
        };
        println!("{verdict} {} -> {}", doc.name, path.display());
    }
    Ok(bundle.exit_code())
}
