//! Experiment configuration documents.
//!
//! A config is one JSON object whose `command` field selects the variant.
//! [`parse_config`] reports syntax errors with the path of the offending key
//! and then runs semantic checks, collecting every field-level error.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::{Ball, FunctionExpr, GridSpec};
use crate::theorems::BallInclusionSpaces;
use crate::weight::Weight;
use crate::young::YoungFunction;

fn one_dimensional_one() -> Weight {
    Weight::one(1)
}

fn default_samples() -> usize {
    crate::theorems::SUBMULT_SAMPLES
}

macro_rules! bodies {
    ($($(#[$doc:meta])* $name:ident { $($(#[$fattr:meta])* $field:ident : $ty:ty),* $(,)? })*) => {
        $(
            $(#[$doc])*
            #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
            #[serde(deny_unknown_fields)]
            pub struct $name {
                $($(#[$fattr])* pub $field: $ty,)*
            }
        )*
    };
}

bodies! {
    /// Weak Orlicz norm (`phi`) or weak Lebesgue norm (`p`) of `f` with
    /// weight `u` (default `u ≡ 1`).
    NormConfig {
        grid: GridSpec,
        f: FunctionExpr,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<Weight>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<YoungFunction>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
    }
    /// `1/Φ⁻¹(1/|B|)`; with `grid` also compares against the grid norm of
    /// `χ_B/u`.
    OracleConfig {
        phi: YoungFunction,
        ball: Ball,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<Weight>,
    }
    ValidateYoungConfig {
        phi: YoungFunction,
    }
    ValidateWeightConfig {
        u: Weight,
        #[serde(default = "default_samples")]
        samples: usize,
    }
    CheckPrecedeConfig {
        phi1: YoungFunction,
        phi2: YoungFunction,
    }
    CheckDominateConfig {
        u1: Weight,
        u2: Weight,
    }
    /// Weighted inclusion: Lebesgue when `p` is given, Orlicz when `phi1`
    /// and `phi2` are.
    InclusionConfig {
        grid: GridSpec,
        u1: Weight,
        u2: Weight,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi1: Option<YoungFunction>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi2: Option<YoungFunction>,
        tests: Vec<FunctionExpr>,
    }
    HolderConfig {
        grid: GridSpec,
        phi1: YoungFunction,
        phi2: YoungFunction,
        phi3: YoungFunction,
        u1: Weight,
        u2: Weight,
        u3: Weight,
        x: Ball,
        pairs: Vec<[FunctionExpr; 2]>,
    }
    BallInclusionConfig {
        grid: GridSpec,
        spaces: BallInclusionSpaces,
        x: Ball,
        tests: Vec<FunctionExpr>,
    }
    /// Translation bound under the weak Orlicz (`phi`) or weak Lebesgue (`p`)
    /// gauge; shifts are in cells.
    TranslationConfig {
        grid: GridSpec,
        f: FunctionExpr,
        u: Weight,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<YoungFunction>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        shifts: Vec<Vec<i64>>,
    }
    /// `u` only fixes the dimension (default `n = 1`).
    ProbeConfig {
        p1: f64,
        p2: f64,
        #[serde(default = "one_dimensional_one")]
        u: Weight,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Norm(NormConfig),
    Oracle(OracleConfig),
    ValidateYoung(ValidateYoungConfig),
    ValidateWeight(ValidateWeightConfig),
    CheckPrecede(CheckPrecedeConfig),
    CheckDominate(CheckDominateConfig),
    VerifyInclusion(InclusionConfig),
    VerifyHolder(HolderConfig),
    VerifyBallInclusion(BallInclusionConfig),
    VerifyTranslation(TranslationConfig),
    ProbeNoInclusion(ProbeConfig),
}

impl ExperimentConfig {
    /// Command name as used on the command line.
    pub fn command(&self) -> &'static str {
        match self {
            ExperimentConfig::Norm(_) => "norm",
            ExperimentConfig::Oracle(_) => "oracle",
            ExperimentConfig::ValidateYoung(_) => "validate-young",
            ExperimentConfig::ValidateWeight(_) => "validate-weight",
            ExperimentConfig::CheckPrecede(_) => "check-precede",
            ExperimentConfig::CheckDominate(_) => "check-dominate",
            ExperimentConfig::VerifyInclusion(_) => "verify-inclusion",
            ExperimentConfig::VerifyHolder(_) => "verify-holder",
            ExperimentConfig::VerifyBallInclusion(_) => "verify-ball-inclusion",
            ExperimentConfig::VerifyTranslation(_) => "verify-translation",
            ExperimentConfig::ProbeNoInclusion(_) => "probe-no-inclusion",
        }
    }
}

/// Every accepted command name.
pub const COMMANDS: [&str; 11] = [
    "norm",
    "oracle",
    "validate-young",
    "validate-weight",
    "check-precede",
    "check-dominate",
    "verify-inclusion",
    "verify-holder",
    "verify-ball-inclusion",
    "verify-translation",
    "probe-no-inclusion",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    /// Dotted path to the offending key, e.g. `phi.p` or `tests[2]`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "at {}: {}", self.path, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("config parse error {0}")]
    Parse(FieldError),
    #[error("invalid config:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<FieldError>),
}

impl ConfigError {
    pub fn fields(&self) -> Vec<&FieldError> {
        match self {
            ConfigError::Parse(e) => vec![e],
            ConfigError::Invalid(es) => es.iter().collect(),
        }
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let parse_error = |path: &str, message: String| {
        ConfigError::Parse(FieldError {
            path: path.to_string(),
            message,
        })
    };
    let mut doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| parse_error("", e.to_string()))?;
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| parse_error("", "config must be a JSON object".into()))?;
    let command = match obj.remove("command") {
        Some(serde_json::Value::String(c)) => c,
        Some(other) => return Err(parse_error("command", format!("expected a string, got {other}"))),
        None => return Err(parse_error("command", "missing field `command`".into())),
    };
    let cfg = parse_body(&command, doc)?;
    let errors = validate(&cfg);
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Invalid(errors))
    }
}

fn body<T: serde::de::DeserializeOwned>(doc: serde_json::Value) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::Parse(FieldError {
            path: if path == "." { String::new() } else { path },
            message: e.into_inner().to_string(),
        })
    })
}

fn parse_body(command: &str, doc: serde_json::Value) -> Result<ExperimentConfig, ConfigError> {
    use ExperimentConfig as E;
    Ok(match command {
        "norm" => E::Norm(body(doc)?),
        "oracle" => E::Oracle(body(doc)?),
        "validate-young" => E::ValidateYoung(body(doc)?),
        "validate-weight" => E::ValidateWeight(body(doc)?),
        "check-precede" => E::CheckPrecede(body(doc)?),
        "check-dominate" => E::CheckDominate(body(doc)?),
        "verify-inclusion" => E::VerifyInclusion(body(doc)?),
        "verify-holder" => E::VerifyHolder(body(doc)?),
        "verify-ball-inclusion" => E::VerifyBallInclusion(body(doc)?),
        "verify-translation" => E::VerifyTranslation(body(doc)?),
        "probe-no-inclusion" => E::ProbeNoInclusion(body(doc)?),
        other => {
            return Err(ConfigError::Parse(FieldError {
                path: "command".into(),
                message: format!("unknown command `{other}`, expected one of {}", COMMANDS.join(", ")),
            }))
        }
    })
}

/// Collects field-level errors of a deserialized config.
pub fn validate(cfg: &ExperimentConfig) -> Vec<FieldError> {
    let mut v = Validator::default();
    match cfg {
        ExperimentConfig::Norm(NormConfig { grid, f, u, phi, p }) => {
            if v.grid(grid) {
                v.expr("f", f, grid);
                if let Some(u) = u {
                    v.weight_in("u", u, grid.n);
                }
            }
            v.gauge(phi.as_ref(), *p, "phi", "p");
        }
        ExperimentConfig::Oracle(OracleConfig { phi, ball, grid, u }) => {
            v.young("phi", phi);
            v.ball("ball", ball);
            if let Some(grid) = grid {
                if v.grid(grid) {
                    v.ball_in("ball", ball, grid);
                    if let Some(u) = u {
                        v.weight_in("u", u, grid.n);
                    }
                }
            } else if u.is_some() {
                v.push("u", "a weight needs a grid to compare against");
            }
        }
        // parameter problems are part of the validation output
        ExperimentConfig::ValidateYoung(_) => {}
        ExperimentConfig::ValidateWeight(ValidateWeightConfig { u, samples }) => {
            v.weight("u", u);
            if *samples == 0 {
                v.push("samples", "must be positive");
            }
        }
        ExperimentConfig::CheckPrecede(CheckPrecedeConfig { phi1, phi2 }) => {
            v.young("phi1", phi1);
            v.young("phi2", phi2);
        }
        ExperimentConfig::CheckDominate(CheckDominateConfig { u1, u2 }) => {
            v.weight("u1", u1);
            v.weight("u2", u2);
            if u1.n != u2.n {
                v.push("u2.n", format!("dimension {} differs from u1.n = {}", u2.n, u1.n));
            }
        }
        ExperimentConfig::VerifyInclusion(InclusionConfig { grid, u1, u2, p, phi1, phi2, tests }) => {
            if v.grid(grid) {
                v.weight_in("u1", u1, grid.n);
                v.weight_in("u2", u2, grid.n);
                v.exprs("tests", tests, grid);
            }
            match (p, phi1, phi2) {
                (Some(p), None, None) => v.exponent("p", *p),
                (None, Some(a), Some(b)) => {
                    v.young("phi1", a);
                    v.young("phi2", b);
                }
                _ => v.push("", "give either `p`, or both `phi1` and `phi2`"),
            }
        }
        ExperimentConfig::VerifyHolder(HolderConfig { grid, phi1, phi2, phi3, u1, u2, u3, x, pairs }) => {
            for (name, phi) in [("phi1", phi1), ("phi2", phi2), ("phi3", phi3)] {
                v.young(name, phi);
            }
            v.ball("x", x);
            if v.grid(grid) {
                for (name, u) in [("u1", u1), ("u2", u2), ("u3", u3)] {
                    v.weight_in(name, u, grid.n);
                }
                v.ball_in("x", x, grid);
                for (i, [a, b]) in pairs.iter().enumerate() {
                    v.expr(&format!("pairs[{i}][0]"), a, grid);
                    v.expr(&format!("pairs[{i}][1]"), b, grid);
                }
            }
        }
        ExperimentConfig::VerifyBallInclusion(BallInclusionConfig { grid, spaces, x, tests }) => {
            v.ball("x", x);
            if v.grid(grid) {
                v.ball_in("x", x, grid);
                v.exprs("tests", tests, grid);
                match spaces {
                    BallInclusionSpaces::Orlicz { phi1, phi2, phi_h, u1, u2, u_q } => {
                        v.young("spaces.phi1", phi1);
                        v.young("spaces.phi2", phi2);
                        v.young("spaces.phi_h", phi_h);
                        v.weight_in("spaces.u1", u1, grid.n);
                        v.weight_in("spaces.u2", u2, grid.n);
                        v.weight_in("spaces.u_q", u_q, grid.n);
                    }
                    BallInclusionSpaces::Lebesgue { p1, p2, u1, u2 } => {
                        v.exponent("spaces.p1", *p1);
                        v.exponent("spaces.p2", *p2);
                        if p1 <= p2 {
                            v.push("spaces.p1", format!("must exceed p2 = {p2}, got {p1}"));
                        }
                        v.weight_in("spaces.u1", u1, grid.n);
                        v.weight_in("spaces.u2", u2, grid.n);
                    }
                }
            }
        }
        ExperimentConfig::VerifyTranslation(TranslationConfig { grid, f, u, phi, p, shifts }) => {
            if v.grid(grid) {
                v.expr("f", f, grid);
                v.weight_in("u", u, grid.n);
                for (i, s) in shifts.iter().enumerate() {
                    if s.len() != grid.n {
                        v.push(
                            &format!("shifts[{i}]"),
                            format!("shift has {} components, grid dimension is {}", s.len(), grid.n),
                        );
                    }
                }
            }
            v.gauge(phi.as_ref(), *p, "phi", "p");
        }
        ExperimentConfig::ProbeNoInclusion(ProbeConfig { p1, p2, u }) => {
            v.exponent("p1", *p1);
            v.exponent("p2", *p2);
            if p1 == p2 {
                v.push("p2", format!("must differ from p1 = {p1}"));
            }
            v.weight("u", u);
        }
    }
    v.errors
}

#[derive(Default)]
struct Validator {
    errors: Vec<FieldError>,
}

impl Validator {
    fn push(&mut self, path: &str, message: impl Into<String>) {
        self.errors.push(FieldError {
            path: path.to_string(),
            message: message.into(),
        });
    }

    /// Records `err` under `base`, extended by the parameter name it carries.
    fn error(&mut self, base: &str, err: Error) {
        let name = match &err {
            Error::Domain { name, .. } | Error::InvalidParameter { name, .. } => Some(*name),
            _ => None,
        };
        let path = match (base, name) {
            ("", Some(n)) => n.to_string(),
            (b, Some(n)) => format!("{b}.{n}"),
            (b, None) => b.to_string(),
        };
        self.push(&path, err.to_string());
    }

    fn check(&mut self, base: &str, r: crate::error::Result<()>) -> bool {
        match r {
            Ok(()) => true,
            Err(e) => {
                self.error(base, e);
                false
            }
        }
    }

    fn grid(&mut self, grid: &GridSpec) -> bool {
        self.check("grid", grid.check())
    }

    fn young(&mut self, path: &str, phi: &YoungFunction) {
        self.check(path, phi.check_parameters());
    }

    fn weight(&mut self, path: &str, u: &Weight) -> bool {
        self.check(path, u.check_parameters())
    }

    fn weight_in(&mut self, path: &str, u: &Weight, n: usize) {
        if self.weight(path, u) && u.n != n {
            self.push(&format!("{path}.n"), format!("dimension {} differs from grid.n = {n}", u.n));
        }
    }

    fn ball(&mut self, path: &str, ball: &Ball) {
        self.check(path, ball.check());
    }

    fn ball_in(&mut self, path: &str, ball: &Ball, grid: &GridSpec) {
        if ball.check().is_ok() {
            self.check(path, ball.ensure_inside(grid));
        }
    }

    fn expr(&mut self, path: &str, f: &FunctionExpr, grid: &GridSpec) {
        self.check(path, f.check(grid));
    }

    fn exprs(&mut self, path: &str, fs: &[FunctionExpr], grid: &GridSpec) {
        for (i, f) in fs.iter().enumerate() {
            self.expr(&format!("{path}[{i}]"), f, grid);
        }
    }

    fn exponent(&mut self, path: &str, p: f64) {
        if !(p.is_finite() && p >= 1.0) {
            self.push(path, format!("exponent must be finite and >= 1, got {p}"));
        }
    }

    fn gauge(&mut self, phi: Option<&YoungFunction>, p: Option<f64>, phi_path: &str, p_path: &str) {
        match (phi, p) {
            (Some(phi), None) => self.young(phi_path, phi),
            (None, Some(p)) => self.exponent(p_path, p),
            _ => self.push("", format!("give exactly one of `{phi_path}` and `{p_path}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_example_parses() {
        let cfg = parse_config(
            r#"{"command":"oracle","phi":{"variant":"power","p":2},"ball":{"a":[0],"r":1,"n":1}}"#,
        )
        .unwrap();
        assert_eq!(cfg.command(), "oracle");
    }

    #[test]
    fn invalid_exponent_reports_path() {
        let err = parse_config(
            r#"{"command":"norm","phi":{"variant":"power","p":-1},
                "grid":{"n":1,"R":2,"m":64},"f":{"kind":"zero"}}"#,
        )
        .unwrap_err();
        let paths: Vec<_> = err.fields().iter().map(|e| e.path.clone()).collect();
        assert_eq!(paths, ["phi.p"]);
    }

    #[test]
    fn empty_document_is_a_parse_error() {
        assert!(matches!(parse_config(""), Err(ConfigError::Parse(_))));
        assert!(matches!(parse_config("{}"), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn unknown_variant_reports_path() {
        let err = parse_config(
            r#"{"command":"check-precede","phi1":{"variant":"power","p":2},"phi2":{"variant":"cosh"}}"#,
        )
        .unwrap_err();
        let ConfigError::Parse(e) = err else { panic!("{err:?}") };
        assert!(e.path.starts_with("phi2"), "{e:?}");
    }

    #[test]
    fn nested_syntax_error_reports_path() {
        let err = parse_config(
            r#"{"command":"verify-inclusion","grid":{"n":1,"R":2,"m":64},
                "u1":{"variant":"one","n":1},"u2":{"variant":"one","n":1},"p":2,
                "tests":[{"kind":"zero"},{"kind":"indicator","ball":{"a":[0],"r":"x","n":1}}]}"#,
        )
        .unwrap_err();
        let ConfigError::Parse(e) = err else { panic!("{err:?}") };
        // paths stop at the innermost tagged object; the message names the rest
        assert_eq!(e.path, "tests[1]");
        assert!(e.message.contains("invalid type"), "{}", e.message);
    }

    #[test]
    fn dimension_mismatches_collected() {
        let err = parse_config(
            r#"{"command":"verify-inclusion","grid":{"n":2,"R":2,"m":64},
                "u1":{"variant":"one","n":1},"u2":{"variant":"exp_norm","a":1,"n":3},"p":2,
                "tests":[{"kind":"indicator","ball":{"a":[0],"r":1,"n":1}}]}"#,
        )
        .unwrap_err();
        let paths: Vec<_> = err.fields().iter().map(|e| e.path.clone()).collect();
        assert_eq!(paths, ["u1.n", "u2.n", "tests[0]"]);
    }

    #[test]
    fn unknown_command_rejected() {
        assert!(parse_config(r#"{"command":"prove","phi":{"variant":"power","p":2}}"#).is_err());
    }

    #[test]
    fn unknown_field_rejected() {
        let err = parse_config(r#"{"command":"validate-young","phi":{"variant":"power","p":2},"extra":1}"#)
            .unwrap_err();
        assert!(matches!(err, ConfigError::Parse(_)));
    }

    #[test]
    fn gauge_must_be_unique() {
        let err = parse_config(
            r#"{"command":"norm","phi":{"variant":"power","p":2},"p":2,
                "grid":{"n":1,"R":2,"m":64},"f":{"kind":"zero"}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::Invalid(_)));
    }

    #[test]
    fn probe_rejects_equal_exponents() {
        let err = parse_config(r#"{"command":"probe-no-inclusion","p1":2,"p2":2}"#).unwrap_err();
        assert_eq!(err.fields()[0].path, "p2");
    }

    #[test]
    fn ball_inclusion_rejects_exponent_order() {
        let err = parse_config(
            r#"{"command":"verify-ball-inclusion","grid":{"n":1,"R":2,"m":64},
                "spaces":{"mode":"lebesgue","p1":1,"p2":2,"u1":{"variant":"one","n":1},"u2":{"variant":"one","n":1}},
                "x":{"a":[0],"r":1,"n":1},"tests":[]}"#,
        )
        .unwrap_err();
        assert_eq!(err.fields()[0].path, "spaces.p1");
    }

    #[test]
    fn command_names_match_serde_tags() {
        for name in COMMANDS {
            let err = parse_config(&format!(r#"{{"command":"{name}"}}"#)).unwrap_err();
            let ConfigError::Parse(e) = err else { panic!() };
            assert!(e.message.contains("missing field"), "{name}: {e}");
        }
    }
}
