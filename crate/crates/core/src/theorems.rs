//! Executable checks of the inclusion, translation and Hölder-type
//! inequalities between weighted weak Orlicz spaces.
//!
//! Every verifier returns a [`VerificationReport`]. Inequality checks compare
//! a left-hand norm with a bound; the report keeps one [`Witness`] per test
//! input and passes iff the worst ratio `lhs / rhs` is at most
//! `1 + PASS_SLACK`. Unmet preconditions produce a failed report with no
//! ratio rather than an error.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ball_volume, Ball, GridFunction, GridSpec};
use crate::norms::{weak_orlicz_norm, Gauge};
use crate::weight::{check_dominates, check_submultiplicative, Weight};
use crate::young::{check_delta2, check_inverse_product, check_precedes, YoungFunction};

/// Relative slack on every asserted inequality.
pub const PASS_SLACK: f64 = 1e-6;

/// Constant in the Hölder-type inequality.
pub const HOLDER_CONSTANT: f64 = 2.0;

/// Relative tolerance floor when comparing grid norms of indicators with
/// their closed form.
pub const CHAR_NORM_TOLERANCE: f64 = 0.02;

/// Random pairs used to probe weight submultiplicativity.
pub const SUBMULT_SAMPLES: usize = 1000;

/// Radii `2^k` probed for the absence of a global inclusion.
pub const NO_INCLUSION_EXPONENTS: std::ops::RangeInclusive<i32> = -10..=10;

/// Ratio threshold (both ways) certifying that no inclusion constant exists.
pub const NO_INCLUSION_THRESHOLD: f64 = 10.0;

const SET_INCLUSION_NOTE: &str =
    "set inclusion is taken as implied by the norm inequality, which is what is checked";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// Norm of `χ_B / u` equals `1/Φ⁻¹(1/|B|)`.
    CharNorm,
    /// `‖f‖_{wL_p^{u₁}} ≤ C‖f‖_{wL_p^{u₂}}` when `u₁ ≼ u₂`.
    LebesgueInclusion,
    /// `‖f‖_{wL_{Φ₁}^{u₁}} ≤ C₁C₂‖f‖_{wL_{Φ₂}^{u₂}}` when `Φ₁ ≺ Φ₂`, `u₁ ≼ u₂`.
    OrliczInclusion,
    /// `‖L_x f‖ ≤ u(x)‖f‖`.
    TranslationBound,
    /// `‖f₁f₂‖ ≤ 2‖f₁‖‖f₂‖` on a ball.
    Holder,
    /// Inclusion between spaces on a ball with constant `2/Φ_H⁻¹(1/|X|)`.
    BallInclusion,
    /// Ball ratios of `wL_{p₁}` and `wL_{p₂}` are unbounded both ways.
    NoGlobalInclusion,
}

impl Claim {
    pub fn id(self) -> &'static str {
        match self {
            Claim::CharNorm => "char-norm",
            Claim::LebesgueInclusion => "lebesgue-inclusion",
            Claim::OrliczInclusion => "orlicz-inclusion",
            Claim::TranslationBound => "translation-bound",
            Claim::Holder => "holder",
            Claim::BallInclusion => "ball-inclusion",
            Claim::NoGlobalInclusion => "no-global-inclusion",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Precondition {
    Met,
    Unmet { reason: String },
}

/// Non-finite floats serialize as JSON `null`; read `null` back as NaN.
fn nullable_f64<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub input: String,
    #[serde(deserialize_with = "nullable_f64")]
    pub lhs: f64,
    #[serde(deserialize_with = "nullable_f64")]
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: Claim,
    #[serde(deserialize_with = "nullable_f64")]
    pub constant_used: f64,
    /// Worst ratio; at most `1 + PASS_SLACK` means pass. `None` when the
    /// preconditions are unmet.
    pub max_violation_ratio: Option<f64>,
    pub witnesses: Vec<Witness>,
    pub passed: bool,
    pub precondition: Precondition,
    /// Named constants and diagnostics (`C1`, `C2`, tolerances, ...).
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Report whose verdict is decided by `max_violation_ratio`.
    pub fn with_ratio(claim: Claim, constant_used: f64, max_violation_ratio: f64, witnesses: Vec<Witness>) -> Self {
        VerificationReport {
            claim,
            constant_used,
            max_violation_ratio: Some(max_violation_ratio),
            witnesses,
            passed: max_violation_ratio <= 1.0 + PASS_SLACK,
            precondition: Precondition::Met,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Report for an inequality `lhs ≤ rhs` checked at every witness.
    pub fn inequality(claim: Claim, constant_used: f64, witnesses: Vec<Witness>) -> Self {
        let worst = witnesses
            .iter()
            .map(|w| inequality_ratio(w.lhs, w.rhs))
            .fold(0.0, f64::max);
        Self::with_ratio(claim, constant_used, worst, witnesses)
    }

    pub fn unmet(claim: Claim, reason: impl Into<String>) -> Self {
        VerificationReport {
            claim,
            constant_used: f64::NAN,
            max_violation_ratio: None,
            witnesses: Vec::new(),
            passed: false,
            precondition: Precondition::Unmet { reason: reason.into() },
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn precondition_met(&self) -> bool {
        self.precondition == Precondition::Met
    }

    fn metric(mut self, name: &str, value: f64) -> Self {
        self.metrics.insert(name.to_string(), value);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// `lhs / rhs`, with `0/0 = 0` and `x/0 = ∞` for `x > 0`.
pub fn inequality_ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        let r = lhs / rhs;
        if r.is_nan() {
            f64::INFINITY
        } else {
            r
        }
    }
}

/// A grid function with a descriptor used in witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub label: String,
    pub f: GridFunction,
}

impl TestFunction {
    pub fn new(label: impl Into<String>, f: GridFunction) -> Self {
        TestFunction { label: label.into(), f }
    }

    /// Labels functions `test[0]`, `test[1]`, ...
    pub fn indexed(fs: impl IntoIterator<Item = GridFunction>) -> Vec<Self> {
        fs.into_iter()
            .enumerate()
            .map(|(i, f)| TestFunction::new(format!("test[{i}]"), f))
            .collect()
    }
}

/// `1/Φ⁻¹(1/|B|)`, the weak Orlicz norm of `χ_B`.
pub fn char_norm_oracle(phi: &YoungFunction, ball: &Ball) -> Result<f64> {
    phi.check_parameters()?;
    ball.check()?;
    char_norm_from_volume(phi, ball.volume())
}

fn char_norm_from_volume(phi: &YoungFunction, volume: f64) -> Result<f64> {
    Ok(1.0 / phi.generalized_inverse(1.0 / volume)?)
}

/// Compares the grid norm of `χ_B/u` (weight `u`) with [`char_norm_oracle`].
///
/// The ratio is `relative error / tolerance` with tolerance
/// `max(2%, 4n/m)`.
pub fn verify_char_norm(phi: &YoungFunction, u: &Weight, ball: &Ball, spec: &GridSpec) -> Result<VerificationReport> {
    spec.check()?;
    ball.ensure_inside(spec)?;
    check_dims(u, spec)?;
    let indicator = crate::grid::sample(&crate::grid::FunctionExpr::indicator(ball.clone()), spec)?;
    let f = indicator.divide_by_weight(u)?;
    let grid_norm = weak_orlicz_norm(phi, u, &f)?.value;
    let oracle = char_norm_oracle(phi, ball)?;
    let rel_err = (grid_norm - oracle).abs() / oracle;
    let tolerance = CHAR_NORM_TOLERANCE.max(4.0 * spec.n as f64 / spec.cells_per_axis as f64);
    let witness = Witness {
        input: format!("chi_{}/{} on {}", ball.label(), u.label(), spec.describe()),
        lhs: grid_norm,
        rhs: oracle,
    };
    Ok(
        VerificationReport::with_ratio(Claim::CharNorm, 1.0, rel_err / tolerance, vec![witness])
            .metric("relative_error", rel_err)
            .metric("tolerance", tolerance)
            .metric("oracle", oracle),
    )
}

/// Checks `‖f‖_{wL_p^{u₁}} ≤ C‖f‖_{wL_p^{u₂}}` with `C` from the domination
/// search `u₁ ≼ u₂`.
pub fn verify_inclusion_lebesgue(
    p: f64,
    u1: &Weight,
    u2: &Weight,
    tests: &[TestFunction],
) -> Result<VerificationReport> {
    crate::norms::check_exponent(p)?;
    let claim = Claim::LebesgueInclusion;
    let dom = check_dominates(u1, u2)?;
    let Some(c) = dom.constant.filter(|_| dom.holds()) else {
        return Ok(VerificationReport::unmet(
            claim,
            format!(
                "domination {} <= C {} not found ({:?} at {:?})",
                u1.label(),
                u2.label(),
                dom.status,
                dom.witness_x
            ),
        ));
    };
    let gauge = Gauge::Lebesgue(p);
    let witnesses = tests
        .iter()
        .map(|t| {
            check_dims(u1, t.f.spec())?;
            Ok(Witness {
                input: t.label.clone(),
                lhs: gauge.norm(u1, &t.f)?.value,
                rhs: c * gauge.norm(u2, &t.f)?.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::inequality(claim, c, witnesses)
        .metric("C", c)
        .note(SET_INCLUSION_NOTE))
}

/// Checks `‖f‖_{wL_{Φ₁}^{u₁}} ≤ C₁C₂‖f‖_{wL_{Φ₂}^{u₂}}` with `C₁` from the
/// ladder search `Φ₁ ≺ Φ₂` and `C₂` from `u₁ ≼ u₂`.
pub fn verify_inclusion_orlicz(
    phi1: &YoungFunction,
    phi2: &YoungFunction,
    u1: &Weight,
    u2: &Weight,
    tests: &[TestFunction],
) -> Result<VerificationReport> {
    phi1.check_parameters()?;
    phi2.check_parameters()?;
    let claim = Claim::OrliczInclusion;
    let prec = check_precedes(phi1, phi2);
    let Some(c1) = prec.constant.filter(|_| prec.holds()) else {
        return Ok(VerificationReport::unmet(
            claim,
            format!(
                "no ladder constant for {} < {} ({:?} at t = {})",
                phi1.label(),
                phi2.label(),
                prec.status,
                prec.witness_t
            ),
        ));
    };
    let dom = check_dominates(u1, u2)?;
    let Some(c2) = dom.constant.filter(|_| dom.holds()) else {
        return Ok(VerificationReport::unmet(
            claim,
            format!(
                "domination {} <= C {} not found ({:?} at {:?})",
                u1.label(),
                u2.label(),
                dom.status,
                dom.witness_x
            ),
        ));
    };
    let constant = c1 * c2;
    let witnesses = tests
        .iter()
        .map(|t| {
            check_dims(u1, t.f.spec())?;
            Ok(Witness {
                input: t.label.clone(),
                lhs: weak_orlicz_norm(phi1, u1, &t.f)?.value,
                rhs: constant * weak_orlicz_norm(phi2, u2, &t.f)?.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::inequality(claim, constant, witnesses)
        .metric("C1", c1)
        .metric("C2", c2)
        .note(SET_INCLUSION_NOTE))
}

/// Checks `‖L_x f‖ ≤ u(x)‖f‖` for lattice shifts `x = shift·h`.
///
/// Also records `C_emp = max_x max(u(x)/‖L_x f‖, ‖L_x f‖/u(x))` as the
/// metric `empirical_sandwich_constant`, without asserting anything on it.
pub fn verify_translation_bounds(
    gauge: &Gauge,
    u: &Weight,
    f: &GridFunction,
    shifts: &[Vec<i64>],
) -> Result<VerificationReport> {
    let claim = Claim::TranslationBound;
    let spec = *f.spec();
    check_dims(u, &spec)?;
    let phi = gauge.young();
    phi.check_parameters()?;
    let sub = check_submultiplicative(u, SUBMULT_SAMPLES);
    if !sub.passed {
        let c = sub.counterexample.expect("failed check has a counterexample");
        return Ok(VerificationReport::unmet(
            claim,
            format!(
                "{} is not submultiplicative: u({:?} + {:?}) = {} > {}",
                u.label(),
                c.x,
                c.y,
                c.lhs,
                c.rhs
            ),
        ));
    }
    let delta2 = check_delta2(&phi);
    if !delta2.holds {
        return Ok(VerificationReport::unmet(
            claim,
            format!("{} fails the doubling condition near t = {}", phi.label(), delta2.witness_t),
        ));
    }
    let base = gauge.norm(u, f)?.value;
    let h = spec.cell_width();
    let mut witnesses = Vec::with_capacity(shifts.len());
    let mut sandwich: f64 = 0.0;
    for shift in shifts {
        if shift.len() != spec.n {
            return Err(Error::DimensionMismatch {
                expected: spec.n,
                got: shift.len(),
            });
        }
        let x: Vec<f64> = shift.iter().map(|&k| k as f64 * h).collect();
        let ux = u.evaluate(&x)?;
        let shifted = gauge.norm(u, &f.translate(shift)?)?.value;
        if shifted > 0.0 {
            sandwich = sandwich.max((ux / shifted).max(shifted / ux));
        }
        witnesses.push(Witness {
            input: format!("x = {x:?}"),
            lhs: shifted,
            rhs: ux * base,
        });
    }
    let mut report = VerificationReport::inequality(claim, 1.0, witnesses)
        .metric("base_norm", base)
        .note("the lower bound u(x)/C <= ||L_x f|| is not asserted; see empirical_sandwich_constant");
    if sandwich > 0.0 {
        report = report.metric("empirical_sandwich_constant", sandwich);
    }
    Ok(report)
}

/// Checks `‖f₁f₂‖_{Φ₃,u₃,X} ≤ 2‖f₁‖_{Φ₁,u₁,X}‖f₂‖_{Φ₂,u₂,X}` for each pair,
/// after restricting both functions to `X`.
#[allow(clippy::too_many_arguments)]
pub fn verify_holder(
    phi1: &YoungFunction,
    phi2: &YoungFunction,
    phi3: &YoungFunction,
    u1: &Weight,
    u2: &Weight,
    u3: &Weight,
    pairs: &[(TestFunction, TestFunction)],
    x: &Ball,
) -> Result<VerificationReport> {
    for phi in [phi1, phi2, phi3] {
        phi.check_parameters()?;
    }
    x.check()?;
    let claim = Claim::Holder;
    let inv = check_inverse_product(phi1, phi2, phi3);
    if !inv.holds {
        return Ok(VerificationReport::unmet(
            claim,
            format!(
                "inverse product ratio {} > 1 at s = {}",
                inv.max_ratio, inv.at_s
            ),
        ));
    }
    let mut witnesses = Vec::with_capacity(pairs.len());
    let mut checked_specs: Vec<GridSpec> = Vec::new();
    for (a, b) in pairs {
        let spec = *a.f.spec();
        if !checked_specs.contains(&spec) {
            check_dims(u1, &spec)?;
            if let Some(at) = first_violation_on(&spec, x, |p| {
                (u3.ln_value(p), u1.ln_value(p) + u2.ln_value(p))
            }) {
                return Ok(VerificationReport::unmet(
                    claim,
                    format!("{} > {}·{} at {:?}", u3.label(), u1.label(), u2.label(), at),
                ));
            }
            checked_specs.push(spec);
        }
        let f1 = a.f.restrict(x)?;
        let f2 = b.f.restrict(x)?;
        let lhs = weak_orlicz_norm(phi3, u3, &f1.multiply(&f2)?)?.value;
        let n1 = weak_orlicz_norm(phi1, u1, &f1)?.value;
        let n2 = weak_orlicz_norm(phi2, u2, &f2)?.value;
        witnesses.push(Witness {
            input: format!("({}, {}) on {}", a.label, b.label, x.label()),
            lhs,
            rhs: HOLDER_CONSTANT * n1 * n2,
        });
    }
    Ok(VerificationReport::inequality(claim, HOLDER_CONSTANT, witnesses)
        .metric("inverse_product_max_ratio", inv.max_ratio))
}

/// Spaces compared by [`verify_ball_inclusion`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BallInclusionSpaces {
    /// Explicit Young functions and weights.
    Orlicz {
        phi1: YoungFunction,
        phi2: YoungFunction,
        phi_h: YoungFunction,
        u1: Weight,
        u2: Weight,
        u_q: Weight,
    },
    /// `wL_{p₁}^{u₁}(X) ⊆ wL_{p₂}^{u₂}(X)` with `p₁ > p₂ ≥ 1`; `Φ_H` and `u_Q`
    /// are derived.
    Lebesgue { p1: f64, p2: f64, u1: Weight, u2: Weight },
}

struct ResolvedBallSpaces {
    gauge1: Gauge,
    gauge2: Gauge,
    phi1: YoungFunction,
    phi2: YoungFunction,
    phi_h: YoungFunction,
    u1: Weight,
    u2: Weight,
    u_q: Weight,
}

impl BallInclusionSpaces {
    fn resolve(&self) -> Result<ResolvedBallSpaces> {
        match self {
            BallInclusionSpaces::Orlicz { phi1, phi2, phi_h, u1, u2, u_q } => {
                for phi in [phi1, phi2, phi_h] {
                    phi.check_parameters()?;
                }
                Ok(ResolvedBallSpaces {
                    gauge1: Gauge::Orlicz(phi1.clone()),
                    gauge2: Gauge::Orlicz(phi2.clone()),
                    phi1: phi1.clone(),
                    phi2: phi2.clone(),
                    phi_h: phi_h.clone(),
                    u1: u1.clone(),
                    u2: u2.clone(),
                    u_q: u_q.clone(),
                })
            }
            BallInclusionSpaces::Lebesgue { p1, p2, u1, u2 } => {
                crate::norms::check_exponent(*p1)?;
                crate::norms::check_exponent(*p2)?;
                if p1 <= p2 {
                    return Err(Error::InvalidParameter {
                        name: "p1",
                        reason: format!("requires p1 > p2, got p1 = {p1}, p2 = {p2}"),
                    });
                }
                Ok(ResolvedBallSpaces {
                    gauge1: Gauge::Lebesgue(*p1),
                    gauge2: Gauge::Lebesgue(*p2),
                    phi1: YoungFunction::power(*p1)?,
                    phi2: YoungFunction::power(*p2)?,
                    phi_h: YoungFunction::power(p1 * p2 / (p1 - p2))?,
                    u1: u1.clone(),
                    u2: u2.clone(),
                    u_q: Weight::quotient(u1, u2)?,
                })
            }
        }
    }
}

/// Checks `‖f‖_{Φ₂,u₂,X} ≤ (2/Φ_H⁻¹(1/|X|))·‖f‖_{Φ₁,u₁,X}` for each test,
/// after restricting it to `X`.
pub fn verify_ball_inclusion(
    spaces: &BallInclusionSpaces,
    x: &Ball,
    spec: &GridSpec,
    tests: &[TestFunction],
) -> Result<VerificationReport> {
    spec.check()?;
    x.ensure_inside(spec)?;
    let s = spaces.resolve()?;
    for u in [&s.u1, &s.u2, &s.u_q] {
        check_dims(u, spec)?;
    }
    let claim = Claim::BallInclusion;
    let inv = check_inverse_product(&s.phi1, &s.phi_h, &s.phi2);
    if !inv.holds {
        return Ok(VerificationReport::unmet(
            claim,
            format!("inverse product ratio {} > 1 at s = {}", inv.max_ratio, inv.at_s),
        ));
    }
    if let Some(at) = first_violation_on(spec, x, |p| (s.u_q.ln_value(p), 0.0)) {
        return Ok(VerificationReport::unmet(
            claim,
            format!("{} > 1 at {:?}", s.u_q.label(), at),
        ));
    }
    if let Some(at) = first_violation_on(spec, x, |p| {
        (s.u1.ln_value(p), s.u_q.ln_value(p) + s.u2.ln_value(p))
    }) {
        return Ok(VerificationReport::unmet(
            claim,
            format!("{} > {}·{} at {:?}", s.u1.label(), s.u_q.label(), s.u2.label(), at),
        ));
    }
    let volume = ball_volume(x.n, x.radius)?;
    let constant = 2.0 * char_norm_from_volume(&s.phi_h, volume)?;
    let witnesses = tests
        .iter()
        .map(|t| {
            if t.f.spec() != spec {
                return Err(Error::InvalidParameter {
                    name: "tests",
                    reason: format!("{} is not sampled on {}", t.label, spec.describe()),
                });
            }
            let f = t.f.restrict(x)?;
            Ok(Witness {
                input: format!("{} on {}", t.label, x.label()),
                lhs: s.gauge2.norm(&s.u2, &f)?.value,
                rhs: constant * s.gauge1.norm(&s.u1, &f)?.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::inequality(claim, constant, witnesses)
        .metric("inverse_product_max_ratio", inv.max_ratio)
        .note(format!("Phi_H = {}, u_Q = {}", s.phi_h.label(), s.u_q.label())))
}

/// Tabulates `‖χ_B‖_{wL_{p₂}} / ‖χ_B‖_{wL_{p₁}} = |B|^{1/p₂ − 1/p₁}` over
/// balls `B(0, 2^k)`, `k ∈ [−10, 10]`, in the dimension of `u`.
///
/// Witnesses hold the oracle ratio (`lhs`) and the closed form (`rhs`). The
/// claim passes when the ratios exceed `NO_INCLUSION_THRESHOLD` and drop
/// below its reciprocal; the violation ratio is
/// `max(T/max_ratio, T·min_ratio)`.
pub fn probe_no_global_inclusion(p1: f64, p2: f64, u: &Weight) -> Result<VerificationReport> {
    crate::norms::check_exponent(p1)?;
    crate::norms::check_exponent(p2)?;
    u.check_parameters()?;
    if p1 == p2 {
        return Err(Error::InvalidParameter {
            name: "p2",
            reason: format!("exponents must differ, got p1 = p2 = {p1}"),
        });
    }
    let phi1 = YoungFunction::power(p1)?;
    let phi2 = YoungFunction::power(p2)?;
    let mut witnesses = Vec::new();
    let mut closed_form_err: f64 = 0.0;
    for k in NO_INCLUSION_EXPONENTS {
        let ball = Ball::centered(u.n, 2f64.powi(k))?;
        let ratio = char_norm_oracle(&phi2, &ball)? / char_norm_oracle(&phi1, &ball)?;
        let closed = ball.volume().powf(1.0 / p2 - 1.0 / p1);
        closed_form_err = closed_form_err.max((ratio - closed).abs() / closed);
        witnesses.push(Witness {
            input: format!("r = 2^{k}"),
            lhs: ratio,
            rhs: closed,
        });
    }
    let max_ratio = witnesses.iter().map(|w| w.lhs).fold(f64::NEG_INFINITY, f64::max);
    let min_ratio = witnesses.iter().map(|w| w.lhs).fold(f64::INFINITY, f64::min);
    let t = NO_INCLUSION_THRESHOLD;
    let violation = (t / max_ratio).max(t * min_ratio);
    Ok(VerificationReport::with_ratio(Claim::NoGlobalInclusion, t, violation, witnesses)
        .metric("max_ratio", max_ratio)
        .metric("min_ratio", min_ratio)
        .metric("span_decades", (max_ratio / min_ratio).log10())
        .metric("closed_form_max_rel_err", closed_form_err)
        .note("ratios are computed for chi_B/u, whose norm does not depend on u"))
}

fn check_dims(u: &Weight, spec: &GridSpec) -> Result<()> {
    if u.n != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            got: u.n,
        });
    }
    Ok(())
}

/// First cell centre in `ball` where `lhs > rhs` (log scale, with slack).
fn first_violation_on<F>(spec: &GridSpec, ball: &Ball, mut ln_sides: F) -> Option<Vec<f64>>
where
    F: FnMut(&[f64]) -> (f64, f64),
{
    let slack = crate::probe::REL_SLACK.ln_1p();
    let mut found = None;
    spec.for_each_center(|p| {
        if found.is_none() && ball.contains(p) {
            let (l, r) = ln_sides(p);
            if l.is_nan() || l > r + slack {
                found = Some(p.to_vec());
            }
        }
    });
    found
}
