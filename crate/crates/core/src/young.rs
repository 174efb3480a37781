//! Young functions: evaluation, validation, the generalized inverse, the
//! doubling (Δ₂) condition and the ordering `Φ₁ ≺ Φ₂`.
//!
//! A Young function is a convex gauge `Φ: [0, ∞) → [0, ∞)` with `Φ(0) = 0`
//! that grows without bound. The catalog below only admits gauges that are
//! continuous and strictly increasing on `(0, ∞)`, which is what makes
//! `Φ⁻¹(0) = 0` hold for the generalized inverse
//! `Φ⁻¹(s) = inf { r ≥ 0 : Φ(r) > s }`.
//!
//! Every "for all t > 0" statement is checked on the geometric grid from
//! [`crate::probe`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probe::{self, le_with_slack, REL_SLACK};

/// Relative bracket width at which inverse bisections stop.
pub const BISECTION_REL_WIDTH: f64 = 1e-12;

const MAX_BISECTION_STEPS: usize = 4096;

/// A Young function drawn from a closed catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum YoungFunction {
    /// `t^p`, `p ≥ 1`.
    Power { p: f64 },
    /// `c·t^p`, `c > 0`, `p ≥ 1`.
    ScaledPower { c: f64, p: f64 },
    /// `e^t − 1`.
    ExpMinusOne,
    /// `c₁·t^p₁ + c₂·t^p₂`.
    PowerSum { c1: f64, p1: f64, c2: f64, p2: f64 },
    /// Piecewise-linear interpolation of `(t, Φ(t))` nodes, starting at
    /// `t = 0` and extrapolating the last slope.
    Tabulated { nodes: Vec<[f64; 2]> },
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        let phi = YoungFunction::Power { p };
        phi.check_parameters()?;
        Ok(phi)
    }

    pub fn scaled_power(c: f64, p: f64) -> Result<Self> {
        let phi = YoungFunction::ScaledPower { c, p };
        phi.check_parameters()?;
        Ok(phi)
    }

    pub fn power_sum(c1: f64, p1: f64, c2: f64, p2: f64) -> Result<Self> {
        let phi = YoungFunction::PowerSum { c1, p1, c2, p2 };
        phi.check_parameters()?;
        Ok(phi)
    }

    pub fn tabulated(nodes: Vec<[f64; 2]>) -> Result<Self> {
        let phi = YoungFunction::Tabulated { nodes };
        phi.check_parameters()?;
        Ok(phi)
    }

    /// Structural parameter checks. Shape properties (convexity, growth) are
    /// the business of [`validate_young`].
    pub fn check_parameters(&self) -> Result<()> {
        fn exponent(name: &'static str, p: f64) -> Result<()> {
            if p.is_finite() && p >= 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("exponent must be finite and >= 1, got {p}"),
                })
            }
        }
        fn coefficient(name: &'static str, c: f64) -> Result<()> {
            if c.is_finite() && c > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("coefficient must be finite and > 0, got {c}"),
                })
            }
        }
        match *self {
            YoungFunction::Power { p } => exponent("p", p),
            YoungFunction::ScaledPower { c, p } => {
                coefficient("c", c)?;
                exponent("p", p)
            }
            YoungFunction::ExpMinusOne => Ok(()),
            YoungFunction::PowerSum { c1, p1, c2, p2 } => {
                coefficient("c1", c1)?;
                exponent("p1", p1)?;
                coefficient("c2", c2)?;
                exponent("p2", p2)
            }
            YoungFunction::Tabulated { ref nodes } => {
                let bad = |reason: String| Error::InvalidParameter {
                    name: "nodes",
                    reason,
                };
                if nodes.len() < 2 {
                    return Err(bad(format!("need at least 2 nodes, got {}", nodes.len())));
                }
                if nodes[0][0] != 0.0 {
                    return Err(bad(format!("first node must sit at t = 0, got {}", nodes[0][0])));
                }
                for (i, &[t, v]) in nodes.iter().enumerate() {
                    if !t.is_finite() || !v.is_finite() || v < 0.0 {
                        return Err(bad(format!("node {i} = ({t}, {v}) is not finite and non-negative")));
                    }
                }
                if let Some(i) = nodes.windows(2).position(|w| w[1][0] <= w[0][0]) {
                    return Err(bad(format!("abscissae must increase strictly (node {})", i + 1)));
                }
                Ok(())
            }
        }
    }

    /// `Φ(t)` without argument checks; used in hot loops.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            YoungFunction::Power { p } => t.powf(p),
            YoungFunction::ScaledPower { c, p } => c * t.powf(p),
            YoungFunction::ExpMinusOne => t.exp_m1(),
            YoungFunction::PowerSum { c1, p1, c2, p2 } => c1 * t.powf(p1) + c2 * t.powf(p2),
            YoungFunction::Tabulated { ref nodes } => interpolate(nodes, t),
        }
    }

    /// `Φ(t)` for `t ≥ 0`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain {
                name: "t",
                value: t,
                reason: "Young functions are defined on [0, inf)",
            });
        }
        Ok(self.value(t))
    }

    /// Generalized inverse `inf { r ≥ 0 : Φ(r) > s }`.
    ///
    /// Closed forms for the power and exponential variants; bisection
    /// otherwise (see [`inverse_by_bisection`]).
    pub fn generalized_inverse(&self, s: f64) -> Result<f64> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::Domain {
                name: "s",
                value: s,
                reason: "the generalized inverse is defined on [0, inf)",
            });
        }
        Ok(self.inverse_value(s))
    }

    #[inline]
    pub(crate) fn inverse_value(&self, s: f64) -> f64 {
        match *self {
            YoungFunction::Power { p } => s.powf(p.recip()),
            YoungFunction::ScaledPower { c, p } => (s / c).powf(p.recip()),
            YoungFunction::ExpMinusOne => s.ln_1p(),
            YoungFunction::PowerSum { .. } | YoungFunction::Tabulated { .. } => {
                inverse_by_bisection(self, s)
            }
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match *self {
            YoungFunction::Power { p } => format!("t^{p}"),
            YoungFunction::ScaledPower { c, p } => format!("{c}*t^{p}"),
            YoungFunction::ExpMinusOne => "exp(t)-1".to_string(),
            YoungFunction::PowerSum { c1, p1, c2, p2 } => format!("{c1}*t^{p1}+{c2}*t^{p2}"),
            YoungFunction::Tabulated { ref nodes } => format!("tabulated({} nodes)", nodes.len()),
        }
    }
}

fn interpolate(nodes: &[[f64; 2]], t: f64) -> f64 {
    // index of the first node strictly right of t
    let k = nodes.partition_point(|n| n[0] <= t);
    let k = k.clamp(1, nodes.len() - 1);
    let [t0, v0] = nodes[k - 1];
    let [t1, v1] = nodes[k];
    v0 + (v1 - v0) / (t1 - t0) * (t - t0)
}

/// Generalized inverse by bracket expansion and bisection.
///
/// Doubles `r` from 1 until `Φ(r) > s`, then bisects until the bracket width
/// is at most `1e-12` relative to the upper end, and returns the lower end.
/// The lower end always satisfies `Φ(lo) ≤ s`. Returns `+∞` if `Φ` never
/// exceeds `s` in floating point range.
pub fn inverse_by_bisection(phi: &YoungFunction, s: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while phi.value(hi) <= s {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    let mut steps = 0;
    while hi - lo > BISECTION_REL_WIDTH * hi && steps < MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi.value(mid) > s {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    lo
}

/// Which defining property a validation probe violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YoungCheck {
    Parameters,
    ZeroAtOrigin,
    StrictlyIncreasing,
    Convexity,
    Growth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungViolation {
    pub check: YoungCheck,
    /// Probe location (`t`, or the offending node abscissa).
    pub at: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungValidation {
    pub passed: bool,
    pub violation: Option<YoungViolation>,
    pub grid: String,
}

/// Checks `Φ(0) = 0`, strict monotonicity, midpoint convexity and growth on
/// the probe grid. Failures are reported, not raised.
pub fn validate_young(phi: &YoungFunction) -> YoungValidation {
    let violation = first_violation(phi);
    YoungValidation {
        passed: violation.is_none(),
        violation,
        grid: probe::describe(),
    }
}

fn first_violation(phi: &YoungFunction) -> Option<YoungViolation> {
    let fail = |check, at, detail: String| Some(YoungViolation { check, at, detail });

    if let Err(e) = phi.check_parameters() {
        return fail(YoungCheck::Parameters, f64::NAN, e.to_string());
    }
    let at_zero = phi.value(0.0);
    if at_zero != 0.0 {
        return fail(YoungCheck::ZeroAtOrigin, 0.0, format!("Phi(0) = {at_zero}"));
    }

    if let YoungFunction::Tabulated { nodes } = phi {
        let slopes: Vec<f64> = nodes
            .windows(2)
            .map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]))
            .collect();
        if slopes[0] <= 0.0 {
            return fail(
                YoungCheck::StrictlyIncreasing,
                nodes[1][0],
                format!("leading segment has slope {}", slopes[0]),
            );
        }
        for (i, w) in slopes.windows(2).enumerate() {
            if w[1] < w[0] {
                return fail(
                    YoungCheck::Convexity,
                    nodes[i + 1][0],
                    format!("slope drops from {} to {}", w[0], w[1]),
                );
            }
        }
    }

    let grid = probe::geometric_grid();
    let values: Vec<f64> = grid.iter().map(|&t| phi.value(t)).collect();
    if values[0] <= 0.0 {
        return fail(
            YoungCheck::StrictlyIncreasing,
            grid[0],
            format!("Phi({}) = {} is not positive", grid[0], values[0]),
        );
    }
    for i in 1..grid.len() {
        let (a, b) = (values[i - 1], values[i]);
        if !(b > a || (a.is_infinite() && b.is_infinite())) {
            return fail(
                YoungCheck::StrictlyIncreasing,
                grid[i],
                format!("Phi({}) = {a} but Phi({}) = {b}", grid[i - 1], grid[i]),
            );
        }
    }

    // midpoint pairs (0, t) and (t_i, t_{i+d}) for d = 1, 2, 4, ...
    for (i, &t) in grid.iter().enumerate() {
        let mid = phi.value(0.5 * t);
        if !le_with_slack(mid, 0.5 * values[i], REL_SLACK) {
            return fail(
                YoungCheck::Convexity,
                0.5 * t,
                format!("midpoint of (0, {t}) lies above the chord"),
            );
        }
    }
    let mut d = 1;
    while d < grid.len() {
        for i in 0..grid.len() - d {
            let (s, t) = (grid[i], grid[i + d]);
            let mid = phi.value(0.5 * (s + t));
            let chord = 0.5 * (values[i] + values[i + d]);
            if !le_with_slack(mid, chord, REL_SLACK) {
                return fail(
                    YoungCheck::Convexity,
                    0.5 * (s + t),
                    format!("midpoint of ({s}, {t}) lies above the chord"),
                );
            }
        }
        d *= 2;
    }

    let top = *values.last().unwrap();
    if top.is_nan() || top <= 1.0 {
        return fail(
            YoungCheck::Growth,
            *grid.last().unwrap(),
            format!("Phi(2^20) = {top} does not exceed 1"),
        );
    }
    None
}

/// Outcome of the doubling-condition probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta2Report {
    pub holds: bool,
    /// Largest observed `Φ(2t)/Φ(t)` when the condition holds.
    pub k: Option<f64>,
    /// Maximizer of the ratio, or the point where blow-up was detected.
    pub witness_t: f64,
    pub grid: String,
}

/// Probes `Φ(2t) ≤ K·Φ(t)`.
///
/// The condition is rejected when a ratio is not finite, or when the ratio
/// keeps climbing (monotonically, by more than 0.1%) across the top decade
/// of the grid.
pub fn check_delta2(phi: &YoungFunction) -> Delta2Report {
    let grid = probe::geometric_grid();
    let ratios: Vec<f64> = grid
        .iter()
        .map(|&t| phi.value(2.0 * t) / phi.value(t))
        .collect();
    let report = |holds, k, witness_t| Delta2Report {
        holds,
        k,
        witness_t,
        grid: probe::describe(),
    };

    if let Some(i) = ratios.iter().position(|r| !r.is_finite()) {
        return report(false, None, grid[i]);
    }
    let decade = probe::points_per_decade();
    let tail = &ratios[ratios.len() - 1 - decade..];
    let climbing = tail.windows(2).all(|w| w[1] >= w[0]);
    let last = *tail.last().unwrap();
    if climbing && last > tail[0] * (1.0 + 1e-3) {
        return report(false, None, *grid.last().unwrap());
    }
    let (i, k) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    report(true, Some(k), grid[i])
}

/// Outcome classes of the `Φ₁ ≺ Φ₂` ladder search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecedenceStatus {
    /// A ladder constant works at every probe and the requirement is flat at
    /// both ends of the grid.
    Holds,
    /// Every probe admits a ladder constant, but the requirement climbs
    /// towards an end of the grid.
    GrowthDetected,
    /// Some probe needs a constant above the ladder cap.
    BeyondCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecedenceResult {
    pub status: PrecedenceStatus,
    /// Smallest ladder constant `C` with `Φ₁(t) ≤ Φ₂(Ct)` on the grid.
    pub constant: Option<f64>,
    /// Probe with the largest requirement.
    pub witness_t: f64,
    /// Ladder constant needed at `witness_t` (`None` above the cap).
    pub required_c: Option<f64>,
    pub grid: String,
}

impl PrecedenceResult {
    pub fn holds(&self) -> bool {
        self.status == PrecedenceStatus::Holds
    }
}

/// Searches the smallest ladder constant `C` with `Φ₁(t) ≤ Φ₂(Ct)` at every
/// probe `t`.
///
/// Absence of a constant cannot be certified; a requirement that grows at
/// an edge of the grid, or exceeds the ladder cap, is reported as absent
/// with the frontier probe.
pub fn check_precedes(phi1: &YoungFunction, phi2: &YoungFunction) -> PrecedenceResult {
    let grid = probe::geometric_grid();
    let ladder = &grid;
    let required: Vec<Option<usize>> = grid
        .iter()
        .map(|&t| {
            let lhs = phi1.value(t);
            ladder
                .iter()
                .position(|&c| le_with_slack(lhs, phi2.value(c * t), REL_SLACK))
        })
        .collect();
    let result = |status, constant, i: usize| PrecedenceResult {
        status,
        constant,
        witness_t: grid[i],
        required_c: required[i].map(|j| ladder[j]),
        grid: probe::describe(),
    };

    if let Some(i) = required.iter().position(Option::is_none) {
        return result(PrecedenceStatus::BeyondCap, None, i);
    }
    let req: Vec<usize> = required.iter().map(|r| r.unwrap()).collect();
    let decade = probe::points_per_decade();
    let head = &req[..=decade];
    if head.windows(2).all(|w| w[0] >= w[1]) && head[0] > head[decade] {
        return result(PrecedenceStatus::GrowthDetected, None, 0);
    }
    let tail = &req[req.len() - 1 - decade..];
    if tail.windows(2).all(|w| w[0] <= w[1]) && tail[decade] > tail[0] {
        return result(PrecedenceStatus::GrowthDetected, None, req.len() - 1);
    }
    let (i, &j) = req
        .iter()
        .enumerate()
        .fold((0, &0), |acc, (i, j)| if *j > *acc.1 { (i, j) } else { acc });
    result(PrecedenceStatus::Holds, Some(ladder[j]), i)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseProductReport {
    pub holds: bool,
    /// `max Φ₁⁻¹(s)·Φ₂⁻¹(s) / Φ₃⁻¹(s)` over the grid.
    pub max_ratio: f64,
    pub at_s: f64,
    pub grid: String,
}

/// Checks `Φ₁⁻¹(s)·Φ₂⁻¹(s) ≤ Φ₃⁻¹(s)` on the probe grid.
pub fn check_inverse_product(
    phi1: &YoungFunction,
    phi2: &YoungFunction,
    phi3: &YoungFunction,
) -> InverseProductReport {
    let grid = probe::geometric_grid();
    let mut worst = (f64::NEG_INFINITY, grid[0]);
    for &s in &grid {
        let ratio = phi1.inverse_value(s) * phi2.inverse_value(s) / phi3.inverse_value(s);
        if ratio > worst.0 || ratio.is_nan() {
            worst = (ratio, s);
        }
    }
    InverseProductReport {
        holds: le_with_slack(worst.0, 1.0, REL_SLACK),
        max_ratio: worst.0,
        at_s: worst.1,
        grid: probe::describe(),
    }
}

/// Transfers an inequality between inverses to one between the functions.
///
/// Given `Φ₂⁻¹(s) ≤ C₁·Φ₁⁻¹(C₂·s)` (checked, else [`Error::Precondition`]),
/// sets `t = Φ₂⁻¹(s)` and returns whether `Φ₁(t/C₁) ≤ C₂·Φ₂(t)`.
pub fn inverse_transfer(
    phi1: &YoungFunction,
    phi2: &YoungFunction,
    c1: f64,
    c2: f64,
    s: f64,
) -> Result<bool> {
    for (name, v) in [("C1", c1), ("C2", c2), ("s", s)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Domain {
                name,
                value: v,
                reason: "must be finite and positive",
            });
        }
    }
    let t = phi2.inverse_value(s);
    let bound = c1 * phi1.inverse_value(c2 * s);
    if !le_with_slack(t, bound, REL_SLACK) {
        return Err(Error::Precondition(format!(
            "Phi2^-1({s}) = {t} exceeds C1*Phi1^-1(C2*s) = {bound}"
        )));
    }
    Ok(le_with_slack(phi1.value(t / c1), c2 * phi2.value(t), REL_SLACK))
}
