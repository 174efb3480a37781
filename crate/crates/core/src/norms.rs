//! Weighted weak Lebesgue and weak Orlicz quasi-norms.
//!
//! Both norms only see the distribution function of `|u·f|`, which for a
//! grid function is a finite step function. On `t ∈ [v_{k−1}/b, v_k/b)` the
//! superlevel measure of `|u f|/b` is the constant `M_k`, and left-continuity
//! of `Φ` makes the supremum over that interval `Φ(v_k/b)·M_k`. So the
//! modular is an exact maximum over profile levels, and the weak Lebesgue
//! norm is `max_k v_k·M_k^{1/p}`.
//!
//! The Orlicz norm is an infimum over scales `b`; it is located by bracket
//! expansion from `b = 1` and bisection, and the reported value is the upper
//! end of the bracket, so the modular constraint always holds there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DistributionProfile, GridFunction};
use crate::probe::{le_with_slack, REL_SLACK};
use crate::weight::Weight;
use crate::young::YoungFunction;

/// Bracket width, relative to the upper end, at which bisection stops.
pub const NORM_REL_WIDTH: f64 = 1e-12;
/// Bracket expansion stops at `2^±64`.
pub const SCALE_CAP_EXPONENT: i32 = 64;

const MAX_STEPS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub bracket: [f64; 2],
    pub evaluations: usize,
    pub finite: bool,
}

impl NormResult {
    fn exact(value: f64, evaluations: usize) -> Self {
        NormResult {
            value,
            bracket: [value, value],
            evaluations,
            finite: value.is_finite(),
        }
    }
}

/// `max_k Φ(v_k/b)·M_k`; 0 for an empty profile.
pub fn weak_modular(profile: &DistributionProfile, phi: &YoungFunction, b: f64) -> f64 {
    profile
        .levels
        .iter()
        .map(|l| phi.value(l.value / b) * l.measure)
        .fold(0.0, f64::max)
}

fn weighted_profile(u: &Weight, f: &GridFunction) -> Result<DistributionProfile> {
    Ok(f.apply_weight(u)?.distribution_profile())
}

/// `‖f‖` in the weighted weak Orlicz space of `Φ` and `u`.
pub fn weak_orlicz_norm(phi: &YoungFunction, u: &Weight, f: &GridFunction) -> Result<NormResult> {
    Ok(weak_orlicz_norm_of_profile(phi, &weighted_profile(u, f)?))
}

/// Luxemburg-type infimum `inf { b > 0 : modular(b) ≤ 1 }` for a profile.
pub fn weak_orlicz_norm_of_profile(phi: &YoungFunction, profile: &DistributionProfile) -> NormResult {
    if profile.is_empty() {
        return NormResult::exact(0.0, 0);
    }
    let mut evaluations = 0;
    let mut feasible = |b: f64| {
        evaluations += 1;
        weak_modular(profile, phi, b) <= 1.0
    };
    let cap = 2f64.powi(SCALE_CAP_EXPONENT);
    let floor = 2f64.powi(-SCALE_CAP_EXPONENT);

    let (mut lo, mut hi);
    if feasible(1.0) {
        hi = 1.0;
        lo = 0.5;
        while feasible(lo) {
            hi = lo;
            if lo < floor {
                lo = 0.0;
                break;
            }
            lo *= 0.5;
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        while !feasible(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > cap {
                return NormResult {
                    value: f64::INFINITY,
                    bracket: [lo, f64::INFINITY],
                    evaluations,
                    finite: false,
                };
            }
        }
    }
    let mut steps = 0;
    while hi - lo > NORM_REL_WIDTH * hi && steps < MAX_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    NormResult {
        value: hi,
        bracket: [lo, hi],
        evaluations,
        finite: true,
    }
}

/// `‖f‖` in the weighted weak Lebesgue space `wL_p^u`.
pub fn weak_lebesgue_norm(p: f64, u: &Weight, f: &GridFunction) -> Result<NormResult> {
    check_exponent(p)?;
    Ok(weak_lebesgue_norm_of_profile(p, &weighted_profile(u, f)?))
}

/// `max_k v_k·M_k^{1/p}`.
pub fn weak_lebesgue_norm_of_profile(p: f64, profile: &DistributionProfile) -> NormResult {
    let inv = p.recip();
    let value = profile
        .levels
        .iter()
        .map(|l| l.value * l.measure.powf(inv))
        .fold(0.0, f64::max);
    NormResult::exact(value, profile.levels.len())
}

pub fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "p",
            value: p,
            reason: "weak Lebesgue exponent must be finite and >= 1",
        })
    }
}

/// Whether the modular at `b = ‖f‖ + ε` is at most 1.
pub fn modular_bound_check(
    phi: &YoungFunction,
    u: &Weight,
    f: &GridFunction,
    eps: f64,
) -> Result<bool> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Domain {
            name: "eps",
            value: eps,
            reason: "must be finite and positive",
        });
    }
    let profile = weighted_profile(u, f)?;
    let norm = weak_orlicz_norm_of_profile(phi, &profile);
    if !norm.finite {
        return Err(Error::Precondition("norm is not finite at this truncation".into()));
    }
    Ok(le_with_slack(weak_modular(&profile, phi, norm.value + eps), 1.0, REL_SLACK))
}

/// Either gauge family, so callers can treat `wL_p^u` and `wL_Φ^u` alike.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    Lebesgue(f64),
    Orlicz(YoungFunction),
}

impl Gauge {
    pub fn norm(&self, u: &Weight, f: &GridFunction) -> Result<NormResult> {
        match self {
            Gauge::Lebesgue(p) => weak_lebesgue_norm(*p, u, f),
            Gauge::Orlicz(phi) => weak_orlicz_norm(phi, u, f),
        }
    }

    pub fn norm_of_profile(&self, profile: &DistributionProfile) -> NormResult {
        match self {
            Gauge::Lebesgue(p) => weak_lebesgue_norm_of_profile(*p, profile),
            Gauge::Orlicz(phi) => weak_orlicz_norm_of_profile(phi, profile),
        }
    }

    /// The Young function generating this gauge (`t^p` for Lebesgue).
    pub fn young(&self) -> YoungFunction {
        match self {
            Gauge::Lebesgue(p) => YoungFunction::Power { p: *p },
            Gauge::Orlicz(phi) => phi.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Gauge::Lebesgue(p) => format!("weak L^{p}"),
            Gauge::Orlicz(phi) => format!("weak Orlicz[{}]", phi.label()),
        }
    }
}
