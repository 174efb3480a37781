//! Weights `u: ℝⁿ → (0, ∞)`, the submultiplicative class `U` and the
//! domination relation `u₁ ≼ u₂`.
//!
//! Comparisons are done on `ln u` so that rapidly growing weights such as
//! `e^{a|x|²}` can be compared far from the origin without overflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radius of the cube the submultiplicativity pairs are drawn from.
pub const SUBMULT_RADIUS: f64 = 16.0;
/// Radii the domination sweep escalates through.
pub const ESCALATION_RADII: [f64; 4] = [1.0, 4.0, 16.0, 64.0];

/// Shape of a weight, independent of dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum WeightKind {
    /// `u ≡ 1`.
    One,
    /// `e^{a|x|}`.
    ExpNorm { a: f64 },
    /// `(1 + |x|)^a`.
    PolyNorm { a: f64 },
    /// `e^{a|x|²}`; not submultiplicative.
    GaussExp { a: f64 },
    /// Pointwise product.
    Product {
        left: Box<WeightKind>,
        right: Box<WeightKind>,
    },
    /// Pointwise quotient. Used for derived weights such as `u₁/u₂`.
    Quotient {
        numerator: Box<WeightKind>,
        denominator: Box<WeightKind>,
    },
}

impl WeightKind {
    fn value(&self, r: f64) -> f64 {
        match *self {
            WeightKind::One => 1.0,
            WeightKind::ExpNorm { a } => (a * r).exp(),
            WeightKind::PolyNorm { a } => (1.0 + r).powf(a),
            WeightKind::GaussExp { a } => (a * r * r).exp(),
            WeightKind::Product { ref left, ref right } => left.value(r) * right.value(r),
            WeightKind::Quotient {
                ref numerator,
                ref denominator,
            } => numerator.value(r) / denominator.value(r),
        }
    }

    fn ln_value(&self, r: f64) -> f64 {
        match *self {
            WeightKind::One => 0.0,
            WeightKind::ExpNorm { a } => a * r,
            WeightKind::PolyNorm { a } => a * r.ln_1p(),
            WeightKind::GaussExp { a } => a * r * r,
            WeightKind::Product { ref left, ref right } => left.ln_value(r) + right.ln_value(r),
            WeightKind::Quotient {
                ref numerator,
                ref denominator,
            } => numerator.ln_value(r) - denominator.ln_value(r),
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidParameter { name: "a", reason });
        match *self {
            WeightKind::One => Ok(()),
            WeightKind::ExpNorm { a } | WeightKind::PolyNorm { a } => {
                if a.is_finite() && a >= 0.0 {
                    Ok(())
                } else {
                    bad(format!("rate must be finite and >= 0, got {a}"))
                }
            }
            WeightKind::GaussExp { a } => {
                if a.is_finite() && a > 0.0 {
                    Ok(())
                } else {
                    bad(format!("rate must be finite and > 0, got {a}"))
                }
            }
            WeightKind::Product { ref left, ref right } => {
                left.check()?;
                right.check()
            }
            WeightKind::Quotient {
                ref numerator,
                ref denominator,
            } => {
                numerator.check()?;
                denominator.check()
            }
        }
    }

    fn label(&self) -> String {
        match *self {
            WeightKind::One => "1".into(),
            WeightKind::ExpNorm { a } => format!("exp({a}|x|)"),
            WeightKind::PolyNorm { a } => format!("(1+|x|)^{a}"),
            WeightKind::GaussExp { a } => format!("exp({a}|x|^2)"),
            WeightKind::Product { ref left, ref right } => {
                format!("{}*{}", left.label(), right.label())
            }
            WeightKind::Quotient {
                ref numerator,
                ref denominator,
            } => format!("{}/{}", numerator.label(), denominator.label()),
        }
    }
}

/// A radial weight on `ℝⁿ`, `n ∈ {1, 2, 3}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub n: usize,
    #[serde(flatten)]
    pub kind: WeightKind,
}

impl Weight {
    pub fn new(kind: WeightKind, n: usize) -> Result<Self> {
        let w = Weight { n, kind };
        w.check_parameters()?;
        Ok(w)
    }

    pub fn one(n: usize) -> Self {
        Weight { n, kind: WeightKind::One }
    }

    pub fn exp_norm(a: f64, n: usize) -> Result<Self> {
        Self::new(WeightKind::ExpNorm { a }, n)
    }

    pub fn poly_norm(a: f64, n: usize) -> Result<Self> {
        Self::new(WeightKind::PolyNorm { a }, n)
    }

    pub fn gauss_exp(a: f64, n: usize) -> Result<Self> {
        Self::new(WeightKind::GaussExp { a }, n)
    }

    pub fn product(left: &Weight, right: &Weight) -> Result<Self> {
        same_dimension(left, right)?;
        Ok(Weight {
            n: left.n,
            kind: WeightKind::Product {
                left: Box::new(left.kind.clone()),
                right: Box::new(right.kind.clone()),
            },
        })
    }

    pub fn quotient(numerator: &Weight, denominator: &Weight) -> Result<Self> {
        same_dimension(numerator, denominator)?;
        Ok(Weight {
            n: numerator.n,
            kind: WeightKind::Quotient {
                numerator: Box::new(numerator.kind.clone()),
                denominator: Box::new(denominator.kind.clone()),
            },
        })
    }

    pub fn check_parameters(&self) -> Result<()> {
        if !(1..=3).contains(&self.n) {
            return Err(Error::UnsupportedDimension(self.n));
        }
        self.kind.check()
    }

    pub fn is_one(&self) -> bool {
        self.kind == WeightKind::One
    }

    /// `u(x)` without dimension checks.
    #[inline]
    pub fn value(&self, x: &[f64]) -> f64 {
        self.kind.value(norm(x))
    }

    /// `ln u(x)` without dimension checks.
    #[inline]
    pub fn ln_value(&self, x: &[f64]) -> f64 {
        self.kind.ln_value(norm(x))
    }

    /// `u(x)`, checking that `x` is a finite point of `ℝⁿ`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if let Some(&bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                name: "x",
                value: bad,
                reason: "coordinates must be finite",
            });
        }
        Ok(self.value(x))
    }

    pub fn label(&self) -> String {
        format!("{} on R^{}", self.kind.label(), self.n)
    }
}

fn same_dimension(a: &Weight, b: &Weight) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Additive-recurrence low-discrepancy sequence in `[0, 1)^d`.
fn quasi_random(d: usize, count: usize) -> Vec<Vec<f64>> {
    // generalized golden ratio: positive root of x^{d+1} = x + 1
    let mut g = 2.0f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (d as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=d).map(|i| g.powi(-(i as i32)).fract()).collect();
    (1..=count)
        .map(|k| alpha.iter().map(|a| (0.5 + a * k as f64).fract()).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `u(x + y)`
    pub lhs: f64,
    /// `u(x)·u(y)`
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmultiplicativeReport {
    pub passed: bool,
    pub pairs_checked: usize,
    pub radius: f64,
    pub counterexample: Option<Counterexample>,
}

/// Probes `u(x + y) ≤ u(x)·u(y)`.
///
/// The probe pairs are the unit-diagonal pair `(e₁, e₁)`, its mirror
/// `(e₁, −e₁)`, then `samples` low-discrepancy pairs in `[−16, 16]ⁿ`.
pub fn check_submultiplicative(u: &Weight, samples: usize) -> SubmultiplicativeReport {
    let n = u.n;
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let minus_e1: Vec<f64> = e1.iter().map(|v| -v).collect();
    let mut pairs = vec![(e1.clone(), e1.clone()), (e1, minus_e1)];
    pairs.extend(quasi_random(2 * n, samples).into_iter().map(|p| {
        let scaled: Vec<f64> = p.iter().map(|v| SUBMULT_RADIUS * (2.0 * v - 1.0)).collect();
        (scaled[..n].to_vec(), scaled[n..].to_vec())
    }));

    let slack = crate::probe::REL_SLACK.ln_1p();
    let mut checked = 0;
    for (x, y) in pairs {
        checked += 1;
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let ln_lhs = u.ln_value(&sum);
        let ln_rhs = u.ln_value(&x) + u.ln_value(&y);
        if ln_lhs > ln_rhs + slack {
            return SubmultiplicativeReport {
                passed: false,
                pairs_checked: checked,
                radius: SUBMULT_RADIUS,
                counterexample: Some(Counterexample {
                    lhs: ln_lhs.exp(),
                    rhs: ln_rhs.exp(),
                    x,
                    y,
                }),
            };
        }
    }
    SubmultiplicativeReport {
        passed: true,
        pairs_checked: checked,
        radius: SUBMULT_RADIUS,
        counterexample: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominationStatus {
    /// The running maximum of `u₁/u₂` stabilized.
    Holds,
    /// The running maximum grew at every escalation.
    GrowthDetected,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscalationStep {
    pub radius: f64,
    pub ln_max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationResult {
    pub status: DominationStatus,
    /// `C` with `u₁ ≤ C·u₂` on every probe, when the sweep stabilized.
    pub constant: Option<f64>,
    /// Probe at which `u₁/u₂` is largest.
    pub witness_x: Vec<f64>,
    pub trace: Vec<EscalationStep>,
}

impl DominationResult {
    pub fn holds(&self) -> bool {
        self.status == DominationStatus::Holds
    }
}

/// Deterministic probe set inside `[−R, R]ⁿ`: the origin, a 9-point-per-axis
/// lattice, and radial rays along every direction in `{−1, 0, 1}ⁿ \ {0}` at
/// radii `R·2^{−j/4}`, `j = 0..=40`.
pub fn domination_probes(n: usize, radius: f64) -> Vec<Vec<f64>> {
    let mut probes = vec![vec![0.0; n]];
    let axis: Vec<f64> = (0..9).map(|i| radius * (i as f64 / 4.0 - 1.0)).collect();
    for idx in 0..9usize.pow(n as u32) {
        let mut rest = idx;
        let mut p = vec![0.0; n];
        for c in p.iter_mut().rev() {
            *c = axis[rest % 9];
            rest /= 9;
        }
        probes.push(p);
    }
    for idx in 0..3usize.pow(n as u32) {
        let mut rest = idx;
        let mut dir = vec![0.0; n];
        for c in dir.iter_mut().rev() {
            *c = (rest % 3) as f64 - 1.0;
            rest /= 3;
        }
        let len = norm(&dir);
        if len == 0.0 {
            continue;
        }
        for j in 0..=40 {
            let r = radius * (-(j as f64) / 4.0).exp2();
            // scale so that the largest coordinate is r (stays inside the cube)
            let m = dir.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            probes.push(dir.iter().map(|v| v / m * r).collect());
        }
    }
    probes
}

/// Sweeps `u₁/u₂` over [`domination_probes`] with the radius escalating
/// through 1, 4, 16, 64.
pub fn check_dominates(u1: &Weight, u2: &Weight) -> Result<DominationResult> {
    same_dimension(u1, u2)?;
    let mut best = (f64::NEG_INFINITY, vec![0.0; u1.n]);
    let mut trace = Vec::with_capacity(ESCALATION_RADII.len());
    for &radius in &ESCALATION_RADII {
        for x in domination_probes(u1.n, radius) {
            let ln_ratio = u1.ln_value(&x) - u2.ln_value(&x);
            if ln_ratio > best.0 {
                best = (ln_ratio, x);
            }
        }
        trace.push(EscalationStep {
            radius,
            ln_max_ratio: best.0,
        });
    }
    let k = trace.len();
    let last_change = trace[k - 1].ln_max_ratio - trace[k - 2].ln_max_ratio;
    let status = if last_change < 1e-3f64.ln_1p() {
        DominationStatus::Holds
    } else if trace.windows(2).all(|w| w[1].ln_max_ratio > w[0].ln_max_ratio) {
        DominationStatus::GrowthDetected
    } else {
        DominationStatus::Undetermined
    };
    Ok(DominationResult {
        status,
        constant: (status == DominationStatus::Holds).then(|| best.0.exp()),
        witness_x: best.1,
        trace,
    })
}
