//! Regular-grid representation of functions on `ℝⁿ`.
//!
//! `ℝⁿ` is truncated to the box `[−R, R]ⁿ`, split into `mⁿ` equal cells.
//! A [`GridFunction`] stores one value per cell (the value at the cell
//! centre), so every grid function is a step function and its distribution
//! function is computed exactly by counting cells.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weight::{norm, Weight};

/// Box `[−R, R]ⁿ` split into `m` cells per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    #[serde(rename = "R")]
    pub half_width: f64,
    #[serde(rename = "m")]
    pub cells_per_axis: usize,
}

impl GridSpec {
    pub fn new(n: usize, half_width: f64, cells_per_axis: usize) -> Result<Self> {
        let spec = GridSpec {
            n,
            half_width,
            cells_per_axis,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        if !(1..=3).contains(&self.n) {
            return Err(Error::UnsupportedDimension(self.n));
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::InvalidParameter {
                name: "R",
                reason: format!("half width must be finite and > 0, got {}", self.half_width),
            });
        }
        if self.cells_per_axis < 2 || !self.cells_per_axis.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "m",
                reason: format!("cells per axis must be even and >= 2, got {}", self.cells_per_axis),
            });
        }
        Ok(())
    }

    pub fn cell_width(&self) -> f64 {
        2.0 * self.half_width / self.cells_per_axis as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_width().powi(self.n as i32)
    }

    pub fn num_cells(&self) -> usize {
        self.cells_per_axis.pow(self.n as u32)
    }

    pub fn box_volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.n as i32)
    }

    /// Coordinate of the centre of cell `i` along any axis.
    pub fn center_coord(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.cell_width()
    }

    /// Centre of the cell with lexicographic index `idx` (first axis slowest).
    pub fn center(&self, idx: usize) -> Vec<f64> {
        let m = self.cells_per_axis;
        let mut rest = idx;
        let mut x = vec![0.0; self.n];
        for c in x.iter_mut().rev() {
            *c = self.center_coord(rest % m);
            rest /= m;
        }
        x
    }

    /// Calls `f` on every cell centre, in index order.
    pub fn for_each_center<F: FnMut(&[f64])>(&self, mut f: F) {
        let m = self.cells_per_axis;
        let coords: Vec<f64> = (0..m).map(|i| self.center_coord(i)).collect();
        let mut multi = vec![0usize; self.n];
        let mut x: Vec<f64> = vec![coords[0]; self.n];
        for _ in 0..self.num_cells() {
            f(&x);
            // odometer increment, last axis fastest
            for d in (0..self.n).rev() {
                multi[d] += 1;
                if multi[d] < m {
                    x[d] = coords[multi[d]];
                    break;
                }
                multi[d] = 0;
                x[d] = coords[0];
            }
        }
    }

    /// Evaluates `f` at every cell centre, in index order.
    pub fn map_centers<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_cells());
        self.for_each_center(|x| out.push(f(x)));
        out
    }

    pub fn describe(&self) -> String {
        format!(
            "[-{R}, {R}]^{n} with {m} cells per axis",
            R = self.half_width,
            n = self.n,
            m = self.cells_per_axis
        )
    }
}

/// Volume of a ball of radius `r` in `ℝⁿ`, `n ∈ {1, 2, 3}`.
pub fn ball_volume(n: usize, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain {
            name: "r",
            value: r,
            reason: "radius must be finite and positive",
        });
    }
    match n {
        1 => Ok(2.0 * r),
        2 => Ok(std::f64::consts::PI * r * r),
        3 => Ok(4.0 / 3.0 * std::f64::consts::PI * r * r * r),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// Open ball `B(a, r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    #[serde(rename = "a")]
    pub center: Vec<f64>,
    #[serde(rename = "r")]
    pub radius: f64,
    pub n: usize,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        let ball = Ball {
            n: center.len(),
            center,
            radius,
        };
        ball.check()?;
        Ok(ball)
    }

    /// `B(0, r)` in `ℝⁿ`.
    pub fn centered(n: usize, radius: f64) -> Result<Self> {
        Self::new(vec![0.0; n], radius)
    }

    pub fn check(&self) -> Result<()> {
        if !(1..=3).contains(&self.n) {
            return Err(Error::UnsupportedDimension(self.n));
        }
        if self.center.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: self.center.len(),
            });
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                reason: format!("radius must be finite and > 0, got {}", self.radius),
            });
        }
        if self.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: "centre must be finite".into(),
            });
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        ball_volume(self.n, self.radius).expect("checked ball")
    }

    /// Strict membership `|x − a| < r`.
    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        let d2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(xi, ai)| (xi - ai) * (xi - ai))
            .sum();
        d2 < self.radius * self.radius
    }

    pub fn is_inside(&self, spec: &GridSpec) -> bool {
        self.n == spec.n
            && self
                .center
                .iter()
                .all(|c| c.abs() + self.radius <= spec.half_width)
    }

    pub fn ensure_inside(&self, spec: &GridSpec) -> Result<()> {
        if self.n != spec.n {
            return Err(Error::DimensionMismatch {
                expected: spec.n,
                got: self.n,
            });
        }
        if !self.is_inside(spec) {
            return Err(Error::BallOutsideBox {
                center: self.center.clone(),
                radius: self.radius,
                half_width: spec.half_width,
            });
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("B({:?}, {})", self.center, self.radius)
    }
}

/// Catalog of functions that can be sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionExpr {
    Zero,
    /// `χ_B`.
    Indicator { ball: Ball },
    /// `|x|^{−α}`, clamped near the origin (see [`power_decay_clamp`]).
    PowerDecay { alpha: f64 },
    /// `exp(−|x|² / (2σ²))`.
    Gaussian { sigma: f64 },
    Sum { terms: Vec<FunctionExpr> },
    Scale { factor: f64, expr: Box<FunctionExpr> },
    /// `expr` with every cell whose centre lies outside `ball` zeroed.
    Restrict { ball: Ball, expr: Box<FunctionExpr> },
    /// Seeded random step function: each cell (inside `support`, if given)
    /// is nonzero with probability `density`, with value uniform in
    /// `[−max_value, max_value]`. `stream` separates draws sharing a seed.
    RandomSteps {
        stream: u64,
        density: f64,
        max_value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support: Option<Ball>,
    },
}

impl FunctionExpr {
    pub fn indicator(ball: Ball) -> Self {
        FunctionExpr::Indicator { ball }
    }

    pub fn scale(factor: f64, expr: FunctionExpr) -> Self {
        FunctionExpr::Scale {
            factor,
            expr: Box::new(expr),
        }
    }

    pub fn restrict(ball: Ball, expr: FunctionExpr) -> Self {
        FunctionExpr::Restrict {
            ball,
            expr: Box::new(expr),
        }
    }

    /// Parameter and dimension checks against `spec`.
    pub fn check(&self, spec: &GridSpec) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        match self {
            FunctionExpr::Zero => Ok(()),
            FunctionExpr::Indicator { ball } => ball_in_dim(ball, spec),
            FunctionExpr::PowerDecay { alpha } => {
                if alpha.is_finite() && *alpha > 0.0 {
                    Ok(())
                } else {
                    bad("alpha", format!("decay exponent must be finite and > 0, got {alpha}"))
                }
            }
            FunctionExpr::Gaussian { sigma } => {
                if sigma.is_finite() && *sigma > 0.0 {
                    Ok(())
                } else {
                    bad("sigma", format!("width must be finite and > 0, got {sigma}"))
                }
            }
            FunctionExpr::Sum { terms } => terms.iter().try_for_each(|t| t.check(spec)),
            FunctionExpr::Scale { factor, expr } => {
                if !factor.is_finite() {
                    return bad("factor", format!("scale factor must be finite, got {factor}"));
                }
                expr.check(spec)
            }
            FunctionExpr::Restrict { ball, expr } => {
                ball_in_dim(ball, spec)?;
                expr.check(spec)
            }
            FunctionExpr::RandomSteps {
                density,
                max_value,
                support,
                ..
            } => {
                if !(0.0..=1.0).contains(density) {
                    return bad("density", format!("must lie in [0, 1], got {density}"));
                }
                if !(max_value.is_finite() && *max_value > 0.0) {
                    return bad("max_value", format!("must be finite and > 0, got {max_value}"));
                }
                match support {
                    Some(ball) => ball_in_dim(ball, spec),
                    None => Ok(()),
                }
            }
        }
    }

    fn fill(&self, spec: &GridSpec, seed: u64) -> Vec<f64> {
        match self {
            FunctionExpr::Zero => vec![0.0; spec.num_cells()],
            FunctionExpr::Indicator { ball } => {
                spec.map_centers(|x| if ball.contains(x) { 1.0 } else { 0.0 })
            }
            FunctionExpr::PowerDecay { alpha } => {
                let floor = 0.5 * spec.cell_width();
                spec.map_centers(|x| norm(x).max(floor).powf(-alpha))
            }
            FunctionExpr::Gaussian { sigma } => {
                let scale = -0.5 / (sigma * sigma);
                spec.map_centers(|x| (scale * x.iter().map(|v| v * v).sum::<f64>()).exp())
            }
            FunctionExpr::Sum { terms } => {
                let mut acc = vec![0.0; spec.num_cells()];
                for term in terms {
                    for (a, v) in acc.iter_mut().zip(term.fill(spec, seed)) {
                        *a += v;
                    }
                }
                acc
            }
            FunctionExpr::Scale { factor, expr } => {
                let mut v = expr.fill(spec, seed);
                v.iter_mut().for_each(|x| *x *= factor);
                v
            }
            FunctionExpr::Restrict { ball, expr } => {
                let mut v = expr.fill(spec, seed);
                let inside = spec.map_centers(|x| if ball.contains(x) { 1.0 } else { 0.0 });
                for (x, keep) in v.iter_mut().zip(inside) {
                    if keep == 0.0 {
                        *x = 0.0;
                    }
                }
                v
            }
            FunctionExpr::RandomSteps {
                stream,
                density,
                max_value,
                support,
            } => {
                let mut rng = stream_rng(seed, *stream);
                spec.map_centers(|x| {
                    // draw for every cell so the stream does not depend on the support
                    let on = rng.random::<f64>() < *density;
                    let v = (2.0 * rng.random::<f64>() - 1.0) * max_value;
                    let inside = support.as_ref().is_none_or(|b| b.contains(x));
                    if on && inside {
                        v
                    } else {
                        0.0
                    }
                })
            }
        }
    }
}

fn ball_in_dim(ball: &Ball, spec: &GridSpec) -> Result<()> {
    ball.check()?;
    if ball.n != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            got: ball.n,
        });
    }
    Ok(())
}

/// RNG for one named stream under a global seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Value `PowerDecay` takes on cells near the origin: the decay evaluated at
/// half a cell width.
pub fn power_decay_clamp(alpha: f64, spec: &GridSpec) -> f64 {
    (0.5 * spec.cell_width()).powf(-alpha)
}

/// Samples `expr` at the cell centres of `spec`, with seed 0 for random
/// expressions.
pub fn sample(expr: &FunctionExpr, spec: &GridSpec) -> Result<GridFunction> {
    sample_seeded(expr, spec, 0)
}

pub fn sample_seeded(expr: &FunctionExpr, spec: &GridSpec, seed: u64) -> Result<GridFunction> {
    spec.check()?;
    expr.check(spec)?;
    GridFunction::from_values(*spec, expr.fill(spec, seed))
}

/// Samples of a real function, one per cell of a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.check()?;
        if values.len() != spec.num_cells() {
            return Err(Error::InvalidParameter {
                name: "values",
                reason: format!("expected {} cells, got {}", spec.num_cells(), values.len()),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "values",
                reason: format!("non-finite sample {bad}"),
            });
        }
        Ok(GridFunction { spec, values })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        GridFunction {
            values: vec![0.0; spec.num_cells()],
            spec,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        GridFunction {
            spec: self.spec,
            values,
        }
    }

    fn check_weight(&self, u: &Weight) -> Result<()> {
        if u.n != self.spec.n {
            return Err(Error::DimensionMismatch {
                expected: self.spec.n,
                got: u.n,
            });
        }
        Ok(())
    }

    /// Pointwise `u(centre)·f(cell)`.
    pub fn apply_weight(&self, u: &Weight) -> Result<Self> {
        self.check_weight(u)?;
        if u.is_one() {
            return Ok(self.clone());
        }
        let weights = self.spec.map_centers(|x| u.value(x));
        Ok(self.with_values(self.values.iter().zip(weights).map(|(f, w)| f * w).collect()))
    }

    /// Pointwise `f(cell) / u(centre)`.
    pub fn divide_by_weight(&self, u: &Weight) -> Result<Self> {
        self.check_weight(u)?;
        let weights = self.spec.map_centers(|x| u.value(x));
        Ok(self.with_values(self.values.iter().zip(weights).map(|(f, w)| f / w).collect()))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.with_values(self.values.iter().map(|v| c * v).collect())
    }

    /// Pointwise product of two functions on the same grid.
    pub fn multiply(&self, other: &GridFunction) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect()))
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect()))
    }

    fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("{} vs {}", self.spec.describe(), other.spec.describe()),
            });
        }
        Ok(())
    }

    /// Zeroes every cell whose centre lies outside `ball`.
    pub fn restrict(&self, ball: &Ball) -> Result<Self> {
        ball_in_dim(ball, &self.spec)?;
        let inside = self.spec.map_centers(|x| if ball.contains(x) { 1.0 } else { 0.0 });
        Ok(self.with_values(
            self.values
                .iter()
                .zip(inside)
                .map(|(&v, k)| if k == 0.0 { 0.0 } else { v })
                .collect(),
        ))
    }

    /// `L_x f(y) = f(y − x)` for a shift of whole cells per axis.
    ///
    /// Cells shifted in from outside the box are 0. Fails if a nonzero cell
    /// would leave the box.
    pub fn translate(&self, shift: &[i64]) -> Result<Self> {
        if shift.len() != self.spec.n {
            return Err(Error::DimensionMismatch {
                expected: self.spec.n,
                got: shift.len(),
            });
        }
        let m = self.spec.cells_per_axis as i64;
        let mut out = vec![0.0; self.values.len()];
        let mut clipped = 0usize;
        for (idx, &v) in self.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let mut rest = idx as i64;
            let mut target = 0i64;
            let mut stride = 1i64;
            let mut outside = false;
            for d in (0..self.spec.n).rev() {
                let i = rest % m + shift[d];
                rest /= m;
                if !(0..m).contains(&i) {
                    outside = true;
                    break;
                }
                target += i * stride;
                stride *= m;
            }
            if outside {
                clipped += 1;
            } else {
                out[target as usize] = v;
            }
        }
        if clipped > 0 {
            return Err(Error::SupportOverflow {
                cells: clipped,
                measure: clipped as f64 * self.spec.cell_volume(),
            });
        }
        Ok(self.with_values(out))
    }

    /// Converts a physical shift to whole cells.
    pub fn lattice_shift(&self, x: &[f64]) -> Result<Vec<i64>> {
        let h = self.spec.cell_width();
        x.iter()
            .map(|&c| {
                let k = (c / h).round();
                if (c / h - k).abs() > 1e-9 {
                    Err(Error::OffLattice(c))
                } else {
                    Ok(k as i64)
                }
            })
            .collect()
    }

    /// Sorted distinct nonzero `|values|` with the measure of `{|g| ≥ v}`.
    pub fn distribution_profile(&self) -> DistributionProfile {
        let mut mags: Vec<f64> = self
            .values
            .iter()
            .map(|v| v.abs())
            .filter(|&v| v > 0.0)
            .collect();
        mags.sort_by(f64::total_cmp);
        let vol = self.spec.cell_volume();
        let total = mags.len();
        let mut levels = Vec::new();
        let mut i = 0;
        while i < total {
            let v = mags[i];
            levels.push(Level {
                value: v,
                measure: (total - i) as f64 * vol,
            });
            while i < total && mags[i] == v {
                i += 1;
            }
        }
        DistributionProfile { levels }
    }

    /// Measure of `{|g| > t}`.
    pub fn superlevel_measure(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain {
                name: "t",
                value: t,
                reason: "level must be non-negative",
            });
        }
        let count = self.values.iter().filter(|v| v.abs() > t).count();
        Ok(count as f64 * self.spec.cell_volume())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    /// Measure of `{|g| ≥ value}`.
    pub measure: f64,
}

/// Step description of a distribution function.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DistributionProfile {
    pub levels: Vec<Level>,
}

impl DistributionProfile {
    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Measure of `{|g| > t}` implied by the profile.
    pub fn measure_above(&self, t: f64) -> f64 {
        let k = self.levels.partition_point(|l| l.value <= t);
        self.levels.get(k).map_or(0.0, |l| l.measure)
    }

    /// Two-column CSV, header `value,measure`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,measure\n");
        for l in &self.levels {
            out.push_str(&format!("{},{}\n", l.value, l.measure));
        }
        out
    }
}
