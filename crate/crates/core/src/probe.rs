//! Geometric probe grids.
//!
//! Every "for all t > 0" statement is certified on the grid
//! `{2^-20, ..., 2^20}` with four points per octave; the same points serve as
//! the constant ladder for ordering searches.

/// Smallest and largest binary exponent of the probe grid.
pub const MIN_EXPONENT: i32 = -20;
pub const MAX_EXPONENT: i32 = 20;
/// Grid points per doubling.
pub const POINTS_PER_OCTAVE: i32 = 4;

/// Relative slack allowed on every inequality check.
pub const REL_SLACK: f64 = 1e-9;

/// Number of probe points covering one decade (`log2(10)` octaves).
pub fn points_per_decade() -> usize {
    (std::f64::consts::LOG2_10 * POINTS_PER_OCTAVE as f64).ceil() as usize
}

/// The geometric probe grid in increasing order.
pub fn geometric_grid() -> Vec<f64> {
    (MIN_EXPONENT * POINTS_PER_OCTAVE..=MAX_EXPONENT * POINTS_PER_OCTAVE)
        .map(|k| (k as f64 / POINTS_PER_OCTAVE as f64).exp2())
        .collect()
}

/// `a <= b * (1 + slack)`, treating `inf <= inf` as satisfied.
#[inline]
pub fn le_with_slack(a: f64, b: f64, slack: f64) -> bool {
    a <= b * (1.0 + slack)
}

/// Human-readable description of the grid, for reports.
pub fn describe() -> String {
    format!(
        "geometric grid 2^{}..2^{}, {} points per octave",
        MIN_EXPONENT, MAX_EXPONENT, POINTS_PER_OCTAVE
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_and_size() {
        let g = geometric_grid();
        assert_eq!(g.len(), 161);
        assert_eq!(g[0], 2f64.powi(-20));
        assert_eq!(*g.last().unwrap(), 2f64.powi(20));
        assert_eq!(g[80], 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn decade_width() {
        assert_eq!(points_per_decade(), 14);
    }
}
