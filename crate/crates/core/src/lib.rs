//! Weighted weak Orlicz spaces on `ℝⁿ`, discretized on regular grids.
//!
//! The crate evaluates Young functions and weights, samples functions on a
//! box `[−R, R]ⁿ`, computes weak Lebesgue and weak Orlicz norms exactly on the
//! sampled step functions, and numerically checks inclusion, translation and
//! Hölder-type inequalities between these spaces.
//!
//! ```
//! use orlicz_kit::grid::{sample, Ball, FunctionExpr};
//! use orlicz_kit::theorems::char_norm_oracle;
//! use orlicz_kit::{weak_orlicz_norm, GridSpec, Weight, YoungFunction};
//!
//! let ball = Ball::centered(1, 1.0)?;
//! let spec = GridSpec::new(1, 2.0, 4096)?;
//! let chi = sample(&FunctionExpr::indicator(ball.clone()), &spec)?;
//! let phi = YoungFunction::power(2.0)?;
//! let grid = weak_orlicz_norm(&phi, &Weight::one(1), &chi)?.value;
//! let exact = char_norm_oracle(&phi, &ball)?; // √2
//! assert!((grid - exact).abs() / exact < 1e-3);
//! # Ok::<(), orlicz_kit::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its listings are compiled
//! and run as doc-tests by the `orlicz-kit-book` crate.

pub mod error;
pub mod grid;
pub mod norms;
pub mod cli;
pub mod config;
pub mod probe;
pub mod theorems;
pub mod weight;
pub mod young;

pub use error::{Error, Result};
pub use grid::{Ball, DistributionProfile, FunctionExpr, GridFunction, GridSpec, Level};
pub use norms::{weak_lebesgue_norm, weak_orlicz_norm, Gauge, NormResult};
pub use weight::{Weight, WeightKind};
pub use young::YoungFunction;
pub use theorems::{Claim, TestFunction, VerificationReport, Witness};
