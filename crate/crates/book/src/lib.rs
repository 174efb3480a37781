//! The guide's chapters, one module each, so that `cargo test` runs every
//! code listing in `book/src` as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/young-functions.md")]
pub mod young_functions {}
#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}
#[doc = include_str!("../../../book/src/grids.md")]
pub mod grids {}
#[doc = include_str!("../../../book/src/weak-norms.md")]
pub mod weak_norms {}
#[doc = include_str!("../../../book/src/inequalities.md")]
pub mod inequalities {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
