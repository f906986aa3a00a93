//! Binary classification with locality-weighted max-margin pair features.
//!
//! The model draws `k` pairs of opposite-class training points, turns each
//! pair into a max-margin hyperplane, and describes every sample by a
//! `tanh` response per hyperplane weighted by a locality confidence. A
//! ridge-regularized linear readout over those features (plus a bias
//! column) yields the classifier. The crate also ships the data handling,
//! cross-validation, and statistical comparison machinery needed to
//! evaluate it against reference models.

pub mod data;
pub mod error;
pub mod eval;
pub mod linalg;
pub mod model;
pub mod records;

pub use error::{Result, VscError};

/// The guide, embedded chapter by chapter.
///
/// Each module's documentation is one chapter of the book in `book/`
/// (readable standalone or via `mdbook build book`). Embedding the
/// chapters here makes every code example in the guide a doc-test, so the
/// book cannot drift from the API: `cargo test --doc` compiles and runs
/// all of it.
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}

    #[doc = include_str!("../../../book/src/geometry.md")]
    pub mod geometry {}

    #[doc = include_str!("../../../book/src/readout.md")]
    pub mod readout {}

    #[doc = include_str!("../../../book/src/data.md")]
    pub mod data {}

    #[doc = include_str!("../../../book/src/evaluation.md")]
    pub mod evaluation {}

    #[doc = include_str!("../../../book/src/sweeps.md")]
    pub mod sweeps {}

    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
