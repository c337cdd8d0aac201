//! Symbolic approximation of time series with season- and trend-aware
//! variants of SAX, lower-bounding distances, pruned linear-scan matching,
//! synthetic dataset generation and an evaluation harness.

pub mod datagen;
pub mod error;
pub mod eval;
pub mod matching;
pub mod quantization;
pub mod sax;
pub mod series;
pub mod ssax;
pub mod storage;
pub mod technique;
pub mod tsax;

pub use error::{Error, Result};
