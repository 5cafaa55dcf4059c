//! Dominant-period extraction from monthly rainfall series.
//!
//! The pipeline decomposes a series with a multilevel discrete wavelet
//! transform ([`dwt`]), removes noise with a fixed-form hard threshold
//! ([`shrinkage`]), then maps the surviving levels to period bands,
//! low-rainfall episodes and a monthly climatology ([`period`]).
//! [`scalogram`] provides a continuous Haar transform for display.

pub mod dwt;
pub mod error;
pub mod period;
pub mod scalogram;
pub mod series;
pub mod shrinkage;

pub use error::{Error, ErrorCategory, Result};
