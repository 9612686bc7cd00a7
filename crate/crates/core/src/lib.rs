//! Secrecy-distortion regions of secure integrated sensing and communication
//! (ISAC) channels with transmitter actions over finite alphabets.
//!
//! The crate evaluates the single-letter rate and distortion bounds for
//! physically and reversely physically degraded channels, checks the
//! degradedness orderings, synthesizes the optimal per-letter state
//! estimators, and cross-validates the closed forms of the binary
//! multiplicative-Bernoulli example against a generic entropy engine.

pub mod binary;
pub mod channel;
pub mod cli;
pub mod degraded;
pub mod error;
pub mod estimation;
pub mod pmf;
pub mod regions;
pub mod rng;
pub mod simulate;
pub mod spec_file;
pub mod simplex;

pub use error::{IsacError, Result};
