//! Random triangular groups: sampling, freeness certificates, link graphs
//! and spectral property (T) certificates.
//!
//! A triangular presentation has `n` generators and a set of cyclically
//! reduced relators of length three. [`words::sample_binomial`] draws each
//! of the possible relators independently with probability `p`.
//!
//! ```
//! use trigroup::words::sample_binomial;
//! use trigroup::harness::{classify_trial, Thresholds};
//!
//! let p = sample_binomial(30, 0.5 / 900.0, 11).unwrap();
//! let verdict = classify_trial(&p, &Thresholds::default());
//! assert!(verdict.is_consistent());
//! ```

pub mod cli;
pub mod freeness;
pub mod harness;
pub mod linkgraph;
pub mod spectra;
pub mod words;

pub use words::{Letter, Presentation, Word};
