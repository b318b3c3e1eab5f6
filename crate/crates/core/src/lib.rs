//! Structural fingerprinting of bit-sequence corpora.
//!
//! `seqprint` treats generator outputs as symbolic bit strings and asks a stringology
//! question: how does the multiset of length-m substrings ("patterns") of a corpus differ
//! from that of a reference-random corpus? The crate provides:
//!
//! - [`seqgen`] — deterministic, seed-reproducible generation of cipher-style and
//!   reference-random bit sequences and corpora (an ARX keystream with configurable round
//!   count, a linear congruential generator, and a biased-bit source).
//! - [`extract`] — sliding-window substring occurrence counting at configurable pattern
//!   lengths (stride 1 bit, overlaps counted), producing exact integer profiles.
//! - [`metrics`] — structural metrics over profiles: L1 deviation between normalized
//!   distributions, plug-in pattern entropy, recurrence histograms, concentration stats.
//! - [`fingerprint`] — a fixed-layout feature vector summarizing the metrics across a set
//!   of pattern lengths, with a Euclidean distance.
//! - [`pipeline`] — corpus analysis, seeded permutation null baselines, two-corpus
//!   comparison reports, and the file formats tying it together.
//!
//! All operations are pure functions of their inputs; every random choice is derived from
//! an explicit seed, so corpus generation, analysis, and comparison are bit-reproducible
//! across runs, platforms, and thread counts.

pub mod cli;
pub mod error;
pub mod extract;
pub mod fingerprint;
pub mod metrics;
pub mod mix;
pub mod pipeline;
pub mod seqgen;

pub use error::{Error, Result};
