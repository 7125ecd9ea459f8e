//! Accuracy/compute scaling of verifier-filtered generation.
//!
//! Given the ROC curve of a verifier score and the base generator's accuracy
//! `pi`, this crate computes exactly how rejection sampling and Best-of-N
//! trade generator samples for accuracy, their low- and high-compute limits,
//! and checks those predictions by Monte-Carlo simulation over score pools.

pub mod bon;
pub mod error;
pub mod exec;
pub mod io;
pub mod rejection;
pub mod roc;
pub mod scenarios;
pub mod simulate;

pub use error::{Error, Result};
pub use exec::Execution;
pub use roc::{empirical_roc, CurveKind, LabeledSample, RocCurve, RocPoint, ScorePool};
