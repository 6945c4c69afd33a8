//! Significant-digit arithmetic and Benford's law analysis.
//!
//! The crate covers the full pipeline: exact significand/digit
//! decomposition, the Benford reference distribution, fractional-part
//! equidistribution testing, deterministic sequence generators with a
//! rule-based Benford classifier, seeded Monte Carlo experiments, and
//! conformance reports for empirical datasets.
//!
//! Core numeric functions are generic over the scalar type through
//! `num_traits::Float`; the aliases below pin the common f64 forms.

pub mod conformance;
pub mod error;
pub mod fixed;
pub mod law;
pub mod mod1;
pub mod sequences;
pub mod significand;
pub mod stochastic;

pub use conformance::{AnalyzeOptions, ConformanceReport, EmpiricalSignificands};
pub use error::{BenfordError, Result};
pub use mod1::{DiscrepancyResult, Mod1Sequence};
pub use sequences::{BenfordClassification, ExactBase, SequenceSpec, Verdict};
pub use significand::{DigitVector, SignificandDecomposition};
pub use stochastic::{MixtureLaw, RandomMeasureSpec, RandomVariableSpec, SampleBatch};

/// f64 significand decomposition, the default working type.
pub type Decomposition = SignificandDecomposition<f64>;
/// f32 significand decomposition.
pub type Decomposition32 = SignificandDecomposition<f32>;
