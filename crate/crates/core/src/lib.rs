//! Intramorphic testing: check a program against a variant of itself built by
//! swapping one component, under a relation between the two outputs.
//!
//! The crate ships four case studies (sorting, expression printing, Monte
//! Carlo estimation of pi, and 0/1 knapsack), the baseline oracles they are
//! compared against, and a seeded campaign harness that runs them.

pub mod baselines;
pub mod cases;
pub mod error;
pub mod exec;
pub mod generators;
pub mod harness;
pub mod oracle;
pub mod registry;

pub use error::{Error, Result};
pub use exec::{Budget, ExecutionFailure};
pub use generators::{GeneratorConfig, SeededSource};
pub use harness::{
    run_campaign, run_detection_matrix, CampaignConfig, CampaignReport, DetectionMatrix, StopMode,
};
pub use oracle::{
    evaluate_pair, IntramorphicRelation, ProgramPair, RelationOutcome, Repetitions,
    TransformationDescriptor,
};
