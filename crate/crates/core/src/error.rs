use thiserror::Error;

/// Configuration and lookup failures. A run that hits one of these produces
/// no report at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown campaign `{0}`")]
    UnknownCampaign(String),
    #[error("unknown mutant `{mutant}` for {case_study}")]
    UnknownMutant { case_study: String, mutant: String },
    #[error("repetitions must be a positive odd integer, got {0}")]
    InvalidRepetitions(u32),
    #[error("campaign `{0}` has no statistical relation; repetitions cannot be overridden")]
    NotStatistical(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
