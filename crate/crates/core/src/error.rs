use alloc::string::String;

use thiserror::Error;

use crate::data::{Metric, Team};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("match {match_id}: {reason}")]
    InvariantViolation { match_id: String, reason: String },
    #[error("duplicate match id {0}")]
    DuplicateMatchId(String),
    #[error("metric sample refers to unknown match id {0}")]
    UnknownMatchId(String),
    #[error("match {match_id}: {team:?} {metric:?} decreases at minute {minute}")]
    NonMonotoneCumulative {
        match_id: String,
        minute: u32,
        metric: Metric,
        team: Team,
    },
    #[error("match {match_id}: no metric sample for minute {minute}")]
    MissingMinute { match_id: String, minute: u32 },
    #[error("match {match_id}: more than one metric sample for minute {minute}")]
    DuplicateMinute { match_id: String, minute: u32 },
    #[error("match {match_id}: sample at minute {minute} is past the match duration {duration}")]
    MinuteOutOfRange {
        match_id: String,
        minute: u32,
        duration: u32,
    },
    #[error("match {match_id}: metric value at minute {minute} is negative or not finite")]
    InvalidMetricValue { match_id: String, minute: u32 },
    #[error("no matches left after filtering")]
    EmptySelection,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("hero id {hero} outside roster of size {roster_size}")]
    HeroOutOfRange { hero: u16, roster_size: u16 },
    #[error("match {match_id}: missing metric sample at minute {minute}")]
    MissingSample { match_id: String, minute: u32 },
    #[error("match {match_id} lasts {duration} minutes, shorter than window end {t}")]
    MatchTooShort {
        match_id: String,
        duration: u32,
        t: u32,
    },
    #[error("window end minute {t} is below the minimum of {min}")]
    WindowBelowMinimum { t: u32, min: u32 },
    #[error("training data contains a single class")]
    SingleClassData,
    #[error("expected {expected} features, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("feature values must be finite")]
    NonFiniteFeature,
    #[error("no rows to train on")]
    EmptyData,
    #[error("{rows} rows cannot be split into {folds} folds")]
    TooFewRows { rows: usize, folds: usize },
    #[error("split leaves the {0} side empty")]
    EmptySide(&'static str),
    #[error("no match belongs to tournament {0}")]
    UnknownTournament(String),
    #[error("unknown feature {0}")]
    UnknownFeature(String),
    #[error("dataset is empty")]
    EmptyDataset,
}
