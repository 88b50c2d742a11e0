//! Win prediction for two-team MOBA matches.
//!
//! The crate is `no_std` (with `alloc`) and holds every algorithmic piece of
//! the pipeline: the match data model and its validation, a seeded synthetic
//! match generator with a known Bayes rate, hero-pick and sliding-window
//! featurizers, ridge-penalized logistic regression, random forests, the
//! correlation-based and wrapper feature-subset selectors, and the
//! evaluation protocols. File formats and the command-line tool live in the
//! `winpred` crate.
//!
//! Enable the `parallel` feature to train forest trees and score wrapper
//! subsets on a rayon pool. Output is identical with and without it.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod data;
pub mod error;
pub mod eval;
pub mod features;
pub mod learner;
pub mod lr;
mod math;
pub mod rf;
pub mod select;
pub mod synth;
pub mod table;

pub use data::{
    DurationHistogram, HeroId, MatchDataset, MatchOutcome, MatchRecord, Metric, MetricSample, TeamPicks,
    Team, DEFAULT_ROSTER_SIZE, TEAM_SIZE,
};
pub use error::{Error, Result};
pub use eval::{EvalReport, Representation, RunConfig, Selection, SplitSpec};
pub use features::{HeroVector, MetricVariant, Variant, WindowVector};
pub use learner::{Learner, TrainedModel};
pub use lr::{LrConfig, LrModel};
pub use rf::{RfConfig, RfModel, TreeNode};
pub use select::{FeatureSubset, SearchConfig};
pub use synth::SynthConfig;
pub use table::FeatureTable;
