//! Train/test protocols, single-run evaluation and the kills quadrant statistic.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::data::{sort_chronological, MatchDataset, MatchOutcome, MatchRecord, DEFAULT_ROSTER_SIZE};
use crate::error::{Error, Result};
use crate::features::{
    build_hero_dataset, build_window_dataset, resolve_window_feature, window_vector, MetricVariant,
    Variant,
};
use crate::learner::Learner;
use crate::math;
use crate::select::{select_features, FeatureSubset, SearchConfig, SelectorKind, DEFAULT_FOLDS};
use crate::table::FeatureTable;
use crate::Metric;

/// Absorbs the rounding error of `f * n` before taking the ceiling, so that
/// 0.66 of 100 matches is 66 and not 67.
const FRACTION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum SplitSpec {
    /// The earliest `ceil(f * n)` matches train, the rest test.
    Chronological { train_fraction: f64 },
    /// One tournament's matches test, everything else trains.
    TournamentHoldout { tournament_id: String },
}

impl fmt::Display for SplitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitSpec::Chronological { train_fraction } => write!(f, "chrono:{train_fraction}"),
            SplitSpec::TournamentHoldout { tournament_id } => write!(f, "holdout:{tournament_id}"),
        }
    }
}

/// Number of training rows for a chronological split of `n` rows.
pub fn train_count(n: usize, train_fraction: f64) -> usize {
    (math::ceil(train_fraction * n as f64 - FRACTION_SLACK).max(0.0) as usize).min(n)
}

/// Splits matches into `(train, test)`. Chronological splits return both
/// sides in chronological order; holdout splits keep input order.
pub fn split(matches: &[MatchRecord], spec: &SplitSpec) -> Result<(Vec<MatchRecord>, Vec<MatchRecord>)> {
    if matches.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (train, test) = match spec {
        SplitSpec::Chronological { train_fraction } => {
            let f = *train_fraction;
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidConfig(alloc::format!(
                    "train fraction must lie in (0, 1), got {f}"
                )));
            }
            let mut sorted = sort_chronological(matches.to_vec());
            let test = sorted.split_off(train_count(matches.len(), f));
            (sorted, test)
        }
        SplitSpec::TournamentHoldout { tournament_id } => {
            let (test, train): (Vec<_>, Vec<_>) = matches
                .iter()
                .cloned()
                .partition(|m| m.tournament_id.as_deref() == Some(tournament_id.as_str()));
            if test.is_empty() {
                return Err(Error::UnknownTournament(tournament_id.clone()));
            }
            (train, test)
        }
    };
    if train.is_empty() {
        return Err(Error::EmptySide("train"));
    }
    if test.is_empty() {
        return Err(Error::EmptySide("test"));
    }
    Ok((train, test))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Hero { roster_size: u16 },
    InGame { t: u32, include_timestamps: bool },
}

impl Representation {
    pub fn hero() -> Self {
        Representation::Hero {
            roster_size: DEFAULT_ROSTER_SIZE,
        }
    }

    pub fn in_game(t: u32) -> Self {
        Representation::InGame {
            t,
            include_timestamps: false,
        }
    }

    /// Builds the feature table for `matches`; also returns how many matches
    /// produced no row.
    pub fn build(&self, dataset: &MatchDataset, matches: Vec<MatchRecord>) -> Result<(FeatureTable, usize)> {
        match *self {
            Representation::Hero { roster_size } => {
                let vectors = build_hero_dataset(&matches, roster_size)?;
                Ok((FeatureTable::from_hero_vectors(&vectors, roster_size), 0))
            }
            Representation::InGame {
                t,
                include_timestamps,
            } => {
                let built = build_window_dataset(&dataset.subset(matches), t)?;
                Ok((
                    FeatureTable::from_window_vectors(&built.vectors, include_timestamps),
                    built.skipped,
                ))
            }
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Hero { .. } => f.write_str("hero"),
            Representation::InGame { t, .. } => write!(f, "ingame@{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    All,
    /// A single named column; bare window variants such as `Kills_R-D` mean
    /// the value at the window end.
    SingleFeature(String),
    Cfs,
    Wrapper,
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::All => f.write_str("all"),
            Selection::SingleFeature(n) => write!(f, "single:{n}"),
            Selection::Cfs => f.write_str("cfs"),
            Selection::Wrapper => f.write_str("wrapper"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub representation: Representation,
    pub learner: Learner,
    pub selection: Selection,
    pub split: SplitSpec,
    pub search: SearchConfig,
    /// Cross-validation folds of the wrapper selector.
    pub folds: usize,
    /// Seed of the wrapper's fold assignment.
    pub seed: u64,
}

impl RunConfig {
    pub fn new(representation: Representation, learner: Learner, selection: Selection, split: SplitSpec) -> Self {
        RunConfig {
            representation,
            learner,
            selection,
            split,
            search: SearchConfig::default(),
            folds: DEFAULT_FOLDS,
            seed: 1,
        }
    }
}

/// Confusion counts with `RadiantWin` as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn tally(predicted: &[MatchOutcome], actual: &[MatchOutcome]) -> Confusion {
        let mut c = Confusion::default();
        for (p, a) in predicted.iter().zip(actual) {
            match (p.is_radiant(), a.is_radiant()) {
                (true, true) => c.tp += 1,
                (false, false) => c.tn += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn accuracy(&self) -> f64 {
        if self.total() == 0 {
            return 0.0;
        }
        (self.tp + self.tn) as f64 / self.total() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub config: RunConfig,
    pub accuracy: f64,
    pub confusion: Confusion,
    pub selected_features: Vec<String>,
    /// Selector score of the chosen subset (CFS merit or CV accuracy).
    pub selection_score: Option<f64>,
    pub train_size: usize,
    pub test_size: usize,
    /// Matches that produced no feature row (too short for the window).
    pub skipped: usize,
}

/// Column indices chosen on `train` for `selection`.
pub fn choose_columns(run: &RunConfig, train: &FeatureTable) -> Result<(FeatureSubset, Option<f64>)> {
    match &run.selection {
        Selection::All => Ok((FeatureSubset::full(train.n_features()), None)),
        Selection::SingleFeature(name) => {
            let resolved = match run.representation {
                Representation::InGame { .. } => resolve_window_feature(name),
                Representation::Hero { .. } => Some(name.clone()),
            };
            let idx = resolved
                .and_then(|n| train.feature_index(&n))
                .ok_or_else(|| Error::UnknownFeature(name.clone()))?;
            Ok((FeatureSubset::new(alloc::vec![idx]), None))
        }
        Selection::Cfs => {
            let s = select_features(train, SelectorKind::Cfs, &run.search)?;
            Ok((s.subset, Some(s.score)))
        }
        Selection::Wrapper => {
            let kind = SelectorKind::Wrapper {
                learner: run.learner,
                folds: run.folds,
                seed: run.seed,
            };
            let s = select_features(train, kind, &run.search)?;
            Ok((s.subset, Some(s.score)))
        }
    }
}

/// Selection, training and scoring on already-built tables. Only `train`
/// reaches the selector and the learner.
pub fn evaluate_tables(run: &RunConfig, train: &FeatureTable, test: &FeatureTable) -> Result<EvalReport> {
    if train.n_rows() == 0 {
        return Err(Error::EmptySide("train"));
    }
    if test.n_rows() == 0 {
        return Err(Error::EmptySide("test"));
    }
    if !train.has_both_classes() {
        return Err(Error::SingleClassData);
    }
    let (subset, selection_score) = choose_columns(run, train)?;
    let train_x = train.select_columns(subset.indices());
    let test_x = test.select_columns(subset.indices());
    let model = run.learner.adapted_to(train_x.n_features()).train(&train_x)?;
    let predicted = model.predict_table(&test_x)?;
    let confusion = Confusion::tally(&predicted, test_x.labels());
    Ok(EvalReport {
        config: run.clone(),
        accuracy: confusion.accuracy(),
        confusion,
        selected_features: train_x.names().to_vec(),
        selection_score,
        train_size: train.n_rows(),
        test_size: test.n_rows(),
        skipped: 0,
    })
}

/// Splits matches, builds the representation on each side, selects features
/// and trains on the training side, and scores on the test side.
pub fn evaluate(run: &RunConfig, dataset: &MatchDataset) -> Result<EvalReport> {
    let (train_m, test_m) = split(dataset.matches(), &run.split)?;
    let (train, skipped_train) = run.representation.build(dataset, train_m)?;
    let (test, skipped_test) = run.representation.build(dataset, test_m)?;
    let mut report = evaluate_tables(run, &train, &test)?;
    report.skipped = skipped_train + skipped_test;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadrantPoint {
    pub match_id: String,
    pub kills_r_minus_d: f64,
    pub winner: MatchOutcome,
}

/// Kills difference at minute `t` against the winner, per eligible match.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrantStats {
    pub points: Vec<QuadrantPoint>,
    /// Matches with a positive difference, and how many of them Radiant won.
    pub above: usize,
    pub above_radiant: usize,
    /// Matches with a negative difference, and how many of them Dire won.
    pub below: usize,
    pub below_dire: usize,
    /// Matches with equal kills, excluded from both fractions.
    pub zero: usize,
    pub skipped: usize,
}

impl QuadrantStats {
    pub fn from_points(points: Vec<QuadrantPoint>, skipped: usize) -> QuadrantStats {
        let mut s = QuadrantStats {
            points: Vec::new(),
            above: 0,
            above_radiant: 0,
            below: 0,
            below_dire: 0,
            zero: 0,
            skipped,
        };
        for p in &points {
            if p.kills_r_minus_d > 0.0 {
                s.above += 1;
                s.above_radiant += p.winner.is_radiant() as usize;
            } else if p.kills_r_minus_d < 0.0 {
                s.below += 1;
                s.below_dire += (!p.winner.is_radiant()) as usize;
            } else {
                s.zero += 1;
            }
        }
        s.points = points;
        s
    }

    /// Share of Radiant wins among matches where Radiant leads in kills.
    pub fn radiant_above(&self) -> Option<f64> {
        (self.above > 0).then(|| self.above_radiant as f64 / self.above as f64)
    }

    /// Share of Dire wins among matches where Dire leads in kills.
    pub fn dire_below(&self) -> Option<f64> {
        (self.below > 0).then(|| self.below_dire as f64 / self.below as f64)
    }
}

pub fn quadrant_stats(dataset: &MatchDataset, t: u32) -> Result<QuadrantStats> {
    let kills_diff = MetricVariant::new(Metric::Kills, Variant::RminusD);
    let mut points = Vec::new();
    let mut skipped = 0;
    for m in dataset.matches() {
        match window_vector(dataset, &m.match_id, t) {
            Ok(w) => points.push(QuadrantPoint {
                match_id: m.match_id.to_string(),
                kills_r_minus_d: w.get(kills_diff, t).unwrap_or(0.0),
                winner: w.label,
            }),
            Err(e @ Error::WindowBelowMinimum { .. }) => return Err(e),
            Err(_) => skipped += 1,
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(QuadrantStats::from_points(points, skipped))
}
