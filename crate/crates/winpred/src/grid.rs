//! Run descriptions shared by the `eval`/`train` flags and sweep grid files.
//!
//! A grid file is a list of blocks separated by blank lines. Each block is
//! one run, written as `key = value` lines; `#` starts a comment. Keys are
//! the long flag names of `eval` with `_` or `-`:
//!
//! ```text
//! # LR on the kills difference only
//! id = lr-kills
//! representation = ingame
//! t = 20
//! learner = lr
//! ridge = 1e-4
//! single_feature = Kills_R-D
//! split = chrono:0.66
//!
//! representation = ingame
//! t = 20
//! learner = rf
//! trees = 100
//! selection = cfs
//! ```
//!
//! Omitted keys take the flag defaults. Runs without `id` are named
//! `run<N>` by their position, starting at 1.

use std::fmt;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use winpred_core::features::{resolve_window_feature, MIN_WINDOW_END};
use winpred_core::select::DEFAULT_FOLDS;
use winpred_core::{
    Learner, LrConfig, Representation, RfConfig, RunConfig, SearchConfig, Selection, SplitSpec,
    DEFAULT_ROSTER_SIZE,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepresentationKind {
    Hero,
    Ingame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearnerKind {
    Lr,
    Rf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectionKind {
    All,
    Single,
    Cfs,
    Wrapper,
}

/// Train/test protocol as written on the command line: `chrono:<fraction>`
/// or `holdout:<tournament_id>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitArg(pub SplitSpec);

impl FromStr for SplitArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("expected chrono:<fraction> or holdout:<tournament_id>, got `{s}`");
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "chrono" => {
                let f: f64 = value.parse().map_err(|_| bad())?;
                if !(f > 0.0 && f < 1.0) {
                    return Err(format!("train fraction must lie in (0, 1), got {f}"));
                }
                Ok(SplitArg(SplitSpec::Chronological { train_fraction: f }))
            }
            "holdout" if !value.is_empty() => Ok(SplitArg(SplitSpec::TournamentHoldout {
                tournament_id: value.to_string(),
            })),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SplitArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Everything that defines one evaluation run.
#[derive(Debug, Clone, PartialEq, Args)]
pub struct RunSpec {
    #[arg(long, value_enum, default_value = "ingame")]
    pub representation: RepresentationKind,
    /// Window end minute for in-game features.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(MIN_WINDOW_END as i64..))]
    pub t: u32,
    /// Append the five window timestamps as features.
    #[arg(long)]
    pub include_timestamps: bool,
    /// Taken from the input's --roster-size on the command line.
    #[arg(skip = DEFAULT_ROSTER_SIZE)]
    pub roster_size: u16,
    #[arg(long, value_enum, default_value = "lr")]
    pub learner: LearnerKind,
    #[arg(long, default_value_t = 1e-8)]
    pub ridge: f64,
    /// Standardize LR inputs; defaults to on for in-game and off for hero features.
    #[arg(long)]
    pub standardize: Option<bool>,
    #[arg(long, default_value_t = 2000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    /// Features drawn per tree node; 0 means floor(log2 d) + 1.
    #[arg(long, default_value_t = 0)]
    pub features_per_split: usize,
    /// 0 means unlimited.
    #[arg(long, default_value_t = 0)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 1)]
    pub min_leaf: usize,
    /// Defaults to `single` when --single-feature is given, else `all`.
    #[arg(long, value_enum)]
    pub selection: Option<SelectionKind>,
    /// Feature used by single-feature selection, e.g. `Kills_R-D` or `h17`.
    #[arg(long)]
    pub single_feature: Option<String>,
    #[arg(long, default_value = "chrono:0.66")]
    pub split: SplitArg,
    /// Cross-validation folds of the wrapper selector.
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    pub folds: usize,
    #[arg(long, default_value_t = 5)]
    pub stale_limit: usize,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            representation: RepresentationKind::Ingame,
            t: 20,
            include_timestamps: false,
            roster_size: DEFAULT_ROSTER_SIZE,
            learner: LearnerKind::Lr,
            ridge: 1e-8,
            standardize: None,
            max_iterations: 2000,
            tolerance: 1e-9,
            trees: 100,
            features_per_split: 0,
            max_depth: 0,
            min_leaf: 1,
            selection: None,
            single_feature: None,
            split: SplitArg(SplitSpec::Chronological { train_fraction: 0.66 }),
            folds: DEFAULT_FOLDS,
            stale_limit: 5,
        }
    }
}

impl RunSpec {
    pub fn representation(&self) -> Representation {
        match self.representation {
            RepresentationKind::Hero => Representation::Hero {
                roster_size: self.roster_size,
            },
            RepresentationKind::Ingame => Representation::InGame {
                t: self.t,
                include_timestamps: self.include_timestamps,
            },
        }
    }

    pub fn learner(&self, seed: u64) -> Learner {
        match self.learner {
            LearnerKind::Lr => Learner::Lr(LrConfig {
                ridge: self.ridge,
                max_iterations: self.max_iterations,
                convergence_tolerance: self.tolerance,
                standardize: self
                    .standardize
                    .unwrap_or(self.representation == RepresentationKind::Ingame),
            }),
            LearnerKind::Rf => Learner::Rf(RfConfig {
                num_trees: self.trees,
                features_per_split: self.features_per_split,
                max_depth: self.max_depth,
                min_leaf: self.min_leaf,
                seed,
                bootstrap: true,
            }),
        }
    }

    /// Checks the single-feature name against the representation's columns.
    fn selection(&self) -> Result<Selection> {
        let kind = self.selection.unwrap_or(if self.single_feature.is_some() {
            SelectionKind::Single
        } else {
            SelectionKind::All
        });
        if kind != SelectionKind::Single {
            if self.single_feature.is_some() {
                return Err(Error::Usage(
                    "--single-feature needs --selection single".into(),
                ));
            }
            return Ok(match kind {
                SelectionKind::All => Selection::All,
                SelectionKind::Cfs => Selection::Cfs,
                _ => Selection::Wrapper,
            });
        }
        let name = self
            .single_feature
            .clone()
            .ok_or_else(|| Error::Usage("--selection single needs --single-feature".into()))?;
        let known = match self.representation {
            RepresentationKind::Ingame => {
                resolve_window_feature(&name).is_some()
                    || (self.include_timestamps
                        && matches!(name.as_str(), "ts1" | "ts2" | "ts3" | "ts4" | "ts5"))
            }
            RepresentationKind::Hero => name
                .strip_prefix('h')
                .and_then(|i| i.parse::<u16>().ok())
                .is_some_and(|i| i < self.roster_size && name == format!("h{i}")),
        };
        if !known {
            return Err(Error::Usage(format!(
                "invalid value `{name}` for --single-feature: no such {} feature",
                match self.representation {
                    RepresentationKind::Ingame => "in-game",
                    RepresentationKind::Hero => "hero",
                }
            )));
        }
        Ok(Selection::SingleFeature(name))
    }

    pub fn to_config(&self, seed: u64) -> Result<RunConfig> {
        let mut run = RunConfig::new(
            self.representation(),
            self.learner(seed),
            self.selection()?,
            self.split.0.clone(),
        );
        run.search = SearchConfig {
            stale_limit: self.stale_limit,
        };
        run.folds = self.folds;
        run.seed = seed;
        Ok(run)
    }
}

/// One parsed grid block.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRun {
    pub id: String,
    pub config: RunConfig,
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::MalformedGrid {
        line,
        reason: format!("cannot parse {key} value `{value}`"),
    })
}

fn parse_enum<T: ValueEnum>(line: usize, key: &str, value: &str) -> Result<T> {
    T::from_str(value, true).map_err(|_| Error::MalformedGrid {
        line,
        reason: format!("unknown {key} `{value}`"),
    })
}

fn apply(spec: &mut RunSpec, seed: &mut Option<u64>, id: &mut Option<String>, line: usize, key: &str, value: &str) -> Result<()> {
    match key.replace('-', "_").as_str() {
        "id" => *id = Some(value.to_string()),
        "seed" => *seed = Some(parse_value(line, key, value)?),
        "representation" => spec.representation = parse_enum(line, key, value)?,
        "t" => {
            spec.t = parse_value(line, key, value)?;
            if spec.t < MIN_WINDOW_END {
                return Err(Error::MalformedGrid {
                    line,
                    reason: format!("t must be at least {MIN_WINDOW_END}"),
                });
            }
        }
        "include_timestamps" => spec.include_timestamps = parse_value(line, key, value)?,
        "roster_size" => spec.roster_size = parse_value(line, key, value)?,
        "learner" => spec.learner = parse_enum(line, key, value)?,
        "ridge" => spec.ridge = parse_value(line, key, value)?,
        "standardize" => spec.standardize = Some(parse_value(line, key, value)?),
        "max_iterations" => spec.max_iterations = parse_value(line, key, value)?,
        "tolerance" => spec.tolerance = parse_value(line, key, value)?,
        "trees" => spec.trees = parse_value(line, key, value)?,
        "features_per_split" => spec.features_per_split = parse_value(line, key, value)?,
        "max_depth" => spec.max_depth = parse_value(line, key, value)?,
        "min_leaf" => spec.min_leaf = parse_value(line, key, value)?,
        "selection" => spec.selection = Some(parse_enum(line, key, value)?),
        "single_feature" => spec.single_feature = Some(value.to_string()),
        "split" => {
            spec.split = value
                .parse()
                .map_err(|reason| Error::MalformedGrid { line, reason })?
        }
        "folds" => spec.folds = parse_value(line, key, value)?,
        "stale_limit" => spec.stale_limit = parse_value(line, key, value)?,
        _ => {
            return Err(Error::MalformedGrid {
                line,
                reason: format!("unknown key `{key}`"),
            })
        }
    }
    Ok(())
}

/// Parses a grid file. Blocks without `seed` or `roster_size` keys use the
/// given defaults.
pub fn parse_grid(text: &str, default_seed: u64, roster_size: u16) -> Result<Vec<GridRun>> {
    let mut runs = Vec::new();
    let mut block: Option<(usize, RunSpec, Option<u64>, Option<String>)> = None;
    let finish = |block: &mut Option<(usize, RunSpec, Option<u64>, Option<String>)>, runs: &mut Vec<GridRun>| -> Result<()> {
        if let Some((start, spec, seed, id)) = block.take() {
            let config = spec.to_config(seed.unwrap_or(default_seed)).map_err(|e| match e {
                Error::Usage(reason) => Error::MalformedGrid { line: start, reason },
                other => other,
            })?;
            let id = id.unwrap_or_else(|| format!("run{}", runs.len() + 1));
            runs.push(GridRun { id, config });
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if raw.trim().is_empty() {
            finish(&mut block, &mut runs)?;
            continue;
        }
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::MalformedGrid {
            line,
            reason: "expected `key = value`".into(),
        })?;
        let entry = block.get_or_insert_with(|| {
            let spec = RunSpec {
                roster_size,
                ..RunSpec::default()
            };
            (line, spec, None, None)
        });
        apply(&mut entry.1, &mut entry.2, &mut entry.3, line, key.trim(), value.trim())?;
    }
    finish(&mut block, &mut runs)?;
    if runs.is_empty() {
        return Err(Error::MalformedGrid {
            line: 0,
            reason: "grid has no runs".into(),
        });
    }
    let mut ids = std::collections::HashSet::new();
    for r in &runs {
        if !ids.insert(r.id.as_str()) {
            return Err(Error::MalformedGrid {
                line: 0,
                reason: format!("duplicate run id `{}`", r.id),
            });
        }
    }
    Ok(runs)
}
