//! Pre-match hero vectors and sliding-window in-game vectors.
//!
//! Window features use a fixed flat order: metric-major, variant-minor,
//! offset-innermost, with offsets running from `t-4` up to `t`. The index of
//! `(metric, variant, offset k)` is `(metric * 5 + variant) * 5 + k`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::data::{MatchDataset, MatchOutcome, MatchRecord, Metric, MetricSample, Team};
use crate::error::{Error, Result};

pub const WINDOW_LEN: usize = 5;
/// Smallest window end: every gradient in the window needs a predecessor minute.
pub const MIN_WINDOW_END: u32 = WINDOW_LEN as u32;
pub const VARIANT_COUNT: usize = 5;
pub const BASE_FEATURES: usize = Metric::COUNT * VARIANT_COUNT;
pub const WINDOW_FEATURES: usize = BASE_FEATURES * WINDOW_LEN;

#[derive(Debug, Clone, PartialEq)]
pub struct HeroVector {
    pub match_id: String,
    /// +1 Radiant pick, -1 Dire pick, 0 otherwise.
    pub values: Vec<i8>,
    pub label: MatchOutcome,
}

pub fn hero_vector(record: &MatchRecord, roster_size: u16) -> Result<HeroVector> {
    let mut values = vec![0i8; roster_size as usize];
    let teams = [(&record.radiant_heroes, 1i8), (&record.dire_heroes, -1i8)];
    for (team, sign) in teams {
        for hero in team.heroes() {
            let slot = values
                .get_mut(hero.0 as usize)
                .ok_or(Error::HeroOutOfRange {
                    hero: hero.0,
                    roster_size,
                })?;
            *slot = sign;
        }
    }
    Ok(HeroVector {
        match_id: record.match_id.clone(),
        values,
        label: record.winner,
    })
}

pub fn build_hero_dataset(matches: &[MatchRecord], roster_size: u16) -> Result<Vec<HeroVector>> {
    matches.iter().map(|m| hero_vector(m, roster_size)).collect()
}

/// Per-team derived quantity of one metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    /// Dire cumulative value.
    D,
    /// Radiant cumulative value.
    R,
    RminusD,
    /// Dire one-minute gradient.
    DeltaD,
    /// Radiant one-minute gradient.
    DeltaR,
}

impl Variant {
    pub const ALL: [Variant; VARIANT_COUNT] = [
        Variant::D,
        Variant::R,
        Variant::RminusD,
        Variant::DeltaD,
        Variant::DeltaR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::D => "D",
            Variant::R => "R",
            Variant::RminusD => "R-D",
            Variant::DeltaD => "dD",
            Variant::DeltaR => "dR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetricVariant {
    pub metric: Metric,
    pub variant: Variant,
}

impl MetricVariant {
    pub fn new(metric: Metric, variant: Variant) -> Self {
        MetricVariant { metric, variant }
    }

    /// All 30 pairs in canonical order.
    pub fn all() -> impl Iterator<Item = MetricVariant> {
        Metric::ALL
            .into_iter()
            .flat_map(|m| Variant::ALL.into_iter().map(move |v| MetricVariant::new(m, v)))
    }

    pub fn index(self) -> usize {
        self.metric.index() * VARIANT_COUNT + self.variant as usize
    }

    /// Canonical name, e.g. `Kills_R-D`.
    pub fn name(self) -> String {
        format!("{}_{}", self.metric.name(), self.variant.name())
    }

    pub fn parse(name: &str) -> Option<MetricVariant> {
        MetricVariant::all().find(|mv| mv.name() == name)
    }
}

/// The 30 metric variants at one minute, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseMetrics(pub [f64; BASE_FEATURES]);

impl BaseMetrics {
    pub fn get(&self, mv: MetricVariant) -> f64 {
        self.0[mv.index()]
    }

    fn from_samples(prev: &MetricSample, cur: &MetricSample) -> BaseMetrics {
        let mut out = [0.0; BASE_FEATURES];
        for metric in Metric::ALL {
            let d = cur.value(metric, Team::Dire);
            let r = cur.value(metric, Team::Radiant);
            let base = metric.index() * VARIANT_COUNT;
            out[base] = d;
            out[base + 1] = r;
            out[base + 2] = r - d;
            out[base + 3] = d - prev.value(metric, Team::Dire);
            out[base + 4] = r - prev.value(metric, Team::Radiant);
        }
        BaseMetrics(out)
    }
}

/// Values, differences and one-minute gradients of every metric at minute `t >= 1`.
pub fn base_metrics_at(dataset: &MatchDataset, match_id: &str, t: u32) -> Result<BaseMetrics> {
    if t == 0 {
        return Err(Error::WindowBelowMinimum { t, min: 1 });
    }
    let prev = dataset.sample(match_id, t - 1)?;
    let cur = dataset.sample(match_id, t)?;
    Ok(BaseMetrics::from_samples(prev, cur))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowVector {
    pub match_id: String,
    pub window_end: u32,
    /// 150 values in canonical order.
    pub features: Vec<f64>,
    pub label: MatchOutcome,
}

impl WindowVector {
    pub fn timestamps(&self) -> [u32; WINDOW_LEN] {
        core::array::from_fn(|k| self.window_end + k as u32 + 1 - WINDOW_LEN as u32)
    }

    /// Value of `mv` at absolute minute `minute` inside the window.
    pub fn get(&self, mv: MetricVariant, minute: u32) -> Option<f64> {
        let first = self.window_end + 1 - WINDOW_LEN as u32;
        if minute < first || minute > self.window_end {
            return None;
        }
        Some(self.features[window_index(mv, (minute - first) as usize)])
    }
}

/// Flat index of `mv` at window slot `k` (0 = `t-4`, 4 = `t`).
pub fn window_index(mv: MetricVariant, k: usize) -> usize {
    mv.index() * WINDOW_LEN + k
}

/// Column name of window slot `k`, e.g. `Kills_R-D@t-4` or `Kills_R-D@t`.
pub fn window_feature_name(mv: MetricVariant, k: usize) -> String {
    let back = WINDOW_LEN - 1 - k;
    if back == 0 {
        format!("{}@t", mv.name())
    } else {
        format!("{}@t-{}", mv.name(), back)
    }
}

/// The 150 window column names in canonical order.
pub fn window_feature_names() -> Vec<String> {
    MetricVariant::all()
        .flat_map(|mv| (0..WINDOW_LEN).map(move |k| window_feature_name(mv, k)))
        .collect()
}

/// Resolves a feature name for window data. A bare variant name such as
/// `Kills_R-D` means its value at the window end.
pub fn resolve_window_feature(name: &str) -> Option<String> {
    if window_feature_names().iter().any(|n| n == name) {
        return Some(name.to_string());
    }
    MetricVariant::parse(name).map(|mv| window_feature_name(mv, WINDOW_LEN - 1))
}

pub fn window_vector(dataset: &MatchDataset, match_id: &str, t: u32) -> Result<WindowVector> {
    if t < MIN_WINDOW_END {
        return Err(Error::WindowBelowMinimum {
            t,
            min: MIN_WINDOW_END,
        });
    }
    let record = dataset
        .record(match_id)
        .ok_or_else(|| Error::UnknownMatchId(match_id.to_string()))?;
    if record.duration_minutes < t {
        return Err(Error::MatchTooShort {
            match_id: match_id.to_string(),
            duration: record.duration_minutes,
            t,
        });
    }
    let first = t + 1 - WINDOW_LEN as u32;
    let mut slots = [BaseMetrics([0.0; BASE_FEATURES]); WINDOW_LEN];
    for (k, slot) in slots.iter_mut().enumerate() {
        *slot = base_metrics_at(dataset, match_id, first + k as u32)?;
    }
    let mut features = vec![0.0; WINDOW_FEATURES];
    for mv in MetricVariant::all() {
        for (k, slot) in slots.iter().enumerate() {
            features[window_index(mv, k)] = slot.get(mv);
        }
    }
    Ok(WindowVector {
        match_id: match_id.to_string(),
        window_end: t,
        features,
        label: record.winner,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowDataset {
    pub vectors: Vec<WindowVector>,
    /// Matches that could not produce a window (too short or missing samples).
    pub skipped: usize,
}

/// One window per match lasting at least `t` minutes, in input order.
pub fn build_window_dataset(dataset: &MatchDataset, t: u32) -> Result<WindowDataset> {
    if t < MIN_WINDOW_END {
        return Err(Error::WindowBelowMinimum {
            t,
            min: MIN_WINDOW_END,
        });
    }
    let build = |m: &MatchRecord| window_vector(dataset, &m.match_id, t);

    #[cfg(feature = "parallel")]
    let results: Vec<Result<WindowVector>> = {
        use rayon::prelude::*;
        dataset.matches().par_iter().map(build).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<WindowVector>> = dataset.matches().iter().map(build).collect();

    let mut vectors = Vec::with_capacity(results.len());
    let mut skipped = 0;
    for r in results {
        match r {
            Ok(v) => vectors.push(v),
            Err(e) => {
                log::debug!("skipping match for window at minute {t}: {e}");
                skipped += 1;
            }
        }
    }
    Ok(WindowDataset { vectors, skipped })
}
