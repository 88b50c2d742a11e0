//! Match and per-minute metric data model.
//!
//! A [`MatchDataset`] is immutable once built: every match id is unique,
//! every match with metrics has exactly one [`MetricSample`] for each minute
//! `0..=duration_minutes`, and every cumulative metric is non-decreasing in
//! time.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub const TEAM_SIZE: usize = 5;
pub const DEFAULT_ROSTER_SIZE: u16 = 113;

/// Index of a hero in the roster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeroId(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchOutcome {
    DireWin,
    RadiantWin,
}

impl MatchOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchOutcome::DireWin => "DireWin",
            MatchOutcome::RadiantWin => "RadiantWin",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "DireWin" => Some(MatchOutcome::DireWin),
            "RadiantWin" => Some(MatchOutcome::RadiantWin),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            MatchOutcome::DireWin => MatchOutcome::RadiantWin,
            MatchOutcome::RadiantWin => MatchOutcome::DireWin,
        }
    }

    /// The team that wins under this outcome.
    pub fn winner(self) -> Team {
        match self {
            MatchOutcome::DireWin => Team::Dire,
            MatchOutcome::RadiantWin => Team::Radiant,
        }
    }

    pub fn is_radiant(self) -> bool {
        self == MatchOutcome::RadiantWin
    }
}

impl fmt::Display for MatchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Team {
    Dire,
    Radiant,
}

impl Team {
    pub fn other(self) -> Team {
        match self {
            Team::Dire => Team::Radiant,
            Team::Radiant => Team::Dire,
        }
    }

    pub fn victory(self) -> MatchOutcome {
        match self {
            Team::Dire => MatchOutcome::DireWin,
            Team::Radiant => MatchOutcome::RadiantWin,
        }
    }
}

/// The six cumulative team metrics tracked per minute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    DamageDealt,
    Kills,
    LastHits,
    NetWorth,
    TowerDamage,
    XpGained,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::DamageDealt,
        Metric::Kills,
        Metric::LastHits,
        Metric::NetWorth,
        Metric::TowerDamage,
        Metric::XpGained,
    ];
    pub const COUNT: usize = 6;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::DamageDealt => "DamageDealt",
            Metric::Kills => "Kills",
            Metric::LastHits => "LastHits",
            Metric::NetWorth => "NetWorth",
            Metric::TowerDamage => "TowerDamage",
            Metric::XpGained => "XpGained",
        }
    }

    pub fn from_name(name: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// Five distinct heroes picked by one team, kept sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TeamPicks([HeroId; TEAM_SIZE]);

impl TeamPicks {
    /// Builds a team from raw ids. `match_id` is only used in error messages.
    pub fn new(match_id: &str, ids: &[u16]) -> Result<Self> {
        if ids.len() != TEAM_SIZE {
            return Err(Error::InvariantViolation {
                match_id: match_id.to_string(),
                reason: format!("team has {} heroes, expected {}", ids.len(), TEAM_SIZE),
            });
        }
        let mut sorted = [HeroId(0); TEAM_SIZE];
        for (slot, &id) in sorted.iter_mut().zip(ids) {
            *slot = HeroId(id);
        }
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvariantViolation {
                match_id: match_id.to_string(),
                reason: "hero picked twice by the same team".to_string(),
            });
        }
        Ok(TeamPicks(sorted))
    }

    pub fn heroes(&self) -> &[HeroId; TEAM_SIZE] {
        &self.0
    }

    pub fn contains(&self, hero: HeroId) -> bool {
        self.0.binary_search(&hero).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchRecord {
    pub match_id: String,
    /// Epoch seconds.
    pub start_time: i64,
    pub is_professional: bool,
    pub tournament_id: Option<String>,
    pub duration_minutes: u32,
    pub radiant_heroes: TeamPicks,
    pub dire_heroes: TeamPicks,
    pub winner: MatchOutcome,
    pub skill_score: Option<i64>,
}

impl MatchRecord {
    /// Checks the record-level invariants against a roster of `roster_size`
    /// heroes: positive duration, in-roster heroes, disjoint teams, and a
    /// skill score on every public match.
    pub fn validate(&self, roster_size: u16) -> Result<()> {
        if self.duration_minutes < 1 {
            return Err(self.violation("duration must be at least one minute"));
        }
        if !self.is_professional && self.skill_score.is_none() {
            return Err(self.violation("public match without skill_score"));
        }
        for hero in self.radiant_heroes.heroes().iter().chain(self.dire_heroes.heroes()) {
            if hero.0 >= roster_size {
                return Err(self.violation(&format!(
                    "hero {} outside roster of size {}",
                    hero.0, roster_size
                )));
            }
        }
        if self
            .radiant_heroes
            .heroes()
            .iter()
            .any(|h| self.dire_heroes.contains(*h))
        {
            return Err(self.violation("hero picked by both teams"));
        }
        Ok(())
    }

    /// The same match seen from the other side: teams, metrics and winner swapped.
    pub fn swap_teams(&self) -> MatchRecord {
        MatchRecord {
            radiant_heroes: self.dire_heroes,
            dire_heroes: self.radiant_heroes,
            winner: self.winner.flipped(),
            ..self.clone()
        }
    }

    fn violation(&self, reason: &str) -> Error {
        Error::InvariantViolation {
            match_id: self.match_id.clone(),
            reason: reason.to_string(),
        }
    }
}

/// Cumulative team totals at one minute of a match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    pub minute: u32,
    pub dire: [f64; Metric::COUNT],
    pub radiant: [f64; Metric::COUNT],
}

impl MetricSample {
    pub fn value(&self, metric: Metric, team: Team) -> f64 {
        match team {
            Team::Dire => self.dire[metric.index()],
            Team::Radiant => self.radiant[metric.index()],
        }
    }

    pub fn swapped(&self) -> MetricSample {
        MetricSample {
            minute: self.minute,
            dire: self.radiant,
            radiant: self.dire,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchDataset {
    matches: Vec<MatchRecord>,
    metrics: BTreeMap<String, Vec<MetricSample>>,
}

impl MatchDataset {
    /// A dataset with match records only, for pre-match (hero) features.
    pub fn without_metrics(matches: Vec<MatchRecord>) -> Result<Self> {
        check_unique_ids(&matches)?;
        Ok(MatchDataset {
            matches,
            metrics: BTreeMap::new(),
        })
    }

    /// Attaches per-minute samples to their matches and validates coverage.
    ///
    /// Every match must end up with exactly one sample for each minute in
    /// `0..=duration_minutes`; samples may arrive in any order.
    pub fn from_samples<I>(matches: Vec<MatchRecord>, samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, MetricSample)>,
    {
        check_unique_ids(&matches)?;
        let durations: BTreeMap<&str, u32> = matches
            .iter()
            .map(|m| (m.match_id.as_str(), m.duration_minutes))
            .collect();
        let mut metrics: BTreeMap<String, Vec<MetricSample>> = BTreeMap::new();
        for (match_id, sample) in samples {
            let Some(&duration) = durations.get(match_id.as_str()) else {
                return Err(Error::UnknownMatchId(match_id));
            };
            if sample.minute > duration {
                return Err(Error::MinuteOutOfRange {
                    match_id,
                    minute: sample.minute,
                    duration,
                });
            }
            let valid = |v: &f64| v.is_finite() && *v >= 0.0;
            if !sample.dire.iter().all(valid) || !sample.radiant.iter().all(valid) {
                return Err(Error::InvalidMetricValue {
                    match_id,
                    minute: sample.minute,
                });
            }
            metrics.entry(match_id).or_default().push(sample);
        }

        for m in &matches {
            let samples = metrics.entry(m.match_id.clone()).or_default();
            samples.sort_by_key(|s| s.minute);
            validate_series(&m.match_id, m.duration_minutes, samples)?;
        }
        Ok(MatchDataset { matches, metrics })
    }

    pub fn matches(&self) -> &[MatchRecord] {
        &self.matches
    }

    pub fn has_metrics(&self) -> bool {
        !self.metrics.is_empty()
    }

    pub fn record(&self, match_id: &str) -> Option<&MatchRecord> {
        self.matches.iter().find(|m| m.match_id == match_id)
    }

    /// Samples of one match ordered by minute (empty if none were loaded).
    pub fn samples(&self, match_id: &str) -> &[MetricSample] {
        self.metrics.get(match_id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The sample of `match_id` at `minute`.
    pub fn sample(&self, match_id: &str, minute: u32) -> Result<&MetricSample> {
        // Validated series are dense from minute 0, so the minute is the index.
        self.samples(match_id)
            .get(minute as usize)
            .filter(|s| s.minute == minute)
            .ok_or_else(|| Error::MissingSample {
                match_id: match_id.to_string(),
                minute,
            })
    }

    /// Restricts the dataset to the given matches, keeping their metrics.
    pub fn subset(&self, matches: Vec<MatchRecord>) -> MatchDataset {
        let metrics = matches
            .iter()
            .filter_map(|m| {
                self.metrics
                    .get(&m.match_id)
                    .map(|s| (m.match_id.clone(), s.clone()))
            })
            .collect();
        MatchDataset { matches, metrics }
    }

    pub fn into_parts(self) -> (Vec<MatchRecord>, BTreeMap<String, Vec<MetricSample>>) {
        (self.matches, self.metrics)
    }
}

fn check_unique_ids(matches: &[MatchRecord]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for m in matches {
        if !seen.insert(m.match_id.as_str()) {
            return Err(Error::DuplicateMatchId(m.match_id.clone()));
        }
    }
    Ok(())
}

fn validate_series(match_id: &str, duration: u32, samples: &[MetricSample]) -> Result<()> {
    for (expected, s) in (0..=duration).zip(samples) {
        if s.minute != expected {
            // Sorted input: a repeat of the previous minute or a gap.
            return Err(if s.minute < expected {
                Error::DuplicateMinute {
                    match_id: match_id.to_string(),
                    minute: s.minute,
                }
            } else {
                Error::MissingMinute {
                    match_id: match_id.to_string(),
                    minute: expected,
                }
            });
        }
    }
    let expected_len = duration as usize + 1;
    if samples.len() < expected_len {
        return Err(Error::MissingMinute {
            match_id: match_id.to_string(),
            minute: samples.len() as u32,
        });
    }
    if samples.len() > expected_len {
        // Every minute is present, so the surplus must be a repeat.
        let dup = samples.windows(2).find(|w| w[0].minute == w[1].minute);
        return Err(Error::DuplicateMinute {
            match_id: match_id.to_string(),
            minute: dup.map_or(duration, |w| w[0].minute),
        });
    }
    for w in samples.windows(2) {
        for metric in Metric::ALL {
            for team in [Team::Dire, Team::Radiant] {
                if w[1].value(metric, team) < w[0].value(metric, team) {
                    return Err(Error::NonMonotoneCumulative {
                        match_id: match_id.to_string(),
                        minute: w[1].minute,
                        metric,
                        team,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Stable ascending sort by start time, ties broken by match id.
pub fn sort_chronological(mut matches: Vec<MatchRecord>) -> Vec<MatchRecord> {
    matches.sort_by(|a, b| {
        a.start_time
            .cmp(&b.start_time)
            .then_with(|| a.match_id.cmp(&b.match_id))
    });
    matches
}

/// Distribution of match durations in whole minutes.
#[derive(Debug, Clone, PartialEq)]
pub struct DurationHistogram {
    counts: BTreeMap<u32, usize>,
    total: usize,
}

impl DurationHistogram {
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<u32, usize> {
        &self.counts
    }

    /// Fraction of matches per duration; values sum to one.
    pub fn fractions(&self) -> BTreeMap<u32, f64> {
        self.counts
            .iter()
            .map(|(&minute, &c)| (minute, c as f64 / self.total as f64))
            .collect()
    }

    pub fn count_at_least(&self, minutes: u32) -> usize {
        self.counts.range(minutes..).map(|(_, c)| c).sum()
    }

    pub fn fraction_at_least(&self, minutes: u32) -> f64 {
        self.count_at_least(minutes) as f64 / self.total as f64
    }
}

pub fn duration_histogram(matches: &[MatchRecord], pro_only: bool) -> Result<DurationHistogram> {
    let mut counts = BTreeMap::new();
    let mut total = 0;
    for m in matches.iter().filter(|m| !pro_only || m.is_professional) {
        *counts.entry(m.duration_minutes).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::EmptySelection);
    }
    Ok(DurationHistogram { counts, total })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn record(id: &str, start: i64, duration: u32, winner: MatchOutcome) -> MatchRecord {
        MatchRecord {
            match_id: id.to_string(),
            start_time: start,
            is_professional: false,
            tournament_id: None,
            duration_minutes: duration,
            radiant_heroes: TeamPicks::new(id, &[1, 2, 3, 4, 5]).unwrap(),
            dire_heroes: TeamPicks::new(id, &[6, 7, 8, 9, 10]).unwrap(),
            winner,
            skill_score: Some(6500),
        }
    }

    pub(crate) fn flat_sample(minute: u32, dire: f64, radiant: f64) -> MetricSample {
        MetricSample {
            minute,
            dire: [dire; Metric::COUNT],
            radiant: [radiant; Metric::COUNT],
        }
    }

    fn series(id: &str, minutes: impl IntoIterator<Item = u32>) -> Vec<(String, MetricSample)> {
        minutes
            .into_iter()
            .map(|t| (id.to_string(), flat_sample(t, t as f64, 2.0 * t as f64)))
            .collect()
    }

    #[test]
    fn team_size_and_duplicates_are_rejected() {
        assert!(matches!(
            TeamPicks::new("m", &[1, 2, 3, 4]),
            Err(Error::InvariantViolation { .. })
        ));
        assert!(matches!(
            TeamPicks::new("m", &[1, 2, 3, 4, 4]),
            Err(Error::InvariantViolation { .. })
        ));
        let t = TeamPicks::new("m", &[9, 3, 7, 1, 5]).unwrap();
        assert_eq!(t.heroes().map(|h| h.0), [1, 3, 5, 7, 9]);
    }

    #[test]
    fn overlapping_teams_and_out_of_roster_heroes_fail_validation() {
        let mut m = record("m", 0, 30, MatchOutcome::RadiantWin);
        m.dire_heroes = TeamPicks::new("m", &[1, 7, 8, 9, 10]).unwrap();
        assert!(matches!(m.validate(113), Err(Error::InvariantViolation { .. })));

        let m = record("m", 0, 30, MatchOutcome::RadiantWin);
        assert!(m.validate(113).is_ok());
        assert!(matches!(m.validate(10), Err(Error::InvariantViolation { .. })));
    }

    #[test]
    fn full_coverage_loads() {
        let ds = MatchDataset::from_samples(
            vec![record("a", 0, 3, MatchOutcome::DireWin)],
            series("a", [3, 1, 0, 2]),
        )
        .unwrap();
        assert_eq!(ds.samples("a").len(), 4);
        assert_eq!(ds.sample("a", 2).unwrap().minute, 2);
    }

    #[test]
    fn coverage_errors() {
        let m = || vec![record("a", 0, 3, MatchOutcome::DireWin)];
        assert_eq!(
            MatchDataset::from_samples(m(), series("a", [0, 1, 3])),
            Err(Error::MissingMinute { match_id: "a".into(), minute: 2 })
        );
        assert_eq!(
            MatchDataset::from_samples(m(), series("a", [0, 1, 2])),
            Err(Error::MissingMinute { match_id: "a".into(), minute: 3 })
        );
        assert_eq!(
            MatchDataset::from_samples(m(), series("a", [0, 1, 1, 2, 3])),
            Err(Error::DuplicateMinute { match_id: "a".into(), minute: 1 })
        );
        assert_eq!(
            MatchDataset::from_samples(m(), series("a", [0, 1, 2, 3, 3])),
            Err(Error::DuplicateMinute { match_id: "a".into(), minute: 3 })
        );
        assert!(matches!(
            MatchDataset::from_samples(m(), series("a", [0, 1, 2, 3, 50])),
            Err(Error::MinuteOutOfRange { minute: 50, duration: 3, .. })
        ));
        assert_eq!(
            MatchDataset::from_samples(m(), series("zz", [0])),
            Err(Error::UnknownMatchId("zz".into()))
        );
    }

    #[test]
    fn decreasing_kills_are_rejected() {
        let mut samples = series("a", 0..=10);
        for (t, s) in samples.iter_mut().enumerate() {
            s.1.dire[Metric::Kills.index()] = if t == 6 { 1.0 } else { (t as f64).min(2.0) };
        }
        let err = MatchDataset::from_samples(
            vec![record("a", 0, 10, MatchOutcome::DireWin)],
            samples,
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::NonMonotoneCumulative {
                match_id: "a".into(),
                minute: 6,
                metric: Metric::Kills,
                team: Team::Dire,
            }
        );
    }

    #[test]
    fn duplicate_match_ids_are_rejected() {
        let ms = vec![
            record("a", 0, 3, MatchOutcome::DireWin),
            record("a", 1, 3, MatchOutcome::DireWin),
        ];
        assert_eq!(
            MatchDataset::without_metrics(ms),
            Err(Error::DuplicateMatchId("a".into()))
        );
    }

    #[test]
    fn chronological_sort_orders_and_breaks_ties_by_id() {
        let ms = vec![
            record("c", 30, 5, MatchOutcome::DireWin),
            record("b", 10, 5, MatchOutcome::DireWin),
            record("a", 10, 5, MatchOutcome::DireWin),
            record("d", 20, 5, MatchOutcome::DireWin),
        ];
        let sorted = sort_chronological(ms);
        let ids: Vec<&str> = sorted.iter().map(|m| m.match_id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "d", "c"]);
        assert!(sort_chronological(Vec::new()).is_empty());
    }

    #[test]
    fn histogram_counts_long_matches() {
        let ms: Vec<_> = [10, 20, 30, 40]
            .iter()
            .enumerate()
            .map(|(i, &d)| record(&format!("m{i}"), 0, d, MatchOutcome::DireWin))
            .collect();
        let h = duration_histogram(&ms, false).unwrap();
        assert_eq!(h.fraction_at_least(20), 0.75);
        assert!((h.fractions().values().sum::<f64>() - 1.0).abs() < 1e-9);
        assert_eq!(duration_histogram(&ms, true), Err(Error::EmptySelection));
    }
}
