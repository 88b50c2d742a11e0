//! `matches.csv` and `metrics.csv` reading and canonical writing.
//!
//! The canonical form is what [`write_matches`] and [`write_metrics`] emit:
//! LF line endings, hero lists sorted and always quoted, other fields quoted
//! only when they contain a comma, quote or line break, reals with at most
//! six decimals and no trailing zeros.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use winpred_core::{MatchDataset, MatchOutcome, MatchRecord, Metric, MetricSample, TeamPicks};

use crate::error::{Error, Result};

pub const MATCHES_HEADER: [&str; 9] = [
    "match_id",
    "start_time",
    "is_professional",
    "tournament_id",
    "duration_minutes",
    "radiant_heroes",
    "dire_heroes",
    "winner",
    "skill_score",
];

pub const METRICS_HEADER: [&str; 14] = [
    "match_id",
    "minute",
    "dire_damage",
    "radiant_damage",
    "dire_kills",
    "radiant_kills",
    "dire_lasthits",
    "radiant_lasthits",
    "dire_networth",
    "radiant_networth",
    "dire_towerdamage",
    "radiant_towerdamage",
    "dire_xp",
    "radiant_xp",
];

/// Formats a real with up to six decimals, trailing zeros removed.
pub fn format_real(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        &s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Quotes a field only when CSV requires it.
fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(input)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::MalformedRow {
            line: 1,
            reason: format!("header must be `{}`", expected.join(",")),
        });
    }
    Ok(())
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn parse<T: std::str::FromStr>(rec: &csv::StringRecord, col: usize, what: &str) -> Result<T> {
    rec[col].parse().map_err(|_| Error::MalformedRow {
        line: line_of(rec),
        reason: format!("{what}: cannot parse `{}`", &rec[col]),
    })
}

fn parse_heroes(rec: &csv::StringRecord, col: usize, match_id: &str) -> Result<TeamPicks> {
    let ids = rec[col]
        .split(';')
        .map(|h| h.trim().parse::<u16>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::MalformedRow {
            line: line_of(rec),
            reason: format!("{}: bad hero list `{}`", MATCHES_HEADER[col], &rec[col]),
        })?;
    Ok(TeamPicks::new(match_id, &ids)?)
}

/// Reads and validates match rows, keeping file order.
pub fn read_matches<R: Read>(input: R, roster_size: u16) -> Result<Vec<MatchRecord>> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &MATCHES_HEADER)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != MATCHES_HEADER.len() {
            return Err(Error::MalformedRow {
                line: line_of(&rec),
                reason: format!("expected {} columns, found {}", MATCHES_HEADER.len(), rec.len()),
            });
        }
        let match_id = rec[0].to_string();
        if match_id.is_empty() {
            return Err(Error::MalformedRow {
                line: line_of(&rec),
                reason: "empty match_id".into(),
            });
        }
        let is_professional = match &rec[2] {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::MalformedRow {
                    line: line_of(&rec),
                    reason: format!("is_professional must be true or false, got `{other}`"),
                })
            }
        };
        let winner = MatchOutcome::parse(&rec[7]).ok_or_else(|| Error::MalformedRow {
            line: line_of(&rec),
            reason: format!("winner must be RadiantWin or DireWin, got `{}`", &rec[7]),
        })?;
        let record = MatchRecord {
            start_time: parse(&rec, 1, "start_time")?,
            is_professional,
            tournament_id: (!rec[3].is_empty()).then(|| rec[3].to_string()),
            duration_minutes: parse(&rec, 4, "duration_minutes")?,
            radiant_heroes: parse_heroes(&rec, 5, &match_id)?,
            dire_heroes: parse_heroes(&rec, 6, &match_id)?,
            winner,
            skill_score: if rec[8].is_empty() {
                None
            } else {
                Some(parse(&rec, 8, "skill_score")?)
            },
            match_id,
        };
        record.validate(roster_size)?;
        if !seen.insert(record.match_id.clone()) {
            return Err(winpred_core::Error::DuplicateMatchId(record.match_id).into());
        }
        out.push(record);
    }
    Ok(out)
}

pub fn load_matches(path: &Path, roster_size: u16) -> Result<Vec<MatchRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_matches(BufReader::new(file), roster_size)
}

fn hero_list(team: &TeamPicks) -> String {
    let ids: Vec<String> = team.heroes().iter().map(|h| h.0.to_string()).collect();
    format!("\"{}\"", ids.join(";"))
}

pub fn write_matches<W: Write>(out: W, matches: &[MatchRecord]) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "{}", MATCHES_HEADER.join(","))?;
    for m in matches {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            field(&m.match_id),
            m.start_time,
            m.is_professional,
            field(m.tournament_id.as_deref().unwrap_or("")),
            m.duration_minutes,
            hero_list(&m.radiant_heroes),
            hero_list(&m.dire_heroes),
            m.winner,
            m.skill_score.map(|s| s.to_string()).unwrap_or_default(),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Reads per-minute samples and attaches them to `matches`.
pub fn read_metrics<R: Read>(input: R, matches: Vec<MatchRecord>) -> Result<MatchDataset> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &METRICS_HEADER)?;
    let mut samples = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != METRICS_HEADER.len() {
            return Err(Error::MalformedRow {
                line: line_of(&rec),
                reason: format!("expected {} columns, found {}", METRICS_HEADER.len(), rec.len()),
            });
        }
        let mut sample = MetricSample {
            minute: parse(&rec, 1, "minute")?,
            dire: [0.0; Metric::COUNT],
            radiant: [0.0; Metric::COUNT],
        };
        for metric in Metric::ALL {
            let col = 2 + 2 * metric.index();
            sample.dire[metric.index()] = parse(&rec, col, METRICS_HEADER[col])?;
            sample.radiant[metric.index()] = parse(&rec, col + 1, METRICS_HEADER[col + 1])?;
        }
        samples.push((rec[0].to_string(), sample));
    }
    Ok(MatchDataset::from_samples(matches, samples)?)
}

pub fn load_metrics(path: &Path, matches: Vec<MatchRecord>) -> Result<MatchDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_metrics(BufReader::new(file), matches)
}

/// Writes every sample, matches in dataset order and minutes ascending.
pub fn write_metrics<W: Write>(out: W, dataset: &MatchDataset) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "{}", METRICS_HEADER.join(","))?;
    for m in dataset.matches() {
        for s in dataset.samples(&m.match_id) {
            write!(w, "{},{}", field(&m.match_id), s.minute)?;
            for metric in Metric::ALL {
                let k = metric.index();
                write!(w, ",{},{}", format_real(s.dire[k]), format_real(s.radiant[k]))?;
            }
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Loads matches and, when given, their metrics.
pub fn load_dataset(matches: &Path, metrics: Option<&Path>, roster_size: u16) -> Result<MatchDataset> {
    let records = load_matches(matches, roster_size)?;
    match metrics {
        Some(p) => load_metrics(p, records),
        None => Ok(MatchDataset::without_metrics(records)?),
    }
}

pub fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}
