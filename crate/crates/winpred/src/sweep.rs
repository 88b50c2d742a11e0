//! Runs a grid of configurations and writes the report CSV and the
//! accuracy table.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use winpred_core::eval::evaluate;
use winpred_core::{EvalReport, MatchDataset, RunConfig};

use crate::error::{Error, Result};
use crate::grid::GridRun;

/// Worker count override for sweeps.
pub const WORKERS_ENV: &str = "WINPRED_WORKERS";

pub const REPORT_HEADER: &str =
    "run_id,representation,learner,selection,split,accuracy,tp,tn,fp,fn,train_size,test_size,selected_features";

#[derive(Debug)]
pub struct RunOutcome {
    pub id: String,
    pub config: RunConfig,
    pub result: Result<EvalReport, winpred_core::Error>,
}

fn workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Evaluates every run in parallel. Outcomes come back in grid order and a
/// failing run does not stop the others.
pub fn run_grid(runs: &[GridRun], dataset: &MatchDataset) -> Result<Vec<RunOutcome>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers())
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        runs.par_iter()
            .map(|run| {
                let result = evaluate(&run.config, dataset);
                match &result {
                    Ok(r) => log::info!("{}: accuracy {:.4}", run.id, r.accuracy),
                    Err(e) => log::warn!("{}: {e}", run.id),
                }
                RunOutcome {
                    id: run.id.clone(),
                    config: run.config.clone(),
                    result,
                }
            })
            .collect()
    }))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One report line. Failed runs carry `error` as accuracy, empty counts and
/// the error message in the last column.
pub fn report_row(outcome: &RunOutcome) -> String {
    let c = &outcome.config;
    let lead = [
        outcome.id.clone(),
        c.representation.to_string(),
        c.learner.label(),
        c.selection.to_string(),
        c.split.to_string(),
    ]
    .map(|s| csv_field(&s))
    .join(",");
    match &outcome.result {
        Ok(r) => format!(
            "{lead},{:.6},{},{},{},{},{},{},{}",
            r.accuracy,
            r.confusion.tp,
            r.confusion.tn,
            r.confusion.fp,
            r.confusion.fn_,
            r.train_size,
            r.test_size,
            csv_field(&r.selected_features.join(";")),
        ),
        Err(e) => format!("{lead},error,,,,,,,{}", csv_field(&e.to_string())),
    }
}

pub fn write_report<W: Write>(mut w: W, outcomes: &[RunOutcome]) -> Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for o in outcomes {
        writeln!(w, "{}", report_row(o))?;
    }
    w.flush()?;
    Ok(())
}

/// Accuracy tables in Markdown: one table per representation and split,
/// learners as rows, selections as columns, best cell in bold.
pub fn write_markdown<W: Write>(mut w: W, outcomes: &[RunOutcome]) -> Result<()> {
    // Insertion order of groups, rows and columns follows the grid.
    let mut groups: Vec<(String, Vec<&RunOutcome>)> = Vec::new();
    for o in outcomes {
        let key = format!("{} / {}", o.config.representation, o.config.split);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(o),
            None => groups.push((key, vec![o])),
        }
    }
    for (gi, (title, members)) in groups.iter().enumerate() {
        if gi > 0 {
            writeln!(w)?;
        }
        let mut rows: Vec<String> = Vec::new();
        let mut cols: Vec<String> = Vec::new();
        let mut cells: BTreeMap<(usize, usize), String> = BTreeMap::new();
        let best = members
            .iter()
            .filter_map(|o| o.result.as_ref().ok().map(|r| r.accuracy))
            .fold(None, |acc: Option<f64>, a| Some(acc.map_or(a, |b| b.max(a))));
        for o in members {
            let row = o.config.learner.label();
            let col = o.config.selection.to_string();
            let ri = rows.iter().position(|r| *r == row).unwrap_or_else(|| {
                rows.push(row);
                rows.len() - 1
            });
            let ci = cols.iter().position(|c| *c == col).unwrap_or_else(|| {
                cols.push(col);
                cols.len() - 1
            });
            let text = match &o.result {
                Ok(r) if Some(r.accuracy) == best => format!("**{:.4}**", 100.0 * r.accuracy),
                Ok(r) => format!("{:.4}", 100.0 * r.accuracy),
                Err(_) => "error".to_string(),
            };
            cells.insert((ri, ci), text);
        }
        writeln!(w, "### {title}")?;
        writeln!(w)?;
        writeln!(w, "| learner | {} |", cols.join(" | "))?;
        writeln!(w, "|---|{}", "---|".repeat(cols.len()))?;
        for (ri, row) in rows.iter().enumerate() {
            let line: Vec<&str> = (0..cols.len())
                .map(|ci| cells.get(&(ri, ci)).map_or("", String::as_str))
                .collect();
            writeln!(w, "| {row} | {} |", line.join(" | "))?;
        }
    }
    w.flush()?;
    Ok(())
}
