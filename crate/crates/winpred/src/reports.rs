//! Plot-ready CSVs for the kills quadrant and match durations.

use std::io::Write;

use winpred_core::data::DurationHistogram;
use winpred_core::eval::QuadrantStats;

use crate::csvio::format_real;
use crate::error::Result;

pub fn write_quadrant_points<W: Write>(mut w: W, stats: &QuadrantStats) -> Result<()> {
    writeln!(w, "match_id,kills_r_minus_d,winner")?;
    for p in &stats.points {
        writeln!(w, "{},{},{}", p.match_id, format_real(p.kills_r_minus_d), p.winner)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_durations<W: Write>(mut w: W, hist: &DurationHistogram) -> Result<()> {
    writeln!(w, "minute,count,fraction")?;
    let fractions = hist.fractions();
    for (minute, count) in hist.counts() {
        writeln!(w, "{minute},{count},{:.6}", fractions[minute])?;
    }
    w.flush()?;
    Ok(())
}

/// Share formatted as a percentage, or `n/a` when undefined.
pub fn percent(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{:.2}%", 100.0 * v))
}
