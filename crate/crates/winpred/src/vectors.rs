//! Feature-vector CSV output.
//!
//! `hero_vectors.csv`: `match_id,label,h0..h{roster-1}` with entries -1/0/1.
//! `window_vectors_t<t>.csv`: `match_id,label,ts1..ts5` followed by the 150
//! window columns in canonical order.

use std::io::Write;

use winpred_core::features::{window_feature_names, WINDOW_LEN};
use winpred_core::{HeroVector, WindowVector};

use crate::csvio::format_real;
use crate::error::Result;

pub fn write_hero_vectors<W: Write>(out: W, vectors: &[HeroVector], roster_size: u16) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["match_id".to_string(), "label".to_string()];
    header.extend((0..roster_size).map(|i| format!("h{i}")));
    w.write_record(&header)?;
    for v in vectors {
        let mut row = vec![v.match_id.clone(), v.label.to_string()];
        row.extend(v.values.iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_window_vectors<W: Write>(out: W, vectors: &[WindowVector]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["match_id".to_string(), "label".to_string()];
    header.extend((1..=WINDOW_LEN).map(|i| format!("ts{i}")));
    header.extend(window_feature_names());
    w.write_record(&header)?;
    for v in vectors {
        let mut row = vec![v.match_id.clone(), v.label.to_string()];
        row.extend(v.timestamps().iter().map(|t| t.to_string()));
        row.extend(v.features.iter().map(|&x| format_real(x)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn window_file_name(t: u32) -> String {
    format!("window_vectors_t{t}.csv")
}

pub const HERO_FILE_NAME: &str = "hero_vectors.csv";
