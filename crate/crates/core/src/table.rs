//! Labeled feature matrix shared by learners and selectors.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::data::MatchOutcome;
use crate::error::{Error, Result};
use crate::features::{window_feature_names, HeroVector, WindowVector, WINDOW_LEN};

/// Row-major feature matrix with one label and one match id per row.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    names: Vec<String>,
    values: Vec<f64>,
    labels: Vec<MatchOutcome>,
    ids: Vec<String>,
}

impl FeatureTable {
    pub fn new(
        names: Vec<String>,
        values: Vec<f64>,
        labels: Vec<MatchOutcome>,
        ids: Vec<String>,
    ) -> Result<Self> {
        let n = labels.len();
        if ids.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ids.len(),
            });
        }
        if values.len() != n * names.len() {
            return Err(Error::DimensionMismatch {
                expected: n * names.len(),
                found: values.len(),
            });
        }
        Ok(FeatureTable {
            names,
            values,
            labels,
            ids,
        })
    }

    /// Table without match ids, rows numbered from zero.
    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>], labels: Vec<MatchOutcome>) -> Result<Self> {
        let d = names.len();
        let mut values = Vec::with_capacity(rows.len() * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        let ids = (0..labels.len()).map(|i| i.to_string()).collect();
        FeatureTable::new(names, values, labels, ids)
    }

    pub fn from_hero_vectors(vectors: &[HeroVector], roster_size: u16) -> Self {
        let names = (0..roster_size).map(|i| alloc::format!("h{i}")).collect();
        let values = vectors
            .iter()
            .flat_map(|v| v.values.iter().map(|&x| x as f64))
            .collect();
        FeatureTable {
            names,
            values,
            labels: vectors.iter().map(|v| v.label).collect(),
            ids: vectors.iter().map(|v| v.match_id.clone()).collect(),
        }
    }

    /// Window vectors as a table. Timestamps are constant for a fixed window
    /// end, so they are only appended (as `ts1..ts5`) when asked for.
    pub fn from_window_vectors(vectors: &[WindowVector], include_timestamps: bool) -> Self {
        let mut names = window_feature_names();
        if include_timestamps {
            names.extend((1..=WINDOW_LEN).map(|i| alloc::format!("ts{i}")));
        }
        let mut values = Vec::with_capacity(vectors.len() * names.len());
        for v in vectors {
            values.extend_from_slice(&v.features);
            if include_timestamps {
                values.extend(v.timestamps().iter().map(|&t| t as f64));
            }
        }
        FeatureTable {
            names,
            values,
            labels: vectors.iter().map(|v| v.label).collect(),
            ids: vectors.iter().map(|v| v.match_id.clone()).collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[MatchOutcome] {
        &self.labels
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.n_features();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_features() + col]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_rows()).map(|i| self.value(i, col)).collect()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `(dire, radiant)` label counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let radiant = self.labels.iter().filter(|l| l.is_radiant()).count();
        (self.n_rows() - radiant, radiant)
    }

    pub fn has_both_classes(&self) -> bool {
        let (d, r) = self.class_counts();
        d > 0 && r > 0
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Table restricted to the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FeatureTable {
        let mut values = Vec::with_capacity(self.n_rows() * cols.len());
        for i in 0..self.n_rows() {
            let row = self.row(i);
            values.extend(cols.iter().map(|&c| row[c]));
        }
        FeatureTable {
            names: cols.iter().map(|&c| self.names[c].clone()).collect(),
            values,
            labels: self.labels.clone(),
            ids: self.ids.clone(),
        }
    }

    /// Table restricted to the given rows (repeats allowed).
    pub fn select_rows(&self, rows: &[usize]) -> FeatureTable {
        let mut values = Vec::with_capacity(rows.len() * self.n_features());
        for &i in rows {
            values.extend_from_slice(self.row(i));
        }
        FeatureTable {
            names: self.names.clone(),
            values,
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
            ids: rows.iter().map(|&i| self.ids[i].clone()).collect(),
        }
    }

    pub fn with_labels(&self, labels: Vec<MatchOutcome>) -> Result<FeatureTable> {
        FeatureTable::new(self.names.clone(), self.values.clone(), labels, self.ids.clone())
    }
}
