//! Common front for the two classifiers.

use alloc::string::String;
use alloc::vec::Vec;

use crate::data::MatchOutcome;
use crate::error::Result;
use crate::lr::{train_lr, LrConfig, LrModel};
use crate::rf::{train_rf, RfConfig, RfModel};
use crate::table::FeatureTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Learner {
    Lr(LrConfig),
    Rf(RfConfig),
}

impl Learner {
    pub fn train(&self, data: &FeatureTable) -> Result<TrainedModel> {
        match self {
            Learner::Lr(cfg) => train_lr(data, cfg).map(TrainedModel::Lr),
            Learner::Rf(cfg) => train_rf(data, cfg).map(TrainedModel::Rf),
        }
    }

    /// The same learner for a table with `d` columns: an explicit
    /// features-per-split larger than `d` is capped at `d`.
    pub fn adapted_to(&self, d: usize) -> Learner {
        match *self {
            Learner::Rf(mut c) => {
                c.features_per_split = c.features_per_split.min(d);
                Learner::Rf(c)
            }
            lr => lr,
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Learner::Lr(_) => "LR",
            Learner::Rf(_) => "RF",
        }
    }

    /// Name plus the swept hyperparameter, e.g. `LR(ridge=0.0001)`.
    pub fn label(&self) -> String {
        match self {
            Learner::Lr(c) => alloc::format!("LR(ridge={})", c.ridge),
            Learner::Rf(c) => alloc::format!("RF(trees={})", c.num_trees),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Lr(LrModel),
    Rf(RfModel),
}

impl TrainedModel {
    pub fn predict(&self, x: &[f64]) -> Result<MatchOutcome> {
        match self {
            TrainedModel::Lr(m) => m.predict_label(x),
            TrainedModel::Rf(m) => m.predict(x),
        }
    }

    pub fn feature_names(&self) -> &[String] {
        match self {
            TrainedModel::Lr(m) => &m.feature_names,
            TrainedModel::Rf(m) => &m.feature_names,
        }
    }

    pub fn predict_table(&self, data: &FeatureTable) -> Result<Vec<MatchOutcome>> {
        (0..data.n_rows()).map(|i| self.predict(data.row(i))).collect()
    }

    /// Fraction of rows whose label is predicted correctly.
    pub fn accuracy(&self, data: &FeatureTable) -> Result<f64> {
        let predicted = self.predict_table(data)?;
        Ok(accuracy(&predicted, data.labels()))
    }
}

pub fn accuracy(predicted: &[MatchOutcome], actual: &[MatchOutcome]) -> f64 {
    if actual.is_empty() {
        return 0.0;
    }
    let correct = predicted.iter().zip(actual).filter(|(p, a)| p == a).count();
    correct as f64 / actual.len() as f64
}
