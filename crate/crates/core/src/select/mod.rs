//! Feature-subset selection: a correlation-based filter and a learner
//! wrapper, both driven by best-first search over the subset lattice.

mod cfs;
mod search;
mod wrapper;

use alloc::vec::Vec;

pub use cfs::{cfs_merit, discretize, feature_class_correlation, symmetric_uncertainty, CfsEvaluator, DEFAULT_BINS};
pub use search::{best_first_search, SearchConfig};
pub use wrapper::{stratified_folds, wrapper_score, WrapperEvaluator, DEFAULT_FOLDS};

use crate::error::Result;
use crate::learner::Learner;
use crate::table::FeatureTable;

/// Sorted, duplicate-free set of column indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FeatureSubset(Vec<usize>);

impl FeatureSubset {
    pub fn empty() -> Self {
        FeatureSubset(Vec::new())
    }

    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        FeatureSubset(indices)
    }

    pub fn full(d: usize) -> Self {
        FeatureSubset((0..d).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, feature: usize) -> bool {
        self.0.binary_search(&feature).is_ok()
    }

    pub fn with(&self, feature: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&feature) {
            v.insert(pos, feature);
        }
        FeatureSubset(v)
    }

    pub fn without(&self, feature: usize) -> Self {
        FeatureSubset(self.0.iter().copied().filter(|&f| f != feature).collect())
    }
}

/// Scores a feature subset; higher is better.
pub trait SubsetEvaluator {
    fn evaluate(&self, subset: &FeatureSubset) -> Result<f64>;

    /// Scores several subsets, results in input order.
    fn evaluate_all(&self, subsets: &[FeatureSubset]) -> Result<Vec<f64>> {
        subsets.iter().map(|s| self.evaluate(s)).collect()
    }
}

impl<F> SubsetEvaluator for F
where
    F: Fn(&FeatureSubset) -> f64,
{
    fn evaluate(&self, subset: &FeatureSubset) -> Result<f64> {
        Ok(self(subset))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectorKind {
    Cfs,
    Wrapper {
        learner: Learner,
        folds: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectedFeatures {
    pub subset: FeatureSubset,
    pub score: f64,
}

/// Runs best-first search with the chosen evaluator. Pass training rows only.
pub fn select_features(
    train: &FeatureTable,
    kind: SelectorKind,
    config: &SearchConfig,
) -> Result<SelectedFeatures> {
    let (subset, score) = match kind {
        SelectorKind::Cfs => {
            let eval = CfsEvaluator::new(train)?;
            best_first_search(&eval, train.n_features(), config)?
        }
        SelectorKind::Wrapper {
            learner,
            folds,
            seed,
        } => {
            let eval = WrapperEvaluator::new(train, learner, folds, seed)?;
            best_first_search(&eval, train.n_features(), config)?
        }
    };
    Ok(SelectedFeatures { subset, score })
}
