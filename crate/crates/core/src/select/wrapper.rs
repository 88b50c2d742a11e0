//! Cross-validated learner accuracy as a subset score.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FeatureSubset, SubsetEvaluator};
use crate::data::MatchOutcome;
use crate::error::{Error, Result};
use crate::learner::{accuracy, Learner};
use crate::table::FeatureTable;

pub const DEFAULT_FOLDS: usize = 5;

/// Fold number for each row. Each class is shuffled with `seed` and dealt
/// round-robin (Dire rows first, then Radiant), so every fold gets a near
/// equal share of both classes.
pub fn stratified_folds(labels: &[MatchOutcome], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 || labels.len() < folds {
        return Err(Error::TooFewRows {
            rows: labels.len(),
            folds,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = alloc::vec![0; labels.len()];
    let mut next = 0;
    let mut classes_seen = 0;
    for class in [MatchOutcome::DireWin, MatchOutcome::RadiantWin] {
        let mut rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if !rows.is_empty() {
            classes_seen += 1;
        }
        rows.shuffle(&mut rng);
        for i in rows {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    if classes_seen < 2 {
        return Err(Error::SingleClassData);
    }
    Ok(assignment)
}

/// Predictions of `learner` trained on `train` for every row of `test`. A
/// single-class training fold predicts that class.
fn fit_predict(learner: &Learner, train: &FeatureTable, test: &FeatureTable) -> Result<Vec<MatchOutcome>> {
    if !train.has_both_classes() {
        let only = train.labels()[0];
        return Ok(alloc::vec![only; test.n_rows()]);
    }
    learner.adapted_to(train.n_features()).train(train)?.predict_table(test)
}

fn cross_validate(data: &FeatureTable, fold_ids: &[usize], folds: usize, learner: &Learner) -> Result<f64> {
    let mut total = 0.0;
    for f in 0..folds {
        let train_rows: Vec<usize> = (0..data.n_rows()).filter(|&i| fold_ids[i] != f).collect();
        let test_rows: Vec<usize> = (0..data.n_rows()).filter(|&i| fold_ids[i] == f).collect();
        let train = data.select_rows(&train_rows);
        let test = data.select_rows(&test_rows);
        let predicted = fit_predict(learner, &train, &test)?;
        total += accuracy(&predicted, test.labels());
    }
    Ok(total / folds as f64)
}

/// Mean stratified k-fold accuracy of `learner` on the subset's columns.
pub fn wrapper_score(
    data: &FeatureTable,
    subset: &FeatureSubset,
    learner: &Learner,
    folds: usize,
    seed: u64,
) -> Result<f64> {
    WrapperEvaluator::new(data, *learner, folds, seed)?.evaluate(subset)
}

#[derive(Debug, Clone)]
pub struct WrapperEvaluator<'a> {
    data: &'a FeatureTable,
    learner: Learner,
    folds: usize,
    fold_ids: Vec<usize>,
}

impl<'a> WrapperEvaluator<'a> {
    pub fn new(data: &'a FeatureTable, learner: Learner, folds: usize, seed: u64) -> Result<Self> {
        let fold_ids = stratified_folds(data.labels(), folds, seed)?;
        Ok(WrapperEvaluator {
            data,
            learner,
            folds,
            fold_ids,
        })
    }
}

impl SubsetEvaluator for WrapperEvaluator<'_> {
    fn evaluate(&self, subset: &FeatureSubset) -> Result<f64> {
        if let Some(&bad) = subset.indices().iter().find(|&&f| f >= self.data.n_features()) {
            return Err(Error::DimensionMismatch {
                expected: self.data.n_features(),
                found: bad + 1,
            });
        }
        let projected = self.data.select_columns(subset.indices());
        cross_validate(&projected, &self.fold_ids, self.folds, &self.learner)
    }

    #[cfg(feature = "parallel")]
    fn evaluate_all(&self, subsets: &[FeatureSubset]) -> Result<Vec<f64>> {
        use rayon::prelude::*;
        subsets.par_iter().map(|s| self.evaluate(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lr::LrConfig;
    use crate::rf::RfConfig;
    use MatchOutcome::*;

    #[test]
    fn folds_are_stratified_and_deterministic() {
        let labels: Vec<MatchOutcome> = (0..43)
            .map(|i| if i % 3 == 0 { RadiantWin } else { DireWin })
            .collect();
        let a = stratified_folds(&labels, 5, 9).unwrap();
        assert_eq!(a, stratified_folds(&labels, 5, 9).unwrap());
        let radiant = labels.iter().filter(|l| l.is_radiant()).count();
        for f in 0..5 {
            let in_fold: Vec<usize> = (0..43).filter(|&i| a[i] == f).collect();
            assert!((8..=9).contains(&in_fold.len()));
            let r = in_fold.iter().filter(|&&i| labels[i].is_radiant()).count();
            assert!(r * 5 >= radiant - 5 && r * 5 <= radiant + 5);
        }
        assert_eq!(
            stratified_folds(&labels[..3], 5, 1),
            Err(Error::TooFewRows { rows: 3, folds: 5 })
        );
        assert_eq!(stratified_folds(&[DireWin; 10], 5, 1), Err(Error::SingleClassData));
    }

    #[test]
    fn empty_subset_scores_the_majority_fraction() {
        let labels: Vec<MatchOutcome> = (0..40).map(|i| if i < 30 { DireWin } else { RadiantWin }).collect();
        let rows: Vec<Vec<f64>> = (0..40).map(|i| alloc::vec![i as f64]).collect();
        let t = FeatureTable::from_rows(alloc::vec!["x".into()], &rows, labels).unwrap();
        for learner in [Learner::Lr(LrConfig::default()), Learner::Rf(RfConfig::with_trees(5, 1))] {
            let s = wrapper_score(&t, &FeatureSubset::empty(), &learner, 5, 3).unwrap();
            assert!((s - 0.75).abs() < 1e-12, "{s}");
        }
    }

    #[test]
    fn perfect_feature_scores_one() {
        let labels: Vec<MatchOutcome> = (0..40).map(|i| if i % 2 == 0 { DireWin } else { RadiantWin }).collect();
        let rows: Vec<Vec<f64>> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| alloc::vec![l.is_radiant() as u8 as f64, (i * 7 % 11) as f64])
            .collect();
        let t = FeatureTable::from_rows(alloc::vec!["y".into(), "noise".into()], &rows, labels).unwrap();
        let subset = FeatureSubset::new(alloc::vec![0]);
        for learner in [Learner::Lr(LrConfig::default()), Learner::Rf(RfConfig::with_trees(5, 1))] {
            assert_eq!(wrapper_score(&t, &subset, &learner, 5, 3).unwrap(), 1.0);
        }
    }
}
