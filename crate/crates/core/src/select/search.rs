//! Best-first search over feature subsets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{FeatureSubset, SubsetEvaluator};
use crate::error::{Error, Result};

/// A child must beat the best score by more than this to count as progress.
const IMPROVEMENT_EPSILON: f64 = 1e-12;

/// Forward best-first search starting from the empty subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Consecutive non-improving expansions before the search stops.
    pub stale_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { stale_limit: 5 }
    }
}

/// Returns the best-scoring subset visited and its score.
///
/// The open list is ordered by score, ties going to the lexicographically
/// smaller subset. Expanding a node scores every single-feature addition and
/// deletion that has not been visited yet; no subset is ever scored twice.
pub fn best_first_search<E>(
    evaluator: &E,
    d: usize,
    config: &SearchConfig,
) -> Result<(FeatureSubset, f64)>
where
    E: SubsetEvaluator + ?Sized,
{
    if config.stale_limit == 0 {
        return Err(Error::InvalidConfig("stale_limit must be at least 1".into()));
    }
    let start = FeatureSubset::empty();
    let start_score = evaluator.evaluate(&start)?;
    let mut visited = BTreeSet::new();
    visited.insert(start.clone());
    let mut open: Vec<(f64, FeatureSubset)> = alloc::vec![(start_score, start.clone())];
    let mut best = (start, start_score);
    let mut stale = 0;

    while let Some(node) = pop_best(&mut open) {
        let mut children: Vec<FeatureSubset> = (0..d)
            .map(|f| if node.contains(f) { node.without(f) } else { node.with(f) })
            .filter(|c| !visited.contains(c))
            .collect();
        children.sort();
        let scores = evaluator.evaluate_all(&children)?;

        let mut improved = false;
        for (child, score) in children.into_iter().zip(scores) {
            visited.insert(child.clone());
            if score > best.1 + IMPROVEMENT_EPSILON {
                best = (child.clone(), score);
                improved = true;
            }
            open.push((score, child));
        }
        if improved {
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.stale_limit {
                break;
            }
        }
    }
    Ok(best)
}

fn pop_best(open: &mut Vec<(f64, FeatureSubset)>) -> Option<FeatureSubset> {
    let mut best: Option<usize> = None;
    for (i, (score, subset)) in open.iter().enumerate() {
        let better = match best {
            None => true,
            Some(b) => {
                let (bs, bsub) = &open[b];
                *score > *bs || (*score == *bs && subset < bsub)
            }
        };
        if better {
            best = Some(i);
        }
    }
    best.map(|i| open.swap_remove(i).1)
}
