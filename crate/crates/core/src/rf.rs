//! Random forest of entropy-split decision trees.
//!
//! Each tree is grown on a bootstrap sample of the training rows. At every
//! node a fresh random subset of features is drawn and the split with the
//! largest information gain among those features is taken. Thresholds are
//! midpoints between consecutive distinct values; rows with
//! `x[feature] <= threshold` go left.
//!
//! Tree `i` draws all of its randomness from a ChaCha8 stream seeded with
//! the forest seed and stream number `i`, so trees are independent of the
//! order (or thread) they are grown in.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::MatchOutcome;
use crate::error::{Error, Result};
use crate::math;
use crate::table::FeatureTable;

/// Default tree counts swept when no grid is given.
pub const DEFAULT_TREE_GRID: [usize; 4] = [10, 50, 100, 300];

/// Gains closer than this are ties; ties go to the lower feature index, then
/// the lower threshold.
pub const GAIN_TIE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RfConfig {
    pub num_trees: usize,
    /// Features drawn per node; 0 selects `floor(log2 d) + 1`.
    pub features_per_split: usize,
    /// 0 means unlimited.
    pub max_depth: usize,
    pub min_leaf: usize,
    pub seed: u64,
    /// Grow each tree on a bootstrap sample. Off only for diagnostics.
    pub bootstrap: bool,
}

impl Default for RfConfig {
    fn default() -> Self {
        RfConfig {
            num_trees: 100,
            features_per_split: 0,
            max_depth: 0,
            min_leaf: 1,
            seed: 1,
            bootstrap: true,
        }
    }
}

impl RfConfig {
    pub fn with_trees(num_trees: usize, seed: u64) -> Self {
        RfConfig {
            num_trees,
            seed,
            ..RfConfig::default()
        }
    }

    /// Number of features drawn per node for `d` features.
    pub fn resolved_features_per_split(&self, d: usize) -> Result<usize> {
        if self.features_per_split > d {
            return Err(Error::InvalidConfig(alloc::format!(
                "features_per_split {} exceeds feature count {}",
                self.features_per_split, d
            )));
        }
        if self.features_per_split > 0 || d == 0 {
            return Ok(self.features_per_split);
        }
        Ok(((math::log2(d as f64) as usize) + 1).min(d))
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if self.num_trees == 0 {
            return Err(Error::InvalidConfig("num_trees must be at least 1".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::InvalidConfig("min_leaf must be at least 1".into()));
        }
        self.resolved_features_per_split(d).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        dire: u32,
        radiant: u32,
    },
    Internal {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn predict(&self, x: &[f64]) -> MatchOutcome {
        self.leaf_for(x).0
    }

    /// Majority class of the leaf `x` lands in, plus that leaf's counts.
    pub fn leaf_for(&self, x: &[f64]) -> (MatchOutcome, u32, u32) {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { dire, radiant } => {
                    return (leaf_majority(*dire, *radiant), *dire, *radiant)
                }
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// Rows summed over all leaves.
    pub fn total_count(&self) -> u64 {
        match self {
            TreeNode::Leaf { dire, radiant } => *dire as u64 + *radiant as u64,
            TreeNode::Internal { left, right, .. } => left.total_count() + right.total_count(),
        }
    }
}

/// Ties go to Radiant.
fn leaf_majority(dire: u32, radiant: u32) -> MatchOutcome {
    if radiant >= dire {
        MatchOutcome::RadiantWin
    } else {
        MatchOutcome::DireWin
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RfModel {
    pub trees: Vec<TreeNode>,
    pub config: RfConfig,
    pub feature_names: Vec<String>,
}

impl RfModel {
    /// Majority vote of the trees; an even split goes to Radiant.
    pub fn predict(&self, x: &[f64]) -> Result<MatchOutcome> {
        if x.len() != self.feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_names.len(),
                found: x.len(),
            });
        }
        let radiant = self
            .trees
            .iter()
            .filter(|t| t.predict(x).is_radiant())
            .count();
        Ok(vote(radiant, self.trees.len()))
    }
}

/// Forest decision from `radiant_votes` out of `total` votes.
pub fn vote(radiant_votes: usize, total: usize) -> MatchOutcome {
    if 2 * radiant_votes >= total {
        MatchOutcome::RadiantWin
    } else {
        MatchOutcome::DireWin
    }
}

/// `n` row indices drawn uniformly with replacement.
pub fn bootstrap_indices<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::EmptyData);
    }
    Ok((0..n).map(|_| rng.gen_range(0..n)).collect())
}

/// Bootstrap resample of a table, same size as the input.
pub fn bootstrap_sample<R: Rng + ?Sized>(data: &FeatureTable, rng: &mut R) -> Result<FeatureTable> {
    let rows = bootstrap_indices(data.n_rows(), rng)?;
    Ok(data.select_rows(&rows))
}

/// A candidate split and its information gain in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
}

fn counts_entropy(dire: usize, radiant: usize) -> f64 {
    math::entropy(&[dire, radiant])
}

/// Information gain of splitting `(dire, radiant)` into a left part
/// `(left_dire, left_radiant)` and the remainder.
pub fn information_gain(dire: usize, radiant: usize, left_dire: usize, left_radiant: usize) -> f64 {
    let n = (dire + radiant) as f64;
    let nl = (left_dire + left_radiant) as f64;
    let (rd, rr) = (dire - left_dire, radiant - left_radiant);
    let nr = (rd + rr) as f64;
    counts_entropy(dire, radiant)
        - (nl / n) * counts_entropy(left_dire, left_radiant)
        - (nr / n) * counts_entropy(rd, rr)
}

/// Best split of `rows` over `features` (which must be ascending), or `None`
/// when no candidate leaves `min_leaf` rows on both sides.
pub fn best_split(
    data: &FeatureTable,
    rows: &[usize],
    features: &[usize],
    min_leaf: usize,
) -> Option<Split> {
    let labels = data.labels();
    let radiant = rows.iter().filter(|&&i| labels[i].is_radiant()).count();
    let dire = rows.len() - radiant;
    let mut best: Option<Split> = None;
    let mut column: Vec<(f64, bool)> = Vec::with_capacity(rows.len());

    for &feature in features {
        column.clear();
        column.extend(rows.iter().map(|&i| (data.value(i, feature), labels[i].is_radiant())));
        column.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (mut ld, mut lr) = (0usize, 0usize);
        for k in 0..column.len().saturating_sub(1) {
            if column[k].1 {
                lr += 1;
            } else {
                ld += 1;
            }
            let (lo, hi) = (column[k].0, column[k + 1].0);
            if lo == hi {
                continue;
            }
            let left_n = k + 1;
            if left_n < min_leaf || rows.len() - left_n < min_leaf {
                continue;
            }
            let gain = information_gain(dire, radiant, ld, lr);
            if best.is_none_or(|b| gain > b.gain + GAIN_TIE_EPSILON) {
                best = Some(Split {
                    feature,
                    threshold: midpoint(lo, hi),
                    gain,
                });
            }
        }
    }
    best
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid >= hi || !mid.is_finite() {
        lo
    } else {
        mid
    }
}

struct Grower<'a> {
    data: &'a FeatureTable,
    config: &'a RfConfig,
    features_per_split: usize,
}

impl Grower<'_> {
    fn grow(&self, rows: &mut [usize], depth: usize, rng: &mut ChaCha8Rng) -> TreeNode {
        let labels = self.data.labels();
        let radiant = rows.iter().filter(|&&i| labels[i].is_radiant()).count();
        let dire = rows.len() - radiant;
        let leaf = TreeNode::Leaf {
            dire: dire as u32,
            radiant: radiant as u32,
        };
        let depth_capped = self.config.max_depth > 0 && depth >= self.config.max_depth;
        if dire == 0 || radiant == 0 || depth_capped || rows.len() < 2 * self.config.min_leaf {
            return leaf;
        }
        let features = self.draw_features(rng);
        let Some(split) = best_split(self.data, rows, &features, self.config.min_leaf) else {
            return leaf;
        };
        if split.gain <= GAIN_TIE_EPSILON {
            return leaf;
        }
        let mut n_left = 0;
        for k in 0..rows.len() {
            if self.data.value(rows[k], split.feature) <= split.threshold {
                rows.swap(k, n_left);
                n_left += 1;
            }
        }
        let (left_rows, right_rows) = rows.split_at_mut(n_left);
        let left = self.grow(left_rows, depth + 1, rng);
        let right = self.grow(right_rows, depth + 1, rng);
        TreeNode::Internal {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn draw_features(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let d = self.data.n_features();
        if self.features_per_split >= d {
            return (0..d).collect();
        }
        let mut f = index::sample(rng, d, self.features_per_split).into_vec();
        f.sort_unstable();
        f
    }
}

/// Grows one tree on every row of `data` (no resampling).
pub fn train_tree(data: &FeatureTable, config: &RfConfig, rng: &mut ChaCha8Rng) -> Result<TreeNode> {
    let mut rows: Vec<usize> = (0..data.n_rows()).collect();
    train_tree_on_rows(data, &mut rows, config, rng)
}

/// Grows one tree on the listed rows of `data`; repeats are allowed.
pub fn train_tree_on_rows(
    data: &FeatureTable,
    rows: &mut [usize],
    config: &RfConfig,
    rng: &mut ChaCha8Rng,
) -> Result<TreeNode> {
    if rows.is_empty() {
        return Err(Error::EmptyData);
    }
    config.validate(data.n_features())?;
    let grower = Grower {
        data,
        config,
        features_per_split: config.resolved_features_per_split(data.n_features())?,
    };
    Ok(grower.grow(rows, 0, rng))
}

/// The random stream used by tree `index` of a forest seeded with `seed`.
pub fn tree_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn train_rf(data: &FeatureTable, config: &RfConfig) -> Result<RfModel> {
    config.validate(data.n_features())?;
    if data.n_rows() == 0 {
        return Err(Error::EmptyData);
    }
    if !data.has_both_classes() {
        return Err(Error::SingleClassData);
    }
    if !data.all_finite() {
        return Err(Error::NonFiniteFeature);
    }
    let n = data.n_rows();
    let grow = |i: usize| -> Result<TreeNode> {
        let mut rng = tree_rng(config.seed, i);
        let mut rows = if config.bootstrap {
            bootstrap_indices(n, &mut rng)?
        } else {
            (0..n).collect()
        };
        train_tree_on_rows(data, &mut rows, config, &mut rng)
    };

    #[cfg(feature = "parallel")]
    let trees: Result<Vec<TreeNode>> = {
        use rayon::prelude::*;
        (0..config.num_trees).into_par_iter().map(grow).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let trees: Result<Vec<TreeNode>> = (0..config.num_trees).map(grow).collect();

    Ok(RfModel {
        trees: trees?,
        config: *config,
        feature_names: data.names().to_vec(),
    })
}
