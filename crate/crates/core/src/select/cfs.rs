//! Correlation-based subset merit over symmetric uncertainty.
//!
//! Columns with at most [`DEFAULT_BINS`] distinct values (hero picks, class
//! indicators) are used as categories directly. Wider columns are cut into
//! equal-frequency bins first; equal values always share a bin, so the codes
//! depend only on the rank structure of the column.

use alloc::vec;
use alloc::vec::Vec;

use super::{FeatureSubset, SubsetEvaluator};
use crate::data::MatchOutcome;
use crate::error::{Error, Result};
use crate::math;
use crate::table::FeatureTable;

pub const DEFAULT_BINS: usize = 10;

/// Discrete codes in `0..bins` for a column.
pub fn discretize(column: &[f64], bins: usize) -> Vec<usize> {
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();
    if distinct.len() <= bins {
        return column
            .iter()
            .map(|v| distinct.partition_point(|d| d.total_cmp(v).is_lt()))
            .collect();
    }
    let n = sorted.len();
    let mut cuts: Vec<f64> = (1..bins)
        .map(|j| sorted[((j * n).div_ceil(bins)).min(n - 1)])
        .collect();
    cuts.dedup();
    column
        .iter()
        .map(|v| cuts.partition_point(|c| c.total_cmp(v).is_le()))
        .collect()
}

/// `2·I(A;B) / (H(A) + H(B))` over two code sequences; 0 when both are constant.
pub fn symmetric_uncertainty(a: &[usize], b: &[usize]) -> f64 {
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut joint = vec![0usize; ka * kb];
    let mut ca = vec![0usize; ka];
    let mut cb = vec![0usize; kb];
    for (&x, &y) in a.iter().zip(b) {
        joint[x * kb + y] += 1;
        ca[x] += 1;
        cb[y] += 1;
    }
    let ha = math::entropy(&ca);
    let hb = math::entropy(&cb);
    if ha + hb <= 0.0 {
        return 0.0;
    }
    let info = ha + hb - math::entropy(&joint);
    (2.0 * info / (ha + hb)).clamp(0.0, 1.0)
}

fn class_codes(labels: &[MatchOutcome]) -> Result<Vec<usize>> {
    let codes: Vec<usize> = labels.iter().map(|l| l.is_radiant() as usize).collect();
    let radiant = codes.iter().sum::<usize>();
    if radiant == 0 || radiant == codes.len() {
        return Err(Error::SingleClassData);
    }
    Ok(codes)
}

/// Symmetric uncertainty between a feature column and the class.
pub fn feature_class_correlation(column: &[f64], labels: &[MatchOutcome]) -> Result<f64> {
    if !column.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteFeature);
    }
    let class = class_codes(labels)?;
    Ok(symmetric_uncertainty(&discretize(column, DEFAULT_BINS), &class))
}

/// Subset merit `k·r̄cf / √(k + k(k−1)·r̄ff)` with every correlation precomputed.
#[derive(Debug, Clone)]
pub struct CfsEvaluator {
    class_su: Vec<f64>,
    /// Row-major `d × d` feature–feature SU.
    pair_su: Vec<f64>,
    d: usize,
}

impl CfsEvaluator {
    pub fn new(data: &FeatureTable) -> Result<Self> {
        if !data.all_finite() {
            return Err(Error::NonFiniteFeature);
        }
        let class = class_codes(data.labels())?;
        let d = data.n_features();
        let codes: Vec<Vec<usize>> = (0..d)
            .map(|j| discretize(&data.column(j), DEFAULT_BINS))
            .collect();
        let class_su = codes
            .iter()
            .map(|c| symmetric_uncertainty(c, &class))
            .collect();
        let pair = |i: usize| -> Vec<f64> {
            (0..d)
                .map(|j| if j > i { symmetric_uncertainty(&codes[i], &codes[j]) } else { 0.0 })
                .collect()
        };
        #[cfg(feature = "parallel")]
        let upper: Vec<Vec<f64>> = {
            use rayon::prelude::*;
            (0..d).into_par_iter().map(pair).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let upper: Vec<Vec<f64>> = (0..d).map(pair).collect();

        let mut pair_su = vec![1.0; d * d];
        for i in 0..d {
            for j in i + 1..d {
                pair_su[i * d + j] = upper[i][j];
                pair_su[j * d + i] = upper[i][j];
            }
        }
        Ok(CfsEvaluator {
            class_su,
            pair_su,
            d,
        })
    }

    pub fn class_correlation(&self, feature: usize) -> f64 {
        self.class_su[feature]
    }

    pub fn pair_correlation(&self, a: usize, b: usize) -> f64 {
        self.pair_su[a * self.d + b]
    }

    pub fn merit(&self, subset: &FeatureSubset) -> f64 {
        let idx = subset.indices();
        let k = idx.len();
        if k == 0 {
            return 0.0;
        }
        let rcf = idx.iter().map(|&f| self.class_su[f]).sum::<f64>() / k as f64;
        let mut rff = 0.0;
        if k > 1 {
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    rff += self.pair_su[i * self.d + j];
                }
            }
            rff /= (k * (k - 1) / 2) as f64;
        }
        let k = k as f64;
        k * rcf / math::sqrt(k + k * (k - 1.0) * rff)
    }
}

impl SubsetEvaluator for CfsEvaluator {
    fn evaluate(&self, subset: &FeatureSubset) -> Result<f64> {
        Ok(self.merit(subset))
    }
}

/// Merit of one subset; builds a throwaway evaluator.
pub fn cfs_merit(subset: &FeatureSubset, data: &FeatureTable) -> Result<f64> {
    if let Some(&bad) = subset.indices().iter().find(|&&f| f >= data.n_features()) {
        return Err(Error::DimensionMismatch {
            expected: data.n_features(),
            found: bad + 1,
        });
    }
    Ok(CfsEvaluator::new(data)?.merit(subset))
}
