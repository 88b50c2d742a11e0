//! Ridge-penalized binary logistic regression.
//!
//! Training maximizes
//!
//! ```text
//! L(w, b) = Σᵢ [ yᵢ zᵢ − ln(1 + e^{zᵢ}) ] − ridge · ‖w‖²,   zᵢ = w·xᵢ + b
//! ```
//!
//! with `yᵢ = 1` for `RadiantWin`. The bias is not penalized. The maximizer
//! starts from zero and takes damped Newton steps on the full batch: each
//! step is halved until the Armijo condition holds, so the objective never
//! decreases.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::data::MatchOutcome;
use crate::error::{Error, Result};
use crate::math;
use crate::table::FeatureTable;

/// Default ridge values swept when no grid is given.
pub const DEFAULT_RIDGE_GRID: [f64; 5] = [1e-8, 1e-4, 1e-2, 1.0, 100.0];

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrConfig {
    pub ridge: f64,
    pub max_iterations: usize,
    /// Stop once the largest gradient coordinate, divided by the row count,
    /// falls below this value.
    pub convergence_tolerance: f64,
    pub standardize: bool,
}

impl Default for LrConfig {
    fn default() -> Self {
        LrConfig {
            ridge: 1e-8,
            max_iterations: 2000,
            convergence_tolerance: 1e-9,
            standardize: false,
        }
    }
}

impl LrConfig {
    pub fn with_ridge(ridge: f64) -> Self {
        LrConfig {
            ridge,
            ..LrConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ridge.is_finite() && self.ridge >= 0.0) {
            return Err(Error::InvalidConfig(alloc::format!(
                "ridge must be a finite non-negative number, got {}",
                self.ridge
            )));
        }
        if self.convergence_tolerance.is_nan() || self.convergence_tolerance <= 0.0 {
            return Err(Error::InvalidConfig(
                "convergence tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Per-feature affine map applied before the linear model.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardization {
    pub means: Vec<f64>,
    /// Population standard deviations; 1 for constant features.
    pub scales: Vec<f64>,
}

impl Standardization {
    pub fn fit(table: &FeatureTable) -> Standardization {
        let n = table.n_rows().max(1) as f64;
        let d = table.n_features();
        let mut means = vec![0.0; d];
        for i in 0..table.n_rows() {
            for (m, x) in means.iter_mut().zip(table.row(i)) {
                *m += x;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut vars = vec![0.0; d];
        for i in 0..table.n_rows() {
            for ((v, x), m) in vars.iter_mut().zip(table.row(i)).zip(&means) {
                *v += (x - m) * (x - m);
            }
        }
        let scales = vars
            .into_iter()
            .map(|v| {
                let s = math::sqrt(v / n);
                if s > 0.0 && s.is_finite() {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        Standardization { means, scales }
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (((o, x), m), s) in out.iter_mut().zip(x).zip(&self.means).zip(&self.scales) {
            *o = (x - m) / s;
        }
    }

    pub fn apply_table(&self, table: &FeatureTable) -> Result<FeatureTable> {
        let d = table.n_features();
        let mut values = vec![0.0; table.n_rows() * d];
        for i in 0..table.n_rows() {
            self.apply(table.row(i), &mut values[i * d..(i + 1) * d]);
        }
        FeatureTable::new(
            table.names().to_vec(),
            values,
            table.labels().to_vec(),
            table.ids().to_vec(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LrModel {
    /// One weight per feature, in the (possibly standardized) input space.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub feature_names: Vec<String>,
    pub config: LrConfig,
    pub standardization: Option<Standardization>,
    /// Iterations the optimizer ran; not part of the model's behavior.
    pub iterations: usize,
}

impl LrModel {
    /// `P(RadiantWin | x)`.
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: x.len(),
            });
        }
        let z = match &self.standardization {
            Some(st) => {
                let mut buf = vec![0.0; x.len()];
                st.apply(x, &mut buf);
                dot(&self.weights, &buf) + self.bias
            }
            None => dot(&self.weights, x) + self.bias,
        };
        Ok(math::sigmoid(z))
    }

    /// `RadiantWin` iff the probability is at least one half.
    pub fn predict_label(&self, x: &[f64]) -> Result<MatchOutcome> {
        Ok(label_from_proba(self.predict_proba(x)?))
    }

    /// Euclidean norm of the weights, bias excluded.
    pub fn weight_norm(&self) -> f64 {
        math::sqrt(dot(&self.weights, &self.weights))
    }
}

pub fn label_from_proba(p: f64) -> MatchOutcome {
    if p >= 0.5 {
        MatchOutcome::RadiantWin
    } else {
        MatchOutcome::DireWin
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn target(label: MatchOutcome) -> f64 {
    if label.is_radiant() {
        1.0
    } else {
        0.0
    }
}

fn check_inputs(data: &FeatureTable, weights: &[f64]) -> Result<()> {
    if weights.len() != data.n_features() {
        return Err(Error::DimensionMismatch {
            expected: data.n_features(),
            found: weights.len(),
        });
    }
    if !data.all_finite() {
        return Err(Error::NonFiniteFeature);
    }
    Ok(())
}

/// Penalized log-likelihood `L(w, b)` on `data` as given (no standardization).
pub fn penalized_log_likelihood(
    data: &FeatureTable,
    weights: &[f64],
    bias: f64,
    ridge: f64,
) -> Result<f64> {
    check_inputs(data, weights)?;
    Ok(objective(data, weights, bias, ridge))
}

/// Analytic gradient of [`penalized_log_likelihood`]: `(∂L/∂w, ∂L/∂b)`.
pub fn penalized_gradient(
    data: &FeatureTable,
    weights: &[f64],
    bias: f64,
    ridge: f64,
) -> Result<(Vec<f64>, f64)> {
    check_inputs(data, weights)?;
    let mut g = vec![0.0; weights.len()];
    let gb = gradient_into(data, weights, bias, ridge, &mut g);
    Ok((g, gb))
}

fn objective(data: &FeatureTable, w: &[f64], b: f64, ridge: f64) -> f64 {
    let mut ll = 0.0;
    for i in 0..data.n_rows() {
        let z = dot(w, data.row(i)) + b;
        ll += target(data.labels()[i]) * z - math::log1p_exp(z);
    }
    ll - ridge * dot(w, w)
}

fn gradient_into(data: &FeatureTable, w: &[f64], b: f64, ridge: f64, g: &mut [f64]) -> f64 {
    g.iter_mut().for_each(|x| *x = 0.0);
    let mut gb = 0.0;
    for i in 0..data.n_rows() {
        let row = data.row(i);
        let residual = target(data.labels()[i]) - math::sigmoid(dot(w, row) + b);
        for (gj, xj) in g.iter_mut().zip(row) {
            *gj += residual * xj;
        }
        gb += residual;
    }
    for (gj, wj) in g.iter_mut().zip(w) {
        *gj -= 2.0 * ridge * wj;
    }
    gb
}

pub fn train_lr(data: &FeatureTable, config: &LrConfig) -> Result<LrModel> {
    config.validate()?;
    if data.n_rows() == 0 {
        return Err(Error::EmptyData);
    }
    if !data.has_both_classes() {
        return Err(Error::SingleClassData);
    }
    if !data.all_finite() {
        return Err(Error::NonFiniteFeature);
    }
    let (standardization, owned);
    let design = if config.standardize {
        let st = Standardization::fit(data);
        owned = st.apply_table(data)?;
        standardization = Some(st);
        &owned
    } else {
        standardization = None;
        data
    };

    let (weights, bias, iterations) = maximize(design, config);
    if !weights.iter().all(|w| w.is_finite()) || !bias.is_finite() {
        return Err(Error::NonFiniteFeature);
    }
    Ok(LrModel {
        weights,
        bias,
        feature_names: data.names().to_vec(),
        config: *config,
        standardization,
        iterations,
    })
}

fn maximize(data: &FeatureTable, config: &LrConfig) -> (Vec<f64>, f64, usize) {
    let d = data.n_features();
    let n = data.n_rows() as f64;
    let ridge = config.ridge;
    let p = d + 1;

    // θ = (w, b) packed with the bias last.
    let mut theta = vec![0.0; p];
    let mut grad = vec![0.0; p];
    let mut value = objective(data, &theta[..d], 0.0, ridge);
    grad[d] = gradient_into(data, &theta[..d], 0.0, ridge, &mut grad[..d]);

    let mut hessian = vec![0.0; p * p];
    let mut direction = vec![0.0; p];
    let mut candidate = vec![0.0; p];
    let mut candidate_grad = vec![0.0; p];
    let mut iterations = 0;

    while iterations < config.max_iterations {
        let gmax = grad.iter().fold(0.0f64, |m, g| m.max(math::abs(*g)));
        if gmax / n <= config.convergence_tolerance {
            break;
        }
        iterations += 1;

        curvature_into(data, &theta, ridge, &mut hessian);
        if !newton_direction(&hessian, &grad, &mut direction) {
            direction.copy_from_slice(&grad);
        }
        let mut slope = dot(&grad, &direction);
        if slope.is_nan() || slope <= 0.0 {
            direction.copy_from_slice(&grad);
            slope = dot(&grad, &grad);
        }

        let mut step = 1.0;
        let accepted = loop {
            for j in 0..p {
                candidate[j] = theta[j] + step * direction[j];
            }
            let v = objective(data, &candidate[..d], candidate[d], ridge);
            if v.is_finite() && v >= value + ARMIJO * step * slope {
                break Some((v, false));
            }
            // Near the optimum the objective change drops below its rounding
            // error. The slope along the search line is still exact enough: a
            // non-negative slope at the candidate means the step has not
            // passed the line maximum, so the objective did not decrease.
            if v.is_finite() {
                candidate_grad[d] =
                    gradient_into(data, &candidate[..d], candidate[d], ridge, &mut candidate_grad[..d]);
                if dot(&candidate_grad, &direction) >= 0.0 {
                    break Some((v, true));
                }
            }
            step *= 0.5;
            if step < MIN_STEP {
                break None;
            }
        };
        let Some((new_value, have_grad)) = accepted else { break };

        theta.copy_from_slice(&candidate);
        value = new_value;
        if have_grad {
            grad.copy_from_slice(&candidate_grad);
        } else {
            grad[d] = gradient_into(data, &theta[..d], theta[d], ridge, &mut grad[..d]);
        }
    }
    let bias = theta.pop().unwrap_or(0.0);
    (theta, bias, iterations)
}

/// Negated Hessian of the objective at `theta`, row-major, bias last.
fn curvature_into(data: &FeatureTable, theta: &[f64], ridge: f64, h: &mut [f64]) {
    let d = data.n_features();
    let p = d + 1;
    h.iter_mut().for_each(|x| *x = 0.0);
    for i in 0..data.n_rows() {
        let row = data.row(i);
        let prob = math::sigmoid(dot(&theta[..d], row) + theta[d]);
        let weight = prob * (1.0 - prob);
        if weight == 0.0 {
            continue;
        }
        for a in 0..p {
            let xa = if a < d { row[a] } else { 1.0 } * weight;
            if xa == 0.0 {
                continue;
            }
            let out = &mut h[a * p..a * p + a + 1];
            for (b, slot) in out.iter_mut().enumerate() {
                *slot += xa * if b < d { row[b] } else { 1.0 };
            }
        }
    }
    for a in 0..p {
        if a < d {
            h[a * p + a] += 2.0 * ridge;
        }
        for b in 0..a {
            h[b * p + a] = h[a * p + b];
        }
    }
}

/// Solves `h · out = g` for the symmetric positive definite `h`. Rows and
/// columns are scaled to unit diagonal first, and a growing ridge is added
/// when the factorization fails. Returns false if it never succeeds.
fn newton_direction(h: &[f64], g: &[f64], out: &mut [f64]) -> bool {
    let p = g.len();
    let scale: Vec<f64> = (0..p)
        .map(|a| {
            let diag = h[a * p + a];
            if diag > 0.0 && diag.is_finite() {
                1.0 / math::sqrt(diag)
            } else {
                1.0
            }
        })
        .collect();
    let scaled = DMatrix::from_fn(p, p, |a, b| h[a * p + b] * scale[a] * scale[b]);
    let rhs = DVector::from_fn(p, |a, _| g[a] * scale[a]);
    let mut jitter = 0.0;
    for _ in 0..12 {
        let shifted = &scaled + DMatrix::identity(p, p) * jitter;
        if let Some(chol) = shifted.cholesky() {
            let y = chol.solve(&rhs);
            for a in 0..p {
                out[a] = y[a] * scale[a];
            }
            return out.iter().all(|x| x.is_finite());
        }
        jitter = if jitter == 0.0 { 1e-10 } else { jitter * 100.0 };
    }
    false
}
