//! Versioned text format for trained models.
//!
//! ```text
//! winpred-model 1
//! kind=lr
//! representation=ingame@20
//! selection=cfs
//! ridge=1.0000000000000000e-2
//! max_iterations=2000
//! convergence_tolerance=1.0000000000000000e-9
//! standardize=true
//! iterations=6
//! features=2
//! Kills_R-D@t,<weight>,<mean>,<scale>
//! NetWorth_R@t,<weight>,<mean>,<scale>
//! bias,<bias>
//! ```
//!
//! Forests list their configuration, then `feature=<name>` lines, then each
//! tree as `tree <i>` followed by pre-order nodes: `N <feature> <threshold>`
//! for a split and `L <dire> <radiant>` for a leaf. Every real is written with
//! 17 significant digits, so reading a saved model back is exact.

use std::io::{BufRead, Write};

use winpred_core::lr::Standardization;
use winpred_core::{LrConfig, LrModel, RfConfig, RfModel, TrainedModel, TreeNode};

use crate::error::{Error, Result};

const MAGIC: &str = "winpred-model";
const VERSION: u32 = 1;

/// Free-form description saved next to the model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelInfo {
    pub representation: String,
    pub selection: String,
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.contains([',', '\n', '\r', '=']) || name == "bias" {
        return Err(Error::Usage(format!("feature name `{name}` cannot be saved")));
    }
    Ok(())
}

pub fn write_model<W: Write>(mut w: W, model: &TrainedModel, info: &ModelInfo) -> Result<()> {
    writeln!(w, "{MAGIC} {VERSION}")?;
    match model {
        TrainedModel::Lr(m) => {
            writeln!(w, "kind=lr")?;
            writeln!(w, "representation={}", info.representation)?;
            writeln!(w, "selection={}", info.selection)?;
            writeln!(w, "ridge={}", real(m.config.ridge))?;
            writeln!(w, "max_iterations={}", m.config.max_iterations)?;
            writeln!(w, "convergence_tolerance={}", real(m.config.convergence_tolerance))?;
            writeln!(w, "standardize={}", m.standardization.is_some())?;
            writeln!(w, "iterations={}", m.iterations)?;
            writeln!(w, "features={}", m.weights.len())?;
            for (j, (name, weight)) in m.feature_names.iter().zip(&m.weights).enumerate() {
                check_name(name)?;
                match &m.standardization {
                    Some(st) => writeln!(
                        w,
                        "{name},{},{},{}",
                        real(*weight),
                        real(st.means[j]),
                        real(st.scales[j])
                    )?,
                    None => writeln!(w, "{name},{}", real(*weight))?,
                }
            }
            writeln!(w, "bias,{}", real(m.bias))?;
        }
        TrainedModel::Rf(m) => {
            writeln!(w, "kind=rf")?;
            writeln!(w, "representation={}", info.representation)?;
            writeln!(w, "selection={}", info.selection)?;
            writeln!(w, "num_trees={}", m.config.num_trees)?;
            writeln!(w, "features_per_split={}", m.config.features_per_split)?;
            writeln!(w, "max_depth={}", m.config.max_depth)?;
            writeln!(w, "min_leaf={}", m.config.min_leaf)?;
            writeln!(w, "seed={}", m.config.seed)?;
            writeln!(w, "bootstrap={}", m.config.bootstrap)?;
            writeln!(w, "features={}", m.feature_names.len())?;
            for name in &m.feature_names {
                check_name(name)?;
                writeln!(w, "feature={name}")?;
            }
            for (i, tree) in m.trees.iter().enumerate() {
                writeln!(w, "tree {i}")?;
                write_tree(&mut w, tree)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_tree<W: Write>(w: &mut W, node: &TreeNode) -> Result<()> {
    match node {
        TreeNode::Leaf { dire, radiant } => writeln!(w, "L {dire} {radiant}")?,
        TreeNode::Internal {
            feature,
            threshold,
            left,
            right,
        } => {
            writeln!(w, "N {feature} {}", real(*threshold))?;
            write_tree(w, left)?;
            write_tree(w, right)?;
        }
    }
    Ok(())
}

struct Lines {
    lines: Vec<String>,
    next: usize,
}

impl Lines {
    fn bad(&self, reason: impl Into<String>) -> Error {
        Error::MalformedModel {
            line: self.next,
            reason: reason.into(),
        }
    }

    fn take(&mut self) -> Result<&str> {
        let line = self
            .lines
            .get(self.next)
            .ok_or_else(|| Error::MalformedModel {
                line: self.next + 1,
                reason: "unexpected end of file".into(),
            })?;
        self.next += 1;
        Ok(line)
    }

    fn key<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let line = self.take()?.to_string();
        let value = line
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| self.bad(format!("expected `{key}=`")))?;
        value
            .parse()
            .map_err(|_| self.bad(format!("cannot parse {key} value `{value}`")))
    }

    fn number<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.bad(format!("cannot parse `{s}`")))
    }
}

pub fn read_model<R: BufRead>(input: R) -> Result<(TrainedModel, ModelInfo)> {
    let lines = input.lines().collect::<std::io::Result<Vec<_>>>()?;
    let mut ls = Lines { lines, next: 0 };
    let header = ls.take()?.to_string();
    if header != format!("{MAGIC} {VERSION}") {
        return Err(ls.bad(format!("expected `{MAGIC} {VERSION}` header")));
    }
    let kind: String = ls.key("kind")?;
    let info = ModelInfo {
        representation: ls.key("representation")?,
        selection: ls.key("selection")?,
    };
    let model = match kind.as_str() {
        "lr" => TrainedModel::Lr(read_lr(&mut ls)?),
        "rf" => TrainedModel::Rf(read_rf(&mut ls)?),
        other => return Err(ls.bad(format!("unknown model kind `{other}`"))),
    };
    if ls.next != ls.lines.len() {
        return Err(ls.bad("trailing content"));
    }
    Ok((model, info))
}

fn read_lr(ls: &mut Lines) -> Result<LrModel> {
    let config = LrConfig {
        ridge: ls.key("ridge")?,
        max_iterations: ls.key("max_iterations")?,
        convergence_tolerance: ls.key("convergence_tolerance")?,
        standardize: ls.key("standardize")?,
    };
    let iterations = ls.key("iterations")?;
    let d: usize = ls.key("features")?;
    let mut names = Vec::with_capacity(d);
    let mut weights = Vec::with_capacity(d);
    let mut means = Vec::new();
    let mut scales = Vec::new();
    let width = if config.standardize { 4 } else { 2 };
    for _ in 0..d {
        let line = ls.take()?.to_string();
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != width {
            return Err(ls.bad(format!("expected {width} comma-separated fields")));
        }
        names.push(parts[0].to_string());
        weights.push(ls.number(parts[1])?);
        if config.standardize {
            means.push(ls.number(parts[2])?);
            scales.push(ls.number(parts[3])?);
        }
    }
    let line = ls.take()?.to_string();
    let bias = match line.strip_prefix("bias,") {
        Some(v) => ls.number(v)?,
        None => return Err(ls.bad("expected `bias,` line")),
    };
    Ok(LrModel {
        weights,
        bias,
        feature_names: names,
        config,
        standardization: config
            .standardize
            .then_some(Standardization { means, scales }),
        iterations,
    })
}

fn read_rf(ls: &mut Lines) -> Result<RfModel> {
    let config = RfConfig {
        num_trees: ls.key("num_trees")?,
        features_per_split: ls.key("features_per_split")?,
        max_depth: ls.key("max_depth")?,
        min_leaf: ls.key("min_leaf")?,
        seed: ls.key("seed")?,
        bootstrap: ls.key("bootstrap")?,
    };
    let d: usize = ls.key("features")?;
    let feature_names = (0..d)
        .map(|_| ls.key::<String>("feature"))
        .collect::<Result<Vec<_>>>()?;
    let mut trees = Vec::with_capacity(config.num_trees);
    for i in 0..config.num_trees {
        let line = ls.take()?.to_string();
        if line != format!("tree {i}") {
            return Err(ls.bad(format!("expected `tree {i}`")));
        }
        trees.push(read_node(ls, d)?);
    }
    Ok(RfModel {
        trees,
        config,
        feature_names,
    })
}

fn read_node(ls: &mut Lines, d: usize) -> Result<TreeNode> {
    let line = ls.take()?.to_string();
    let parts: Vec<&str> = line.split(' ').collect();
    match parts.as_slice() {
        ["L", dire, radiant] => Ok(TreeNode::Leaf {
            dire: ls.number(dire)?,
            radiant: ls.number(radiant)?,
        }),
        ["N", feature, threshold] => {
            let feature: usize = ls.number(feature)?;
            if feature >= d {
                return Err(ls.bad(format!("feature {feature} out of range")));
            }
            let threshold = ls.number(threshold)?;
            let left = Box::new(read_node(ls, d)?);
            let right = Box::new(read_node(ls, d)?);
            Ok(TreeNode::Internal {
                feature,
                threshold,
                left,
                right,
            })
        }
        _ => Err(ls.bad("expected `N <feature> <threshold>` or `L <dire> <radiant>`")),
    }
}
