//! Random forest of CART trees with weighted Gini splits.
//!
//! Each tree sees a bootstrap sample (multiplicities act as sample weights,
//! multiplied by the balanced class weight). At every node up to
//! `max_features` non-constant features are examined, drawn without
//! replacement; features that are constant within the node do not count
//! against that budget. A feature absent from every sample at the node is
//! constant (all zero), so candidates are drawn from the node's non-zero
//! feature pool. Trees grow until pure or unsplittable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::prepare_labels;
use super::weights::balanced_index_weights;
use crate::corpus::OrthographyClass;
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfParams {
    pub n_trees: usize,
    pub seed: u64,
    pub balanced: bool,
    /// Features examined per node; `None` means `ceil(sqrt(D))`.
    pub max_features: Option<usize>,
}

impl Default for RfParams {
    fn default() -> Self {
        RfParams {
            n_trees: 100,
            seed: 42,
            balanced: true,
            max_features: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    /// Weighted class totals of the training samples that reached the leaf.
    Leaf { counts: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    fn leaf_for(&self, x: &SparseVector) -> &[f64] {
        let mut id = 0usize;
        loop {
            match &self.nodes[id] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    id = if x.get(*feature as usize) <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
                TreeNode::Leaf { counts } => return counts,
            }
        }
    }

    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(0usize, 1usize)];
        while let Some((id, d)) = stack.pop() {
            best = best.max(d);
            if let TreeNode::Split { left, right, .. } = &self.nodes[id] {
                stack.push((*left as usize, d + 1));
                stack.push((*right as usize, d + 1));
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub classes: Vec<OrthographyClass>,
    pub dim: usize,
    pub seed: u64,
    pub trees: Vec<Tree>,
}

impl ForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Mean of the per-tree normalized leaf distributions.
    pub fn predict_proba(&self, x: &SparseVector) -> Vec<f64> {
        let k = self.classes.len();
        let mut out = vec![0.0; k];
        for tree in &self.trees {
            let counts = tree.leaf_for(x);
            let total: f64 = counts.iter().sum();
            for (o, c) in out.iter_mut().zip(counts) {
                *o += c / total;
            }
        }
        let n = self.trees.len() as f64;
        out.iter_mut().for_each(|o| *o /= n);
        out
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let k = self.classes.len();
        if self.trees.is_empty() {
            return Err(Error::ModelCorrupt("forest has no trees".into()));
        }
        for (t, tree) in self.trees.iter().enumerate() {
            let n = tree.nodes.len();
            if n == 0 {
                return Err(Error::ModelCorrupt(format!("tree {t} is empty")));
            }
            for (i, node) in tree.nodes.iter().enumerate() {
                match node {
                    TreeNode::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => {
                        let (l, r) = (*left as usize, *right as usize);
                        if l <= i || r <= i || l >= n || r >= n {
                            return Err(Error::ModelCorrupt(format!(
                                "tree {t} node {i} has invalid children"
                            )));
                        }
                        if *feature as usize >= self.dim || !threshold.is_finite() {
                            return Err(Error::ModelCorrupt(format!(
                                "tree {t} node {i} has an invalid split"
                            )));
                        }
                    }
                    TreeNode::Leaf { counts } => {
                        if counts.len() != k
                            || counts.iter().any(|c| !c.is_finite() || *c < 0.0)
                            || counts.iter().sum::<f64>() <= 0.0
                        {
                            return Err(Error::ModelCorrupt(format!(
                                "tree {t} leaf {i} has invalid class counts"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn train_rf(x: &[SparseVector], y: &[OrthographyClass], params: &RfParams) -> Result<ForestModel> {
    if params.n_trees == 0 {
        return Err(Error::Training("a forest needs at least one tree".into()));
    }
    let (classes, y_idx, dim) = prepare_labels(x, y, 1)?;
    let k = classes.len();
    let class_weight = if params.balanced {
        balanced_index_weights(&y_idx, k)
    } else {
        vec![1.0; k]
    };
    let max_features = params
        .max_features
        .unwrap_or_else(|| (dim as f64).sqrt().ceil() as usize)
        .max(1);

    let mut columns: Vec<Vec<(u32, f64)>> = vec![Vec::new(); dim];
    for (i, row) in x.iter().enumerate() {
        for (j, v) in row.iter() {
            columns[j].push((i as u32, v));
        }
    }
    let data = TrainingData {
        rows: x,
        columns: &columns,
        y: &y_idx,
        class_weight: &class_weight,
        n_classes: k,
        max_features,
    };

    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(t as u64);
            data.grow_tree(&mut rng)
        })
        .collect();

    Ok(ForestModel {
        classes,
        dim,
        seed: params.seed,
        trees,
    })
}

struct TrainingData<'a> {
    rows: &'a [SparseVector],
    columns: &'a [Vec<(u32, f64)>],
    y: &'a [usize],
    class_weight: &'a [f64],
    n_classes: usize,
    max_features: usize,
}

struct BestSplit {
    score: f64,
    feature: u32,
    threshold: f64,
}

impl TrainingData<'_> {
    fn grow_tree(&self, rng: &mut ChaCha8Rng) -> Tree {
        let n = self.rows.len();
        let mut multiplicity = vec![0u32; n];
        for _ in 0..n {
            multiplicity[rng.gen_range(0..n)] += 1;
        }
        let weight: Vec<f64> = multiplicity
            .iter()
            .zip(self.y)
            .map(|(&m, &c)| m as f64 * self.class_weight[c])
            .collect();
        let root: Vec<u32> = (0..n as u32).filter(|&i| multiplicity[i as usize] > 0).collect();

        let mut scratch = Scratch {
            feature_stamp: vec![0; self.columns.len()],
            sample_stamp: vec![0; n],
            stamp: 0,
        };
        let mut nodes = vec![TreeNode::Leaf { counts: Vec::new() }];
        let mut stack = vec![(0usize, root)];
        while let Some((id, samples)) = stack.pop() {
            let mut totals = vec![0.0; self.n_classes];
            for &s in &samples {
                totals[self.y[s as usize]] += weight[s as usize];
            }
            let pure = totals.iter().filter(|&&w| w > 0.0).count() <= 1;
            let split = if pure || samples.len() < 2 {
                None
            } else {
                self.best_split(&samples, &totals, &weight, rng, &mut scratch)
            };
            match split {
                None => nodes[id] = TreeNode::Leaf { counts: totals },
                Some(best) => {
                    let (left, right): (Vec<u32>, Vec<u32>) = samples
                        .iter()
                        .partition(|&&s| self.rows[s as usize].get(best.feature as usize) <= best.threshold);
                    let l = nodes.len();
                    nodes.push(TreeNode::Leaf { counts: Vec::new() });
                    nodes.push(TreeNode::Leaf { counts: Vec::new() });
                    nodes[id] = TreeNode::Split {
                        feature: best.feature,
                        threshold: best.threshold,
                        left: l as u32,
                        right: l as u32 + 1,
                    };
                    stack.push((l + 1, right));
                    stack.push((l, left));
                }
            }
        }
        Tree { nodes }
    }

    fn best_split(
        &self,
        samples: &[u32],
        totals: &[f64],
        weight: &[f64],
        rng: &mut ChaCha8Rng,
        scratch: &mut Scratch,
    ) -> Option<BestSplit> {
        scratch.stamp += 1;
        let stamp = scratch.stamp;
        let mut pool = Vec::new();
        for &s in samples {
            scratch.sample_stamp[s as usize] = stamp;
            for &j in self.rows[s as usize].indices() {
                if scratch.feature_stamp[j as usize] != stamp {
                    scratch.feature_stamp[j as usize] = stamp;
                    pool.push(j);
                }
            }
        }
        pool.sort_unstable();

        let mut best: Option<BestSplit> = None;
        let mut examined = 0;
        let mut next = 0;
        let mut items: Vec<(f64, usize, f64)> = Vec::new();
        while examined < self.max_features && next < pool.len() {
            let pick = rng.gen_range(next..pool.len());
            pool.swap(next, pick);
            let feature = pool[next];
            next += 1;

            items.clear();
            self.gather(feature, samples, weight, stamp, scratch, &mut items);
            let mut nonzero_weight = vec![0.0; self.n_classes];
            for &(_, c, w) in &items {
                nonzero_weight[c] += w;
            }
            let nonzero_samples = items.len();
            if nonzero_samples < samples.len() {
                for c in 0..self.n_classes {
                    let zero_w = totals[c] - nonzero_weight[c];
                    if zero_w > 1e-12 * totals[c].max(1.0) {
                        items.push((0.0, c, zero_w));
                    }
                }
            }
            items.sort_by(|a, b| a.0.total_cmp(&b.0));
            if items.first().map(|i| i.0) == items.last().map(|i| i.0) {
                continue; // constant at this node
            }
            examined += 1;
            if let Some((score, threshold)) = self.scan(&items, totals) {
                if best.as_ref().is_none_or(|b| score > b.score) {
                    best = Some(BestSplit {
                        score,
                        feature,
                        threshold,
                    });
                }
            }
        }
        best
    }

    /// Non-zero `(value, class, weight)` entries of `feature` at the node.
    fn gather(
        &self,
        feature: u32,
        samples: &[u32],
        weight: &[f64],
        stamp: u32,
        scratch: &Scratch,
        items: &mut Vec<(f64, usize, f64)>,
    ) {
        let column = &self.columns[feature as usize];
        if column.len() <= 4 * samples.len() {
            for &(s, v) in column {
                if scratch.sample_stamp[s as usize] == stamp {
                    items.push((v, self.y[s as usize], weight[s as usize]));
                }
            }
        } else {
            for &s in samples {
                let v = self.rows[s as usize].get(feature as usize);
                if v != 0.0 {
                    items.push((v, self.y[s as usize], weight[s as usize]));
                }
            }
        }
    }

    /// Best threshold on sorted items by the Gini proxy
    /// `sum_c L_c^2 / |L| + sum_c R_c^2 / |R|` (larger is purer).
    fn scan(&self, items: &[(f64, usize, f64)], totals: &[f64]) -> Option<(f64, f64)> {
        let total: f64 = totals.iter().sum();
        let mut left = vec![0.0; self.n_classes];
        let mut left_total = 0.0;
        let mut best: Option<(f64, f64)> = None;
        for pair in items.windows(2) {
            let (value, class, w) = pair[0];
            left[class] += w;
            left_total += w;
            let next_value = pair[1].0;
            if value == next_value {
                continue;
            }
            let right_total = total - left_total;
            if left_total <= 0.0 || right_total <= 0.0 {
                continue;
            }
            let mut l2 = 0.0;
            let mut r2 = 0.0;
            for c in 0..self.n_classes {
                let r = totals[c] - left[c];
                l2 += left[c] * left[c];
                r2 += r * r;
            }
            let score = l2 / left_total + r2 / right_total;
            if best.is_none_or(|(s, _)| score > s) {
                let mut threshold = value + (next_value - value) / 2.0;
                if threshold >= next_value {
                    threshold = value;
                }
                best = Some((score, threshold));
            }
        }
        best
    }
}

struct Scratch {
    feature_stamp: Vec<u32>,
    sample_stamp: Vec<u32>,
    stamp: u32,
}
