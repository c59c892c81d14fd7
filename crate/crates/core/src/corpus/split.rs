//! Stratified train/validation/test partitioning.
//!
//! Sizes are decided before membership. The validation and test splits
//! receive `floor(ratio * N)` samples overall and the training split absorbs
//! the remainder. Each class then gets the floor of its per-split quota, and
//! the leftover units are handed out cell by cell in order of descending
//! fractional remainder (ties: train, valid, test, then class order) subject
//! to the overall split sizes. Every cell therefore ends within one sample of
//! its exact quota.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{OrthographyClass, Sample};
use crate::error::{Error, Result};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub valid: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.8,
            valid: 0.1,
            test: 0.1,
        }
    }
}

impl SplitRatios {
    pub fn new(train: f64, valid: f64, test: f64) -> Result<Self> {
        let r = SplitRatios { train, valid, test };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = self.as_array();
        if parts.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(Error::InvalidSplit(format!(
                "ratios must lie in [0, 1], got {parts:?}"
            )));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > EPS {
            return Err(Error::InvalidSplit(format!(
                "ratios must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }

    fn as_array(&self) -> [f64; 3] {
        [self.train, self.valid, self.test]
    }
}

impl std::str::FromStr for SplitRatios {
    type Err = Error;

    /// Parses `"0.8,0.1,0.1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidSplit(format!("cannot parse ratios {s:?}: {e}")))?;
        match parts[..] {
            [train, valid, test] => SplitRatios::new(train, valid, test),
            _ => Err(Error::InvalidSplit(format!(
                "expected three comma-separated ratios, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitSet {
    pub train: Vec<Sample>,
    pub valid: Vec<Sample>,
    pub test: Vec<Sample>,
    /// Input positions of each split, ascending.
    pub train_indices: Vec<usize>,
    pub valid_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub seed: u64,
    pub ratios: SplitRatios,
}

fn floor_eps(x: f64) -> usize {
    (x + EPS).floor() as usize
}

/// Per-class `[train, valid, test]` sizes for the given class counts.
pub fn allocate_split_sizes(class_counts: &[usize], ratios: &SplitRatios) -> Vec<[usize; 3]> {
    let r = ratios.as_array();
    let total: usize = class_counts.iter().sum();
    let valid_total = floor_eps(total as f64 * r[1]).min(total);
    let test_total = floor_eps(total as f64 * r[2]).min(total - valid_total);
    let targets = [total - valid_total - test_total, valid_total, test_total];

    let mut sizes = Vec::with_capacity(class_counts.len());
    let mut remainders = Vec::with_capacity(class_counts.len());
    let mut row_need = Vec::with_capacity(class_counts.len());
    for &n in class_counts {
        let mut cell = [0usize; 3];
        let mut rem = [0f64; 3];
        for j in 0..3 {
            let quota = n as f64 * r[j];
            cell[j] = floor_eps(quota).min(n);
            rem[j] = (quota - cell[j] as f64).max(0.0);
        }
        // Floors can only undershoot up to float noise in the ratios.
        while cell.iter().sum::<usize>() > n {
            let j = (0..3).rev().find(|&j| cell[j] > 0).unwrap();
            cell[j] -= 1;
        }
        row_need.push(n - cell.iter().sum::<usize>());
        sizes.push(cell);
        remainders.push(rem);
    }

    let mut col_need = [0isize; 3];
    for j in 0..3 {
        let floors: usize = sizes.iter().map(|c| c[j]).sum();
        col_need[j] = targets[j] as isize - floors as isize;
    }

    // extra[c][j]: whether cell (c, j) receives one unit above its floor
    let k = class_counts.len();
    let mut extra = vec![[false; 3]; k];
    let mut cells: Vec<(usize, usize)> = (0..k).flat_map(|c| (0..3).map(move |j| (c, j))).collect();
    cells.sort_by(|&(c1, j1), &(c2, j2)| {
        remainders[c2][j2]
            .partial_cmp(&remainders[c1][j1])
            .unwrap()
            .then(j1.cmp(&j2))
            .then(c1.cmp(&c2))
    });
    for &(c, j) in &cells {
        if row_need[c] > 0 && col_need[j] > 0 && remainders[c][j] > EPS {
            extra[c][j] = true;
            row_need[c] -= 1;
            col_need[j] -= 1;
        }
    }

    // Rows still short: look for an alternating path to a split with spare room.
    for (c, need) in row_need.iter_mut().enumerate() {
        while *need > 0 {
            if !augment(c, &mut extra, &mut col_need) {
                break;
            }
            *need -= 1;
        }
    }

    // Infeasible overall targets: honor the per-class bound and let the
    // split totals drift.
    for c in 0..k {
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| remainders[c][b].partial_cmp(&remainders[c][a]).unwrap().then(a.cmp(&b)));
        for j in order {
            if row_need[c] == 0 {
                break;
            }
            if !extra[c][j] {
                extra[c][j] = true;
                row_need[c] -= 1;
            }
        }
    }

    sizes
        .iter()
        .zip(&extra)
        .map(|(cell, e)| {
            let mut out = *cell;
            for j in 0..3 {
                out[j] += e[j] as usize;
            }
            out
        })
        .collect()
}

/// Finds an alternating path starting at row `start` that ends in a split
/// column with spare capacity, and flips it.
fn augment(start: usize, extra: &mut [[bool; 3]], col_need: &mut [isize; 3]) -> bool {
    let k = extra.len();
    // BFS over rows; parent links record (previous row, column) hops.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; k];
    let mut seen_row = vec![false; k];
    let mut seen_col = [false; 3];
    let mut queue = std::collections::VecDeque::new();
    seen_row[start] = true;
    queue.push_back(start);
    while let Some(row) = queue.pop_front() {
        for j in 0..3 {
            if extra[row][j] || seen_col[j] {
                continue;
            }
            seen_col[j] = true;
            if col_need[j] > 0 {
                // flip along the path
                extra[row][j] = true;
                col_need[j] -= 1;
                let mut cur = row;
                while let Some((prev, col)) = parent[cur] {
                    // `cur` hands column `col` over to `prev`
                    extra[cur][col] = false;
                    extra[prev][col] = true;
                    cur = prev;
                }
                return true;
            }
            for next in 0..k {
                if !seen_row[next] && extra[next][j] {
                    seen_row[next] = true;
                    parent[next] = Some((row, j));
                    queue.push_back(next);
                }
            }
        }
    }
    false
}

/// Partitions `samples` per class with a seeded shuffle.
///
/// Classes are shuffled independently (one PRNG stream per class, derived
/// from `seed`), then cut into train/valid/test by [`allocate_split_sizes`].
/// Output splits keep the input order.
pub fn stratified_split(samples: &[Sample], ratios: SplitRatios, seed: u64) -> Result<SplitSet> {
    if samples.is_empty() {
        return Err(Error::InvalidSplit("cannot split an empty corpus".into()));
    }
    ratios.validate()?;

    let mut by_class: BTreeMap<OrthographyClass, Vec<usize>> = BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        by_class.entry(s.tag).or_default().push(i);
    }
    let counts: Vec<usize> = by_class.values().map(Vec::len).collect();
    let sizes = allocate_split_sizes(&counts, &ratios);

    let mut parts: [Vec<usize>; 3] = Default::default();
    for ((class, members), size) in by_class.iter_mut().zip(&sizes) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(*class as u64);
        members.shuffle(&mut rng);
        let mut rest = &members[..];
        for (j, part) in parts.iter_mut().enumerate() {
            let (head, tail) = rest.split_at(size[j]);
            part.extend_from_slice(head);
            rest = tail;
        }
        debug_assert!(rest.is_empty());
    }
    for part in &mut parts {
        part.sort_unstable();
    }
    let [train_indices, valid_indices, test_indices] = parts;
    let pick = |idx: &[usize]| idx.iter().map(|&i| samples[i].clone()).collect::<Vec<_>>();
    Ok(SplitSet {
        train: pick(&train_indices),
        valid: pick(&valid_indices),
        test: pick(&test_indices),
        train_indices,
        valid_indices,
        test_indices,
        seed,
        ratios,
    })
}
