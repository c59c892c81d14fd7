use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::OrthographyClass;
use crate::error::{Error, Result};

/// Gold-versus-predicted counts; rows are gold, columns are predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<OrthographyClass>,
    pub counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ErrorPair {
    pub gold: OrthographyClass,
    pub predicted: OrthographyClass,
    pub count: u64,
}

pub fn confusion_matrix(gold: &[OrthographyClass], pred: &[OrthographyClass]) -> Result<ConfusionMatrix> {
    confusion_matrix_with_classes(gold, pred, &[])
}

/// Class order is the sorted union of observed labels and `extra`.
pub fn confusion_matrix_with_classes(
    gold: &[OrthographyClass],
    pred: &[OrthographyClass],
    extra: &[OrthographyClass],
) -> Result<ConfusionMatrix> {
    if gold.len() != pred.len() {
        return Err(Error::InvalidInput(format!(
            "{} gold labels but {} predictions",
            gold.len(),
            pred.len()
        )));
    }
    let classes: Vec<OrthographyClass> = gold
        .iter()
        .chain(pred)
        .chain(extra)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = classes.len();
    let mut counts = vec![vec![0u64; k]; k];
    let pos = |c: &OrthographyClass| classes.binary_search(c).expect("class collected above");
    for (g, p) in gold.iter().zip(pred) {
        counts[pos(g)][pos(p)] += 1;
    }
    Ok(ConfusionMatrix { classes, counts })
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        self.counts.iter().map(|r| r[j]).sum()
    }

    pub fn index_of(&self, class: OrthographyClass) -> Option<usize> {
        self.classes.binary_search(&class).ok()
    }

    pub fn get(&self, gold: OrthographyClass, predicted: OrthographyClass) -> u64 {
        match (self.index_of(gold), self.index_of(predicted)) {
            (Some(g), Some(p)) => self.counts[g][p],
            _ => 0,
        }
    }

    /// Off-diagonal cells, most frequent first (ties in class order).
    pub fn error_pairs(&self) -> Vec<ErrorPair> {
        let mut pairs = Vec::new();
        for (g, row) in self.counts.iter().enumerate() {
            for (p, &count) in row.iter().enumerate() {
                if g != p && count > 0 {
                    pairs.push(ErrorPair {
                        gold: self.classes[g],
                        predicted: self.classes[p],
                        count,
                    });
                }
            }
        }
        pairs.sort_by_key(|p| std::cmp::Reverse(p.count));
        pairs
    }

    /// Comma-separated export: a header of class names, then one row per
    /// gold class.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gold\\predicted");
        for c in &self.classes {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
        for (c, row) in self.classes.iter().zip(&self.counts) {
            out.push_str(c.as_str());
            for v in row {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}
