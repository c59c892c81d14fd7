//! Reference implementations written independently of the library code,
//! plus random instance generators.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use grafia_core::{Analyzer, NgramConfig, SparseVector};
use rand::Rng;

/// N-gram occurrences, computed directly from the definition.
pub fn oracle_ngrams(text: &str, cfg: &NgramConfig) -> Vec<Vec<u8>> {
    let text = if cfg.lowercase { text.to_lowercase() } else { text.to_string() };
    let mut out = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        match cfg.analyzer {
            Analyzer::Byte => {
                let b = text.as_bytes();
                for i in 0..b.len().saturating_sub(n - 1) {
                    if i + n <= b.len() {
                        out.push(b[i..i + n].to_vec());
                    }
                }
            }
            Analyzer::Char => {
                let c: Vec<char> = text.chars().collect();
                for i in 0..c.len() {
                    if i + n <= c.len() {
                        out.push(c[i..i + n].iter().collect::<String>().into_bytes());
                    }
                }
            }
            Analyzer::Word => {
                let w: Vec<&str> = text.split_whitespace().collect();
                for i in 0..w.len() {
                    if i + n <= w.len() {
                        out.push(w[i..i + n].join(" ").into_bytes());
                    }
                }
            }
        }
    }
    out
}

pub struct OracleTfidf {
    pub terms: Vec<Vec<u8>>,
    pub idf: Vec<f64>,
    pub cfg: NgramConfig,
}

impl OracleTfidf {
    pub fn fit(corpus: &[String], cfg: NgramConfig) -> Self {
        let mut total: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
        let mut df: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
        for doc in corpus {
            let grams = oracle_ngrams(doc, &cfg);
            for g in &grams {
                *total.entry(g.clone()).or_default() += 1;
            }
            for g in grams.into_iter().collect::<BTreeSet<_>>() {
                *df.entry(g).or_default() += 1;
            }
        }
        let mut ranked: Vec<(Vec<u8>, u64)> = total.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked.truncate(cfg.max_features);
        let mut terms: Vec<Vec<u8>> = ranked.into_iter().map(|(g, _)| g).collect();
        terms.sort();
        let n = corpus.len() as f64;
        let idf = terms.iter().map(|t| ((1.0 + n) / (1.0 + df[t] as f64)).ln() + 1.0).collect();
        OracleTfidf { terms, idf, cfg }
    }

    pub fn dense(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.terms.len()];
        for g in oracle_ngrams(text, &self.cfg) {
            if let Ok(i) = self.terms.binary_search(&g) {
                v[i] += 1.0;
            }
        }
        for (x, w) in v.iter_mut().zip(&self.idf) {
            *x *= w;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in &mut v {
                *x /= norm;
            }
        }
        v
    }
}

/// Dense multinomial Naive Bayes: log priors and log likelihood rows.
pub fn nb_oracle(x: &[Vec<f64>], y: &[usize], k: usize, alpha: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = x[0].len();
    let n = x.len() as f64;
    let mut prior = Vec::new();
    let mut theta = Vec::new();
    for c in 0..k {
        let rows: Vec<&Vec<f64>> = x.iter().zip(y).filter(|(_, &yc)| yc == c).map(|(r, _)| r).collect();
        prior.push((rows.len() as f64 / n).ln());
        let counts: Vec<f64> = (0..d).map(|j| rows.iter().map(|r| r[j]).sum()).collect();
        let total: f64 = counts.iter().sum::<f64>() + alpha * d as f64;
        theta.push(counts.iter().map(|c| ((c + alpha) / total).ln()).collect());
    }
    (prior, theta)
}

pub fn nb_oracle_jll(prior: &[f64], theta: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    prior
        .iter()
        .zip(theta)
        .map(|(p, row)| p + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

/// Central finite-difference gradient.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, theta: &[f64], h: f64) -> Vec<f64> {
    let mut t = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            let orig = t[i];
            t[i] = orig + h;
            let up = f(&t);
            t[i] = orig - h;
            let down = f(&t);
            t[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

pub fn random_sparse<R: Rng>(rng: &mut R, dim: usize, density: f64, lo: f64, hi: f64) -> SparseVector {
    let dense: Vec<f64> = (0..dim)
        .map(|_| if rng.gen_bool(density) { rng.gen_range(lo..hi) } else { 0.0 })
        .collect();
    SparseVector::from_dense(&dense).unwrap()
}

const ALPHABET: &[&str] = &["a", "b", "c", "e", "ö", "ü", "è", "ch", "oeu", " ", " ", "'"];

pub fn random_text<R: Rng>(rng: &mut R, max_pieces: usize) -> String {
    let n = rng.gen_range(0..=max_pieces);
    (0..n).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())]).collect()
}

/// Weighted cross-entropy plus `l2/2 * ||W||^2` on dense inputs, with
/// parameters packed as `[W (K x D) row-major, b (K)]`.
pub fn logreg_oracle_value(x: &[Vec<f64>], y: &[usize], w: &[f64], k: usize, l2: f64, theta: &[f64]) -> f64 {
    let d = x[0].len();
    let mut loss = 0.0;
    for ((row, &yi), &wi) in x.iter().zip(y).zip(w) {
        let z: Vec<f64> = (0..k)
            .map(|c| theta[k * d + c] + (0..d).map(|j| theta[c * d + j] * row[j]).sum::<f64>())
            .collect();
        let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + z.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
        loss += wi * (lse - z[yi]);
    }
    loss + 0.5 * l2 * theta[..k * d].iter().map(|v| v * v).sum::<f64>()
}
