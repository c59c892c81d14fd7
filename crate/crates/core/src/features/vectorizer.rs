use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{for_each_ngram, Ngram, NgramConfig, SparseVector};
use crate::error::{Error, Result};

/// A fitted n-gram vocabulary with smoothed IDF weights.
///
/// Columns are assigned in byte-wise lexicographic order of the n-grams.
#[derive(Debug, Clone, PartialEq)]
pub struct Vectorizer {
    config: NgramConfig,
    terms: Vec<Ngram>,
    vocabulary: HashMap<Ngram, u32>,
    idf: Vec<f64>,
}

/// `ln((1 + n_docs) / (1 + df)) + 1`.
pub fn idf_weight(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

#[derive(Default)]
struct TermStats {
    total: u64,
    df: u32,
    last_doc: u32,
}

/// Fits a vocabulary and IDF table.
///
/// When more than `max_features` distinct n-grams occur, the ones with the
/// highest corpus-wide term frequency are kept (ties go to the
/// lexicographically smaller n-gram).
pub fn fit_vectorizer<S: AsRef<str>>(corpus: &[S], config: NgramConfig) -> Result<Vectorizer> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::Features("cannot fit a vectorizer on an empty corpus".into()));
    }
    let mut stats: HashMap<Ngram, TermStats> = HashMap::new();
    for (doc, text) in corpus.iter().enumerate() {
        let doc = doc as u32 + 1;
        for_each_ngram(text.as_ref(), &config, |gram| {
            let entry = match stats.get_mut(gram) {
                Some(e) => e,
                None => stats.entry(gram.to_vec()).or_default(),
            };
            entry.total += 1;
            if entry.last_doc != doc {
                entry.last_doc = doc;
                entry.df += 1;
            }
        });
    }

    let mut kept: Vec<(Ngram, TermStats)> = stats.into_iter().collect();
    if kept.len() > config.max_features {
        kept.sort_unstable_by(|a, b| b.1.total.cmp(&a.1.total).then_with(|| a.0.cmp(&b.0)));
        kept.truncate(config.max_features);
    }
    kept.sort_unstable_by(|a, b| a.0.cmp(&b.0));

    let n_docs = corpus.len();
    let idf = kept
        .iter()
        .map(|(_, s)| idf_weight(n_docs, s.df as usize))
        .collect();
    let terms: Vec<Ngram> = kept.into_iter().map(|(g, _)| g).collect();
    Ok(Vectorizer::from_parts_unchecked(config, terms, idf))
}

/// TF-IDF transform with L2 normalization.
pub fn transform(vectorizer: &Vectorizer, text: &str) -> SparseVector {
    vectorizer.transform(text)
}

impl Vectorizer {
    fn from_parts_unchecked(config: NgramConfig, terms: Vec<Ngram>, idf: Vec<f64>) -> Self {
        let vocabulary = terms
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
        Vectorizer {
            config,
            terms,
            vocabulary,
            idf,
        }
    }

    /// Rebuilds a vectorizer from its serialized parts, checking invariants.
    pub fn from_parts(config: NgramConfig, terms: Vec<Ngram>, idf: Vec<f64>) -> Result<Self> {
        config.validate()?;
        if terms.len() != idf.len() {
            return Err(Error::Features(format!(
                "{} terms but {} idf weights",
                terms.len(),
                idf.len()
            )));
        }
        if terms.len() > config.max_features {
            return Err(Error::Features(format!(
                "vocabulary of {} exceeds max_features {}",
                terms.len(),
                config.max_features
            )));
        }
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Features("vocabulary terms must be strictly ascending".into()));
        }
        if idf.iter().any(|w| !w.is_finite() || *w < 1.0) {
            return Err(Error::Features("idf weights must be finite and >= 1".into()));
        }
        Ok(Self::from_parts_unchecked(config, terms, idf))
    }

    pub fn config(&self) -> &NgramConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    /// N-grams in column order.
    pub fn terms(&self) -> &[Ngram] {
        &self.terms
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn index_of(&self, gram: &[u8]) -> Option<usize> {
        self.vocabulary.get(gram).map(|&i| i as usize)
    }

    /// Raw in-vocabulary term counts, sorted by column.
    pub fn term_counts(&self, text: &str) -> Vec<(u32, u32)> {
        let mut hits = Vec::new();
        for_each_ngram(text, &self.config, |gram| {
            if let Some(&i) = self.vocabulary.get(gram) {
                hits.push(i);
            }
        });
        hits.sort_unstable();
        let mut counts: Vec<(u32, u32)> = Vec::new();
        for i in hits {
            match counts.last_mut() {
                Some((j, c)) if *j == i => *c += 1,
                _ => counts.push((i, 1)),
            }
        }
        counts
    }

    pub fn transform(&self, text: &str) -> SparseVector {
        let counts = self.term_counts(text);
        let mut indices = Vec::with_capacity(counts.len());
        let mut values = Vec::with_capacity(counts.len());
        for (i, c) in counts {
            indices.push(i);
            values.push(c as f64 * self.idf[i as usize]);
        }
        let mut v = SparseVector::from_parts_unchecked(self.dim(), indices, values);
        v.normalize();
        v
    }
}

#[derive(Serialize, Deserialize)]
struct VectorizerRepr {
    config: NgramConfig,
    /// Hex-encoded n-gram bytes in column order.
    terms: Vec<String>,
    idf: Vec<f64>,
}

impl Serialize for Vectorizer {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VectorizerRepr {
            config: self.config,
            terms: self.terms.iter().map(hex::encode).collect(),
            idf: self.idf.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vectorizer {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = VectorizerRepr::deserialize(deserializer)?;
        let terms = repr
            .terms
            .iter()
            .map(hex::decode)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Vectorizer::from_parts(repr.config, terms, repr.idf).map_err(D::Error::custom)
    }
}
