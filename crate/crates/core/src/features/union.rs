use serde::{Deserialize, Deserializer, Serialize};

use super::{fit_vectorizer, NgramConfig, SparseVector, Vectorizer};
use crate::error::{Error, Result};

/// Independently fitted vectorizers whose outputs are concatenated.
///
/// Member `i` occupies columns `offset(i)..offset(i) + members[i].dim()`,
/// and each block is normalized on its own.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureUnion {
    members: Vec<Vectorizer>,
    #[serde(skip)]
    offsets: Vec<usize>,
}

impl FeatureUnion {
    pub fn new(members: Vec<Vectorizer>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Features("a feature union needs at least one member".into()));
        }
        let mut offsets = Vec::with_capacity(members.len());
        let mut acc = 0;
        for m in &members {
            offsets.push(acc);
            acc += m.dim();
        }
        Ok(FeatureUnion { members, offsets })
    }

    pub fn members(&self) -> &[Vectorizer] {
        &self.members
    }

    pub fn offset(&self, member: usize) -> usize {
        self.offsets[member]
    }

    pub fn total_dim(&self) -> usize {
        self.members.iter().map(Vectorizer::dim).sum()
    }

    pub fn configs(&self) -> Vec<NgramConfig> {
        self.members.iter().map(|m| *m.config()).collect()
    }

    /// Short label such as `byte+char+word`.
    pub fn describe(&self) -> String {
        self.members
            .iter()
            .map(|m| m.config().analyzer.as_str())
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn transform(&self, text: &str) -> SparseVector {
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for (member, &offset) in self.members.iter().zip(&self.offsets) {
            let block = member.transform(text);
            indices.extend(block.indices().iter().map(|&i| i + offset as u32));
            values.extend_from_slice(block.values());
        }
        SparseVector::from_parts_unchecked(self.total_dim(), indices, values)
    }
}

#[derive(Deserialize)]
struct UnionRepr {
    members: Vec<Vectorizer>,
}

impl<'de> Deserialize<'de> for FeatureUnion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = UnionRepr::deserialize(deserializer)?;
        FeatureUnion::new(repr.members).map_err(serde::de::Error::custom)
    }
}

/// Fits one vectorizer per config on the same corpus, in config order.
pub fn fit_union<S: AsRef<str>>(corpus: &[S], configs: &[NgramConfig]) -> Result<FeatureUnion> {
    let members = configs
        .iter()
        .map(|&c| fit_vectorizer(corpus, c))
        .collect::<Result<Vec<_>>>()?;
    FeatureUnion::new(members)
}

pub fn transform_union(union: &FeatureUnion, text: &str) -> SparseVector {
    union.transform(text)
}
