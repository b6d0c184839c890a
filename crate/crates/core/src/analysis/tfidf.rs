use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metrics::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("corpus has no tokens to fit on")]
pub struct EmptyCorpus;

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    pub entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&(_, v)| v == 0.0)
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|(_, v)| v * v).sum())
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut i, mut j, mut sum) = (0, 0, 0.0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (self.entries[i], other.entries[j]);
            match a.0.cmp(&b.0) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    sum += a.1 * b.1;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }

    /// Cosine similarity; 0 when either side is the zero vector.
    pub fn cosine(&self, other: &SparseVector) -> f64 {
        let n = self.norm() * other.norm();
        if n == 0.0 {
            0.0
        } else {
            (self.dot(other) / n).clamp(-1.0, 1.0)
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<f64>,
    pub doc_count: usize,
}

impl TfidfModel {
    /// Smoothed idf `ln((1 + N) / (1 + df)) + 1` over the shared tokenizer.
    pub fn fit<S: AsRef<str>>(docs: &[S]) -> Result<Self, EmptyCorpus> {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in docs {
            let mut tokens = tokenize(doc.as_ref());
            tokens.sort_unstable();
            tokens.dedup();
            for t in tokens {
                *df.entry(t).or_default() += 1;
            }
        }
        if df.is_empty() {
            return Err(EmptyCorpus);
        }
        let n = docs.len() as f64;
        let idf = df.values().map(|&d| libm::log((1.0 + n) / (1.0 + d as f64)) + 1.0).collect();
        let vocabulary = df.into_keys().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(TfidfModel { vocabulary, idf, doc_count: docs.len() })
    }

    pub fn dim(&self) -> usize {
        self.idf.len()
    }

    /// L2-normalized tf-idf vector; unknown tokens are ignored.
    pub fn transform(&self, doc: &str) -> SparseVector {
        let mut tf: BTreeMap<usize, usize> = BTreeMap::new();
        for t in tokenize(doc) {
            if let Some(&i) = self.vocabulary.get(&t) {
                *tf.entry(i).or_default() += 1;
            }
        }
        let mut entries: Vec<(usize, f64)> = tf.into_iter().map(|(i, c)| (i, c as f64 * self.idf[i])).collect();
        let norm = libm::sqrt(entries.iter().map(|(_, v)| v * v).sum());
        if norm > 0.0 {
            for e in &mut entries {
                e.1 /= norm;
            }
        }
        SparseVector { entries }
    }
}
