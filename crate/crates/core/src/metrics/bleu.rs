use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub const MAX_ORDER: usize = 4;
/// Stand-in for a zero clipped count inside the logarithm.
pub const SMOOTHING_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuResult {
    pub score: f64,
    /// Clipped modified precision per order; `None` where the candidate
    /// has no n-grams of that order.
    pub precisions: [Option<f64>; MAX_ORDER],
    pub brevity_penalty: f64,
    /// Set when some order had zero matches and was replaced by epsilon.
    pub smoothed: bool,
}

fn ngram_counts(tokens: &[String], n: usize) -> BTreeMap<&[String], usize> {
    let mut counts = BTreeMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_default() += 1;
        }
    }
    counts
}

/// BLEU-4 with epsilon smoothing.
///
/// Orders for which the candidate has no n-grams at all (candidates
/// shorter than four tokens) are left out of the geometric mean and the
/// remaining weights are renormalized. The brevity penalty uses the
/// reference length closest to the candidate, the shorter one on ties.
pub fn bleu_tokens(cand: &[String], references: &[Vec<String>]) -> BleuResult {
    let zero = BleuResult { score: 0.0, precisions: [None; MAX_ORDER], brevity_penalty: 0.0, smoothed: false };
    if cand.is_empty() || references.is_empty() || references.iter().all(|r| r.is_empty()) {
        return zero;
    }
    let mut precisions = [None; MAX_ORDER];
    let mut log_sum = 0.0;
    let mut orders = 0usize;
    let mut smoothed = false;
    for n in 1..=MAX_ORDER {
        let cand_counts = ngram_counts(cand, n);
        let total: usize = cand_counts.values().sum();
        if total == 0 {
            continue;
        }
        let mut max_ref: BTreeMap<&[String], usize> = BTreeMap::new();
        for r in references {
            for (gram, c) in ngram_counts(r, n) {
                let e = max_ref.entry(gram).or_default();
                *e = (*e).max(c);
            }
        }
        let clipped: usize = cand_counts
            .iter()
            .map(|(gram, &c)| c.min(max_ref.get(gram).copied().unwrap_or(0)))
            .sum();
        precisions[n - 1] = Some(clipped as f64 / total as f64);
        let numerator = if clipped == 0 {
            smoothed = true;
            SMOOTHING_EPSILON
        } else {
            clipped as f64
        };
        log_sum += libm::log(numerator / total as f64);
        orders += 1;
    }

    let c = cand.len();
    let r = references
        .iter()
        .map(|r| r.len())
        .min_by_key(|&len| (len.abs_diff(c), len))
        .expect("references is non-empty");
    let brevity_penalty = if c > r { 1.0 } else { libm::exp(1.0 - r as f64 / c as f64) };
    let score = brevity_penalty * libm::exp(log_sum / orders as f64);
    BleuResult { score: score.clamp(0.0, 1.0), precisions, brevity_penalty, smoothed }
}
