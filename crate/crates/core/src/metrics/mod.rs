//! ROUGE-1, ROUGE-L, BLEU-4 and METEOR over a shared tokenizer.
//!
//! Every score is in `[0, 1]` and directional: the first argument is the
//! candidate and the second the reference.

mod bleu;
mod meteor;
pub mod porter;
mod rouge;
mod tokenize;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use bleu::{bleu_tokens, BleuResult, MAX_ORDER, SMOOTHING_EPSILON};
pub use meteor::{align, count_chunks, meteor_tokens, MeteorResult};
pub use rouge::{rouge1_recall_tokens, rouge1_tokens, rouge_l_tokens};
pub use tokenize::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricScore {
    pub rouge1: f64,
    #[serde(rename = "rougeL")]
    pub rouge_l: f64,
    pub bleu: f64,
    pub meteor: f64,
}

pub fn rouge1(candidate: &str, reference: &str) -> f64 {
    rouge1_tokens(&tokenize(candidate), &tokenize(reference))
}

pub fn rouge_l(candidate: &str, reference: &str) -> f64 {
    rouge_l_tokens(&tokenize(candidate), &tokenize(reference))
}

pub fn bleu(candidate: &str, references: &[&str]) -> BleuResult {
    let refs: Vec<Vec<String>> = references.iter().map(|r| tokenize(r)).collect();
    bleu_tokens(&tokenize(candidate), &refs)
}

pub fn meteor(candidate: &str, reference: &str) -> f64 {
    meteor_tokens(&tokenize(candidate), &tokenize(reference)).score
}

/// All four metrics for one pair, tokenizing each side once.
pub fn score_pair(candidate: &str, reference: &str) -> MetricScore {
    let c = tokenize(candidate);
    let r = tokenize(reference);
    MetricScore {
        rouge1: rouge1_tokens(&c, &r),
        rouge_l: rouge_l_tokens(&c, &r),
        bleu: bleu_tokens(&c, core::slice::from_ref(&r)).score,
        meteor: meteor_tokens(&c, &r).score,
    }
}
