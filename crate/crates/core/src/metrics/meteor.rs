use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::porter;

pub const ALPHA_WEIGHT: f64 = 10.0;
pub const PENALTY_GAMMA: f64 = 0.5;
pub const PENALTY_BETA: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeteorResult {
    pub score: f64,
    pub matches: usize,
    pub chunks: usize,
    pub precision: f64,
    pub recall: f64,
}

/// Candidate/reference index pairs, ordered by candidate index.
pub fn align(cand: &[String], reference: &[String]) -> Vec<(usize, usize)> {
    let mut ref_of: Vec<Option<usize>> = vec![None; cand.len()];
    let mut used = vec![false; reference.len()];
    let cand_stems: Vec<String> = cand.iter().map(|t| porter::stem(t)).collect();
    let ref_stems: Vec<String> = reference.iter().map(|t| porter::stem(t)).collect();

    let stages: [(&[String], &[String]); 2] = [(cand, reference), (&cand_stems, &ref_stems)];
    for (c_forms, r_forms) in stages {
        for i in 0..cand.len() {
            if ref_of[i].is_some() {
                continue;
            }
            let fits = |j: usize| !used[j] && c_forms[i] == r_forms[j];
            let next = i
                .checked_sub(1)
                .and_then(|p| ref_of[p])
                .map(|j| j + 1)
                .filter(|&j| j < reference.len() && fits(j));
            if let Some(j) = next.or_else(|| (0..reference.len()).find(|&j| fits(j))) {
                used[j] = true;
                ref_of[i] = Some(j);
            }
        }
    }
    ref_of.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))).collect()
}

/// Runs of matches adjacent in both candidate and reference.
pub fn count_chunks(alignment: &[(usize, usize)]) -> usize {
    let mut chunks = 0;
    let mut prev: Option<(usize, usize)> = None;
    for &(i, j) in alignment {
        match prev {
            Some((pi, pj)) if i == pi + 1 && j == pj + 1 => {}
            _ => chunks += 1,
        }
        prev = Some((i, j));
    }
    chunks
}

/// METEOR with exact and Porter-stem matching and no synonym stage.
pub fn meteor_tokens(cand: &[String], reference: &[String]) -> MeteorResult {
    let alignment = align(cand, reference);
    let m = alignment.len();
    if m == 0 {
        return MeteorResult { score: 0.0, matches: 0, chunks: 0, precision: 0.0, recall: 0.0 };
    }
    let chunks = count_chunks(&alignment);
    let p = m as f64 / cand.len() as f64;
    let r = m as f64 / reference.len() as f64;
    let fmean = ALPHA_WEIGHT * p * r / (r + (ALPHA_WEIGHT - 1.0) * p);
    let penalty = PENALTY_GAMMA * libm::pow(chunks as f64 / m as f64, PENALTY_BETA);
    MeteorResult { score: fmean * (1.0 - penalty), matches: m, chunks, precision: p, recall: r }
}
