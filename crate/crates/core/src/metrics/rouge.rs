use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;

fn f1(overlap: usize, cand_len: usize, ref_len: usize) -> f64 {
    if overlap == 0 || cand_len == 0 || ref_len == 0 {
        return 0.0;
    }
    let p = overlap as f64 / cand_len as f64;
    let r = overlap as f64 / ref_len as f64;
    2.0 * p * r / (p + r)
}

/// Size of the clipped multiset intersection.
pub(crate) fn unigram_overlap(cand: &[String], reference: &[String]) -> usize {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in reference {
        *counts.entry(t).or_default() += 1;
    }
    let mut overlap = 0;
    for t in cand {
        if let Some(c) = counts.get_mut(t.as_str()) {
            if *c > 0 {
                *c -= 1;
                overlap += 1;
            }
        }
    }
    overlap
}

pub(crate) fn lcs_len(a: &[String], b: &[String]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub fn rouge1_tokens(cand: &[String], reference: &[String]) -> f64 {
    f1(unigram_overlap(cand, reference), cand.len(), reference.len())
}

pub fn rouge_l_tokens(cand: &[String], reference: &[String]) -> f64 {
    f1(lcs_len(cand, reference), cand.len(), reference.len())
}

/// ROUGE-1 recall, exposed for the monotonicity property.
pub fn rouge1_recall_tokens(cand: &[String], reference: &[String]) -> f64 {
    if reference.is_empty() {
        return 0.0;
    }
    unigram_overlap(cand, reference) as f64 / reference.len() as f64
}
