mod common;

use std::collections::BTreeSet;

use girt_forge_core::analysis::{kmeans, squared_distance, stratified_sample, SampleError, TfidfModel};
use girt_forge_core::instruct::{expand_variants, summarize, InstructPair, StubSummarizer, Variant};
use girt_forge_core::pipeline::{self, PipelineConfig};
use proptest::prelude::*;

/// Exhaustive minimum-inertia 2-partition, as a label vector with point 0 in cluster 0.
fn best_two_partition(points: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = points.len();
    let mut best = (Vec::new(), f64::INFINITY);
    for mask in 0u32..(1 << (n - 1)) {
        let labels: Vec<usize> = (0..n).map(|i| if i == 0 { 0 } else { ((mask >> (i - 1)) & 1) as usize }).collect();
        if !labels.contains(&1) {
            continue;
        }
        let mut sse = 0.0;
        for c in 0..2 {
            let members: Vec<&Vec<f64>> = points.iter().zip(&labels).filter(|(_, &l)| l == c).map(|(p, _)| p).collect();
            let dim = members[0].len();
            let mean: Vec<f64> =
                (0..dim).map(|d| members.iter().map(|p| p[d]).sum::<f64>() / members.len() as f64).collect();
            sse += members.iter().map(|p| squared_distance(p, &mean)).sum::<f64>();
        }
        if sse < best.1 {
            best = (labels, sse);
        }
    }
    best
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    labels.iter().map(|&l| usize::from(l != labels[0])).collect()
}

fn separated_groups() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=4, 1usize..=4, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8), -50.0f64..50.0)
        .prop_map(|(a, b, jitter, far)| {
            let mut pts = Vec::new();
            for (i, (x, y)) in jitter.into_iter().enumerate() {
                if i < a {
                    pts.push(vec![x, y]);
                } else if i < a + b {
                    pts.push(vec![x + 100.0, y + far]);
                }
            }
            pts
        })
}

fn pairs_from_corpus(per_variant: usize, seed: u64) -> Vec<InstructPair> {
    let out = pipeline::run(common::synthetic_corpus(200), &PipelineConfig::default());
    out.records
        .iter()
        .take(per_variant)
        .flat_map(|r| {
            let irt = r.parsed.as_ref().unwrap();
            expand_variants(irt, &r.id, &summarize(&StubSummarizer, irt).unwrap(), seed)
        })
        .collect()
}

#[test]
fn tfidf_hand_computed_weights() {
    let m = TfidfModel::fit(&["a b", "a c"]).unwrap();
    assert_eq!(m.idf, [1.0, 1.4054651081081644, 1.4054651081081644]);
    let v = m.transform("a b");
    let norm = (1.0f64 + 1.4054651081081644f64.powi(2)).sqrt();
    assert!((v.entries[0].1 - 1.0 / norm).abs() < 1e-12);
    assert!((v.entries[1].1 - 1.4054651081081644 / norm).abs() < 1e-12);
    assert_eq!(m.transform("b a"), v);
}

#[test]
fn stratified_sample_takes_forty_over_ten_clusters() {
    let pairs = pairs_from_corpus(50, 9);
    assert_eq!(pairs.len(), 200);
    let samples = stratified_sample(&pairs, 10, 17).unwrap();
    assert_eq!(samples.len(), 40);
    for variant in Variant::ALL {
        let group: Vec<_> = samples.iter().filter(|s| s.variant == variant).collect();
        assert_eq!(group.len(), 10, "{variant}");
        let clusters: BTreeSet<usize> = group.iter().map(|s| s.cluster).collect();
        assert_eq!(clusters.len(), 10, "{variant}");
        assert!(group.iter().all(|s| pairs.iter().any(|p| p.id == s.id && p.variant == variant)));
    }
    let ids: BTreeSet<&str> = samples.iter().map(|s| s.id.as_str()).collect();
    assert_eq!(ids.len(), 40);
    assert_eq!(stratified_sample(&pairs, 10, 17).unwrap(), samples);
}

#[test]
fn stratified_sample_rejects_small_groups() {
    let pairs = pairs_from_corpus(5, 0);
    assert!(matches!(
        stratified_sample(&pairs, 10, 0),
        Err(SampleError::GroupTooSmall { size: 5, k: 10, .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kmeans_matches_exhaustive_two_partition(points in separated_groups(), seed in any::<u64>()) {
        prop_assume!(points.len() >= 2);
        let (best, sse) = best_two_partition(&points);
        let got = kmeans(&points, 2, seed).unwrap();
        prop_assert_eq!(canonical(&got.labels), best);
        prop_assert!((got.inertia - sse).abs() < 1e-9);
    }

    #[test]
    fn lloyd_inertia_never_increases(
        raw in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 12..60),
        k in 1usize..8,
        seed in any::<u64>(),
    ) {
        let got = kmeans(&raw, k, seed).unwrap();
        for w in got.history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{:?}", got.history);
        }
        prop_assert!(got.labels.iter().all(|&l| l < k));
        let recomputed: f64 = raw.iter().zip(&got.labels).map(|(p, &l)| squared_distance(p, &got.centroids[l])).sum();
        prop_assert!((recomputed - got.inertia).abs() < 1e-9);
    }

    #[test]
    fn converged_points_sit_nearest_their_centroid(
        raw in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 2), 10..40),
        k in 1usize..5,
        seed in any::<u64>(),
    ) {
        let got = kmeans(&raw, k, seed).unwrap();
        prop_assume!(got.iterations < 100);
        for (p, &l) in raw.iter().zip(&got.labels) {
            let own = squared_distance(p, &got.centroids[l]);
            for c in &got.centroids {
                prop_assert!(own <= squared_distance(p, c) + 1e-6);
            }
        }
    }
}
