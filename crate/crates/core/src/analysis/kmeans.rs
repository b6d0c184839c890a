use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const MAX_ITERATIONS: usize = 100;
/// Convergence threshold on the largest centroid move.
pub const SHIFT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum KMeansError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("k = {k} exceeds the {distinct} distinct points")]
    KTooLarge { k: usize, distinct: usize },
    #[error("points have different dimensions")]
    DimensionMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub k: usize,
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    /// Inertia after each Lloyd iteration.
    pub history: Vec<f64>,
    pub iterations: usize,
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index of the closest centroid, the lowest index on ties.
fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = squared_distance(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn count_distinct(points: &[Vec<f64>]) -> usize {
    let mut distinct: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    distinct.len()
}

fn seed_plus_plus(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| squared_distance(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let mut target = rng.random::<f64>() * total;
        let mut pick = None;
        for (i, &d) in d2.iter().enumerate() {
            if d <= 0.0 {
                continue;
            }
            pick = Some(i);
            if target < d {
                break;
            }
            target -= d;
        }
        let chosen = points[pick.expect("fewer distinct points than k was ruled out")].clone();
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(squared_distance(p, &chosen));
        }
        centroids.push(chosen);
    }
    centroids
}

fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>], labels: &mut [usize], dist: &mut [f64]) {
    for (i, p) in points.iter().enumerate() {
        let (c, d) = nearest(p, centroids);
        labels[i] = c;
        dist[i] = d;
    }
}

/// Moves the farthest points of multi-member clusters into empty ones.
fn fill_empty(k: usize, labels: &mut [usize], dist: &mut [f64]) {
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let donor = (0..labels.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .max_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(b.cmp(&a)));
        if let Some(i) = donor {
            sizes[labels[i]] -= 1;
            sizes[empty] += 1;
            labels[i] = empty;
            dist[i] = 0.0;
        }
    }
}

fn update(points: &[Vec<f64>], labels: &[usize], centroids: &mut [Vec<f64>]) -> f64 {
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; centroids.len()];
    let mut counts = vec![0usize; centroids.len()];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    let mut shift: f64 = 0.0;
    for (c, sum) in sums.into_iter().enumerate() {
        if counts[c] == 0 {
            continue;
        }
        let mean: Vec<f64> = sum.into_iter().map(|s| s / counts[c] as f64).collect();
        shift = shift.max(libm::sqrt(squared_distance(&mean, &centroids[c])));
        centroids[c] = mean;
    }
    shift
}

fn inertia(points: &[Vec<f64>], labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points.iter().zip(labels).map(|(p, &l)| squared_distance(p, &centroids[l])).sum()
}

/// Lloyd's algorithm with k-means++ seeding.
///
/// Runs until the largest centroid move drops below [`SHIFT_TOLERANCE`]
/// or [`MAX_ITERATIONS`] is reached. Empty clusters take over the point
/// farthest from its centroid.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<ClusterAssignment, KMeansError> {
    if k == 0 {
        return Err(KMeansError::ZeroK);
    }
    if points.iter().any(|p| p.len() != points[0].len()) {
        return Err(KMeansError::DimensionMismatch);
    }
    let distinct = count_distinct(points);
    if k > distinct {
        return Err(KMeansError::KTooLarge { k, distinct });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_plus_plus(points, k, &mut rng);
    let mut labels = vec![0usize; points.len()];
    let mut dist = vec![0.0; points.len()];
    let mut history = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        assign(points, &centroids, &mut labels, &mut dist);
        fill_empty(k, &mut labels, &mut dist);
        let shift = update(points, &labels, &mut centroids);
        history.push(inertia(points, &labels, &centroids));
        if shift < SHIFT_TOLERANCE {
            break;
        }
    }

    // One more assignment so that labels agree with the final centroids.
    let mut final_labels = labels.clone();
    assign(points, &centroids, &mut final_labels, &mut dist);
    let mut sizes = vec![0usize; k];
    for &l in &final_labels {
        sizes[l] += 1;
    }
    if final_labels != labels && sizes.iter().all(|&s| s > 0) {
        labels = final_labels;
        update(points, &labels, &mut centroids);
        history.push(inertia(points, &labels, &centroids));
    }

    let inertia = inertia(points, &labels, &centroids);
    Ok(ClusterAssignment { k, labels, centroids, inertia, history, iterations })
}
