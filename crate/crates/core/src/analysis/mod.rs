//! TF-IDF vectors, k-means, and one-per-cluster sampling of test pairs.

mod kmeans;
mod sample;
mod tfidf;

pub use kmeans::{kmeans, squared_distance, ClusterAssignment, KMeansError, MAX_ITERATIONS, SHIFT_TOLERANCE};
pub use sample::{stratified_sample, Sample, SampleError};
pub use tfidf::{EmptyCorpus, SparseVector, TfidfModel};
