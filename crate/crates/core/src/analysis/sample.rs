use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{kmeans, EmptyCorpus, KMeansError, TfidfModel};
use crate::instruct::{InstructPair, Variant};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SampleError {
    #[error("{variant} has {size} pairs, fewer than k = {k}")]
    GroupTooSmall { variant: Variant, size: usize, k: usize },
    #[error("{variant}: {source}")]
    Cluster { variant: Variant, source: KMeansError },
    #[error("{variant}: {source}")]
    Vectorize { variant: Variant, source: EmptyCorpus },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub variant: Variant,
    pub cluster: usize,
}

/// Picks one pair per cluster in every variant group.
///
/// Each group's instructions are embedded with TF-IDF and clustered into
/// `k` groups; one member of each cluster is drawn uniformly. Output is
/// ordered by variant, then cluster.
pub fn stratified_sample(pairs: &[InstructPair], k: usize, seed: u64) -> Result<Vec<Sample>, SampleError> {
    let mut groups: BTreeMap<Variant, Vec<&InstructPair>> = BTreeMap::new();
    for p in pairs {
        groups.entry(p.variant).or_default().push(p);
    }
    let mut out = Vec::with_capacity(groups.len() * k);
    for (variant, mut group) in groups {
        if group.len() < k {
            return Err(SampleError::GroupTooSmall { variant, size: group.len(), k });
        }
        group.sort_by(|a, b| a.id.cmp(&b.id));
        let texts: Vec<&str> = group.iter().map(|p| p.instruction_text.as_str()).collect();
        let model = TfidfModel::fit(&texts).map_err(|source| SampleError::Vectorize { variant, source })?;
        let points: Vec<Vec<f64>> = texts.iter().map(|t| model.transform(t).to_dense(model.dim())).collect();
        let clusters = kmeans(&points, k, derive_seed(seed, &[variant.key(), "kmeans"]))
            .map_err(|source| SampleError::Cluster { variant, source })?;

        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[variant.key(), "pick"]));
        for cluster in 0..k {
            let members: Vec<&InstructPair> = group
                .iter()
                .zip(&clusters.labels)
                .filter(|(_, &l)| l == cluster)
                .map(|(p, _)| *p)
                .collect();
            if members.is_empty() {
                continue;
            }
            let pick = members[rng.random_range(0..members.len())];
            out.push(Sample { id: pick.id.clone(), variant, cluster });
        }
    }
    Ok(out)
}
