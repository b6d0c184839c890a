use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_instruction, serialize_instruction, Instruction};
use crate::irt::{render_irt, IssueReportTemplate};
use crate::seed::derive_seed;

/// Number of concrete fields masked in the masked variants.
pub const MASKED_FIELDS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Meta,
    MetaMask,
    MetaSum,
    MetaSumMask,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Meta, Variant::MetaMask, Variant::MetaSum, Variant::MetaSumMask];

    pub fn display_name(self) -> &'static str {
        match self {
            Variant::Meta => "META",
            Variant::MetaMask => "META+MASK",
            Variant::MetaSum => "META+SUM",
            Variant::MetaSumMask => "META+SUM+MASK",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Variant::Meta => "meta",
            Variant::MetaMask => "meta_mask",
            Variant::MetaSum => "meta_sum",
            Variant::MetaSumMask => "meta_sum_mask",
        }
    }

    pub fn has_summary(self) -> bool {
        matches!(self, Variant::MetaSum | Variant::MetaSumMask)
    }

    pub fn is_masked(self) -> bool {
        matches!(self, Variant::MetaMask | Variant::MetaSumMask)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub fn key(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "validation" | "val" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split `{other}`")),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// One instruction/output training pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructPair {
    pub id: String,
    pub irt_id: String,
    pub variant: Variant,
    #[serde(rename = "instruction")]
    pub instruction_text: String,
    #[serde(rename = "output")]
    pub output_text: String,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid split ratios: {0}")]
pub struct InvalidRatios(pub String);

/// Train/validation/test proportions summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    train: f64,
    validation: f64,
    test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, validation: f64, test: f64) -> Result<Self, InvalidRatios> {
        let parts = [train, validation, test];
        if parts.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(InvalidRatios(format!("{train},{validation},{test}")));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(InvalidRatios(format!("{train},{validation},{test} sums to {sum}")));
        }
        Ok(SplitRatios { train, validation, test })
    }

    pub fn train(&self) -> f64 {
        self.train
    }

    pub fn validation(&self) -> f64 {
        self.validation
    }

    pub fn test(&self) -> f64 {
        self.test
    }
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios { train: 0.8, validation: 0.1, test: 0.1 }
    }
}

impl FromStr for SplitRatios {
    type Err = InvalidRatios;

    /// Parses `"0.8,0.1,0.1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(InvalidRatios(format!("expected three comma-separated values, got `{s}`")));
        };
        let num = |t: &str| t.parse::<f64>().map_err(|_| InvalidRatios(format!("not a number: `{t}`")));
        SplitRatios::new(num(a)?, num(b)?, num(c)?)
    }
}

/// Masks [`MASKED_FIELDS`] of the concrete fields chosen uniformly with
/// `seed`, or every concrete field when there are no more than that.
pub fn mask_instruction(ins: &Instruction, seed: u64) -> Instruction {
    let mut out = ins.clone();
    let concrete = ins.concrete_fields();
    if concrete.len() <= MASKED_FIELDS {
        for f in concrete {
            out.mask(f);
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in rand::seq::index::sample(&mut rng, concrete.len(), MASKED_FIELDS) {
        out.mask(concrete[i]);
    }
    out
}

/// The four training pairs of one template.
///
/// All pairs share the canonical rendering as output. Each masked variant
/// draws its mask from its own seed derived from `seed`, `irt_id` and the
/// variant name. Splits start as [`Split::Train`] until [`split_dataset`]
/// assigns them.
pub fn expand_variants(irt: &IssueReportTemplate, irt_id: &str, summary: &str, seed: u64) -> [InstructPair; 4] {
    let output = render_irt(irt);
    let base = build_instruction(irt, None);
    let with_summary = build_instruction(irt, Some(summary));
    Variant::ALL.map(|variant| {
        let source = if variant.has_summary() { &with_summary } else { &base };
        let ins = if variant.is_masked() {
            mask_instruction(source, derive_seed(seed, &[irt_id, variant.key()]))
        } else {
            source.clone()
        };
        InstructPair {
            id: format!("{irt_id}:{}", variant.key()),
            irt_id: irt_id.to_string(),
            variant,
            instruction_text: serialize_instruction(&ins),
            output_text: output.clone(),
            split: Split::Train,
        }
    })
}

/// Assigns every pair a split so that all pairs of one template share it.
///
/// Template ids are sorted, shuffled with `seed`, and cut at
/// `round(n * train)` and `round(n * validation)`.
pub fn split_dataset(pairs: &mut [InstructPair], ratios: SplitRatios, seed: u64) {
    let mut ids: Vec<&str> = pairs.iter().map(|p| p.irt_id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);

    let n = ids.len();
    let n_train = libm::round(n as f64 * ratios.train) as usize;
    let n_train = n_train.min(n);
    let n_val = (libm::round(n as f64 * ratios.validation) as usize).min(n - n_train);
    let assignment: BTreeMap<String, Split> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let split = if i < n_train {
                Split::Train
            } else if i < n_train + n_val {
                Split::Validation
            } else {
                Split::Test
            };
            (id.to_string(), split)
        })
        .collect();
    for pair in pairs.iter_mut() {
        pair.split = assignment[&pair.irt_id];
    }
}
