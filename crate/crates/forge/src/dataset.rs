//! Instruction-pair JSONL and its manifest sidecar.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use girt_forge_core::instruct::{
    expand_variants, split_dataset, summarize, InstructPair, Split, SplitRatios, SummarizeError, Summarizer,
    SummarySource,
};
use girt_forge_core::irt::IssueReportTemplate;
use serde::{Deserialize, Serialize};

use crate::corpus::IngestError;

/// Written next to the pairs file as `<out>.manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub split: [f64; 3],
    pub summarizer: SummarySource,
    pub templates: usize,
    pub pairs: usize,
    pub per_split: BTreeMap<Split, usize>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Expands every template into its four pairs and assigns splits.
pub fn build_pairs(
    templates: &[(String, IssueReportTemplate)],
    summarizer: &dyn Summarizer,
    ratios: SplitRatios,
    seed: u64,
) -> Result<(Vec<InstructPair>, Manifest), SummarizeError> {
    let mut pairs = Vec::with_capacity(templates.len() * 4);
    for (id, irt) in templates {
        let summary = summarize(summarizer, irt)?;
        pairs.extend(expand_variants(irt, id, &summary, seed));
    }
    split_dataset(&mut pairs, ratios, seed);
    let mut per_split = BTreeMap::new();
    for p in &pairs {
        *per_split.entry(p.split).or_insert(0) += 1;
    }
    let manifest = Manifest {
        seed,
        split: [ratios.train(), ratios.validation(), ratios.test()],
        summarizer: summarizer.source(),
        templates: templates.len(),
        pairs: pairs.len(),
        per_split,
    };
    Ok((pairs, manifest))
}

pub fn write_pairs(mut out: impl Write, pairs: &[InstructPair]) -> io::Result<()> {
    for p in pairs {
        serde_json::to_writer(&mut out, p)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_pairs(path: &Path) -> Result<Vec<InstructPair>, IngestError> {
    let unreadable = |source| IngestError::UnreadableInput { path: path.to_path_buf(), source };
    let file = File::open(path).map_err(unreadable)?;
    let mut pairs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(unreadable)?;
        if line.trim().is_empty() {
            continue;
        }
        pairs.push(
            serde_json::from_str(&line)
                .map_err(|e| IngestError::MalformedJsonLine { line: i + 1, message: e.to_string() })?,
        );
    }
    Ok(pairs)
}
