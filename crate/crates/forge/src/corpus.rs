//! Corpus JSONL and Markdown directories.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use girt_forge_core::irt::{parse_irt, IssueReportTemplate};
use girt_forge_core::pipeline::{CorpusRecord, PipelineStats};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    UnreadableInput { path: PathBuf, source: io::Error },
    #[error("line {line}: {message}")]
    MalformedJsonLine { line: usize, message: String },
}

/// One corpus line. Pipeline output adds `canonical`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub id: String,
    #[serde(default)]
    pub repo: String,
    #[serde(default)]
    pub path: String,
    pub content: String,
    #[serde(default, deserialize_with = "meta_map")]
    pub meta: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
}

/// Metadata values may be strings, lists of strings or scalars.
fn meta_map<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BTreeMap<String, String>, D::Error> {
    let raw: BTreeMap<String, Value> = Option::deserialize(d)?.unwrap_or_default();
    Ok(raw
        .into_iter()
        .filter_map(|(k, v)| {
            let text = match v {
                Value::Null => return None,
                Value::String(s) => s,
                Value::Array(items) => items
                    .iter()
                    .map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string()))
                    .collect::<Vec<_>>()
                    .join(", "),
                other => other.to_string(),
            };
            Some((k, text))
        })
        .collect())
}

impl CorpusRow {
    pub fn into_record(self) -> CorpusRecord {
        CorpusRecord::new(self.id, self.repo, self.path, self.content, self.meta)
    }

    /// Output row for a processed record. Both `content` and `canonical`
    /// carry the canonical text so no pre-anonymization text leaks out.
    pub fn from_record(record: &CorpusRecord) -> Self {
        let canonical = record.canonical();
        CorpusRow {
            id: record.id.clone(),
            repo: record.repo_name.clone(),
            path: record.file_path.clone(),
            content: canonical.clone().unwrap_or_else(|| record.raw.clone()),
            meta: record.repo_meta.clone(),
            canonical,
        }
    }

    /// The template text: `canonical` when present, otherwise `content`.
    pub fn template_text(&self) -> &str {
        self.canonical.as_deref().unwrap_or(&self.content)
    }
}

fn unreadable(path: &Path) -> impl FnOnce(io::Error) -> IngestError + '_ {
    move |source| IngestError::UnreadableInput { path: path.to_path_buf(), source }
}

/// Reads JSONL rows; blank lines are skipped.
pub fn read_rows(reader: impl Read, source: &Path) -> Result<Vec<CorpusRow>, IngestError> {
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(unreadable(source))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line)
            .map_err(|e| IngestError::MalformedJsonLine { line: i + 1, message: e.to_string() })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Every `.md` file under `dir`, sorted by relative path. The id and path
/// are the relative path, the repository its parent directory.
pub fn read_markdown_dir(dir: &Path) -> Result<Vec<CorpusRow>, IngestError> {
    let mut files = Vec::new();
    collect_markdown(dir, &mut files)?;
    files.sort();
    files
        .into_iter()
        .map(|file| {
            let content = std::fs::read_to_string(&file).map_err(unreadable(&file))?;
            let rel = file.strip_prefix(dir).unwrap_or(&file);
            let rel_text = slash_path(rel);
            let repo = rel.parent().map(slash_path).unwrap_or_default();
            Ok(CorpusRow { id: rel_text.clone(), repo, path: rel_text, content, meta: BTreeMap::new(), canonical: None })
        })
        .collect()
}

fn slash_path(p: &Path) -> String {
    p.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/")
}

fn collect_markdown(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), IngestError> {
    for entry in std::fs::read_dir(dir).map_err(unreadable(dir))? {
        let path = entry.map_err(unreadable(dir))?.path();
        if path.is_dir() {
            collect_markdown(&path, out)?;
        } else if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("md")) {
            out.push(path);
        }
    }
    Ok(())
}

/// Reads a JSONL file, a Markdown directory, or JSONL from stdin for `-`.
pub fn read_input(path: &Path) -> Result<Vec<CorpusRow>, IngestError> {
    if path == Path::new("-") {
        return read_rows(io::stdin().lock(), path);
    }
    if path.is_dir() {
        return read_markdown_dir(path);
    }
    read_rows(File::open(path).map_err(unreadable(path))?, path)
}

pub fn ingest(path: &Path) -> Result<Vec<CorpusRecord>, IngestError> {
    Ok(read_input(path)?.into_iter().map(CorpusRow::into_record).collect())
}

/// Parseable templates of a corpus, keyed by row id.
pub fn load_templates(path: &Path) -> Result<Vec<(String, IssueReportTemplate)>, IngestError> {
    Ok(read_input(path)?
        .into_iter()
        .filter_map(|row| parse_irt(row.template_text()).ok().map(|irt| (row.id, irt)))
        .collect())
}

pub fn write_rows<'a>(mut out: impl Write, rows: impl IntoIterator<Item = &'a CorpusRow>) -> io::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn stats_json(stats: &[PipelineStats]) -> String {
    serde_json::to_string_pretty(stats).expect("stats serialize")
}
