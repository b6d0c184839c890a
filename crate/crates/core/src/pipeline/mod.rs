//! Corpus preprocessing.
//!
//! Stages run in a fixed order: [`filter_null`], [`anonymize`],
//! [`normalize`], [`deduplicate`], [`script_filter`]. Record-wise stages
//! never drop records; set-wise stages report what they dropped in a
//! [`PipelineStats`].

pub mod anonymize;
mod script;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::irt::{self, parse_irt, render_irt, IssueReportTemplate};

pub use script::{count_scripts, ScriptCounts};

/// One ingested template with its repository context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub repo_name: String,
    pub file_path: String,
    pub raw: String,
    /// Repository-level metadata, e.g. declared `labels` and `assignees`.
    pub repo_meta: BTreeMap<String, String>,
    /// Present iff `raw` parsed.
    pub parsed: Option<IssueReportTemplate>,
    /// Parse failure message when `parsed` is absent.
    pub diagnostic: Option<String>,
}

impl CorpusRecord {
    /// Builds a record and parses its raw text.
    pub fn new(
        id: impl Into<String>,
        repo_name: impl Into<String>,
        file_path: impl Into<String>,
        raw: impl Into<String>,
        repo_meta: BTreeMap<String, String>,
    ) -> Self {
        let raw = raw.into();
        let (parsed, diagnostic) = match parse_irt(&raw) {
            Ok(irt) => (Some(irt), None),
            Err(e) => (None, Some(e.to_string())),
        };
        CorpusRecord {
            id: id.into(),
            repo_name: repo_name.into(),
            file_path: file_path.into(),
            raw,
            repo_meta,
            parsed,
            diagnostic,
        }
    }

    /// Canonical text of the parsed template.
    pub fn canonical(&self) -> Option<String> {
        self.parsed.as_ref().map(render_irt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ingest,
    FilterNull,
    Anonymize,
    Normalize,
    Dedup,
    ScriptFilter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineStats {
    pub stage: Stage,
    pub input_count: usize,
    pub output_count: usize,
    pub dropped: usize,
}

impl PipelineStats {
    pub fn new(stage: Stage, input_count: usize, output_count: usize) -> Self {
        PipelineStats {
            stage,
            input_count,
            output_count,
            dropped: input_count - output_count,
        }
    }
}

/// Minimum share of Latin letters for a template to be kept, in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LatinThreshold(f64);

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("latin threshold must be in (0, 1], got {0}")]
pub struct InvalidThreshold(pub f64);

impl LatinThreshold {
    pub const DEFAULT: LatinThreshold = LatinThreshold(0.5);

    pub fn new(value: f64) -> Result<Self, InvalidThreshold> {
        if value > 0.0 && value <= 1.0 {
            Ok(LatinThreshold(value))
        } else {
            Err(InvalidThreshold(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for LatinThreshold {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl TryFrom<f64> for LatinThreshold {
    type Error = InvalidThreshold;
    fn try_from(value: f64) -> Result<Self, Self::Error> {
        LatinThreshold::new(value)
    }
}

impl From<LatinThreshold> for f64 {
    fn from(t: LatinThreshold) -> f64 {
        t.0
    }
}

impl fmt::Display for LatinThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Drops unparsed templates and those without name, about or body.
pub fn filter_null(records: Vec<CorpusRecord>) -> (Vec<CorpusRecord>, PipelineStats) {
    let input = records.len();
    let kept: Vec<_> = records
        .into_iter()
        .filter(|r| r.parsed.as_ref().is_some_and(IssueReportTemplate::is_valid))
        .collect();
    let stats = PipelineStats::new(Stage::FilterNull, input, kept.len());
    (kept, stats)
}

/// Replaces URLs, emails, images and repository names with tags across
/// metadata and body, and assignees with positional `USER_i` tokens.
pub fn anonymize(mut record: CorpusRecord) -> CorpusRecord {
    let needles = anonymize::repo_needles(&record.repo_name);
    let mut original_assignees = Vec::new();
    if let Some(irt) = record.parsed.as_mut() {
        original_assignees = core::mem::take(&mut irt.metadata.assignees);
        anonymize_irt(irt, &needles);
        irt.metadata.assignees = anonymize::anonymize_assignees(&original_assignees);
    }
    let raw = anonymize::replace_assignee_names(&record.raw, &original_assignees);
    record.raw = anonymize::anonymize_text(&raw, &needles);
    record
}

fn anonymize_irt(irt: &mut IssueReportTemplate, needles: &[String]) {
    let anon = |s: &mut String| *s = anonymize::anonymize_text(s, needles);
    let m = &mut irt.metadata;
    anon(&mut m.name);
    anon(&mut m.about);
    anon(&mut m.title);
    m.labels.iter_mut().for_each(anon);
    for (_, raw) in m.extra.iter_mut() {
        anon(raw);
    }
    anon(&mut irt.body.preamble);
    for section in irt.body.sections.iter_mut() {
        anon(&mut section.headline);
        anon(&mut section.content);
    }
}

/// Completes empty frontmatter fields from repository metadata.
///
/// Values present in the frontmatter win. Values taken from repository
/// metadata are anonymized the same way [`anonymize`] would have.
pub fn normalize(mut record: CorpusRecord) -> CorpusRecord {
    let needles = anonymize::repo_needles(&record.repo_name);
    let meta = &record.repo_meta;
    let Some(irt) = record.parsed.as_mut() else {
        return record;
    };
    let m = &mut irt.metadata;
    let lookup = |key: &str| {
        meta.get(key)
            .map(|v| irt::unquote(v))
            .filter(|v| !v.trim().is_empty())
    };
    for (key, field) in [("name", &mut m.name), ("about", &mut m.about), ("title", &mut m.title)] {
        if field.trim().is_empty() {
            if let Some(v) = lookup(key) {
                *field = anonymize::anonymize_text(v.trim(), &needles);
            }
        }
    }
    if m.labels.is_empty() {
        if let Some(v) = meta.get("labels") {
            m.labels = irt::split_list_value(v)
                .into_iter()
                .map(|l| anonymize::anonymize_text(&l, &needles))
                .collect();
        }
    }
    if m.assignees.is_empty() {
        if let Some(v) = meta.get("assignees") {
            m.assignees = anonymize::anonymize_assignees(&irt::split_list_value(v));
        }
    }
    record
}

/// Exact deduplication on the canonical rendering (metadata and body).
/// Keeps the first occurrence.
pub fn deduplicate(records: Vec<CorpusRecord>) -> (Vec<CorpusRecord>, PipelineStats) {
    let input = records.len();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let kept: Vec<_> = records
        .into_iter()
        .filter(|r| seen.insert(dedup_key(r)))
        .collect();
    let stats = PipelineStats::new(Stage::Dedup, input, kept.len());
    (kept, stats)
}

/// Key used by [`deduplicate`].
pub fn dedup_key(record: &CorpusRecord) -> String {
    record.canonical().unwrap_or_else(|| record.raw.clone())
}

/// Share of Latin letters in a record's template text; `None` without letters.
pub fn latin_fraction(record: &CorpusRecord) -> Option<f64> {
    match &record.parsed {
        Some(irt) => script::count_irt_scripts(irt).latin_fraction(),
        None => count_scripts(&record.raw).latin_fraction(),
    }
}

/// Keeps records whose Latin share is at least `threshold`. Records with
/// no script-bearing letters at all are kept.
pub fn script_filter(records: Vec<CorpusRecord>, threshold: LatinThreshold) -> (Vec<CorpusRecord>, PipelineStats) {
    let input = records.len();
    let kept: Vec<_> = records
        .into_iter()
        .filter(|r| latin_fraction(r).is_none_or(|f| f >= threshold.get()))
        .collect();
    let stats = PipelineStats::new(Stage::ScriptFilter, input, kept.len());
    (kept, stats)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub latin_threshold: LatinThreshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub records: Vec<CorpusRecord>,
    /// One entry per stage, ingest first.
    pub stats: Vec<PipelineStats>,
}

/// Runs all five stages in order.
pub fn run(records: Vec<CorpusRecord>, config: &PipelineConfig) -> PipelineOutput {
    let n = records.len();
    let mut stats = alloc::vec![PipelineStats::new(Stage::Ingest, n, n)];

    let (records, s) = filter_null(records);
    stats.push(s);

    let n = records.len();
    let records: Vec<_> = records.into_iter().map(anonymize).collect();
    stats.push(PipelineStats::new(Stage::Anonymize, n, records.len()));

    let n = records.len();
    let records: Vec<_> = records.into_iter().map(normalize).collect();
    stats.push(PipelineStats::new(Stage::Normalize, n, records.len()));

    let (records, s) = deduplicate(records);
    stats.push(s);

    let (records, s) = script_filter(records, config.latin_threshold);
    stats.push(s);

    PipelineOutput { records, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn record(id: &str, raw: &str) -> CorpusRecord {
        CorpusRecord::new(id, "octo/widgets", format!("{id}.md"), raw, BTreeMap::new())
    }

    const GOOD: &str = "---\nname: Bug\nabout: Report a bug\n---\n## Steps\n1. run\n";

    #[test]
    fn parse_failures_keep_diagnostic() {
        let r = record("x", "no frontmatter");
        assert!(r.parsed.is_none());
        assert!(r.diagnostic.as_deref().unwrap().contains("missing frontmatter"));
    }

    #[test]
    fn filter_null_drops_invalid() {
        let mut records = vec![
            record("ok", GOOD),
            record("no-about", "---\nname: Bug\n---\nbody"),
            record("unparsed", "nothing"),
        ];
        for i in 0..4 {
            records.push(record(&format!("bodiless-{i}"), "---\nname: A\nabout: B\n---\n"));
        }
        for i in 0..3 {
            records.push(record(&format!("ok-{i}"), GOOD));
        }
        let (kept, stats) = filter_null(records);
        assert_eq!(kept.len(), 4);
        assert_eq!(stats, PipelineStats::new(Stage::FilterNull, 10, 4));
        assert_eq!(stats.dropped, 6);
        assert!(kept.iter().all(|r| r.id.starts_with("ok")));
    }

    #[test]
    fn anonymize_metadata_and_body() {
        let raw = "---\nname: Widgets bug\nabout: See https://octo.dev\ntitle: ''\nlabels: bug\nassignees: alice, bob\n---\n## Contact\nMail maint@octo.dev or see ![x](y.png)\n";
        let r = anonymize(record("a", raw));
        let m = &r.parsed.as_ref().unwrap().metadata;
        assert_eq!(m.name, "<|Repo_Name|> bug");
        assert_eq!(m.about, "See <|URL|>");
        assert_eq!(m.assignees, vec!["USER_1", "USER_2"]);
        let body = &r.parsed.as_ref().unwrap().body;
        assert_eq!(body.sections[0].content, "Mail <|Email|> or see <|Image|>");
        assert!(r.raw.contains("assignees: USER_1, USER_2"));
        assert!(!anonymize::has_sensitive(&r.raw));
        assert_eq!(anonymize(r.clone()), r);
    }

    #[test]
    fn normalize_fills_from_repo_meta() {
        let mut r = record("n", "---\nname: Bug\nabout: B\n---\nx");
        r.repo_meta.insert("labels".into(), "bug".into());
        r.repo_meta.insert("assignees".into(), "carol, dave".into());
        r.repo_meta.insert("title".into(), "'[BUG] '".into());
        let n = normalize(r);
        let m = &n.parsed.unwrap().metadata;
        assert_eq!(m.labels, vec!["bug"]);
        assert_eq!(m.assignees, vec!["USER_1", "USER_2"]);
        assert_eq!(m.title, "[BUG]");
    }

    #[test]
    fn normalize_prefers_frontmatter() {
        let mut r = record("n", "---\nname: Bug\nabout: B\nlabels: defect\n---\nx");
        r.repo_meta.insert("labels".into(), "bug".into());
        assert_eq!(normalize(r).parsed.unwrap().metadata.labels, vec!["defect"]);
        let full = record("f", GOOD);
        assert_eq!(normalize(full.clone()), full);
    }

    #[test]
    fn dedup_keeps_first_and_uses_metadata() {
        let other_name = GOOD.replace("name: Bug", "name: Defect");
        let reformatted = "---\nname:   Bug\nabout: 'Report a bug'\n---\n\n\n##   Steps\n1. run\n\n";
        let records = vec![
            record("1", GOOD),
            record("2", &other_name),
            record("3", reformatted),
        ];
        let (kept, stats) = deduplicate(records);
        assert_eq!(kept.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), vec!["1", "2"]);
        assert_eq!(stats.dropped, 1);
        let (empty, stats) = deduplicate(Vec::new());
        assert!(empty.is_empty());
        assert_eq!(stats, PipelineStats::new(Stage::Dedup, 0, 0));
    }

    #[test]
    fn script_filter_thresholds() {
        let cjk = record("cjk", "---\nname: 错误报告\nabout: 报告一个错误\n---\n## 描述\n请描述这个问题");
        let ascii = record("ascii", GOOD);
        for t in [0.01, 0.5, 1.0] {
            let (kept, stats) = script_filter(vec![cjk.clone(), ascii.clone()], LatinThreshold::new(t).unwrap());
            assert_eq!(kept.len(), 1, "threshold {t}");
            assert_eq!(kept[0].id, "ascii");
            assert_eq!(stats.dropped, 1);
        }
    }

    #[test]
    fn threshold_bounds() {
        assert!(LatinThreshold::new(0.0).is_err());
        assert!(LatinThreshold::new(1.5).is_err());
        assert!(LatinThreshold::new(f64::NAN).is_err());
        assert!(LatinThreshold::new(1.0).is_ok());
    }

    #[test]
    fn run_reports_every_stage() {
        let records = vec![record("1", GOOD), record("2", GOOD), record("3", "---\nname: A\n---\n")];
        let out = run(records, &PipelineConfig::default());
        assert_eq!(out.records.len(), 1);
        let stages: Vec<_> = out.stats.iter().map(|s| s.stage).collect();
        assert_eq!(
            stages,
            vec![Stage::Ingest, Stage::FilterNull, Stage::Anonymize, Stage::Normalize, Stage::Dedup, Stage::ScriptFilter]
        );
        for s in &out.stats {
            assert_eq!(s.input_count, s.output_count + s.dropped);
        }
    }
}
