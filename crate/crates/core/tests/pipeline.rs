mod common;

use std::collections::BTreeSet;

use girt_forge_core::irt::render_irt;
use girt_forge_core::pipeline::anonymize::{find_email, find_image, find_url, has_sensitive};
use girt_forge_core::pipeline::{self, dedup_key, CorpusRecord, LatinThreshold, PipelineConfig, Stage};
use proptest::prelude::*;

fn irt_texts(record: &CorpusRecord) -> Vec<String> {
    let irt = record.parsed.as_ref().unwrap();
    let m = &irt.metadata;
    let mut out = vec![m.name.clone(), m.about.clone(), m.title.clone(), irt.body.preamble.clone()];
    out.extend(m.labels.iter().cloned());
    out.extend(m.assignees.iter().cloned());
    out.extend(m.extra.iter().map(|(_, v)| v.clone()));
    for s in &irt.body.sections {
        out.push(s.headline.clone());
        out.push(s.content.clone());
    }
    out
}

#[test]
fn synthetic_corpus_stage_accounting() {
    let out = pipeline::run(common::synthetic_corpus(200), &PipelineConfig::default());
    let stages: Vec<Stage> = out.stats.iter().map(|s| s.stage).collect();
    assert_eq!(
        stages,
        [Stage::Ingest, Stage::FilterNull, Stage::Anonymize, Stage::Normalize, Stage::Dedup, Stage::ScriptFilter]
    );
    for s in &out.stats {
        assert_eq!(s.input_count, s.output_count + s.dropped, "{:?}", s.stage);
    }
    for pair in out.stats.windows(2) {
        assert_eq!(pair[0].output_count, pair[1].input_count);
    }
    // 20 without frontmatter and 20 without about; 20 repeats; 20 Chinese.
    let dropped: Vec<usize> = out.stats.iter().map(|s| s.dropped).collect();
    assert_eq!(dropped, [0, 40, 0, 0, 20, 20]);
    assert_eq!(out.records.len(), 120);
}

#[test]
fn synthetic_corpus_is_anonymized_and_unique() {
    let out = pipeline::run(common::synthetic_corpus(200), &PipelineConfig::default());
    let mut keys = BTreeSet::new();
    for r in &out.records {
        for text in irt_texts(r) {
            assert!(!has_sensitive(&text), "{}: {text}", r.id);
            assert!(!text.contains("org1/proj1"), "{}: {text}", r.id);
        }
        assert!(!has_sensitive(&r.raw), "{}", r.id);
        assert!(keys.insert(dedup_key(r)));
        let irt = r.parsed.as_ref().unwrap();
        assert!(irt.metadata.assignees.iter().enumerate().all(|(i, a)| *a == format!("USER_{}", i + 1)));
    }
    let contact = out.records.iter().find(|r| r.id == "syn-0005").unwrap();
    let irt = contact.parsed.as_ref().unwrap();
    assert_eq!(irt.metadata.assignees, ["USER_1", "USER_2"]);
    assert!(irt.metadata.about.contains("<|Email|>"));
    assert!(irt.body.sections[0].content.contains("<|URL|>"));
    assert!(irt.body.sections[0].content.contains("<|Image|>"));
    assert!(irt.body.sections[1].content.contains("<|Repo_Name|>"));
}

#[test]
fn repository_labels_fill_gaps_only() {
    let out = pipeline::run(common::synthetic_corpus(40), &PipelineConfig::default());
    // Index 12 declares labels in its frontmatter; 2 and 22 declare none.
    let labels = |id: &str| out.records.iter().find(|r| r.id == id).unwrap().parsed.as_ref().unwrap().metadata.labels.clone();
    assert_eq!(labels("syn-0002"), ["from-repo"]);
    assert_eq!(labels("syn-0012"), ["bug"]);
    assert_eq!(labels("syn-0022"), ["from-repo"]);
}

#[test]
fn reruns_are_byte_identical() {
    let render = || {
        let out = pipeline::run(common::synthetic_corpus(200), &PipelineConfig::default());
        out.records
            .iter()
            .map(|r| format!("{}\n{}", r.id, render_irt(r.parsed.as_ref().unwrap())))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(render(), render());
}

#[test]
fn fixture_corpus_pipeline() {
    let out = pipeline::run(common::fixture_records(), &PipelineConfig::default());
    let dropped: Vec<(Stage, usize)> = out.stats.iter().map(|s| (s.stage, s.dropped)).collect();
    assert_eq!(
        dropped,
        [
            (Stage::Ingest, 0),
            (Stage::FilterNull, 4),
            (Stage::Anonymize, 0),
            (Stage::Normalize, 0),
            (Stage::Dedup, 1),
            (Stage::ScriptFilter, 2)
        ]
    );
    let ids: BTreeSet<&str> = out.records.iter().map(|r| r.id.as_str()).collect();
    assert!(ids.contains("violet__cli__bug_ja_mixed"));
    assert!(!ids.contains("violet__cli__bug_zh"));
    assert!(!ids.contains("willow__lib__bug_report_copy"));
    let support = out.records.iter().find(|r| r.id == "yarrow__net__support").unwrap();
    let text = render_irt(support.parsed.as_ref().unwrap());
    assert!(text.contains("issues of <|Repo_Name|> first"), "{text}");
    assert!(text.contains("write to <|Email|> instead"), "{text}");
}

#[test]
fn script_threshold_is_configurable() {
    let strict = PipelineConfig { latin_threshold: LatinThreshold::new(1.0).unwrap() };
    let out = pipeline::run(common::fixture_records(), &strict);
    assert!(!out.records.iter().any(|r| r.id == "violet__cli__bug_ja_mixed"));
}

fn sensitive_text() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[a-z]{1,8}",
        "[a-z]{1,6}@[a-z]{1,6}\\.(com|org|io)",
        "https?://[a-z]{1,8}\\.[a-z]{2,3}/[a-z0-9/?=&.]{0,10}",
        "www\\.[a-z]{1,8}\\.dev",
        "!\\[[a-z ]{0,5}\\]\\([a-z:/.]{1,12}\\)",
        Just("<|URL|>".to_string()),
        "[ .,;()\\n]{1,2}",
    ];
    prop::collection::vec(piece, 0..12).prop_map(|p| p.concat())
}

proptest! {
    #[test]
    fn anonymization_is_complete_and_idempotent(body in sensitive_text(), about in sensitive_text()) {
        let raw = format!("---\nname: T\nabout: x {about}\nassignees: alice\n---\n## Body\nz {body}\n");
        let record = CorpusRecord::new("p", "acme/widget", "p.md", raw, Default::default());
        prop_assume!(record.parsed.is_some());
        let once = pipeline::anonymize(record);
        for text in irt_texts(&once) {
            prop_assert!(!has_sensitive(&text), "{}", text);
        }
        let twice = pipeline::anonymize(once.clone());
        prop_assert_eq!(&twice.parsed, &once.parsed);
        prop_assert_eq!(twice.raw, once.raw);
    }

    #[test]
    fn detectors_skip_tags(n in 0usize..5) {
        let text = "<|URL|> <|Email|> <|Image|> ".repeat(n);
        prop_assert!(!has_sensitive(&text));
        prop_assert!(find_url("plain words").is_none());
        prop_assert!(find_email("a@b").is_none());
        prop_assert!(find_image("![x]").is_none());
    }

    #[test]
    fn dedup_output_is_subsequence(picks in prop::collection::vec(0usize..6, 0..20)) {
        let corpus = common::synthetic_corpus(6);
        let records: Vec<CorpusRecord> = picks
            .iter()
            .enumerate()
            .map(|(i, &p)| CorpusRecord { id: format!("r{i}"), ..corpus[p].clone() })
            .collect();
        let (kept, stats) = pipeline::deduplicate(records.clone());
        prop_assert_eq!(stats.input_count, stats.output_count + stats.dropped);
        let keys: BTreeSet<String> = kept.iter().map(dedup_key).collect();
        prop_assert_eq!(keys.len(), kept.len());
        let mut it = records.iter();
        for k in &kept {
            prop_assert!(it.any(|r| r.id == k.id));
        }
        let all: BTreeSet<String> = records.iter().map(dedup_key).collect();
        prop_assert_eq!(all.len(), kept.len());
    }
}
