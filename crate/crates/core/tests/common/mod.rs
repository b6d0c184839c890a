//! Fixture loaders and a synthetic corpus shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use girt_forge_core::pipeline::CorpusRecord;

/// Also works when this module is included from the `girt-forge` crate.
pub fn fixture_dir() -> PathBuf {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let local = manifest.join("tests/fixtures/irts");
    if local.is_dir() {
        local
    } else {
        manifest.join("../core/tests/fixtures/irts")
    }
}

/// `(file name, raw text)` for every fixture template, sorted by name.
pub fn fixture_texts() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(fixture_dir())
        .expect("fixture dir")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "md"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).expect("fixture text"))
        })
        .collect();
    out.sort();
    out
}

pub fn bug_report_text() -> String {
    std::fs::read_to_string(fixture_dir().join("example__demo__bug_report.md")).unwrap()
}

/// Instruction for the bug report fixture, hard-wrapped, three fields masked.
pub const BUG_REPORT_INSTRUCTION: &str = "name: Bug report
about: <|MASK|>
title: <|MASK|>
labels: <|MASK|>
assignees: <|EMPTY|>
headlines_type: # Heading
headlines: ['Describe the bug', 'To Reproduce',
'Expected behavior', 'Screenshots
(if appropriate)', 'Environment', 'Additional 
context']
summary: This issue template is designed to
help users report bugs they encounter while
using our software. Environment section should
asks for \"operating system\" such as  Ubuntu.";

/// Fixture files as corpus records; `owner__repo__file.md` names the repository.
pub fn fixture_records() -> Vec<CorpusRecord> {
    fixture_texts()
        .into_iter()
        .map(|(name, raw)| {
            let mut parts = name.splitn(3, "__");
            let repo = match (parts.next(), parts.next()) {
                (Some(owner), Some(repo)) => format!("{owner}/{repo}"),
                _ => String::new(),
            };
            CorpusRecord::new(name.trim_end_matches(".md"), repo, name.clone(), raw, BTreeMap::new())
        })
        .collect()
}

const TOPICS: [&str; 10] =
    ["login", "export", "search", "upload", "billing", "sync", "editor", "theme", "plugin", "network"];
const KINDS: [&str; 5] = ["Bug report", "Feature request", "Question", "Regression", "Docs issue"];
const HEADLINES: [&str; 8] = [
    "Describe the problem",
    "Steps to reproduce",
    "Expected behavior",
    "Actual behavior",
    "Environment",
    "Proposed solution",
    "Alternatives",
    "Additional context",
];

fn normal_template(i: usize) -> String {
    let topic = TOPICS[i % TOPICS.len()];
    let kind = KINDS[(i / TOPICS.len()) % KINDS.len()];
    let bold = i.is_multiple_of(3);
    let n_sections = 2 + i % 4;
    let mut body = String::new();
    for s in 0..n_sections {
        let h = HEADLINES[(i + s * 3) % HEADLINES.len()];
        if bold {
            body.push_str(&format!("**{h}**\n"));
        } else {
            body.push_str(&format!("## {h}\n"));
        }
        body.push_str(&format!("Tell us about the {topic} {} in detail ({i}).\n\n", h.to_lowercase()));
    }
    let labels = match i % 4 {
        0 => String::from("bug"),
        1 => format!("[{topic}, triage]"),
        2 => String::new(),
        _ => format!("'{topic}'"),
    };
    let assignees = if i.is_multiple_of(5) { "maintainer-a, maintainer-b" } else { "''" };
    format!(
        "---\nname: {kind} #{i}\nabout: Report a {topic} {} for release {i}\ntitle: '[{topic}] '\nlabels: {labels}\nassignees: {assignees}\n---\n\n{body}",
        kind.to_lowercase()
    )
}

/// A deterministic corpus of `n` records with planted problems.
///
/// By index modulo 10: 0 has no frontmatter, 1 lacks `about`, 3 repeats
/// record 2 byte for byte, 4 is written in Chinese, 5 and 6 carry URLs,
/// emails, images and the repository name; the rest are ordinary.
/// Records 2 and 3 carry repository-level labels.
pub fn synthetic_corpus(n: usize) -> Vec<CorpusRecord> {
    (0..n)
        .map(|i| {
            let repo = format!("org{}/proj{}", i % 7, i % 3);
            let raw = match i % 10 {
                0 => format!("## Steps\nThis file has no frontmatter ({i}).\n"),
                1 => format!("---\nname: Broken {i}\n---\n## Steps\nMissing about.\n"),
                3 => normal_template(i - 1),
                4 => format!(
                    "---\nname: 错误报告 {i}\nabout: 创建报告以帮助我们改进\n---\n## 描述错误\n清晰简洁地描述错误是什么。\n## 复现步骤\n重现该行为的步骤。\n"
                ),
                5 | 6 => format!(
                    "---\nname: Contact {i}\nabout: Reach proj{} maintainers at team{i}@example.com\nassignees: alice, bob\n---\n## Links\nSee https://example.com/{i}/docs and www.org{}.dev for more.\n![diagram](https://img.example.com/{i}.png)\n## Repository\nThis concerns {repo} and nothing else.\n",
                    i % 3,
                    i % 7
                ),
                _ => normal_template(i),
            };
            let mut meta = BTreeMap::new();
            if matches!(i % 10, 2 | 3) {
                meta.insert("labels".to_string(), "from-repo".to_string());
            }
            let path = format!("{repo}/.github/ISSUE_TEMPLATE/t{i}.md");
            let repo_name = if i % 10 == 3 { format!("org{}/proj{}", (i - 1) % 7, (i - 1) % 3) } else { repo };
            CorpusRecord::new(format!("syn-{i:04}"), repo_name, path, raw, meta)
        })
        .collect()
}
