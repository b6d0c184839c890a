use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::{DecodingConfig, GeneratorBackend};
use crate::instruct::{parse_instruction, InstructPair, Variant};
use crate::metrics::{score_pair, MetricScore};

/// Mean scores of one variant on a 0 to 100 scale.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VariantScores {
    pub rouge1: f64,
    #[serde(rename = "rougeL")]
    pub rouge_l: f64,
    pub bleu: f64,
    pub meteor: f64,
    pub n: usize,
    pub failures: usize,
}

/// Scores for all four variants, always in the order META, META+MASK,
/// META+SUM, META+SUM+MASK.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricReport {
    pub variants: [VariantScores; 4],
}

impl MetricReport {
    pub fn get(&self, variant: Variant) -> &VariantScores {
        &self.variants[Variant::ALL.iter().position(|v| *v == variant).expect("variant is listed")]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Variant, &VariantScores)> {
        Variant::ALL.into_iter().zip(self.variants.iter())
    }
}

impl Serialize for MetricReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        for (variant, scores) in self.iter() {
            map.serialize_entry(variant.display_name(), scores)?;
        }
        map.end()
    }
}

/// Scores `backend` on `pairs` against their reference outputs.
///
/// A pair whose instruction does not parse or whose generation fails
/// scores zero on every metric and is counted in `failures`.
pub fn evaluate(backend: &dyn GeneratorBackend, pairs: &[InstructPair], config: &DecodingConfig) -> MetricReport {
    let mut sums = [MetricScore::default(); 4];
    let mut report = MetricReport::default();
    for pair in pairs {
        let slot = Variant::ALL.iter().position(|v| *v == pair.variant).expect("variant is listed");
        report.variants[slot].n += 1;
        let output = parse_instruction(&pair.instruction_text)
            .ok()
            .and_then(|ins| backend.generate(&ins, config).ok());
        let Some(output) = output else {
            report.variants[slot].failures += 1;
            continue;
        };
        let s = score_pair(&output, &pair.output_text);
        sums[slot].rouge1 += s.rouge1;
        sums[slot].rouge_l += s.rouge_l;
        sums[slot].bleu += s.bleu;
        sums[slot].meteor += s.meteor;
    }
    for (scores, sum) in report.variants.iter_mut().zip(sums) {
        if scores.n > 0 {
            let scale = 100.0 / scores.n as f64;
            scores.rouge1 = sum.rouge1 * scale;
            scores.rouge_l = sum.rouge_l * scale;
            scores.bleu = sum.bleu * scale;
            scores.meteor = sum.meteor * scale;
        }
    }
    report
}

/// Fixed-width table with two decimals per score.
pub fn render_table(report: &MetricReport) -> String {
    let mut out = String::new();
    let header = ["Variant", "ROUGE-1", "ROUGE-L", "BLEU", "METEOR", "n", "failures"];
    let _ = writeln!(
        out,
        "{:<14} {:>8} {:>8} {:>8} {:>8} {:>6} {:>8}",
        header[0], header[1], header[2], header[3], header[4], header[5], header[6]
    );
    for (variant, s) in report.iter() {
        let cells: Vec<String> = [s.rouge1, s.rouge_l, s.bleu, s.meteor].iter().map(|v| format!("{v:.2}")).collect();
        let _ = writeln!(
            out,
            "{:<14} {:>8} {:>8} {:>8} {:>8} {:>6} {:>8}",
            variant.display_name(),
            cells[0],
            cells[1],
            cells[2],
            cells[3],
            s.n,
            s.failures
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{EmptyBackend, OracleBackend};
    use crate::instruct::{expand_variants, Split};
    use crate::irt::parse_irt;

    fn pairs() -> Vec<InstructPair> {
        let a = parse_irt("---\nname: Bug\nabout: Report a bug\nlabels: bug\n---\n## What happened\nTell us.\n## Steps\n1. Run it\n").unwrap();
        let b = parse_irt("---\nname: Docs\nabout: Improve the docs\n---\n**Page**\nWhich page?\n**Problem**\nWhat is wrong?\n").unwrap();
        let mut out: Vec<InstructPair> = expand_variants(&a, "a", "sum a", 1).into();
        out.extend(expand_variants(&b, "b", "sum b", 1));
        for p in &mut out {
            p.split = Split::Test;
        }
        out
    }

    #[test]
    fn oracle_scores_hundred() {
        let pairs = pairs();
        let report = evaluate(&OracleBackend::new(&pairs), &pairs, &DecodingConfig::default());
        for (_, s) in report.iter() {
            assert_eq!((s.rouge1, s.rouge_l, s.bleu, s.n, s.failures), (100.0, 100.0, 100.0, 2, 0));
            assert!(s.meteor > 99.0);
        }
        let table = render_table(&report);
        assert!(table.lines().nth(1).unwrap().starts_with("META "));
        assert!(table.contains("100.00"));
    }

    #[test]
    fn empty_backend_scores_zero() {
        let pairs = pairs();
        let report = evaluate(&EmptyBackend, &pairs, &DecodingConfig::default());
        for (_, s) in report.iter() {
            assert_eq!((s.rouge1, s.rouge_l, s.bleu, s.meteor), (0.0, 0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn failures_are_counted() {
        let mut pairs = pairs();
        pairs[0].instruction_text = String::from("garbage");
        let report = evaluate(&OracleBackend::new(&pairs), &pairs, &DecodingConfig::default());
        assert_eq!(report.get(Variant::Meta).failures, 1);
        assert_eq!(report.get(Variant::Meta).rouge1, 50.0);
    }

    #[test]
    fn json_keys_in_fixed_order() {
        let json = serde_json::to_string(&MetricReport::default()).unwrap();
        let order: Vec<usize> = ["\"META\"", "\"META+MASK\"", "\"META+SUM\"", "\"META+SUM+MASK\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(json.contains("\"rougeL\""));
    }
}
