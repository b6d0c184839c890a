use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{DecodingConfig, GenerateError, GeneratorBackend};
use crate::analysis::{SparseVector, TfidfModel};
use crate::instruct::{build_instruction, FieldValue, Instruction};
use crate::irt::{
    render_body, render_irt, HeadlineKind, HeadlineStyle, IrtBody, IrtMetadata, IssueReportTemplate, Section,
};
use crate::metrics::tokenize;

/// Section text used when the retrieved template has no matching section.
pub const PLACEHOLDER_CONTENT: &str = "A clear and concise description.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("retrieval index has no valid templates")]
pub struct EmptyIndex;

#[derive(Debug, Clone)]
struct Entry {
    irt: IssueReportTemplate,
    instruction: Instruction,
    vector: SparseVector,
}

/// Valid templates with their instructions and TF-IDF vectors.
///
/// Immutable once built, so one index can serve concurrent requests.
#[derive(Debug, Clone)]
pub struct RetrievalIndex {
    model: TfidfModel,
    entries: Vec<Entry>,
}

impl RetrievalIndex {
    /// Indexes the templates that pass validation, keeping input order as
    /// the id order.
    pub fn build(templates: impl IntoIterator<Item = IssueReportTemplate>) -> Result<Self, EmptyIndex> {
        let kept: Vec<(IssueReportTemplate, Instruction)> = templates
            .into_iter()
            .filter(IssueReportTemplate::is_valid)
            .map(|irt| {
                let ins = build_instruction(&irt, None);
                (irt, ins)
            })
            .collect();
        if kept.is_empty() {
            return Err(EmptyIndex);
        }
        let texts: Vec<String> = kept.iter().map(|(_, ins)| ins.concrete_text()).collect();
        let model = TfidfModel::fit(&texts).map_err(|_| EmptyIndex)?;
        let entries = kept
            .into_iter()
            .zip(&texts)
            .map(|((irt, instruction), text)| Entry { vector: model.transform(text), irt, instruction })
            .collect();
        Ok(RetrievalIndex { model, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn template(&self, id: usize) -> Option<&IssueReportTemplate> {
        self.entries.get(id).map(|e| &e.irt)
    }

    /// Id of the template an instruction is answered from.
    ///
    /// The `top_k` entries closest by cosine (ties to the lowest id, and
    /// every entry tied with the last one) form the candidate pool. Within
    /// the pool, entries agreeing with more of the query's non-masked
    /// fields win, then entries containing more of the query headlines,
    /// then higher cosine, then the lower id.
    pub fn retrieve(&self, query: &Instruction, top_k: usize) -> usize {
        let q = self.model.transform(&query.concrete_text());
        let mut scored: Vec<(usize, f64)> = self.entries.iter().enumerate().map(|(i, e)| (i, q.cosine(&e.vector))).collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let k = top_k.clamp(1, scored.len());
        let cutoff = scored[k - 1].1;
        let pool = scored.iter().take_while(|(_, s)| *s >= cutoff);

        let mut best: Option<((usize, usize, f64), usize)> = None;
        for &(id, cos) in pool {
            let e = &self.entries[id];
            let key = (agreement(query, &e.instruction), headline_coverage(query, &e.irt.body), cos);
            let better = match &best {
                None => true,
                Some((b, _)) => (key.0, key.1).cmp(&(b.0, b.1)).then(key.2.total_cmp(&b.2)).is_gt(),
            };
            if better {
                best = Some((key, id));
            }
        }
        best.expect("index is non-empty").1
    }
}

fn agreement(query: &Instruction, entry: &Instruction) -> usize {
    fn same<T: PartialEq>(q: &FieldValue<T>, e: &FieldValue<T>) -> usize {
        usize::from(!q.is_masked() && q == e)
    }
    same(&query.name, &entry.name)
        + same(&query.about, &entry.about)
        + same(&query.title, &entry.title)
        + same(&query.labels, &entry.labels)
        + same(&query.assignees, &entry.assignees)
        + same(&query.headlines_type, &entry.headlines_type)
        + same(&query.headlines, &entry.headlines)
}

fn headline_coverage(query: &Instruction, body: &IrtBody) -> usize {
    let Some(wanted) = query.headlines.concrete() else { return 0 };
    let mut available: Vec<&str> = body.headlines().collect();
    let mut hits = 0;
    for h in wanted {
        if let Some(pos) = available.iter().position(|a| *a == h) {
            available.swap_remove(pos);
            hits += 1;
        }
    }
    hits
}

/// Concrete query text, keeping the retrieved spelling when it differs
/// only in surrounding whitespace.
fn text_field(query: &FieldValue<String>, retrieved: &str) -> String {
    match query {
        FieldValue::Concrete(_) if FieldValue::from_text(retrieved) == *query => retrieved.to_string(),
        FieldValue::Concrete(v) => v.clone(),
        FieldValue::Empty => String::new(),
        FieldValue::Masked => retrieved.to_string(),
    }
}

fn list_field(query: &FieldValue<Vec<String>>, retrieved: &[String]) -> Vec<String> {
    match query {
        FieldValue::Concrete(_) if FieldValue::from_items(retrieved) == *query => retrieved.to_vec(),
        FieldValue::Concrete(v) => v.clone(),
        FieldValue::Empty => Vec::new(),
        FieldValue::Masked => retrieved.to_vec(),
    }
}

fn build_metadata(query: &Instruction, retrieved: &IrtMetadata) -> IrtMetadata {
    let mut name = text_field(&query.name, &retrieved.name);
    if name.trim().is_empty() {
        name = retrieved.name.clone();
    }
    let mut about = text_field(&query.about, &retrieved.about);
    if about.trim().is_empty() {
        about = retrieved.about.clone();
    }
    IrtMetadata {
        name,
        about,
        title: text_field(&query.title, &retrieved.title),
        labels: list_field(&query.labels, &retrieved.labels),
        assignees: list_field(&query.assignees, &retrieved.assignees),
        extra: retrieved.extra.clone(),
    }
}

/// Style for a section of kind `kind` in the output body.
fn style_for(kind: HeadlineKind, retrieved: &IrtBody) -> HeadlineStyle {
    match kind {
        HeadlineKind::Bold => HeadlineStyle::Bold,
        HeadlineKind::Heading | HeadlineKind::Plain => {
            HeadlineStyle::Heading(retrieved.dominant_heading_level().unwrap_or(2))
        }
    }
}

fn build_body(query: &Instruction, retrieved: &IrtBody) -> IrtBody {
    let wanted_kind = query.headlines_type.concrete().map(|t| HeadlineKind::from_label(t));
    // The retrieved styles are kept when the requested kind is the one the
    // retrieved body already uses.
    let keep_styles = match wanted_kind {
        None => true,
        Some(kind) => Some(kind) == retrieved.dominant_kind() && kind != HeadlineKind::Plain,
    };
    let restyle = |s: &Section| -> HeadlineStyle {
        match wanted_kind {
            Some(kind) if !keep_styles => style_for(kind, retrieved),
            _ => s.style,
        }
    };
    let fallback_style = match wanted_kind {
        Some(kind) if !keep_styles => style_for(kind, retrieved),
        _ => retrieved.dominant_style().unwrap_or(HeadlineStyle::Heading(2)),
    };

    let mut body = IrtBody { preamble: retrieved.preamble.clone(), sections: Vec::new() };
    match &query.headlines {
        FieldValue::Concrete(headlines) => {
            let mut used = alloc::vec![false; retrieved.sections.len()];
            for h in headlines {
                let found = (0..retrieved.sections.len()).find(|&i| !used[i] && retrieved.sections[i].headline == *h);
                let section = match found {
                    Some(i) => {
                        used[i] = true;
                        let s = &retrieved.sections[i];
                        Section::new(h.clone(), restyle(s), s.content.clone())
                    }
                    None => Section::new(h.clone(), fallback_style, PLACEHOLDER_CONTENT),
                };
                body.sections.push(section);
            }
        }
        FieldValue::Masked => {
            body.sections = retrieved
                .sections
                .iter()
                .map(|s| Section::new(s.headline.clone(), restyle(s), s.content.clone()))
                .collect();
        }
        FieldValue::Empty => {}
    }
    if body.is_empty() {
        body.preamble = PLACEHOLDER_CONTENT.to_string();
    }
    body
}

fn truncate(body: &mut IrtBody, max_length: usize) {
    while body.sections.len() > 1 && tokenize(&render_body(body)).len() > max_length {
        body.sections.pop();
    }
}

/// Assembles an IRT for `query` from the closest indexed template.
///
/// Concrete fields are copied from the query, `<|EMPTY|>` fields are left
/// empty and `<|MASK|>` fields come from the retrieved template. A name or
/// about that would end up empty is taken from the retrieved template so
/// the output stays valid. `top_k` bounds the candidate pool, trailing
/// sections are dropped while the body exceeds `max_length` tokens, and
/// `min_length` and `top_p` have no effect.
pub fn retrieve_generate(index: &RetrievalIndex, query: &Instruction, config: &DecodingConfig) -> String {
    let retrieved = &index.entries[index.retrieve(query, config.top_k)].irt;
    let mut body = build_body(query, &retrieved.body);
    truncate(&mut body, config.max_length);
    render_irt(&IssueReportTemplate { metadata: build_metadata(query, &retrieved.metadata), body })
}

impl GeneratorBackend for RetrievalIndex {
    fn generate(&self, instruction: &Instruction, config: &DecodingConfig) -> Result<String, GenerateError> {
        config.validate()?;
        Ok(retrieve_generate(self, instruction, config))
    }
}
