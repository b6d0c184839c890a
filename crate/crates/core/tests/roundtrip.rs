mod common;

use girt_forge_core::instruct::{parse_instruction, serialize_instruction, FieldValue, Instruction};
use girt_forge_core::irt::{parse_irt, render_irt, HeadlineStyle, IrtBody, IrtMetadata, IssueReportTemplate, Section};
use proptest::prelude::*;

#[test]
fn fixture_corpus_round_trips() {
    let texts = common::fixture_texts();
    assert!(texts.len() >= 50);
    let mut parsed = 0;
    for (name, raw) in &texts {
        let Ok(first) = parse_irt(raw) else { continue };
        parsed += 1;
        let rendered = render_irt(&first);
        let second = parse_irt(&rendered).unwrap_or_else(|e| panic!("{name}: {e}\n{rendered}"));
        assert_eq!(first, second, "{name}");
        assert_eq!(render_irt(&second), rendered, "{name}");
    }
    assert!(parsed >= 50, "only {parsed} fixtures parsed");
}

#[test]
fn bug_report_template_structure() {
    let irt = parse_irt(&common::bug_report_text()).unwrap();
    assert_eq!(irt.metadata.name, "Bug report");
    assert_eq!(irt.metadata.about, "Create a report to help us improve");
    assert_eq!(irt.metadata.title, "[Bug]");
    assert_eq!(irt.metadata.labels, ["bug"]);
    assert!(irt.metadata.assignees.is_empty());
    let headlines: Vec<&str> = irt.body.headlines().collect();
    assert_eq!(
        headlines,
        ["Describe the bug", "To Reproduce", "Expected behavior", "Screenshots (if appropriate)", "Environment", "Additional context"]
    );
    assert!(irt.body.sections.iter().all(|s| s.style == HeadlineStyle::Heading(2)));
    assert!(irt.is_valid());
}

#[test]
fn bug_instruction_parses() {
    let ins = parse_instruction(common::BUG_REPORT_INSTRUCTION).unwrap();
    assert_eq!(ins.name, FieldValue::Concrete("Bug report".into()));
    assert!(ins.about.is_masked() && ins.title.is_masked() && ins.labels.is_masked());
    assert_eq!(ins.assignees, FieldValue::Empty);
    assert_eq!(ins.headlines_type, FieldValue::Concrete("# Heading".into()));
    assert_eq!(
        ins.headlines,
        FieldValue::Concrete(
            ["Describe the bug", "To Reproduce", "Expected behavior", "Screenshots (if appropriate)", "Environment", "Additional context"]
                .map(String::from)
                .to_vec()
        )
    );
    let summary = ins.summary.as_deref().unwrap();
    assert!(summary.starts_with("This issue template is designed to\nhelp users"));
    assert!(summary.ends_with("such as  Ubuntu."));
    assert_eq!(parse_instruction(&serialize_instruction(&ins)).unwrap(), ins);
}

fn word() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9]{0,7}"
}

fn phrase() -> impl Strategy<Value = String> {
    prop::collection::vec(word(), 1..4).prop_map(|w| w.join(" "))
}

fn scalar() -> impl Strategy<Value = String> {
    prop_oneof![phrase(), phrase().prop_map(|p| format!("[{p}]")), phrase().prop_map(|p| format!("{p}: it's"))]
}

fn style() -> impl Strategy<Value = HeadlineStyle> {
    prop_oneof![(1u8..=6).prop_map(HeadlineStyle::Heading), Just(HeadlineStyle::Bold)]
}

fn content() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            phrase(),
            phrase().prop_map(|p| format!("- {p}")),
            phrase().prop_map(|p| format!("```\n# {p}\n```")),
            phrase().prop_map(|p| format!("<!-- ## {p} -->")),
        ],
        0..3,
    )
    .prop_map(|lines| lines.join("\n"))
}

prop_compose! {
    fn template()(
        name in phrase(),
        about in scalar(),
        title in prop_oneof![Just(String::new()), scalar()],
        labels in prop::collection::vec(word(), 0..3),
        assignees in prop::collection::vec(word(), 0..3),
        preamble in prop_oneof![Just(String::new()), phrase()],
        sections in prop::collection::vec((phrase(), style(), content()), 0..5),
    ) -> IssueReportTemplate {
        IssueReportTemplate {
            metadata: IrtMetadata { name, about, title, labels, assignees, extra: Vec::new() },
            body: IrtBody {
                preamble,
                sections: sections.into_iter().map(|(h, s, c)| Section::new(h, s, c)).collect(),
            },
        }
    }
}

fn text_field() -> impl Strategy<Value = FieldValue<String>> {
    prop_oneof![Just(FieldValue::Empty), Just(FieldValue::Masked), scalar().prop_map(FieldValue::Concrete)]
}

fn list_field(item: BoxedStrategy<String>) -> impl Strategy<Value = FieldValue<Vec<String>>> {
    prop_oneof![
        Just(FieldValue::Empty),
        Just(FieldValue::Masked),
        prop::collection::vec(item, 1..4).prop_map(FieldValue::Concrete)
    ]
}

prop_compose! {
    fn instruction()(
        name in text_field(),
        about in text_field(),
        title in text_field(),
        labels in list_field(word().boxed()),
        assignees in list_field(word().boxed()),
        headlines_type in prop_oneof![Just(FieldValue::Masked), Just(FieldValue::Concrete("**Bold**".to_string()))],
        headlines in list_field(prop_oneof![phrase(), phrase().prop_map(|p| format!("{p}'s \"x\""))].boxed()),
        summary in prop::option::of(prop::collection::vec(phrase(), 1..3).prop_map(|l| l.join("\nname: "))),
    ) -> Instruction {
        Instruction { name, about, title, labels, assignees, headlines_type, headlines, summary }
    }
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(irt in template()) {
        let text = render_irt(&irt);
        let parsed = parse_irt(&text).unwrap();
        prop_assert_eq!(&parsed, &irt);
        prop_assert_eq!(render_irt(&parsed), text);
    }

    #[test]
    fn instruction_serialization_round_trips(ins in instruction()) {
        let text = serialize_instruction(&ins);
        prop_assert_eq!(parse_instruction(&text).unwrap(), ins);
    }
}
