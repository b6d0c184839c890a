mod support;

use axum::routing::post;
use axum::{Json, Router};
use girt_forge::remote::{RemoteBackend, RemoteSummarizer};
use girt_forge_core::generate::{DecodingConfig, GenerateError, GeneratorBackend};
use girt_forge_core::instruct::{parse_instruction, Summarizer, SummarizeError, SUMMARY_PROMPT};
use serde_json::{json, Value};
use support::{free_port, spawn_router};

const IRT: &str = "---\nname: Bug report\nabout: Report a bug\ntitle: ''\nlabels: bug\nassignees: ''\n---\n\n## Steps\n1. run\n";

fn instruction() -> girt_forge_core::instruct::Instruction {
    parse_instruction("name: Bug report\nabout: <|MASK|>\ntitle: <|MASK|>\nlabels: bug\nassignees: <|EMPTY|>\nheadlines_type: # Heading\nheadlines: ['Steps']").unwrap()
}

#[test]
fn remote_backend_contract() {
    let echo = Router::new().route(
        "/gen",
        post(|Json(body): Json<Value>| async move {
            assert!(body["instruction"].as_str().unwrap().starts_with("name: Bug report\n"));
            assert_eq!(body["config"]["top_k"], 50);
            Json(json!({"output": IRT}))
        }),
    );
    let addr = spawn_router(echo);
    let backend = RemoteBackend::new(format!("http://{addr}/gen"));
    assert_eq!(backend.generate(&instruction(), &DecodingConfig::default()).unwrap(), IRT);
}

#[test]
fn remote_backend_rejects_non_irt() {
    let bad = Router::new().route("/gen", post(|| async { Json(json!({"output": "I cannot help with that."})) }));
    let addr = spawn_router(bad);
    let backend = RemoteBackend::new(format!("http://{addr}/gen"));
    assert!(matches!(
        backend.generate(&instruction(), &DecodingConfig::default()),
        Err(GenerateError::InvalidBackendOutput(_))
    ));
}

#[test]
fn remote_backend_down() {
    let backend = RemoteBackend::new(format!("http://127.0.0.1:{}/gen", free_port()));
    assert!(matches!(
        backend.generate(&instruction(), &DecodingConfig::default()),
        Err(GenerateError::BackendUnavailable(_))
    ));
}

#[test]
fn remote_summarizer_sends_prompt() {
    let chat = Router::new().route(
        "/v1/chat/completions",
        post(|Json(body): Json<Value>| async move {
            assert_eq!(body["messages"][0]["content"], SUMMARY_PROMPT);
            let user = body["messages"][1]["content"].as_str().unwrap().to_string();
            Json(json!({"choices": [{"message": {"role": "assistant", "content": format!(" {} chars ", user.len())}}]}))
        }),
    );
    let addr = spawn_router(chat);
    let s = RemoteSummarizer::new(format!("http://{addr}/v1/chat/completions"), "m");
    assert_eq!(s.summarize(IRT).unwrap(), format!("{} chars", IRT.len()));
    let down = RemoteSummarizer::new(format!("http://127.0.0.1:{}/x", free_port()), "m");
    assert!(matches!(down.summarize(IRT), Err(SummarizeError::BackendUnavailable(_))));
}
