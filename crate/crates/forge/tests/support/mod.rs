//! Helpers shared by the girt-forge integration tests.
#![allow(dead_code)]

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};
use std::io::{BufRead, BufReader};

pub fn core_fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/irts")
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_girt-forge"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("GIRT_FORGE_CONFIG").output().expect("spawn girt-forge")
}

pub fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs an axum router on an ephemeral port in a background thread.
pub fn spawn_router(app: axum::Router) -> SocketAddr {
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            tx.send(listener.local_addr().unwrap()).unwrap();
            axum::serve(listener, app).await.unwrap();
        });
    });
    rx.recv().unwrap()
}

/// A `serve` child process; killed on drop.
pub struct Server {
    pub child: Child,
    pub base: String,
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

pub fn free_port() -> u16 {
    std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

/// Spawns `girt-forge serve` and waits for its address line.
pub fn spawn_server(extra: &[&str]) -> Server {
    let bind = format!("127.0.0.1:{}", free_port());
    let mut child = bin()
        .args(["serve", "--bind", &bind])
        .args(extra)
        .env_remove("GIRT_FORGE_CONFIG")
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .expect("spawn serve");
    let stdout = child.stdout.take().unwrap();
    let mut line = String::new();
    BufReader::new(stdout).read_line(&mut line).unwrap();
    assert!(line.starts_with("listening on http://"), "unexpected first line: {line:?}");
    Server { child, base: line.trim().trim_start_matches("listening on ").to_string() }
}
