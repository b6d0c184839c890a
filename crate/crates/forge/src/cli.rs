//! `girt-forge` subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use girt_forge_core::analysis::stratified_sample;
use girt_forge_core::generate::{
    check_output, evaluate, render_table, DecodingConfig, EmptyBackend, GeneratorBackend, OracleBackend,
    RetrievalIndex,
};
use girt_forge_core::instruct::{parse_instruction, InstructPair, Split, SplitRatios, StubSummarizer, Summarizer};
use girt_forge_core::irt::{parse_irt, IssueReportTemplate};
use girt_forge_core::pipeline::{self, LatinThreshold, PipelineConfig};
use serde_json::json;

use crate::config::{BackendConfig, Settings, CONFIG_ENV};
use crate::corpus::{self, CorpusRow};
use crate::dataset::{build_pairs, manifest_path, read_pairs, write_pairs};
use crate::remote::{RemoteBackend, RemoteSummarizer};
use crate::service::{self, AppState, SharedBackend};

/// Exit codes: 0 success, 1 usage error, 2 data error.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0:#}")]
    Data(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "girt-forge", version, about = "Issue report template toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a corpus and report per-record parse results as JSONL.
    Ingest {
        /// Corpus JSONL, Markdown directory, or `-` for stdin.
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the five preprocessing stages.
    Preprocess {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        latin_threshold: f64,
        /// Write stage statistics here instead of stderr.
        #[arg(long)]
        stats_out: Option<PathBuf>,
    },
    /// Expand templates into instruction pairs and split them.
    BuildInstruct {
        /// Preprocessed JSONL or a Markdown directory.
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SummarizerKind::Stub)]
        summarizer: SummarizerKind,
        /// Chat-completions URL for `--summarizer remote`.
        #[arg(long)]
        summarizer_endpoint: Option<String>,
        #[arg(long, default_value = "HuggingFaceH4/zephyr-7b-beta")]
        summarizer_model: String,
        #[arg(long, default_value = "0.8,0.1,0.1")]
        split: SplitRatios,
    },
    /// Stratified sample of instruction pairs.
    Sample {
        pairs: PathBuf,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "test")]
        split: SplitFilter,
    },
    /// Generate one IRT from an instruction file.
    Generate {
        /// Serialized instruction, or `-` for stdin.
        #[arg(long)]
        instruction_file: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
        #[command(flatten)]
        decoding: DecodingArgs,
    },
    /// Score a backend on instruction pairs.
    Evaluate {
        pairs: PathBuf,
        #[arg(long, default_value = "test")]
        split: SplitFilter,
        #[command(flatten)]
        backend: BackendArgs,
        #[command(flatten)]
        decoding: DecodingArgs,
        /// Also write the report as JSON.
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Run the HTTP service. `GIRT_FORGE_CONFIG` overrides these flags.
    Serve {
        #[arg(long)]
        bind: Option<String>,
        /// Corpus for the retrieval backend.
        #[arg(long)]
        index: Option<PathBuf>,
        /// Remote generator URL.
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long = "cors-origin")]
        cors_origins: Vec<String>,
        #[command(flatten)]
        decoding: DecodingArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SummarizerKind {
    Stub,
    Remote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Retrieval,
    Remote,
    Oracle,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitFilter {
    All,
    Only(Split),
}

impl std::str::FromStr for SplitFilter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            Ok(SplitFilter::All)
        } else {
            s.parse().map(SplitFilter::Only)
        }
    }
}

impl SplitFilter {
    fn keep(self, pair: &InstructPair) -> bool {
        match self {
            SplitFilter::All => true,
            SplitFilter::Only(s) => pair.split == s,
        }
    }
}

#[derive(Debug, Args)]
pub struct BackendArgs {
    #[arg(long, value_enum, default_value_t = BackendKind::Retrieval)]
    backend: BackendKind,
    /// Corpus for the retrieval backend.
    #[arg(long)]
    index: Option<PathBuf>,
    /// Remote generator URL.
    #[arg(long)]
    endpoint: Option<String>,
}

#[derive(Debug, Args)]
pub struct DecodingArgs {
    #[arg(long)]
    max_length: Option<usize>,
    #[arg(long)]
    min_length: Option<usize>,
    #[arg(long)]
    top_p: Option<f64>,
    #[arg(long)]
    top_k: Option<usize>,
}

impl DecodingArgs {
    fn settings(&self) -> Settings {
        Settings {
            max_length: self.max_length,
            min_length: self.min_length,
            top_p: self.top_p,
            top_k: self.top_k,
            ..Default::default()
        }
    }

    fn config(&self) -> Result<DecodingConfig, CliError> {
        let cfg = self.settings().decoding(DecodingConfig::default());
        cfg.validate().map_err(|e| usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn load_index(path: &Path) -> anyhow::Result<RetrievalIndex> {
    let templates = corpus::load_templates(path)?;
    RetrievalIndex::build(templates.into_iter().map(|(_, t)| t))
        .with_context(|| format!("building index from {}", path.display()))
}

/// Index over the distinct outputs of the training pairs.
fn index_from_pairs(pairs: &[InstructPair]) -> anyhow::Result<RetrievalIndex> {
    let mut seen = std::collections::BTreeSet::new();
    let templates: Vec<IssueReportTemplate> = pairs
        .iter()
        .filter(|p| p.split == Split::Train && seen.insert(p.irt_id.clone()))
        .filter_map(|p| parse_irt(&p.output_text).ok())
        .collect();
    RetrievalIndex::build(templates).context("no valid training templates to index")
}

impl BackendArgs {
    fn build(&self, pairs: Option<&[InstructPair]>) -> Result<Box<dyn GeneratorBackend>, CliError> {
        Ok(match self.backend {
            BackendKind::Retrieval => match (&self.index, pairs) {
                (Some(path), _) => Box::new(load_index(path)?),
                (None, Some(pairs)) => Box::new(index_from_pairs(pairs)?),
                (None, None) => return Err(usage("--backend retrieval needs --index")),
            },
            BackendKind::Remote => {
                let url = self.endpoint.clone().ok_or_else(|| usage("--backend remote needs --endpoint"))?;
                Box::new(RemoteBackend::new(url))
            }
            BackendKind::Oracle => match pairs {
                Some(pairs) => Box::new(OracleBackend::new(pairs)),
                None => return Err(usage("--backend oracle only works with evaluate")),
            },
            BackendKind::Empty => Box::new(EmptyBackend),
        })
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Parses `argv` and runs the command, returning the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("usage: girt-forge <ingest|preprocess|build-instruct|sample|generate|evaluate|serve> [OPTIONS]");
            }
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ingest { input, out } => {
            let records = corpus::ingest(&input).map_err(anyhow::Error::from)?;
            let mut w = output(out.as_deref())?;
            for r in &records {
                let line = json!({
                    "id": r.id,
                    "repo": r.repo_name,
                    "path": r.file_path,
                    "parsed": r.parsed.is_some(),
                    "diagnostic": r.diagnostic,
                    "canonical": r.canonical(),
                });
                writeln!(w, "{line}").map_err(anyhow::Error::from)?;
            }
            w.flush().map_err(anyhow::Error::from)?;
        }
        Command::Preprocess { input, out, latin_threshold, stats_out } => {
            let latin_threshold = LatinThreshold::new(latin_threshold).map_err(|e| usage(e.to_string()))?;
            let records = corpus::ingest(&input).map_err(anyhow::Error::from)?;
            let result = pipeline::run(records, &PipelineConfig { latin_threshold });
            let rows: Vec<CorpusRow> = result.records.iter().map(CorpusRow::from_record).collect();
            corpus::write_rows(output(out.as_deref())?, &rows).map_err(anyhow::Error::from)?;
            let stats = corpus::stats_json(&result.stats);
            match stats_out {
                Some(p) => std::fs::write(&p, stats + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => eprintln!("{stats}"),
            }
        }
        Command::BuildInstruct { input, out, seed, summarizer, summarizer_endpoint, summarizer_model, split } => {
            let summarizer: Box<dyn Summarizer> = match summarizer {
                SummarizerKind::Stub => Box::new(StubSummarizer),
                SummarizerKind::Remote => {
                    let url = summarizer_endpoint
                        .ok_or_else(|| usage("--summarizer remote needs --summarizer-endpoint"))?;
                    Box::new(RemoteSummarizer::new(url, summarizer_model))
                }
            };
            let templates: Vec<(String, IssueReportTemplate)> = corpus::load_templates(&input)
                .map_err(anyhow::Error::from)?
                .into_iter()
                .filter(|(_, t)| t.is_valid())
                .collect();
            if templates.is_empty() {
                return Err(anyhow::anyhow!("{} has no valid templates", input.display()).into());
            }
            let (pairs, manifest) =
                build_pairs(&templates, summarizer.as_ref(), split, seed).map_err(anyhow::Error::from)?;
            write_pairs(output(Some(&out))?, &pairs).map_err(anyhow::Error::from)?;
            let manifest_file = manifest_path(&out);
            let text = serde_json::to_string_pretty(&manifest).map_err(anyhow::Error::from)?;
            std::fs::write(&manifest_file, text + "\n")
                .with_context(|| format!("writing {}", manifest_file.display()))?;
        }
        Command::Sample { pairs, k, seed, split } => {
            if k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            let pairs: Vec<InstructPair> =
                read_pairs(&pairs).map_err(anyhow::Error::from)?.into_iter().filter(|p| split.keep(p)).collect();
            let samples = stratified_sample(&pairs, k, seed).map_err(anyhow::Error::from)?;
            let ids: Vec<&str> = samples.iter().map(|s| s.id.as_str()).collect();
            let value = json!({ "ids": ids, "samples": samples });
            println!("{}", serde_json::to_string_pretty(&value).map_err(anyhow::Error::from)?);
        }
        Command::Generate { instruction_file, backend, decoding } => {
            let config = decoding.config()?;
            let backend = backend.build(None)?;
            let text = read_text(&instruction_file)?;
            let ins = parse_instruction(&text)
                .with_context(|| format!("parsing instruction {}", instruction_file.display()))?;
            let irt = backend.generate(&ins, &config).map_err(anyhow::Error::from)?;
            for code in check_output(&irt).map_err(anyhow::Error::from)?.codes() {
                eprintln!("warning: {code}");
            }
            print!("{irt}");
        }
        Command::Evaluate { pairs, split, backend, decoding, json_out } => {
            let config = decoding.config()?;
            let all = read_pairs(&pairs).map_err(anyhow::Error::from)?;
            let selected: Vec<InstructPair> = all.iter().filter(|p| split.keep(p)).cloned().collect();
            if selected.is_empty() {
                return Err(anyhow::anyhow!("no pairs in the selected split").into());
            }
            let backend = backend.build(Some(&all))?;
            let report = evaluate(backend.as_ref(), &selected, &config);
            print!("{}", render_table(&report));
            if let Some(p) = json_out {
                let text = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?;
                std::fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Command::Serve { bind, index, endpoint, cors_origins, decoding } => {
            let flags = Settings {
                bind_address: bind,
                index_path: index,
                endpoint_url: endpoint,
                cors_allowed_origins: (!cors_origins.is_empty()).then_some(cors_origins),
                ..decoding.settings()
            };
            let settings = match std::env::var_os(CONFIG_ENV) {
                Some(path) => flags.overridden_by(Settings::from_file(Path::new(&path)).map_err(|e| usage(e.to_string()))?),
                None => flags,
            };
            let config = settings.into_service_config().map_err(|e| usage(e.to_string()))?;
            let backend: SharedBackend = match &config.backend {
                BackendConfig::Retrieval { index_path } => Arc::new(load_index(index_path)?),
                BackendConfig::Remote { endpoint_url } => Arc::new(RemoteBackend::new(endpoint_url.clone())),
            };
            // The blocking HTTP client must not be dropped on a runtime thread.
            let keep_alive = backend.clone();
            let state = AppState { backend, default_decoding: config.default_decoding };
            let app = service::router(state, &config.cors_allowed_origins);
            let runtime = tokio::runtime::Runtime::new().map_err(anyhow::Error::from)?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(config.bind_address)
                    .await
                    .with_context(|| format!("binding {}", config.bind_address))?;
                service::serve(listener, app).await.context("serving")
            })?;
            drop(runtime);
            drop(keep_alive);
        }
    }
    Ok(())
}
