//! Core algorithms for working with GitHub-style issue report templates.
//!
//! Everything here is pure and allocation-only (`no_std` + `alloc`):
//!
//! - [`irt`]: parse, render and validate Markdown templates.
//! - [`pipeline`]: corpus preprocessing stages (null filter, anonymization,
//!   normalization, deduplication, script filter).
//! - [`instruct`]: instruction building, masking, variant expansion and
//!   dataset splitting.
//! - [`metrics`]: ROUGE-1, ROUGE-L, BLEU and METEOR.
//! - [`analysis`]: TF-IDF, k-means and stratified sampling.
//! - [`generate`]: generator backends, the retrieval generator and the
//!   evaluation harness.
//!
//! File formats, HTTP clients, the CLI and the service live in the
//! `girt-forge` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod generate;
pub mod instruct;
pub mod irt;
pub mod metrics;
pub mod pipeline;

mod seed;

pub use irt::{parse_irt, render_irt, validate_irt, IssueReportTemplate};
