//! File formats, remote backends, the CLI and the HTTP service around
//! [`girt_forge_core`].

pub mod cli;
pub mod config;
pub mod corpus;
pub mod dataset;
pub mod remote;
pub mod service;
