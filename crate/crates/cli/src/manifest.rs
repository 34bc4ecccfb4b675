//! Run manifests.
//!
//! Every file-writing subcommand drops a `manifest.json` next to its outputs
//! recording the subcommand, tool version, master seed, the fully resolved
//! configuration, the literal argument vector, and the output file names.
//! Manifests contain no timestamps or absolute paths, so re-running the
//! recorded argv reproduces every output byte for byte.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub tool_version: &'static str,
    /// Master seed of the run; absent for purely derived commands like plot.
    pub master_seed: Option<u64>,
    /// Fully resolved configuration, defaults included.
    pub config: Value,
    /// The invocation as typed, minus the program name.
    pub argv: Vec<String>,
    /// Output file names written alongside this manifest.
    pub outputs: Vec<&'static str>,
}

impl RunManifest {
    pub fn new(
        subcommand: &'static str,
        master_seed: Option<u64>,
        config: Value,
        outputs: Vec<&'static str>,
    ) -> Self {
        Self {
            subcommand,
            tool_version: env!("CARGO_PKG_VERSION"),
            master_seed,
            config,
            argv: std::env::args().skip(1).collect(),
            outputs,
        }
    }
}
