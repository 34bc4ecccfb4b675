//! `plot` — render a result CSV into a deterministic SVG figure.

use std::fs;
use std::path::PathBuf;

use clap::Args;

use crate::common::{to_pretty_json, write_outputs, CliError, CliResult, OutputFile};
use crate::manifest::RunManifest;
use crate::plot::{parse_csv, render, ParsedCsv};

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Input CSV (a sweep CSV or a sample-histogram CSV)
    #[arg(long)]
    input: PathBuf,
    /// Output directory (plot.svg, manifest.json)
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: &PlotArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Data(format!("cannot read '{}': {e}", args.input.display())))?;
    let parsed = parse_csv(&text)?;
    let kind = match parsed {
        ParsedCsv::Sweep(_) => "sweep",
        ParsedCsv::Histogram(_) => "histogram",
    };
    let svg = render(&parsed);

    let manifest = RunManifest::new(
        "plot",
        None,
        serde_json::json!({
            "input": args.input,
            "kind": kind,
        }),
        vec!["plot.svg"],
    );
    let files = [
        OutputFile { name: "plot.svg", contents: svg },
        OutputFile { name: "manifest.json", contents: to_pretty_json(&manifest) },
    ];
    write_outputs(&args.out, &files)?;

    println!("plot[{kind}]: wrote plot.svg, manifest.json to {}", args.out.display());
    Ok(())
}
