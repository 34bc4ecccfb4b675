//! Shared CLI plumbing: error-to-exit-code mapping, argument parsing
//! helpers, number formatting for human-facing summaries, and atomic-ish
//! output writing (everything validated and rendered before any file is
//! created).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use coincirc::{parse_device_config, presets, CircuitParams, DeviceSpec, Distribution4};

/// Sum tolerance for user-supplied targets before normalization. Looser than
/// the core constructor's 1e-9 so decimal approximations like
/// `0.5,0.1666667,0.1666667,0.1666667` are accepted and renormalized.
const TARGET_INPUT_SUM_TOLERANCE: f64 = 1e-4;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or argument values; exit code 2.
    Usage(String),
    /// Missing or malformed input files, unwritable outputs; exit code 3.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<coincirc::Error> for CliError {
    fn from(err: coincirc::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parse a comma-separated list of floats.
fn parse_floats(value: &str, expected: usize, what: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = value.split(',').collect();
    if parts.len() != expected {
        return Err(CliError::Usage(format!(
            "{what} needs {expected} comma-separated values, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: '{s}' is not a number")))
        })
        .collect()
}

/// Parse `--target a,b,c,d`. Entries must be non-negative and sum to 1 within
/// 1e-4; accepted vectors are normalized exactly.
pub fn parse_target(value: &str) -> CliResult<Distribution4> {
    let v = parse_floats(value, 4, "--target")?;
    if v.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
        return Err(CliError::Usage(format!("--target entries must be non-negative: {value}")));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > TARGET_INPUT_SUM_TOLERANCE {
        return Err(CliError::Usage(format!(
            "--target entries sum to {sum}; expected 1 within {TARGET_INPUT_SUM_TOLERANCE}"
        )));
    }
    let normalized = [v[0] / sum, v[1] / sum, v[2] / sum, v[3] / sum];
    Distribution4::new(normalized).map_err(|e| CliError::Usage(e.to_string()))
}

/// Parse `--params w,p1,q1,p2,q2`.
pub fn parse_params(value: &str) -> CliResult<CircuitParams> {
    let v = parse_floats(value, 5, "--params")?;
    CircuitParams::new(v[0], v[1], v[2], v[3], v[4])
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Parse a comma-separated list of sample sizes.
pub fn parse_sizes(value: &str) -> CliResult<Vec<u64>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("--sizes: '{s}' is not a count")))
        })
        .collect()
}

/// Parse a comma-separated grid of non-negative weights.
pub fn parse_grid(value: &str, what: &str) -> CliResult<Vec<f64>> {
    let grid: Vec<f64> = value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{what}: '{s}' is not a number")))
        })
        .collect::<CliResult<_>>()?;
    if grid.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
        return Err(CliError::Usage(format!("{what} entries must be non-negative")));
    }
    Ok(grid)
}

/// Resolve `--device`: a built-in name (`td`, `mtj_she`, `mtj_vcma`) or a
/// path to a JSON config document. Strings containing a path separator or a
/// `.json` suffix are treated as paths.
pub fn resolve_device(arg: &str) -> CliResult<DeviceSpec> {
    if let Some(spec) = presets::builtin_device(arg) {
        return Ok(spec);
    }
    let looks_like_path =
        arg.contains('/') || arg.contains('\\') || arg.ends_with(".json");
    if looks_like_path {
        let text = fs::read_to_string(arg)
            .map_err(|e| CliError::Data(format!("cannot read device config '{arg}': {e}")))?;
        parse_device_config(&text).map_err(|e| CliError::Data(e.to_string()))
    } else {
        Err(CliError::Usage(format!(
            "unknown device '{arg}' (built-ins: {}; or pass a path to a JSON config)",
            presets::BUILTIN_DEVICE_NAMES.join(", ")
        )))
    }
}

/// Format with 6 significant digits, positional for moderate magnitudes and
/// scientific otherwise. Used in human-facing summary lines; files always
/// carry full precision.
pub fn sig6(x: f64) -> String {
    format_sig(x, 6)
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

/// A rendered output file waiting to be written.
pub struct OutputFile {
    pub name: &'static str,
    pub contents: String,
}

/// Write all rendered outputs into `dir`, creating it if needed. Nothing is
/// written until every file's contents exist, so failures cannot leave a
/// partially computed result set.
pub fn write_outputs(dir: &Path, files: &[OutputFile]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create output directory '{}': {e}", dir.display())))?;
    let mut written = Vec::with_capacity(files.len());
    for file in files {
        let path = dir.join(file.name);
        fs::write(&path, &file.contents)
            .map_err(|e| CliError::Data(format!("cannot write '{}': {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

pub fn to_pretty_json<T: serde::Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable output types");
    out.push('\n');
    out
}
