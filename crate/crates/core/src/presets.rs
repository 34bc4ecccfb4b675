//! Built-in device configurations and reference circuits.
//!
//! The three shipped device documents live in `device_configs/` and are
//! embedded here so the names `td`, `mtj_she`, and `mtj_vcma` resolve without
//! any filesystem lookup. The reference parameter sets are known-good
//! optimizer outputs for each device against the default target; they are
//! used as fixtures in tests and make handy CLI inputs.

use crate::device::{parse_device_config, DeviceSpec};
use crate::dist::{CircuitParams, Distribution4};

pub const TD_CONFIG: &str = include_str!("../device_configs/td.json");
pub const MTJ_SHE_CONFIG: &str = include_str!("../device_configs/mtj_she.json");
pub const MTJ_VCMA_CONFIG: &str = include_str!("../device_configs/mtj_vcma.json");

/// Tunnel diode: 50 fJ per heads, 20 fJ per tails.
pub fn td() -> DeviceSpec {
    parse_device_config(TD_CONFIG).expect("embedded td config is valid")
}

/// Spin-Hall MTJ: 1 fJ floor plus 9·|2p−1|² fJ bias surcharge (placeholder constants).
pub fn mtj_she() -> DeviceSpec {
    parse_device_config(MTJ_SHE_CONFIG).expect("embedded mtj_she config is valid")
}

/// VCMA MTJ: flat 1000 fJ per flip (placeholder constant).
pub fn mtj_vcma() -> DeviceSpec {
    parse_device_config(MTJ_VCMA_CONFIG).expect("embedded mtj_vcma config is valid")
}

/// Look up a built-in device by name.
pub fn builtin_device(name: &str) -> Option<DeviceSpec> {
    match name {
        "td" => Some(td()),
        "mtj_she" => Some(mtj_she()),
        "mtj_vcma" => Some(mtj_vcma()),
        _ => None,
    }
}

pub const BUILTIN_DEVICE_NAMES: [&str; 3] = ["td", "mtj_she", "mtj_vcma"];

/// The default target: a four-sided die rolling 0 with probability 1/2 and
/// 1, 2, 3 with probability 1/6 each. No independent two-coin pair realizes
/// it, which is what makes the hidden-dependence circuit necessary.
pub fn default_target() -> Distribution4 {
    Distribution4::new([0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0])
        .expect("die target is a distribution")
}

/// Reference optimized circuit for the tunnel diode (exact KL ≈ 3.8e-8).
pub fn td_reference_params() -> CircuitParams {
    CircuitParams::new(0.714, 0.891, 0.766, 0.107, 0.419).expect("valid reference set")
}

/// Reference optimized circuit for the spin-Hall MTJ (exact KL ≈ 0.0141).
pub fn mtj_she_reference_params() -> CircuitParams {
    CircuitParams::new(0.306, 0.448, 0.439, 0.746, 0.749).expect("valid reference set")
}

/// Reference optimized circuit for the VCMA MTJ (exact KL ≈ 4.0e-4).
pub fn mtj_vcma_reference_params() -> CircuitParams {
    CircuitParams::new(0.233, 0.237, 0.199, 0.781, 0.805).expect("valid reference set")
}

/// Reference parameters keyed by built-in device name.
pub fn reference_params(device_name: &str) -> Option<CircuitParams> {
    match device_name {
        "td" => Some(td_reference_params()),
        "mtj_she" => Some(mtj_she_reference_params()),
        "mtj_vcma" => Some(mtj_vcma_reference_params()),
        _ => None,
    }
}
