//! End-to-end audits: distortion of the combined embedding, the Hamming cube
//! inside `Sym_{4n²}`, and random-walk drift.

pub mod audit;
pub mod cube;
pub mod drift;

pub use audit::{
    distortion_audit, AuditConfig, AuditMode, AuditOutcome, DistortionReport, PairRecord, Witness, ENVELOPE_WIDTH,
};
pub use cube::{
    bits_to_string, cube_audit, cube_degree, hamming_embed, parse_bits, CubeAuditReport, CubeConfig, CubeExact,
    CubeOutcome, CubePair,
};
pub use drift::{drift_walk, log_log_slope, DriftConfig, DriftPoint, DriftSeries, LocalDistance, Proxy, StepSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
