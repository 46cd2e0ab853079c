//! CSV and manifest emission.
//!
//! CSV payload is deterministic for a given resolved configuration: floats
//! are printed with the shortest representation that parses back to the
//! identical bits, and rows follow grid order. The one exception is the
//! wall_seconds timing column of sweep output, which is measurement, not
//! result. Manifests carry the full resolved configuration; the standalone
//! manifest file adds a timestamp on top of the deterministic body.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use qmix_core::sweep::{SweepPointError, SweepRecord};
use qmix_core::{occupation_probability, BlochTensor, Level};

use crate::settings::Resolved;

pub const TRAJECTORY_HEADER: &str = "t,pi_0x,pi_0y,pi_0z,pi_x0,pi_z0,pi_zz,p_upper_1";
pub const SWEEP_HEADER: &str =
    "scan_value,omega2,mean_x1,mean_z1,p_upper,max_violation,steps,wall_seconds,status";

/// Shortest round-trip decimal form.
pub fn fmt(v: f64) -> String {
    format!("{v}")
}

pub fn trajectory_row(t: f64, s: &BlochTensor) -> String {
    let p_upper = occupation_probability(s.oz, Level::Upper);
    format!(
        "{},{},{},{},{},{},{},{}",
        fmt(t),
        fmt(s.ox),
        fmt(s.oy),
        fmt(s.oz),
        fmt(s.xo),
        fmt(s.zo),
        fmt(s.zz),
        fmt(p_upper)
    )
}

pub fn sweep_row(point: &Result<SweepRecord, SweepPointError>) -> String {
    match point {
        Ok(r) => format!(
            "{},{},{},{},{},{},{},{},ok",
            fmt(r.scan_value),
            fmt(r.omega2_effective),
            fmt(r.mean_x1),
            fmt(r.mean_z1),
            fmt(r.p_upper),
            fmt(r.max_physicality_violation),
            r.steps,
            fmt(r.wall_seconds)
        ),
        Err(e) => format!(
            "{},{},,,,,,,{}",
            fmt(e.scan_value),
            fmt(e.omega2_effective),
            match &e.source {
                qmix_core::IntegrateError::NonFiniteState { step, .. } =>
                    format!("nonfinite_at_step_{step}"),
                other => format!("error_{other:?}"),
            }
        ),
    }
}

/// `#`-prefixed copy of the deterministic manifest body, placed at the top
/// of every CSV stream.
pub fn csv_preamble(resolved: &Resolved, command: &str) -> String {
    resolved
        .manifest_body(command)
        .lines()
        .map(|l| format!("# {l}\n"))
        .collect()
}

/// Standalone manifest: timestamp plus the deterministic body.
pub fn write_manifest(path: &Path, resolved: &Resolved, command: &str) -> std::io::Result<()> {
    let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "timestamp_unix={ts}")?;
    f.write_all(resolved.manifest_body(command).as_bytes())?;
    Ok(())
}

/// Sibling path for the manifest of an output file.
pub fn manifest_path(output: &Path) -> std::path::PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest");
    output.with_file_name(name)
}
