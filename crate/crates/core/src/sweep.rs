//! Parameter-scan harnesses: frequency-ratio scans, relative-phase scans,
//! and detuning scans around a commensurate ratio.
//!
//! Each grid point is an independent integration run; points execute on the
//! ambient rayon pool and results come back in grid order no matter how the
//! work was scheduled. A failed point (step-size blow-up) is reported in
//! place and does not stop the scan.

use rayon::prelude::*;
use thiserror::Error;

use crate::integrate::{run, IntegrateError, SimulationConfig};
use crate::model::{occupation_probability, BiHarmonicDrive, Level, SystemParams};

/// What the scan grid varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Grid values are frequency ratios omega2 / omega1.
    Ratio,
    /// Grid values are relative phases, radians.
    Phase,
    /// Grid values are frequency offsets from `center_ratio * omega1`.
    Detuning,
}

impl SweepKind {
    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::Ratio => "ratio",
            SweepKind::Phase => "phase",
            SweepKind::Detuning => "detuning",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid sweep grid: {reason}")]
    InvalidGrid { reason: &'static str },
    #[error("detuning scan requires a positive center ratio")]
    MissingCenterRatio,
}

/// A full scan description: base physics, per-run simulation config, and
/// the ordered grid of scan values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    kind: SweepKind,
    pub base_params: SystemParams,
    pub base_drive: BiHarmonicDrive,
    pub sim: SimulationConfig,
    grid: Vec<f64>,
    center_ratio: Option<f64>,
}

impl SweepSpec {
    pub fn ratio(
        base_params: SystemParams,
        base_drive: BiHarmonicDrive,
        sim: SimulationConfig,
        grid: Vec<f64>,
    ) -> Result<Self, SweepError> {
        check_grid(&grid)?;
        if grid.iter().any(|&r| r <= 0.0) {
            return Err(SweepError::InvalidGrid { reason: "frequency ratios must be positive" });
        }
        Ok(Self { kind: SweepKind::Ratio, base_params, base_drive, sim, grid, center_ratio: None })
    }

    pub fn phase(
        base_params: SystemParams,
        base_drive: BiHarmonicDrive,
        sim: SimulationConfig,
        grid: Vec<f64>,
    ) -> Result<Self, SweepError> {
        check_grid(&grid)?;
        Ok(Self { kind: SweepKind::Phase, base_params, base_drive, sim, grid, center_ratio: None })
    }

    pub fn detuning(
        base_params: SystemParams,
        base_drive: BiHarmonicDrive,
        sim: SimulationConfig,
        grid: Vec<f64>,
        center_ratio: f64,
    ) -> Result<Self, SweepError> {
        check_grid(&grid)?;
        if !center_ratio.is_finite() || center_ratio <= 0.0 {
            return Err(SweepError::MissingCenterRatio);
        }
        let omega_center = center_ratio * base_drive.omega1;
        if grid.iter().any(|&dw| omega_center + dw <= 0.0) {
            return Err(SweepError::InvalidGrid {
                reason: "detuning drives the second frequency non-positive",
            });
        }
        Ok(Self {
            kind: SweepKind::Detuning,
            base_params,
            base_drive,
            sim,
            grid,
            center_ratio: Some(center_ratio),
        })
    }

    pub fn kind(&self) -> SweepKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn center_ratio(&self) -> Option<f64> {
        self.center_ratio
    }

    /// Drive used at one grid point.
    pub fn drive_at(&self, scan_value: f64) -> BiHarmonicDrive {
        let mut drive = self.base_drive;
        match self.kind {
            SweepKind::Ratio => drive.omega2 = scan_value * drive.omega1,
            SweepKind::Phase => drive.phi = scan_value,
            SweepKind::Detuning => {
                drive.omega2 = self.center_ratio.unwrap() * drive.omega1 + scan_value;
            }
        }
        drive
    }
}

fn check_grid(grid: &[f64]) -> Result<(), SweepError> {
    if grid.is_empty() {
        return Err(SweepError::InvalidGrid { reason: "grid is empty" });
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(SweepError::InvalidGrid { reason: "grid values must be finite" });
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SweepError::InvalidGrid { reason: "grid must be strictly increasing" });
    }
    Ok(())
}

/// Long-time averages and diagnostics for one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub scan_value: f64,
    pub omega2_effective: f64,
    /// Time-averaged coherence component ⟨Π_0x⟩.
    pub mean_x1: f64,
    /// Time-averaged occupation component ⟨Π_0z⟩.
    pub mean_z1: f64,
    /// Upper-level probability from `mean_z1`.
    pub p_upper: f64,
    pub max_physicality_violation: f64,
    pub steps: u64,
    pub wall_seconds: f64,
}

/// A grid point whose integration blew up.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("sweep point {scan_value} (omega2 = {omega2_effective}) failed: {source}")]
pub struct SweepPointError {
    pub scan_value: f64,
    pub omega2_effective: f64,
    pub source: IntegrateError,
}

pub type SweepResult = Vec<Result<SweepRecord, SweepPointError>>;

fn run_point(spec: &SweepSpec, scan_value: f64) -> Result<SweepRecord, SweepPointError> {
    let drive = spec.drive_at(scan_value);
    let summary = run(&spec.sim, &spec.base_params, &drive, &mut []).map_err(|source| {
        SweepPointError { scan_value, omega2_effective: drive.omega2, source }
    })?;
    Ok(SweepRecord {
        scan_value,
        omega2_effective: drive.omega2,
        mean_x1: summary.means.ox,
        mean_z1: summary.means.oz,
        p_upper: occupation_probability(summary.means.oz, Level::Upper),
        max_physicality_violation: summary.max_physicality_violation,
        steps: summary.steps,
        wall_seconds: summary.wall_seconds,
    })
}

fn run_scan(spec: &SweepSpec, expected: SweepKind) -> SweepResult {
    assert_eq!(spec.kind, expected, "sweep spec kind does not match the scan entry point");
    spec.grid.par_iter().map(|&v| run_point(spec, v)).collect()
}

/// Frequency-ratio scan: omega2 = r * omega1 for each grid ratio r.
pub fn sweep_ratio(spec: &SweepSpec) -> SweepResult {
    run_scan(spec, SweepKind::Ratio)
}

/// Relative-phase scan at a fixed frequency pair.
pub fn sweep_phase(spec: &SweepSpec) -> SweepResult {
    run_scan(spec, SweepKind::Phase)
}

/// Detuning scan: omega2 = center_ratio * omega1 + dw for each grid dw.
pub fn sweep_detuning(spec: &SweepSpec) -> SweepResult {
    run_scan(spec, SweepKind::Detuning)
}

/// Map independent jobs over a bounded worker pool, preserving input order.
/// Results are identical to sequential execution; per-job failures stay in
/// their slot as values.
pub fn parallel_map<T, R, F>(points: Vec<T>, worker_count: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    assert!(worker_count >= 1, "worker_count must be at least 1");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count)
        .build()
        .expect("failed to build worker pool");
    pool.install(|| points.into_par_iter().map(f).collect())
}
