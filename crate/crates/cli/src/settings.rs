//! Flat key=value settings, their resolution order, and the run manifest.
//!
//! A run is configured by up to three layers, weakest first: a named preset,
//! a config file, and repeated `--set key=value` flags. Later layers win on
//! conflicting keys; non-conflicting keys combine in any order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use qmix_core::{
    BiHarmonicDrive, BlochTensor, IntegratorKind, SimulationConfig, SweepKind, SweepSpec,
    SystemParams,
};

use crate::presets;

/// Keys understood in config files and `--set` flags.
pub const KNOWN_KEYS: [&str; 21] = [
    "delta", "g", "gamma_phi", "gamma_r", "z_t", "a1", "a2", "omega1", "omega2", "phi",
    "integrator", "dt", "t_burn", "t_avg", "stride", "preset", "initial", "sweep", "grid",
    "center_ratio", "ratio",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// One layer of raw settings (preset, file, or flags).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.map.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    /// Apply `other` on top of `self` (later layer wins).
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.map {
            self.map.insert(k.clone(), v.clone());
        }
    }

    /// Parse the flat `key=value` file format. Blank lines and lines starting
    /// with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut out = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("line {}: expected key=value, got '{line}'", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(err(format!(
                    "line {}: unknown key '{key}' (known keys: {})",
                    lineno + 1,
                    KNOWN_KEYS.join(", ")
                )));
            }
            out.map.insert(key.to_string(), value.to_string());
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parse one `--set key=value` argument.
    pub fn parse_assignment(arg: &str) -> Result<(String, String), ConfigError> {
        let (key, value) = arg
            .split_once('=')
            .ok_or_else(|| err(format!("--set expects key=value, got '{arg}'")))?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(err(format!("unknown key '{key}' in --set")));
        }
        Ok((key.to_string(), value.trim().to_string()))
    }
}

/// Initial state selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Product of the two equilibrium single-qubit states (the default).
    Thermal,
    /// All tensor components zero (maximally mixed).
    Zero,
    /// Qubit 1 polarized along +x, qubit 2 maximally mixed.
    XPolarized1,
}

impl InitialState {
    fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "thermal" => Ok(Self::Thermal),
            "zero" => Ok(Self::Zero),
            "x1" => Ok(Self::XPolarized1),
            other => Err(err(format!("unknown initial state '{other}' (thermal, zero, x1)"))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Self::Thermal => "thermal",
            Self::Zero => "zero",
            Self::XPolarized1 => "x1",
        }
    }

    pub fn tensor(&self, params: &SystemParams) -> BlochTensor {
        match self {
            Self::Thermal => BlochTensor::thermal_product(params.z_t1, params.z_t2),
            Self::Zero => BlochTensor::ZERO,
            Self::XPolarized1 => qmix_core::tensor_from_product(
                qmix_core::BlochVector::new(1.0, 0.0, 0.0),
                qmix_core::BlochVector::new(0.0, 0.0, 0.0),
            ),
        }
    }
}

/// Sweep description carried by a resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub kind: SweepKind,
    pub grid: Vec<f64>,
    pub center_ratio: Option<f64>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub preset: Option<String>,
    pub params: SystemParams,
    pub drive: BiHarmonicDrive,
    pub integrator: IntegratorKind,
    pub dt: f64,
    pub t_burn: f64,
    pub t_avg: f64,
    pub stride: u64,
    pub initial: InitialState,
    pub sweep: Option<SweepSettings>,
    pub full_scale: bool,
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    value.parse::<f64>().map_err(|_| err(format!("key {key}: '{value}' is not a number")))
}

fn parse_u64(key: &str, value: &str) -> Result<u64, ConfigError> {
    value.parse::<u64>().map_err(|_| err(format!("key {key}: '{value}' is not an integer")))
}

/// Parse a grid given either as an explicit comma list `v1,v2,...` or as an
/// inclusive linear range `start:stop:step`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, ConfigError> {
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(err(format!("grid range must be start:stop:step, got '{text}'")));
        }
        let start = parse_f64("grid", parts[0])?;
        let stop = parse_f64("grid", parts[1])?;
        let step = parse_f64("grid", parts[2])?;
        if step <= 0.0 || stop < start {
            return Err(err("grid range requires stop >= start and step > 0"));
        }
        let n = ((stop - start) / step).round() as usize;
        (0..=n).map(|k| start + k as f64 * step).collect()
    } else {
        text.split(',')
            .map(|v| parse_f64("grid", v.trim()))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(err("grid is empty"));
    }
    Ok(values)
}

/// Merge preset, config file, and `--set` layers into a resolved run.
pub fn resolve(
    preset_flag: Option<&str>,
    file: Option<&Settings>,
    sets: &Settings,
    full_scale: bool,
) -> Result<Resolved, ConfigError> {
    // The preset name itself resolves with the same precedence as any key:
    // an explicit flag beats the file, which beats nothing.
    let preset_name = preset_flag
        .map(str::to_string)
        .or_else(|| sets.get("preset").map(str::to_string))
        .or_else(|| file.and_then(|f| f.get("preset")).map(str::to_string));

    let mut merged = Settings::default();
    if let Some(name) = &preset_name {
        let preset = presets::lookup(name)
            .ok_or_else(|| err(format!("unknown preset '{name}' ({})", presets::names().join(", "))))?;
        merged.overlay(&preset.settings);
    }
    if let Some(file) = file {
        merged.overlay(file);
    }
    merged.overlay(sets);

    let get_f64 = |key: &str, default: f64| -> Result<f64, ConfigError> {
        merged.get(key).map(|v| parse_f64(key, v)).unwrap_or(Ok(default))
    };

    let delta = get_f64("delta", 1.0)?;
    let g = get_f64("g", 1.0)?;
    let gamma_phi = get_f64("gamma_phi", 1e-3)?;
    let gamma_r = get_f64("gamma_r", 1e-3)?;
    let z_t = get_f64("z_t", 1.0)?;
    let params = SystemParams::symmetric(delta, g, gamma_phi, gamma_r, z_t);
    params.validate().map_err(|e| err(e.to_string()))?;

    let default_omega1 = 2.0 * (delta * delta + g * g).sqrt();
    let omega1 = get_f64("omega1", default_omega1)?;
    let omega2 = get_f64("omega2", 2.0 * omega1)?;
    let drive = BiHarmonicDrive {
        a1: get_f64("a1", 10.0)?,
        a2: get_f64("a2", 10.0)?,
        omega1,
        omega2,
        phi: get_f64("phi", 0.0)?,
    };
    drive.validate().map_err(|e| err(e.to_string()))?;

    let mut integrator = match merged.get("integrator") {
        None => IntegratorKind::Heun,
        Some(v) => v.parse::<IntegratorKind>().map_err(ConfigError)?,
    };
    let mut dt = get_f64("dt", 1e-4)?;
    let mut t_burn = get_f64("t_burn", 2e3)?;
    let mut t_avg = get_f64("t_avg", 2e4)?;
    if full_scale {
        // Production protocol: first-order stepping at a small step, with the
        // burn-in and averaging window tied to the first drive frequency.
        integrator = IntegratorKind::Euler;
        dt = 1.13e-5;
        t_burn = 5.6e4 / drive.omega1;
        t_avg = 8.4e4 / drive.omega1;
    }
    let stride = merged.get("stride").map(|v| parse_u64("stride", v)).unwrap_or(Ok(10_000))?;
    if stride == 0 {
        return Err(err("stride must be at least 1"));
    }

    let initial = match merged.get("initial") {
        None => InitialState::Thermal,
        Some(v) => InitialState::parse(v)?,
    };

    let sweep = match merged.get("sweep") {
        None => None,
        Some(kind_text) => {
            let kind = match kind_text {
                "ratio" => SweepKind::Ratio,
                "phase" => SweepKind::Phase,
                "detuning" => SweepKind::Detuning,
                other => return Err(err(format!("unknown sweep kind '{other}'"))),
            };
            let grid_text = merged
                .get("grid")
                .ok_or_else(|| err("sweep requires a grid (preset or --grid)"))?;
            let grid = parse_grid(grid_text)?;
            let center_ratio = match merged.get("center_ratio") {
                Some(v) => Some(parse_f64("center_ratio", v)?),
                None => None,
            };
            if kind == SweepKind::Detuning && center_ratio.is_none() {
                return Err(err("detuning sweep requires center_ratio"));
            }
            Some(SweepSettings { kind, grid, center_ratio })
        }
    };

    Ok(Resolved {
        preset: preset_name,
        params,
        drive,
        integrator,
        dt,
        t_burn,
        t_avg,
        stride,
        initial,
        sweep,
        full_scale,
    })
}

impl Resolved {
    pub fn simulation_config(&self) -> Result<SimulationConfig, ConfigError> {
        SimulationConfig::new(
            self.integrator,
            self.dt,
            self.t_burn,
            self.t_avg,
            self.stride,
            self.initial.tensor(&self.params),
        )
        .map_err(|e| err(e.to_string()))
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, ConfigError> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| err("no sweep configured: pick a sweep preset or pass --kind/--grid"))?;
        let sim = self.simulation_config()?;
        let spec = match sweep.kind {
            SweepKind::Ratio => SweepSpec::ratio(self.params, self.drive, sim, sweep.grid.clone()),
            SweepKind::Phase => SweepSpec::phase(self.params, self.drive, sim, sweep.grid.clone()),
            SweepKind::Detuning => SweepSpec::detuning(
                self.params,
                self.drive,
                sim,
                sweep.grid.clone(),
                sweep.center_ratio.unwrap_or(0.0),
            ),
        };
        spec.map_err(|e| err(e.to_string()))
    }

    /// Deterministic manifest body: every value needed to reproduce the run
    /// bit for bit. The caller may prepend volatile metadata (timestamp)
    /// when writing the standalone manifest file.
    pub fn manifest_body(&self, command: &str) -> String {
        let sim = self.simulation_config().expect("manifest of an invalid config");
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("tool", format!("qmix {}", env!("CARGO_PKG_VERSION")));
        kv("command", command.to_string());
        if let Some(p) = &self.preset {
            kv("preset", p.clone());
        }
        kv("full_scale", self.full_scale.to_string());
        kv("integrator", sim.integrator().name().to_string());
        kv("dt", format!("{}", sim.dt()));
        kv("t_burn", format!("{}", sim.t_burn()));
        kv("t_avg", format!("{}", sim.t_avg()));
        kv("steps", format!("{}", sim.total_steps()));
        kv("stride", format!("{}", sim.observer_stride()));
        kv("delta1", format!("{}", self.params.delta1));
        kv("delta2", format!("{}", self.params.delta2));
        kv("g", format!("{}", self.params.g));
        kv("gamma_phi1", format!("{}", self.params.gamma_phi1));
        kv("gamma_phi2", format!("{}", self.params.gamma_phi2));
        kv("gamma_r1", format!("{}", self.params.gamma_r1));
        kv("gamma_r2", format!("{}", self.params.gamma_r2));
        kv("z_t1", format!("{}", self.params.z_t1));
        kv("z_t2", format!("{}", self.params.z_t2));
        kv("a1", format!("{}", self.drive.a1));
        kv("a2", format!("{}", self.drive.a2));
        kv("omega1", format!("{}", self.drive.omega1));
        kv("omega2", format!("{}", self.drive.omega2));
        kv("phi", format!("{}", self.drive.phi));
        kv("initial", self.initial.name().to_string());
        let state = sim.initial_state().to_array();
        kv(
            "initial_state",
            state.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","),
        );
        if let Some(sweep) = &self.sweep {
            kv("sweep", sweep.kind.name().to_string());
            kv(
                "grid",
                sweep.grid.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","),
            );
            if let Some(c) = sweep.center_ratio {
                kv("center_ratio", format!("{c}"));
            }
        }
        out
    }
}
