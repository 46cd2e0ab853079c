//! Built-in scenario presets.
//!
//! All figure presets share the reference parameter set (identical qubits,
//! Δ = 1, g = 1, Γ_φ = Γ_r = 1e-3, Z_T = 1, A₁ = A₂ = 10) and differ in the
//! first drive frequency and in what gets scanned. Desk-scale windows keep a
//! preset run in the minutes range; `--full-scale` switches any of them to
//! the production protocol.

use crate::settings::Settings;

pub struct Preset {
    pub name: &'static str,
    pub about: &'static str,
    pub settings: Settings,
}

fn base(omega1: f64) -> Settings {
    let mut s = Settings::default();
    s.set("delta", 1.0)
        .set("g", 1.0)
        .set("gamma_phi", 1e-3)
        .set("gamma_r", 1e-3)
        .set("z_t", 1.0)
        .set("a1", 10.0)
        .set("a2", 10.0)
        .set("omega1", omega1)
        .set("omega2", 2.0 * omega1)
        .set("phi", 0.0)
        .set("integrator", "heun")
        .set("dt", 1e-4)
        .set("t_burn", 2e3)
        .set("t_avg", 2e4)
        .set("stride", 10_000)
        .set("initial", "thermal");
    s
}

fn omega_high() -> f64 {
    // twice the bare two-level splitting of the coupled pair
    2.0 * 2.0f64.sqrt()
}

fn omega_transition() -> f64 {
    // inter-level spacing of the coupled spectrum
    2.0f64.sqrt() - 1.0
}

/// Ratio grid 0.1..5.0 in steps of 0.1 plus a ten-times denser mesh over
/// 0.01..1. Values are built from integer numerators so commensurate points
/// land exactly on their rational values.
fn ratio_grid() -> String {
    let mut values: Vec<String> = (1..=100).map(|n| format!("{}", n as f64 / 100.0)).collect();
    values.extend((11..=50).map(|n| format!("{}", n as f64 / 10.0)));
    values.join(",")
}

fn phase_grid() -> String {
    (0..=32)
        .map(|k| format!("{}", k as f64 * std::f64::consts::TAU / 32.0))
        .collect::<Vec<_>>()
        .join(",")
}

/// Detunings spanning a few inverse window lengths around the resonance,
/// fine enough to resolve the finite width (1/T = 5e-5 at the desk window).
fn detuning_grid() -> String {
    (-12..=12)
        .map(|k| format!("{}", k as f64 * 1.25e-5))
        .collect::<Vec<_>>()
        .join(",")
}

fn ratio_sweep(omega1: f64) -> Settings {
    let mut s = base(omega1);
    s.set("sweep", "ratio").set("grid", ratio_grid());
    s
}

fn phase_sweep(ratio: f64) -> Settings {
    let w1 = omega_high();
    let mut s = base(w1);
    s.set("omega2", ratio * w1)
        .set("sweep", "phase")
        .set("grid", phase_grid());
    s
}

fn detuning_sweep(center: f64) -> Settings {
    let mut s = base(omega_high());
    s.set("sweep", "detuning")
        .set("grid", detuning_grid())
        .set("center_ratio", center);
    s
}

pub fn all() -> Vec<Preset> {
    vec![
        Preset {
            name: "fig1",
            about: "reference drive setup (omega1 = 2 sqrt(2)), no sweep",
            settings: base(omega_high()),
        },
        Preset {
            name: "fig1-ratio",
            about: "frequency-ratio scan 0.1..5 with dense 0.01..1 mesh",
            settings: ratio_sweep(omega_high()),
        },
        Preset {
            name: "fig1c",
            about: "detuning scan around ratio 3",
            settings: detuning_sweep(3.0),
        },
        Preset {
            name: "fig1d",
            about: "detuning scan around ratio 2",
            settings: detuning_sweep(2.0),
        },
        Preset {
            name: "fig2a",
            about: "ratio scan at omega1 = sqrt(2) - 1 (inter-level spacing)",
            settings: ratio_sweep(omega_transition()),
        },
        Preset {
            name: "fig2b",
            about: "ratio scan at omega1 = 2.113 (sqrt(2) - 1), off resonance",
            settings: ratio_sweep(2.113 * omega_transition()),
        },
        Preset {
            name: "fig3a",
            about: "relative-phase scan at ratio 2",
            settings: phase_sweep(2.0),
        },
        Preset {
            name: "fig3b",
            about: "relative-phase scan at ratio 3",
            settings: phase_sweep(3.0),
        },
        Preset {
            name: "fig3c",
            about: "relative-phase scan at ratio 4",
            settings: phase_sweep(4.0),
        },
        Preset {
            name: "precession",
            about: "undamped single-qubit precession, x0 follows cos(t)",
            settings: {
                let mut s = Settings::default();
                s.set("delta", 1.0)
                    .set("g", 0.0)
                    .set("gamma_phi", 0.0)
                    .set("gamma_r", 0.0)
                    .set("z_t", 0.0)
                    .set("a1", 0.0)
                    .set("a2", 0.0)
                    .set("omega1", 1.0)
                    .set("omega2", 1.0)
                    .set("integrator", "heun")
                    .set("dt", 1e-3)
                    .set("t_burn", 0.0)
                    .set("t_avg", 10.0)
                    .set("stride", 10)
                    .set("initial", "x1");
                s
            },
        },
        Preset {
            name: "relaxation",
            about: "undriven decay toward equilibrium from the mixed state",
            settings: {
                let mut s = Settings::default();
                s.set("delta", 1.0)
                    .set("g", 0.0)
                    .set("gamma_phi", 0.1)
                    .set("gamma_r", 0.1)
                    .set("z_t", 1.0)
                    .set("a1", 0.0)
                    .set("a2", 0.0)
                    .set("omega1", 1.0)
                    .set("omega2", 1.0)
                    .set("integrator", "heun")
                    .set("dt", 1e-3)
                    .set("t_burn", 0.0)
                    .set("t_avg", 200.0)
                    .set("stride", 100)
                    .set("initial", "zero");
                s
            },
        },
    ]
}

pub fn lookup(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

pub fn names() -> Vec<&'static str> {
    all().iter().map(|p| p.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::settings::{parse_grid, resolve, Settings as S};

    #[test]
    fn every_preset_resolves() {
        for preset in all() {
            let r = resolve(Some(preset.name), None, &S::default(), false)
                .unwrap_or_else(|e| panic!("preset {} failed: {e}", preset.name));
            r.simulation_config().unwrap();
            if r.sweep.is_some() {
                r.sweep_spec().unwrap();
            }
        }
    }

    #[test]
    fn ratio_grid_is_strictly_increasing_with_exact_rationals() {
        let g = parse_grid(&ratio_grid()).unwrap();
        assert_eq!(g.len(), 140);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g[0], 0.01);
        assert_eq!(g[39], 0.4); // 2/5 lands exactly
        assert_eq!(g[79], 0.8); // 4/5
        assert_eq!(*g.last().unwrap(), 5.0);
    }

    #[test]
    fn figure_presets_pin_the_documented_frequencies() {
        let fig2a = resolve(Some("fig2a"), None, &S::default(), false).unwrap();
        assert!((fig2a.drive.omega1 - (2.0f64.sqrt() - 1.0)).abs() < 1e-15);
        let fig2b = resolve(Some("fig2b"), None, &S::default(), false).unwrap();
        assert!((fig2b.drive.omega1 - 2.113 * (2.0f64.sqrt() - 1.0)).abs() < 1e-15);
        let fig3b = resolve(Some("fig3b"), None, &S::default(), false).unwrap();
        let w1 = 2.0 * 2.0f64.sqrt();
        assert!((fig3b.drive.omega2 - 3.0 * w1).abs() < 1e-12);
        let sweep = fig3b.sweep.unwrap();
        assert_eq!(sweep.grid.len(), 33);
        assert!((sweep.grid.last().unwrap() - std::f64::consts::TAU).abs() < 1e-12);
    }
}
