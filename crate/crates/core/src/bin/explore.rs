// Temporary scratch binary for parameter exploration. Not part of the build.
use qmix_core::*;
use std::time::Instant;

fn fig1_params() -> SystemParams {
    SystemParams::symmetric(1.0, 1.0, 1e-3, 1e-3, 1.0)
}

fn fig1_drive(ratio: f64, phi: f64) -> BiHarmonicDrive {
    let w1 = 2.0 * 2.0f64.sqrt();
    BiHarmonicDrive { a1: 10.0, a2: 10.0, omega1: w1, omega2: ratio * w1, phi }
}

fn desk_sim() -> SimulationConfig {
    SimulationConfig::new(
        IntegratorKind::Heun,
        1e-4,
        2e3,
        2e4,
        1_000_000,
        BlochTensor::thermal_product(1.0, 1.0),
    )
    .unwrap()
}

fn main() {
    let mode = std::env::args().nth(1).unwrap_or_else(|| "bench".into());
    match mode.as_str() {
        "bench" => bench(),
        "phase" => phase_scan(),
        "ratio" => ratio_scan(),
        "fact" => factorization(),
        "noise" => noise_floor(),
        "burn" => burn_scan(),
        other => eprintln!("unknown mode {other}"),
    }
}

fn bench() {
    let start = Instant::now();
    let summary = run(&desk_sim(), &fig1_params(), &fig1_drive(2.0, 0.0), &mut []).unwrap();
    println!(
        "desk point: {:.1} s, steps {}, x1 {:+.6e}, z1 {:+.6e}, viol {:.3e}",
        start.elapsed().as_secs_f64(),
        summary.steps,
        summary.means.ox,
        summary.means.oz,
        summary.max_physicality_violation
    );
}

fn phase_scan() {
    use rayon::prelude::*;
    // ratios 2, 3, 4 at 8 phases: test the phi -> phi + pi structure
    for ratio in [2.0, 3.0, 4.0] {
        let phis: Vec<f64> = (0..8).map(|k| k as f64 * std::f64::consts::TAU / 8.0).collect();
        let start = Instant::now();
        let rows: Vec<String> = phis
            .par_iter()
            .map(|&phi| {
                let s = run(&desk_sim(), &fig1_params(), &fig1_drive(ratio, phi), &mut []).unwrap();
                format!(
                    "  phi {:+.4}  ox {:+.4e}  oz {:+.4e}  xo {:+.4e}  zo {:+.4e}",
                    phi, s.means.ox, s.means.oz, s.means.xo, s.means.zo
                )
            })
            .collect();
        println!("ratio {ratio} ({:.0} s):", start.elapsed().as_secs_f64());
        for row in rows {
            println!("{row}");
        }
    }
}

fn ratio_scan() {
    use rayon::prelude::*;
    let grid = [0.4, 0.6, 0.8, 0.9, 1.0, 1.3, 1.7, 2.0, 2.6, 3.0, 3.4, 4.0, 4.6, 5.0];
    let start = Instant::now();
    let rows: Vec<String> = grid
        .par_iter()
        .map(|&r| {
            let s = run(&desk_sim(), &fig1_params(), &fig1_drive(r, 0.0), &mut []).unwrap();
            format!(
                "  r {:>4.2}  ox {:+.4e}  oz {:+.4e}  xo {:+.4e}  zo {:+.4e}",
                r, s.means.ox, s.means.oz, s.means.xo, s.means.zo
            )
        })
        .collect();
    println!("ratio scan ({:.0} s):", start.elapsed().as_secs_f64());
    for row in rows {
        println!("{row}");
    }
}

fn factorization() {
    // g = 0 factorization defect for two parameter scales
    for (label, delta, amp, z_t) in [
        ("fig1-like z_t=0", 1.0, 10.0, 0.0),
        ("gentle z_t=0", 0.1, 0.1, 0.0),
        ("gentle z_t=1", 0.1, 0.1, 1.0),
        ("moderate z_t=0", 0.5, 1.0, 0.0),
    ] {
        let params = SystemParams::symmetric(delta, 0.0, 1e-3, 1e-3, z_t);
        let drive = BiHarmonicDrive {
            a1: amp,
            a2: amp,
            omega1: 2.0 * (1.0f64 + delta * delta).sqrt(),
            omega2: 2.7 * (1.0f64 + delta * delta).sqrt(),
            phi: 0.3,
        };
        let q1 = BlochVector::new(0.3, -0.2, 0.5);
        let q2 = BlochVector::new(-0.4, 0.1, 0.7);
        let init = tensor_from_product(q1, q2);
        let dt = 1e-4;
        let mut state = init;
        let mut max_defect = 0.0f64;
        let steps = 1_000_000; // t = 100
        let start = Instant::now();
        for k in 0..steps {
            let t = k as f64 * dt;
            state = heun_step(t, &state, dt, &params, &drive).unwrap();
            if k % 100 == 0 {
                max_defect = max_defect.max(defect(&state));
            }
        }
        max_defect = max_defect.max(defect(&state));
        println!(
            "{label}: max defect {:.3e} ({:.0} s)",
            max_defect,
            start.elapsed().as_secs_f64()
        );
    }
}

fn burn_scan() {
    use rayon::prelude::*;
    for burn in [2e3, 2e4] {
        let sim = SimulationConfig::new(
            IntegratorKind::Heun,
            1e-4,
            burn,
            2e4,
            1_000_000,
            BlochTensor::thermal_product(1.0, 1.0),
        )
        .unwrap();
        println!("burn {burn}:");
        let ratios = [0.6, 1.3, 2.0, 3.0, 4.0];
        let rows: Vec<String> = ratios
            .par_iter()
            .map(|&r| {
                let summary = run(&sim, &fig1_params(), &fig1_drive(r, 0.0), &mut []).unwrap();
                format!(
                    "  r {:<4} ox {:+.4e}  oz {:+.4e}  xo {:+.4e}  zo {:+.4e}",
                    r, summary.means.ox, summary.means.oz, summary.means.xo, summary.means.zo
                )
            })
            .collect();
        for row in rows {
            println!("{row}");
        }
    }
}

fn defect(s: &BlochTensor) -> f64 {
    let q1 = [s.xo, s.yo, s.zo];
    let q2 = [s.ox, s.oy, s.oz];
    let t = [
        [s.xx, s.xy, s.xz],
        [s.yx, s.yy, s.yz],
        [s.zx, s.zy, s.zz],
    ];
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            worst = worst.max((t[a][b] - q1[a] * q2[b]).abs());
        }
    }
    worst
}

fn noise_floor() {
    // criterion: thermal vs zero init at ratio 2, noise floor from 2x window
    let sim = desk_sim();
    let params = fig1_params();
    let drive = fig1_drive(2.0, 0.0);
    let start = Instant::now();
    let a = run(&sim, &params, &drive, &mut []).unwrap();
    let b = run(&sim.with_initial_state(BlochTensor::ZERO), &params, &drive, &mut []).unwrap();
    let c = run(&sim.with_avg_scaled(2), &params, &drive, &mut []).unwrap();
    println!("three runs in {:.0} s", start.elapsed().as_secs_f64());
    println!(
        "x1: thermal {:+.8e}  zero {:+.8e}  double {:+.8e}",
        a.means.ox, b.means.ox, c.means.ox
    );
    println!(
        "z1: thermal {:+.8e}  zero {:+.8e}  double {:+.8e}",
        a.means.oz, b.means.oz, c.means.oz
    );
    println!(
        "x1: |A-B| {:.3e}  floor |A-C| {:.3e}",
        (a.means.ox - b.means.ox).abs(),
        (a.means.ox - c.means.ox).abs()
    );
    println!(
        "z1: |A-B| {:.3e}  floor |A-C| {:.3e}",
        (a.means.oz - b.means.oz).abs(),
        (a.means.oz - c.means.oz).abs()
    );
}
