//! Acceptance criteria, run sequentially so the timing criterion is not
//! disturbed by concurrent tests. Prints one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use boolbg::accuracy::{build_table, monte_carlo_validate_with, McOptions};
use boolbg::boolean::{majority3_bit, majority3_byte, mode_n_bits, BitTriple, ModeSpec};
use boolbg::pipeline::{generate_background, generate_background_exhaustive, PipelineConfig};
use boolbg::subtraction::{subtract, SubtractionConfig};
use boolbg::synth::{make_majority_scene, make_ramp_scene, ramp_value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

/// Published accuracy grid: p0 followed by p1..p6, three decimals.
const PUBLISHED_GRID: [[f64; 7]; 11] = [
    [0.50, 0.50, 0.50, 0.50, 0.50, 0.50, 0.50],
    [0.55, 0.575, 0.611, 0.664, 0.737, 0.829, 0.923],
    [0.60, 0.648, 0.716, 0.803, 0.899, 0.972, 0.998],
    [0.65, 0.718, 0.807, 0.902, 0.973, 0.998, 1.000],
    [0.70, 0.784, 0.880, 0.960, 0.995, 1.000, 1.000],
    [0.75, 0.844, 0.934, 0.988, 1.000, 1.000, 1.000],
    [0.80, 0.896, 0.970, 0.997, 1.000, 1.000, 1.000],
    [0.85, 0.939, 0.989, 1.000, 1.000, 1.000, 1.000],
    [0.90, 0.972, 0.998, 1.000, 1.000, 1.000, 1.000],
    [0.95, 0.993, 1.000, 1.000, 1.000, 1.000, 1.000],
    [1.00, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000],
];

const RAMP_SIZES: [usize; 3] = [8, 16, 64];

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

fn c1_truth_table() -> Outcome {
    // Row S of the truth table, columns x1x2x3 = 000..111.
    let s = [0, 0, 0, 1, 0, 1, 1, 1];
    for (t, expected) in BitTriple::all().zip(s) {
        let got = majority3_bit(t.x1, t.x2, t.x3);
        ensure!(
            u8::from(got) == expected,
            "{t:?}: got {got}, expected {expected}"
        );
    }
    Ok(())
}

fn c2_exact_ramp_recovery() -> Outcome {
    for w in RAMP_SIZES {
        for h in RAMP_SIZES {
            let scene = make_ramp_scene(w, h).map_err(|e| e.to_string())?;
            let bg = generate_background_exhaustive(&scene.frames).map_err(|e| e.to_string())?;
            let differing = bg
                .data()
                .iter()
                .zip(scene.background.data())
                .filter(|(a, b)| a != b)
                .count();
            ensure!(differing == 0, "{w}x{h}: {differing} bytes differ");
        }
    }
    Ok(())
}

fn c3_intermediate_product() -> Outcome {
    for w in RAMP_SIZES {
        for h in RAMP_SIZES {
            let scene = make_ramp_scene(w, h).map_err(|e| e.to_string())?;
            let product = scene.intermediates().third_and_xor;
            let [r1, r2, _] = scene.object_rects;
            for row in 0..h {
                for col in 0..w {
                    let px = product.pixel(row, col);
                    if r1.contains(row, col) || r2.contains(row, col) {
                        let ramp = ramp_value(col, w);
                        ensure!(
                            px[0] == ramp && px[1] == ramp,
                            "{w}x{h} ({row},{col}): {px:?} is not the ramp value {ramp}"
                        );
                        ensure!(
                            ramp == 0 || px.iter().any(|&b| b != 0),
                            "{w}x{h} ({row},{col}): zero on object"
                        );
                    } else {
                        ensure!(
                            px == [0, 0, 0],
                            "{w}x{h} ({row},{col}): {px:?} nonzero on background"
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn c4_table_reproduction() -> Outcome {
    let p0: Vec<f64> = PUBLISHED_GRID.iter().map(|r| r[0]).collect();
    let table = build_table(&p0, 6).map_err(|e| e.to_string())?;
    for (i, row) in PUBLISHED_GRID.iter().enumerate() {
        for l in 1..=6u32 {
            let got = table.get(i, l);
            let printed = row[l as usize];
            ensure!(
                (got - printed).abs() <= 0.0005 && round3(got) == printed,
                "p0={} p{l}: computed {got:.6}, printed {printed}",
                row[0]
            );
        }
    }
    Ok(())
}

fn c5_monte_carlo() -> Outcome {
    let options = McOptions {
        width: 64,
        height: 64,
        frame_count: 1000,
    };
    for (p0, level, printed, seed) in [(0.8, 3, 0.997, 1u64), (0.6, 6, 0.998, 2)] {
        let r =
            monte_carlo_validate_with(p0, level, 20, seed, &options).map_err(|e| e.to_string())?;
        ensure!(
            round3(r.predicted) == printed,
            "predicted {} does not round to {printed}",
            r.predicted
        );
        ensure!(
            r.within_tolerance,
            "p0={p0} L={level}: empirical {:.6} vs predicted {:.6}, 4 sigma = {:.6}",
            r.empirical_accuracy,
            r.predicted,
            4.0 * r.sigma
        );
        println!(
            "      p0={p0} L={level}: empirical {:.6}, predicted {:.6}, |diff| {:.6} <= {:.6}",
            r.empirical_accuracy,
            r.predicted,
            (r.empirical_accuracy - r.predicted).abs(),
            4.0 * r.sigma
        );
    }
    Ok(())
}

fn c6_ninety_nine_percent() -> Outcome {
    for run in 0..5u64 {
        let scene = make_majority_scene(64, 64, 256, 0.6, 100 + run).map_err(|e| e.to_string())?;
        let truth = scene.background.clone();
        let report = generate_background(&scene.into_source(), &PipelineConfig::new(6, 200 + run))
            .map_err(|e| e.to_string())?;
        let correct = report
            .background
            .data()
            .iter()
            .zip(truth.data())
            .filter(|(a, b)| a == b)
            .count();
        let accuracy = correct as f64 / truth.data().len() as f64;
        ensure!(accuracy >= 0.99, "run {run}: accuracy {accuracy:.5} < 0.99");
        println!("      run {run}: accuracy {accuracy:.5}");
    }
    Ok(())
}

fn c7_linearity() -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = boolbg::cli::run(
        [
            "boolbg",
            "bench",
            "--sizes",
            "128x128,256x256,512x512",
            "--level",
            "3",
        ],
        &mut out,
        &mut err,
    );
    let out = String::from_utf8_lossy(&out);
    let steps: Vec<&str> = out.lines().filter(|l| l.starts_with("step=")).collect();
    for s in &steps {
        println!("      {s}");
    }
    ensure!(steps.len() == 2, "expected 2 steps, got {}", steps.len());
    for s in &steps {
        let ratio: f64 = s
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix("time_ratio="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("no time_ratio in {s:?}"))?;
        ensure!(
            (2.5..=6.0).contains(&ratio),
            "time ratio {ratio} outside [2.5, 6]"
        );
    }
    ensure!(
        code == 0,
        "bench exited {code}: {}",
        String::from_utf8_lossy(&err)
    );
    Ok(())
}

fn c8_oracle_equivalence() -> Outcome {
    let spec = ModeSpec::new(3).map_err(|e| e.to_string())?;
    let oracle = |a: u8, b: u8, c: u8| -> u8 {
        (0..8).fold(0, |acc, i| {
            let bits = [a >> i & 1 == 1, b >> i & 1 == 1, c >> i & 1 == 1];
            acc | (u8::from(mode_n_bits(&bits, spec).unwrap()) << i)
        })
    };
    // Every byte value in every argument slot, against two fixed partners.
    for v in 0..=255u8 {
        for (a, b, c) in [
            (v, 0x00, 0xFF),
            (0x0F, v, 0xF0),
            (0x55, 0xAA, v),
            (v, v, !v),
        ] {
            ensure!(
                majority3_byte(a, b, c) == oracle(a, b, c),
                "mismatch at ({a:#04x}, {b:#04x}, {c:#04x})"
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10_000 {
        let (a, b, c): (u8, u8, u8) = (rng.random(), rng.random(), rng.random());
        ensure!(
            majority3_byte(a, b, c) == oracle(a, b, c),
            "mismatch at ({a:#04x}, {b:#04x}, {c:#04x})"
        );
    }
    Ok(())
}

fn c9_subtraction_ground_truth() -> Outcome {
    let cfg = |t| SubtractionConfig::new(t).unwrap();
    for w in RAMP_SIZES {
        for h in RAMP_SIZES {
            let scene = make_ramp_scene(w, h).map_err(|e| e.to_string())?;
            let bg = generate_background_exhaustive(&scene.frames).map_err(|e| e.to_string())?;
            for (k, (frame, rect)) in scene.frames.iter().zip(scene.object_rects).enumerate() {
                let mask = subtract(frame, &bg, &cfg(4)).map_err(|e| e.to_string())?;
                for row in 0..h {
                    for col in 0..w {
                        ensure!(
                            mask.is_foreground(row, col) == rect.contains(row, col),
                            "{w}x{h} frame {k} ({row},{col}) disagrees with object rectangle"
                        );
                    }
                }
                let masks: Vec<_> = [0, 4, 64, 255]
                    .into_iter()
                    .map(|t| subtract(frame, &bg, &cfg(t)).unwrap())
                    .collect();
                for pair in masks.windows(2) {
                    ensure!(
                        pair[1].is_subset_of(&pair[0]),
                        "{w}x{h} frame {k}: threshold not monotone"
                    );
                }
            }
        }
    }
    Ok(())
}

fn c10_cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_boolbg");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<(), String> {
        let status = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            status.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&status.stderr)
        );
        Ok(())
    };
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    run(&[
        "synth",
        "--scene",
        "majority",
        "--width",
        "48",
        "--height",
        "32",
        "--frames",
        "40",
        "--p0",
        "0.7",
        "--seed",
        "5",
        "--output",
        &p("scene"),
    ])?;
    let frames = p("scene/frames");
    run(&[
        "generate",
        &frames,
        "--level",
        "4",
        "--seed",
        "17",
        "--output",
        &p("a.pgm"),
    ])?;
    run(&[
        "generate",
        &frames,
        "--level",
        "4",
        "--seed",
        "17",
        "--output",
        &p("b.pgm"),
    ])?;
    let read = |f: &str| std::fs::read(Path::new(&p(f))).map_err(|e| e.to_string());
    let (a, b) = (read("a.pgm")?, read("b.pgm")?);
    ensure!(!a.is_empty() && a == b, "outputs differ between runs");
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        (
            "truth-table exactness",
            c1_truth_table,
            Duration::from_millis(1),
        ),
        (
            "exact ramp recovery",
            c2_exact_ramp_recovery,
            Duration::from_secs(1),
        ),
        (
            "intermediate product",
            c3_intermediate_product,
            Duration::from_secs(1),
        ),
        (
            "accuracy table reproduction",
            c4_table_reproduction,
            Duration::from_millis(1),
        ),
        (
            "Monte Carlo agreement",
            c5_monte_carlo,
            Duration::from_secs(60),
        ),
        (
            "99% at level 6 with p0 = 0.6",
            c6_ninety_nine_percent,
            Duration::from_secs(60),
        ),
        (
            "linear runtime in resolution",
            c7_linearity,
            Duration::from_secs(60),
        ),
        (
            "oracle equivalence",
            c8_oracle_equivalence,
            Duration::from_secs(1),
        ),
        (
            "subtraction ground truth",
            c9_subtraction_ground_truth,
            Duration::from_secs(1),
        ),
        (
            "CLI determinism",
            c10_cli_determinism,
            Duration::from_secs(5),
        ),
    ];
    let mut failures = Vec::new();
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            if elapsed <= budget {
                Ok(())
            } else {
                Err(format!("took {elapsed:?}, budget {budget:?}"))
            }
        });
        match &result {
            Ok(()) => println!("PASS {:>2}. {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                println!("FAIL {:>2}. {name} ({elapsed:.2?}): {msg}", i + 1);
                failures.push(format!("{}. {name}: {msg}", i + 1));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "failed criteria:\n{}",
        failures.join("\n")
    );
}
