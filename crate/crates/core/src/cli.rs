//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or format error, 3 a
//! validation check that ran but failed. Every report ends with stable
//! `key=value` lines for scripts.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::accuracy::{build_table, default_p0_values, monte_carlo_validate_with, McOptions};
use crate::bench::{parse_size, run_bench, BenchConfig};
use crate::codec::{
    extension_for, load_frame_dir, read_frame, write_frame, write_frame_dir, FrameDirSpec,
};
use crate::error::Error;
use crate::frame::Frame;
use crate::pipeline::{
    generate_background, generate_background_exhaustive, PipelineConfig, DEFAULT_MAX_LEVEL,
};
use crate::subtraction::{mask_stats, subtract, SubtractionConfig, BACKGROUND, FOREGROUND};
use crate::synth::{make_majority_scene, make_ramp_scene};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "boolbg",
    version,
    about = "Background generation by bitwise majority vote"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a background image from a directory of PGM/PPM frames.
    Generate {
        /// Directory of .pgm or .ppm frames, read in filename order.
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: u32,
        #[arg(long, short)]
        output: PathBuf,
        /// Take the mode of exactly three frames without sampling.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Threshold the difference between a frame and a background into a P5 mask.
    Subtract {
        #[arg(long)]
        background: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        threshold: u32,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Write a synthetic scene with known background to a directory.
    Synth {
        #[arg(long, value_enum)]
        scene: SceneKind,
        #[arg(long, default_value_t = 64)]
        width: usize,
        #[arg(long, default_value_t = 64)]
        height: usize,
        /// Frame count (majority scene only).
        #[arg(long, default_value_t = 100)]
        frames: usize,
        /// Modal frequency (majority scene only).
        #[arg(long, default_value_t = 0.8)]
        p0: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Print the analytic accuracy grid.
    Table {
        #[arg(long, default_value_t = 6)]
        levels: u32,
        #[arg(long, value_delimiter = ',')]
        p0: Vec<f64>,
        #[arg(long)]
        csv: bool,
    },
    /// Compare pipeline accuracy on synthetic scenes with the analytic value.
    Validate {
        #[arg(long)]
        p0: f64,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "64x64")]
        size: String,
        #[arg(long, default_value_t = 1000)]
        frames: usize,
    },
    /// Time background generation across frame sizes.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "128x128,256x256,512x512")]
        sizes: Vec<String>,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = 15)]
        repeats: usize,
        #[arg(long, default_value_t = 3)]
        channels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SceneKind {
    Ramp,
    Majority,
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Exit code for a library error.
pub fn exit_code_for(err: &Error) -> i32 {
    match err.root() {
        Error::Config(_) | Error::Domain(_) | Error::AssumptionViolation(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
        Err(Failure::Validation(msg)) => {
            let _ = writeln!(err, "validation failed: {msg}");
            EXIT_VALIDATION
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Generate {
            input,
            level,
            seed,
            max_level,
            output,
            exhaustive,
        } => {
            let source = load_frame_dir(&FrameDirSpec::new(&input))?;
            let (background, level, sampled) = if exhaustive {
                (generate_background_exhaustive(source.frames())?, 1, 3)
            } else {
                let config = PipelineConfig::new(level, seed).with_max_level(max_level);
                let report = generate_background(&source, &config)?;
                (report.background, report.level_used, report.frames_sampled)
            };
            write_frame(&output, &background)?;
            writeln!(out, "source_frames={}", source.len())?;
            writeln!(out, "shape={}", source.shape())?;
            writeln!(
                out,
                "mode={}",
                if exhaustive { "exhaustive" } else { "sampled" }
            )?;
            writeln!(out, "frames_sampled={sampled}")?;
            writeln!(out, "seed={seed}")?;
            writeln!(out, "level={level}")?;
            writeln!(out, "output={}", output.display())?;
        }
        Command::Subtract {
            background,
            input,
            threshold,
            output,
        } => {
            let config = SubtractionConfig::new(threshold)?;
            let bg = read_frame(&background)?;
            let frame = read_frame(&input)?;
            let mask = subtract(&frame, &bg, &config)?;
            write_frame(&output, &mask.to_frame())?;
            let stats = mask_stats(&mask);
            writeln!(out, "threshold={threshold}")?;
            writeln!(out, "foreground_count={}", stats.foreground_count)?;
            writeln!(out, "foreground_fraction={:.6}", stats.foreground_fraction)?;
            writeln!(out, "output={}", output.display())?;
        }
        Command::Synth {
            scene,
            width,
            height,
            frames,
            p0,
            seed,
            output,
        } => {
            let (background, seq, truth) = match scene {
                SceneKind::Ramp => {
                    let s = make_ramp_scene(width, height)?;
                    let truth = s
                        .object_rects
                        .iter()
                        .map(|r| {
                            let data = (0..height)
                                .flat_map(|row| (0..width).map(move |col| (row, col)))
                                .map(|(row, col)| {
                                    if r.contains(row, col) {
                                        FOREGROUND
                                    } else {
                                        BACKGROUND
                                    }
                                })
                                .collect();
                            Frame::from_raw(width, height, 1, data)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    (s.background, s.frames, truth)
                }
                SceneKind::Majority => {
                    let s = make_majority_scene(width, height, frames, p0, seed)?;
                    (s.background, s.frames, Vec::new())
                }
            };
            write_frame_dir(output.join("frames"), "frame", &seq)?;
            if !truth.is_empty() {
                write_frame_dir(output.join("truth"), "mask", &truth)?;
            }
            let bg_path = output.join(format!("background.{}", extension_for(&background)));
            write_frame(&bg_path, &background)?;
            writeln!(out, "frames={}", seq.len())?;
            writeln!(out, "shape={}", background.shape())?;
            writeln!(out, "background={}", bg_path.display())?;
        }
        Command::Table { levels, p0, csv } => {
            let p0 = if p0.is_empty() {
                default_p0_values()
            } else {
                p0
            };
            let table = build_table(&p0, levels)?;
            if csv {
                write!(out, "{}", table.to_csv())?;
            } else {
                write!(out, "{}", table.to_text())?;
            }
        }
        Command::Validate {
            p0,
            level,
            trials,
            seed,
            size,
            frames,
        } => {
            let (width, height) = parse_size(&size)?;
            let options = McOptions {
                width,
                height,
                frame_count: frames,
            };
            let r = monte_carlo_validate_with(p0, level, trials, seed, &options)?;
            let verdict = if r.within_tolerance { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "p0 {:.4} level {} over {} trials of {}x{} ({} frames): empirical {:.6}, predicted {:.6}, 4 sigma {:.6}",
                r.p0_achieved, r.level, r.trials, width, height, frames, r.empirical_accuracy, r.predicted, 4.0 * r.sigma
            )?;
            writeln!(out, "p0={}", r.p0_target)?;
            writeln!(out, "level={}", r.level)?;
            writeln!(out, "trials={}", r.trials)?;
            writeln!(out, "seed={seed}")?;
            writeln!(out, "empirical={:.6}", r.empirical_accuracy)?;
            writeln!(out, "predicted={:.6}", r.predicted)?;
            writeln!(out, "sigma={:.6}", r.sigma)?;
            writeln!(out, "verdict={verdict}")?;
            if !r.within_tolerance {
                return Err(Failure::Validation(format!(
                    "empirical {:.6} differs from predicted {:.6} by more than 4 sigma",
                    r.empirical_accuracy, r.predicted
                )));
            }
        }
        Command::Bench {
            sizes,
            level,
            repeats,
            channels,
            seed,
        } => {
            let sizes = sizes
                .iter()
                .map(|s| parse_size(s))
                .collect::<Result<Vec<_>, _>>()?;
            crate::frame::Channels::try_from(channels)
                .map_err(|_| Error::Config(format!("channels must be 1 or 3, got {channels}")))?;
            let config = BenchConfig {
                sizes,
                level,
                repeats,
                channels,
                seed,
                ..BenchConfig::default()
            };
            let report = run_bench(&config)?;
            writeln!(
                out,
                "{:>11} {:>10} {:>12} {:>10}",
                "size", "pixels", "median_us", "ns/pixel"
            )?;
            for row in &report.rows {
                writeln!(
                    out,
                    "{:>11} {:>10} {:>12.1} {:>10.3}",
                    format!("{}x{}", row.width, row.height),
                    row.pixels,
                    row.median.as_secs_f64() * 1e6,
                    row.nanos_per_pixel()
                )?;
            }
            for (i, s) in report.steps.iter().enumerate() {
                writeln!(
                    out,
                    "step={} pixel_ratio={:.3} time_ratio={:.3} band={:.3}..{:.3} within_band={}",
                    i + 1,
                    s.pixel_ratio,
                    s.time_ratio,
                    s.band.0,
                    s.band.1,
                    s.within_band
                )?;
            }
            writeln!(out, "level={level}")?;
            writeln!(out, "frames_sampled={}", 3u64.pow(level))?;
            let linear = report.linear();
            writeln!(out, "verdict={}", if linear { "PASS" } else { "DEVIATION" })?;
            if !linear {
                return Err(Failure::Validation(
                    "time ratio outside the linearity band".into(),
                ));
            }
        }
    }
    Ok(())
}
