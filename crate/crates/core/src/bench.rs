//! Runtime scaling of background generation with frame resolution.
//!
//! Frames are synthesized up front, so the timings cover only the
//! sampling and majority passes. Each size is sampled `repeats` times with
//! the same seed and the median per-run wall time is reported.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::frame::{Frame, FrameSource};
use crate::pipeline::{generate_background, PipelineConfig};
use crate::synth::make_majority_scene;

/// Allowed time ratio per unit pixel ratio: a 4x pixel step must take
/// between 2.5x and 6x as long.
pub const LINEARITY_BAND: (f64, f64) = (2.5 / 4.0, 6.0 / 4.0);

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<(usize, usize)>,
    pub level: u32,
    pub repeats: usize,
    pub channels: usize,
    pub frame_count: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![(128, 128), (256, 256), (512, 512)],
            level: 3,
            repeats: 15,
            channels: 3,
            frame_count: 30,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub width: usize,
    pub height: usize,
    pub pixels: usize,
    pub median: Duration,
    pub background: Frame,
}

impl BenchRow {
    pub fn nanos_per_pixel(&self) -> f64 {
        self.median.as_secs_f64() * 1e9 / self.pixels as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchStep {
    pub pixel_ratio: f64,
    pub time_ratio: f64,
    pub band: (f64, f64),
    pub within_band: bool,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub steps: Vec<BenchStep>,
}

impl BenchReport {
    pub fn linear(&self) -> bool {
        self.steps.iter().all(|s| s.within_band)
    }
}

/// Acceptable time-ratio interval for a given pixel-count ratio.
pub fn linearity_band(pixel_ratio: f64) -> (f64, f64) {
    (
        LINEARITY_BAND.0 * pixel_ratio,
        LINEARITY_BAND.1 * pixel_ratio,
    )
}

pub fn parse_size(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("size must look like WxH, got {s:?}"));
    let (w, h) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.parse().map_err(|_| bad())?;
    let h: usize = h.parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

fn bench_source(width: usize, height: usize, config: &BenchConfig) -> Result<FrameSource> {
    // An RGB frame is laid out like a gray frame three times as wide.
    let scene = make_majority_scene(
        width * config.channels,
        height,
        config.frame_count,
        0.8,
        config.seed,
    )?;
    let frames = scene
        .frames
        .into_iter()
        .map(|f| Frame::from_raw(width, height, config.channels, f.into_data()))
        .collect::<Result<Vec<_>>>()?;
    FrameSource::new(frames)
}

/// Shortest wall time of one timing sample; fast sizes repeat the run
/// within a sample until it lasts at least this long.
const MIN_SAMPLE: Duration = Duration::from_millis(5);

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.sizes.len() < 2 {
        return Err(Error::Config("benchmark needs at least two sizes".into()));
    }
    if config.repeats < 1 {
        return Err(Error::Config("benchmark needs at least one repeat".into()));
    }
    let pipeline = PipelineConfig::new(config.level, config.seed);
    pipeline.validate()?;

    struct Case {
        source: FrameSource,
        background: Frame,
        iterations: u32,
        samples: Vec<Duration>,
    }

    let mut cases = Vec::with_capacity(config.sizes.len());
    for &(width, height) in &config.sizes {
        let source = bench_source(width, height, config)?;
        // The warm-up run also sizes the batch.
        let start = Instant::now();
        let background = generate_background(&source, &pipeline)?.background;
        let once = start.elapsed().max(Duration::from_nanos(1));
        let iterations = (MIN_SAMPLE.as_nanos() / once.as_nanos()).clamp(1, 10_000) as u32;
        cases.push(Case {
            source,
            background,
            iterations,
            samples: Vec::with_capacity(config.repeats),
        });
    }

    // Round-robin over sizes so slow drift in machine load hits every size.
    for _ in 0..config.repeats {
        for case in &mut cases {
            let start = Instant::now();
            for _ in 0..case.iterations {
                std::hint::black_box(generate_background(&case.source, &pipeline)?);
            }
            case.samples.push(start.elapsed() / case.iterations);
        }
    }

    let rows: Vec<BenchRow> = cases
        .into_iter()
        .zip(&config.sizes)
        .map(|(mut case, &(width, height))| {
            case.samples.sort();
            BenchRow {
                width,
                height,
                pixels: width * height,
                median: case.samples[case.samples.len() / 2],
                background: case.background,
            }
        })
        .collect();

    let steps = rows
        .windows(2)
        .map(|w| {
            let pixel_ratio = w[1].pixels as f64 / w[0].pixels as f64;
            let time_ratio = w[1].median.as_secs_f64() / w[0].median.as_secs_f64().max(1e-12);
            let band = linearity_band(pixel_ratio);
            BenchStep {
                pixel_ratio,
                time_ratio,
                band,
                within_band: time_ratio >= band.0 && time_ratio <= band.1,
            }
        })
        .collect();
    Ok(BenchReport { rows, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sizes() {
        assert_eq!(parse_size("128x64").unwrap(), (128, 64));
        assert_eq!(parse_size(" 3X5 ").unwrap(), (3, 5));
        assert!(parse_size("128").is_err());
        assert!(parse_size("0x4").is_err());
        assert!(parse_size("ax4").is_err());
    }

    #[test]
    fn band_for_four_times_pixels() {
        assert_eq!(linearity_band(4.0), (2.5, 6.0));
    }

    #[test]
    fn needs_two_sizes() {
        let cfg = BenchConfig {
            sizes: vec![(16, 16)],
            ..BenchConfig::default()
        };
        assert!(matches!(run_bench(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn repeats_do_not_change_output() {
        let base = BenchConfig {
            sizes: vec![(16, 16), (32, 32)],
            repeats: 1,
            ..BenchConfig::default()
        };
        let one = run_bench(&base).unwrap();
        let nine = run_bench(&BenchConfig { repeats: 9, ..base }).unwrap();
        for (a, b) in one.rows.iter().zip(&nine.rows) {
            assert_eq!(a.background, b.background);
        }
        assert_eq!(one.steps.len(), 1);
        assert_eq!(one.steps[0].pixel_ratio, 4.0);
    }
}
