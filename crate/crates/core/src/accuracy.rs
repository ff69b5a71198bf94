//! Analytic accuracy of the multi-level vote and its Monte Carlo check.
//!
//! If a randomly drawn frame carries the modal bit with probability `p`, the
//! three-way vote carries it with probability `p^3 + 3p^2(1 - p)`. Iterating
//! that map once per level gives the accuracy after `l` levels.

use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pipeline::{generate_background, PipelineConfig};
use crate::synth::{check_majority_p0, make_majority_scene};

/// Number of standard errors allowed between empirical and predicted accuracy.
pub const MC_SIGMA_BOUND: f64 = 4.0;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(p))
    }
}

/// One level of the recursion: `p^3 + 3p^2(1 - p)`.
pub fn accuracy_step(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(step(p))
}

fn step(p: f64) -> f64 {
    p * p * p + 3.0 * p * p * (1.0 - p)
}

/// `accuracy_step` applied `level` times; level 0 is `p0` itself.
pub fn accuracy_at_level(p0: f64, level: u32) -> Result<f64> {
    check_probability(p0)?;
    Ok((0..level).fold(p0, |p, _| step(p)))
}

/// The p0 column of the published accuracy grid, 0.50 to 1.00 in 0.05 steps.
pub fn default_p0_values() -> Vec<f64> {
    (10..=20).map(|i| i as f64 * 0.05).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyTable {
    pub p0_values: Vec<f64>,
    pub levels: u32,
    /// `cells[i][l]` is the accuracy after `l` levels for `p0_values[i]`;
    /// column 0 holds p0.
    pub cells: Vec<Vec<f64>>,
}

pub fn build_table(p0_values: &[f64], levels: u32) -> Result<AccuracyTable> {
    if levels < 1 {
        return Err(Error::Config("table needs at least one level".into()));
    }
    let cells = p0_values
        .iter()
        .map(|&p0| (0..=levels).map(|l| accuracy_at_level(p0, l)).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(AccuracyTable {
        p0_values: p0_values.to_vec(),
        levels,
        cells,
    })
}

impl AccuracyTable {
    pub fn get(&self, row: usize, level: u32) -> f64 {
        self.cells[row][level as usize]
    }

    /// Aligned text, three decimals per cell.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:>6}", "p0");
        for l in 1..=self.levels {
            let _ = write!(out, " {:>6}", format!("p{l}"));
        }
        out.push('\n');
        for row in &self.cells {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{v:>6.3}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p0");
        for l in 1..=self.levels {
            let _ = write!(out, ",p{l}");
        }
        out.push('\n');
        for row in &self.cells {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.3}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Scene geometry used by [`monte_carlo_validate_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McOptions {
    pub width: usize,
    pub height: usize,
    pub frame_count: usize,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            width: 64,
            height: 64,
            frame_count: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    pub p0_target: f64,
    /// Modal frequency realized by the scene generator.
    pub p0_achieved: f64,
    pub level: u32,
    pub trials: usize,
    pub pixels_evaluated: u64,
    pub pixels_correct: u64,
    pub empirical_accuracy: f64,
    pub predicted: f64,
    /// Binomial standard error of the predicted accuracy over all evaluated pixels.
    pub sigma: f64,
    pub within_tolerance: bool,
}

pub fn monte_carlo_validate(p0: f64, level: u32, trials: usize, seed: u64) -> Result<McReport> {
    monte_carlo_validate_with(p0, level, trials, seed, &McOptions::default())
}

/// Runs `trials` independent scene-plus-pipeline experiments and compares
/// the fraction of recovered background pixels with the analytic accuracy.
///
/// Foreground bytes are bitwise complements of the background, so every bit
/// of a pixel is modal with frequency exactly p0 and a vote on three pixels
/// is always either the background byte or its complement. Pixel accuracy
/// therefore equals the per-bit accuracy, not its 8th power.
pub fn monte_carlo_validate_with(
    p0: f64,
    level: u32,
    trials: usize,
    seed: u64,
    options: &McOptions,
) -> Result<McReport> {
    check_majority_p0(p0)?;
    if trials < 1 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    PipelineConfig::new(level, 0).validate()?;

    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut correct = 0u64;
    let mut evaluated = 0u64;
    let mut p0_achieved = p0;
    for _ in 0..trials {
        let scene_seed = seeds.next_u64();
        let pipeline_seed = seeds.next_u64();
        let scene = make_majority_scene(
            options.width,
            options.height,
            options.frame_count,
            p0,
            scene_seed,
        )?;
        p0_achieved = scene.achieved_p0();
        let truth = scene.background.clone();
        let report = generate_background(
            &scene.into_source(),
            &PipelineConfig::new(level, pipeline_seed),
        )?;
        correct += report
            .background
            .data()
            .iter()
            .zip(truth.data())
            .filter(|(a, b)| a == b)
            .count() as u64;
        evaluated += truth.data().len() as u64;
    }

    let predicted = accuracy_at_level(p0_achieved, level)?;
    let empirical = correct as f64 / evaluated as f64;
    let sigma = (predicted * (1.0 - predicted) / evaluated as f64).sqrt();
    let within_tolerance = (empirical - predicted).abs() <= MC_SIGMA_BOUND * sigma;

    Ok(McReport {
        p0_target: p0,
        p0_achieved,
        level,
        trials,
        pixels_evaluated: evaluated,
        pixels_correct: correct,
        empirical_accuracy: empirical,
        predicted,
        sigma,
        within_tolerance,
    })
}
