//! Thresholded background subtraction.
//!
//! A pixel is foreground (255) when the largest per-channel absolute
//! difference from the background is strictly greater than the threshold,
//! otherwise background (0).

use crate::error::{Error, Result};
use crate::frame::Frame;

pub const FOREGROUND: u8 = 255;
pub const BACKGROUND: u8 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubtractionConfig {
    threshold: u8,
}

impl SubtractionConfig {
    pub fn new(threshold: u32) -> Result<Self> {
        let threshold = u8::try_from(threshold)
            .map_err(|_| Error::Config(format!("threshold must be in 0..=255, got {threshold}")))?;
        Ok(SubtractionConfig { threshold })
    }

    pub fn threshold(&self) -> u8 {
        self.threshold
    }
}

/// Binary mask, one byte per pixel, each 0 or 255.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForegroundMask {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ForegroundMask {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn is_foreground(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col] == FOREGROUND
    }

    /// True when every foreground pixel of `self` is also foreground in `other`.
    pub fn is_subset_of(&self, other: &ForegroundMask) -> bool {
        self.data
            .iter()
            .zip(&other.data)
            .all(|(&a, &b)| a == BACKGROUND || b == FOREGROUND)
    }

    /// The mask as a gray frame, for writing as PGM.
    pub fn to_frame(&self) -> Frame {
        Frame::from_raw(self.width, self.height, 1, self.data.clone())
            .expect("mask dimensions are valid")
    }
}

pub fn subtract(
    frame: &Frame,
    background: &Frame,
    config: &SubtractionConfig,
) -> Result<ForegroundMask> {
    frame.ensure_same_shape(background)?;
    let c = frame.channels();
    let threshold = config.threshold;
    let data = frame
        .data()
        .chunks_exact(c)
        .zip(background.data().chunks_exact(c))
        .map(|(p, q)| {
            let diff = p
                .iter()
                .zip(q)
                .map(|(&a, &b)| a.abs_diff(b))
                .max()
                .unwrap_or(0);
            if diff > threshold {
                FOREGROUND
            } else {
                BACKGROUND
            }
        })
        .collect();
    Ok(ForegroundMask {
        width: frame.width(),
        height: frame.height(),
        data,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaskStats {
    pub foreground_count: usize,
    pub foreground_fraction: f64,
}

pub fn mask_stats(mask: &ForegroundMask) -> MaskStats {
    let foreground_count = mask.data.iter().filter(|&&b| b == FOREGROUND).count();
    MaskStats {
        foreground_count,
        foreground_fraction: foreground_count as f64 / mask.data.len() as f64,
    }
}
