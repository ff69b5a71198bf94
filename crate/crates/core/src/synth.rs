//! Synthetic frame sequences with known ground truth.
//!
//! [`RampScene`] is the three-frame exact-recovery experiment: a horizontal
//! gray ramp with one opaque blue-ish rectangle per frame, rectangles
//! pairwise disjoint. [`MajorityScene`] is a gray sequence where every pixel
//! shows its background byte in an exact fraction of frames and the bitwise
//! complement in the rest.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolean::{majority3_image_traced, MajorityTrace};
use crate::error::{Error, Result};
use crate::frame::{Frame, FrameSource};

/// Object colors of the three ramp frames.
pub const RAMP_OBJECT_COLORS: [[u8; 3]; 3] = [[0, 0, 64], [0, 0, 128], [0, 0, 255]];

/// Axis-aligned rectangle in pixel coordinates, half-open.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        col >= self.x && col < self.x + self.width && row >= self.y && row < self.y + self.height
    }

    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x < other.x + other.width
            && other.x < self.x + self.width
            && self.y < other.y + other.height
            && other.y < self.y + self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }
}

#[derive(Clone, Debug)]
pub struct RampScene {
    pub background: Frame,
    pub frames: Vec<Frame>,
    pub object_colors: [[u8; 3]; 3],
    pub object_rects: [Rect; 3],
}

impl RampScene {
    /// Partial products of the three-frame majority over this scene's frames.
    pub fn intermediates(&self) -> MajorityTrace {
        majority3_image_traced(&self.frames[0], &self.frames[1], &self.frames[2])
            .expect("ramp frames share a shape")
    }

    pub fn source(&self) -> FrameSource {
        FrameSource::new(self.frames.clone()).expect("ramp frames share a shape")
    }
}

/// Ramp value of column `col`: `floor(255 * col / (width - 1))`.
pub fn ramp_value(col: usize, width: usize) -> u8 {
    (255 * col / (width - 1)) as u8
}

pub fn make_ramp_scene(width: usize, height: usize) -> Result<RampScene> {
    if width < 8 || height < 8 {
        return Err(Error::Dimension(format!(
            "ramp scene needs at least 8x8, got {width}x{height}"
        )));
    }
    let mut bg = Vec::with_capacity(width * height * 3);
    for _ in 0..height {
        for col in 0..width {
            let v = ramp_value(col, width);
            bg.extend_from_slice(&[v, v, v]);
        }
    }
    let background = Frame::from_raw(width, height, 3, bg)?;

    let (c1, c2) = (width / 3, 2 * width / 3);
    let (r1, r2) = (height / 3, 2 * height / 3);
    let object_rects = [
        // bottom-left third
        Rect {
            x: 0,
            y: r2,
            width: c1,
            height: height - r2,
        },
        // top-right third
        Rect {
            x: c2,
            y: 0,
            width: width - c2,
            height: r1,
        },
        // center block
        Rect {
            x: c1,
            y: r1,
            width: c2 - c1,
            height: r2 - r1,
        },
    ];

    let frames = object_rects
        .iter()
        .zip(RAMP_OBJECT_COLORS)
        .map(|(rect, color)| paint_rect(&background, rect, color))
        .collect::<Result<Vec<_>>>()?;

    Ok(RampScene {
        background,
        frames,
        object_colors: RAMP_OBJECT_COLORS,
        object_rects,
    })
}

fn paint_rect(background: &Frame, rect: &Rect, color: [u8; 3]) -> Result<Frame> {
    let width = background.width();
    let mut data = background.data().to_vec();
    for row in rect.y..rect.y + rect.height {
        for col in rect.x..rect.x + rect.width {
            let at = (row * width + col) * 3;
            data[at..at + 3].copy_from_slice(&color);
        }
    }
    Frame::with_shape(background.shape(), data)
}

/// Gray sequence satisfying the majority assumption with a known modal
/// frequency at every pixel.
#[derive(Clone, Debug)]
pub struct MajorityScene {
    pub background: Frame,
    pub frames: Vec<Frame>,
    /// Requested modal frequency.
    pub p0: f64,
    /// Frames per pixel that show the background byte.
    pub background_count: usize,
    /// `occupancy[f * pixels + p]` is true when frame `f` shows foreground at pixel `p`.
    occupancy: Vec<bool>,
}

impl MajorityScene {
    /// Modal frequency actually realized: `background_count / frame_count`.
    pub fn achieved_p0(&self) -> f64 {
        self.background_count as f64 / self.frames.len() as f64
    }

    pub fn is_foreground(&self, frame: usize, pixel: usize) -> bool {
        self.occupancy[frame * self.background.width() * self.background.height() + pixel]
    }

    pub fn source(&self) -> FrameSource {
        FrameSource::new(self.frames.clone()).expect("scene frames share a shape")
    }

    pub fn into_source(self) -> FrameSource {
        FrameSource::new(self.frames).expect("scene frames share a shape")
    }
}

/// Number of background frames per pixel: the smallest count whose fraction
/// of `frame_count` is at least `p0`.
pub fn background_frames_for(p0: f64, frame_count: usize) -> usize {
    let k = (p0 * frame_count as f64 - 1e-9).ceil() as usize;
    k.clamp(frame_count / 2 + 1, frame_count)
}

pub(crate) fn check_majority_p0(p0: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::Domain(p0));
    }
    if p0 <= 0.5 {
        return Err(Error::AssumptionViolation(p0));
    }
    Ok(())
}

/// Builds a gray scene whose background bytes are uniform random. At each
/// pixel a seeded shuffle picks which frames show the complement, so the
/// background count per pixel is exact.
pub fn make_majority_scene(
    width: usize,
    height: usize,
    frame_count: usize,
    p0: f64,
    seed: u64,
) -> Result<MajorityScene> {
    check_majority_p0(p0)?;
    if frame_count < 3 {
        return Err(Error::Config(format!(
            "majority scene needs at least 3 frames, got {frame_count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = width.checked_mul(height).unwrap_or(0);
    let mut bg = vec![0u8; pixels];
    rng.fill(bg.as_mut_slice());
    let background = Frame::from_raw(width, height, 1, bg)?;

    let background_count = background_frames_for(p0, frame_count);
    let foreground_count = frame_count - background_count;

    let mut data: Vec<Vec<u8>> = vec![background.data().to_vec(); frame_count];
    let mut occupancy = vec![false; frame_count * pixels];
    let mut order: Vec<u32> = (0..frame_count as u32).collect();
    if foreground_count > 0 {
        for p in 0..pixels {
            order.shuffle(&mut rng);
            for &f in &order[..foreground_count] {
                let f = f as usize;
                data[f][p] = !data[f][p];
                occupancy[f * pixels + p] = true;
            }
        }
    }

    let frames = data
        .into_iter()
        .map(|d| Frame::with_shape(background.shape(), d))
        .collect::<Result<Vec<_>>>()?;

    Ok(MajorityScene {
        background,
        frames,
        p0,
        background_count,
        occupancy,
    })
}
