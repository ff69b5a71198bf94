//! Multi-level background generation.
//!
//! Level 1 reduces `3^(L-1)` randomly drawn frame triples to modal images;
//! each further level folds consecutive triples of the previous level's
//! results (`[3j, 3j+1, 3j+2] -> j`) until one image remains. `L` levels
//! consume exactly `3^L` frame draws.
//!
//! Draw order: triples are drawn in increasing group index, and within a
//! group `img1`, `img2`, `img3` in that order, one sampler call per frame.
//! All draws happen before any image work, so the result depends only on
//! the source bytes, the seed and the level.

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolean::{majority3_image, majority3_slice};
use crate::error::{Error, Result};
use crate::frame::{Frame, FrameSource};

/// Level cap used when none is given. Going above it is allowed but the
/// result array grows as `3^(L-1)` frames.
pub const DEFAULT_MAX_LEVEL: u32 = 6;

/// Absolute ceiling on `max_level`; `3^19` frames would not fit in memory.
const HARD_MAX_LEVEL: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub level: u32,
    pub seed: u64,
    pub max_level: u32,
}

impl PipelineConfig {
    pub fn new(level: u32, seed: u64) -> Self {
        PipelineConfig {
            level,
            seed,
            max_level: DEFAULT_MAX_LEVEL,
        }
    }

    pub fn with_max_level(mut self, max_level: u32) -> Self {
        self.max_level = max_level;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_level > HARD_MAX_LEVEL {
            return Err(Error::Config(format!(
                "max level {} exceeds the supported ceiling of {HARD_MAX_LEVEL}",
                self.max_level
            )));
        }
        if self.level < 1 || self.level > self.max_level {
            return Err(Error::Config(format!(
                "level must be in 1..={}, got {}",
                self.max_level, self.level
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub background: Frame,
    /// Always `3^level_used`.
    pub frames_sampled: u64,
    pub level_used: u32,
    pub seed_used: u64,
}

/// Source of uniformly distributed frame indices.
pub trait FrameSampler {
    /// Returns an index in `0..len`. `len` is never zero.
    fn draw_index(&mut self, len: usize) -> usize;
}

/// ChaCha8 stream seeded from a `u64`; one `random_range` over `u64` per draw,
/// which keeps the sequence identical on 32- and 64-bit targets.
#[derive(Clone, Debug)]
pub struct SeededSampler {
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        SeededSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl FrameSampler for SeededSampler {
    fn draw_index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len as u64) as usize
    }
}

pub fn sample_triple_indices<S: FrameSampler + ?Sized>(
    source: &FrameSource,
    sampler: &mut S,
) -> [usize; 3] {
    let n = source.len();
    [
        sampler.draw_index(n),
        sampler.draw_index(n),
        sampler.draw_index(n),
    ]
}

/// Draws three frames uniformly with replacement.
pub fn sample_triple<'a, S: FrameSampler + ?Sized>(
    source: &'a FrameSource,
    sampler: &mut S,
) -> Result<(&'a Frame, &'a Frame, &'a Frame)> {
    if source.is_empty() {
        return Err(Error::EmptyInput(
            "cannot sample from an empty source".into(),
        ));
    }
    let [i, j, k] = sample_triple_indices(source, sampler);
    Ok((source.get(i)?, source.get(j)?, source.get(k)?))
}

pub fn generate_background(
    source: &FrameSource,
    config: &PipelineConfig,
) -> Result<PipelineReport> {
    config.validate()?;
    let mut sampler = SeededSampler::new(config.seed);
    let background = generate_background_with(source, config.level, &mut sampler)?;
    Ok(PipelineReport {
        background,
        frames_sampled: 3u64.pow(config.level),
        level_used: config.level,
        seed_used: config.seed,
    })
}

/// Runs the level fold with a caller-supplied sampler. `level` is only
/// checked for `>= 1` here; the cap lives in [`PipelineConfig`].
pub fn generate_background_with<S: FrameSampler + ?Sized>(
    source: &FrameSource,
    level: u32,
    sampler: &mut S,
) -> Result<Frame> {
    if !(1..=HARD_MAX_LEVEL).contains(&level) {
        return Err(Error::Config(format!(
            "level must be in 1..={HARD_MAX_LEVEL}, got {level}"
        )));
    }
    if source.is_empty() {
        return Err(Error::EmptyInput(
            "cannot sample from an empty source".into(),
        ));
    }
    if source.len() < 3 {
        warn!(
            "source has only {} frame(s); the majority vote cannot reject anything",
            source.len()
        );
    }
    if level > DEFAULT_MAX_LEVEL {
        warn!(
            "level {level} allocates {} intermediate frames",
            3u64.pow(level - 1)
        );
    }

    let leaves: Vec<usize> = (0..3usize.pow(level - 1))
        .flat_map(|_| sample_triple_indices(source, sampler))
        .collect();
    fold_drawn(source, &leaves)
}

/// Bytes per tile of the cache-blocked fold.
const TILE_BYTES: usize = 4096;

/// Evaluates the level fold over pre-drawn frame indices. `leaves` holds the
/// level-1 triples back to back, so its length is a power of three.
///
/// The image is processed in tiles, and within a tile the tree is evaluated
/// depth first, so intermediates stay in `3 * (L - 1)` tile-sized buffers
/// instead of `3^(L-1)` full frames. Every output byte depends only on the
/// same input bytes as in the level-by-level fold, so the result is identical.
fn fold_drawn(source: &FrameSource, leaves: &[usize]) -> Result<Frame> {
    let shape = source.shape();
    let len = shape.byte_len();
    let frames: Vec<&[u8]> = source.frames().iter().map(Frame::data).collect();
    let depth = leaves.len().ilog(3) as usize;
    let mut scratch: Vec<[Vec<u8>; 3]> = (1..depth)
        .map(|_| std::array::from_fn(|_| vec![0u8; TILE_BYTES.min(len)]))
        .collect();
    let mut out = vec![0u8; len];
    for (t, chunk) in out.chunks_mut(TILE_BYTES).enumerate() {
        let start = t * TILE_BYTES;
        eval_tile(&frames, leaves, start, &mut scratch, chunk);
    }
    Frame::with_shape(shape, out)
}

fn eval_tile(
    frames: &[&[u8]],
    leaves: &[usize],
    start: usize,
    scratch: &mut [[Vec<u8>; 3]],
    out: &mut [u8],
) {
    let n = out.len();
    if let [a, b, c] = *leaves {
        let range = start..start + n;
        majority3_slice(
            out,
            &frames[a][range.clone()],
            &frames[b][range.clone()],
            &frames[c][range],
        );
        return;
    }
    let (children, deeper) = scratch
        .split_last_mut()
        .expect("scratch depth matches tree depth");
    let third = leaves.len() / 3;
    for (child, group) in children.iter_mut().zip(leaves.chunks_exact(third)) {
        eval_tile(frames, group, start, deeper, &mut child[..n]);
    }
    majority3_slice(out, &children[0][..n], &children[1][..n], &children[2][..n]);
}

/// The sampling-free three-frame case: the modal image of exactly three frames.
pub fn generate_background_exhaustive(frames: &[Frame]) -> Result<Frame> {
    match frames {
        [a, b, c] => majority3_image(a, b, c),
        _ => Err(Error::Arity {
            expected: 3,
            actual: frames.len(),
        }),
    }
}
