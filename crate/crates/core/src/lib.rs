//! Background image generation for fixed-camera frame sequences using only
//! bitwise majority votes.
//!
//! The background at each pixel is assumed to be the value shown in more than
//! half of the frames. Three frames are reduced to their per-bit mode with
//! `(c & (a ^ b)) | (a & b)`; repeating that over `L` levels of randomly
//! sampled triples recovers the background with probability that climbs
//! quickly toward one (see [`accuracy`]).

pub mod accuracy;
pub mod bench;
pub mod boolean;
pub mod cli;
pub mod codec;
pub mod error;
pub mod frame;
pub mod pipeline;
pub mod subtraction;
pub mod synth;

pub use accuracy::{
    accuracy_at_level, accuracy_step, build_table, monte_carlo_validate, AccuracyTable, McReport,
};
pub use boolean::{
    majority3_bit, majority3_byte, majority3_image, mode_n_bits, BitTriple, ModeSpec,
};
pub use error::{Error, Result};
pub use frame::{Channels, Frame, FrameSource, Shape};
pub use pipeline::{
    generate_background, generate_background_exhaustive, sample_triple, PipelineConfig,
    PipelineReport,
};
pub use subtraction::{mask_stats, subtract, ForegroundMask, SubtractionConfig};
pub use synth::{make_majority_scene, make_ramp_scene, MajorityScene, RampScene};
