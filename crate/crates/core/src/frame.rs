//! Raster frames and the in-memory frame sequence.
//!
//! A [`Frame`] stores 8-bit samples row-major with channels interleaved, which
//! is also the PGM/PPM body layout, so the majority kernels run directly on
//! the stored buffer.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Channels {
    Gray,
    Rgb,
}

impl Channels {
    pub fn count(self) -> usize {
        match self {
            Channels::Gray => 1,
            Channels::Rgb => 3,
        }
    }
}

impl TryFrom<usize> for Channels {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Channels::Gray),
            3 => Ok(Channels::Rgb),
            other => Err(Error::Dimension(format!(
                "channel count must be 1 or 3, got {other}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub width: usize,
    pub height: usize,
    pub channels: Channels,
}

impl Shape {
    pub fn new(width: usize, height: usize, channels: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "frame must be at least 1x1, got {width}x{height}"
            )));
        }
        let channels = Channels::try_from(channels)?;
        Ok(Shape {
            width,
            height,
            channels,
        })
    }

    /// Pixel count (the resolution R).
    pub fn pixels(&self) -> usize {
        self.width * self.height
    }

    pub fn byte_len(&self) -> usize {
        self.pixels() * self.channels.count()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{}x{}",
            self.width,
            self.height,
            self.channels.count()
        )
    }
}

/// A single 8-bit gray or RGB image.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    shape: Shape,
    data: Vec<u8>,
}

impl Frame {
    /// Creates a frame with every byte set to `fill`.
    pub fn new(width: usize, height: usize, channels: usize, fill: u8) -> Result<Self> {
        let shape = Shape::new(width, height, channels)?;
        Ok(Frame {
            shape,
            data: vec![fill; shape.byte_len()],
        })
    }

    pub fn from_raw(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        let shape = Shape::new(width, height, channels)?;
        Self::with_shape(shape, data)
    }

    pub fn with_shape(shape: Shape, data: Vec<u8>) -> Result<Self> {
        if data.len() != shape.byte_len() {
            return Err(Error::Dimension(format!(
                "{shape} frame needs {} bytes, got {}",
                shape.byte_len(),
                data.len()
            )));
        }
        Ok(Frame { shape, data })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn width(&self) -> usize {
        self.shape.width
    }

    pub fn height(&self) -> usize {
        self.shape.height
    }

    pub fn channels(&self) -> usize {
        self.shape.channels.count()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    /// The channel samples of the pixel at (`row`, `col`).
    pub fn pixel(&self, row: usize, col: usize) -> &[u8] {
        let c = self.channels();
        let start = (row * self.shape.width + col) * c;
        &self.data[start..start + c]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub(crate) fn ensure_same_shape(&self, other: &Frame) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::Dimension(format!(
                "shape mismatch: {} vs {}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("shape", &self.shape)
            .field("bytes", &self.data.len())
            .finish()
    }
}

/// An ordered, random-access sequence of same-shaped frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameSource {
    shape: Shape,
    frames: Vec<Frame>,
}

impl FrameSource {
    pub fn new(frames: Vec<Frame>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::EmptyInput("frame source needs at least one frame".into()))?;
        let shape = first.shape();
        if let Some((i, bad)) = frames.iter().enumerate().find(|(_, f)| f.shape() != shape) {
            return Err(Error::Dimension(format!(
                "frame {i} has shape {}, expected {shape}",
                bad.shape()
            )));
        }
        Ok(FrameSource { shape, frames })
    }

    pub fn get(&self, index: usize) -> Result<&Frame> {
        self.frames.get(index).ok_or(Error::Bounds {
            index,
            len: self.frames.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    /// Always false; a source holds at least one frame.
    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }
}
