//! Binary PGM (P5) and PPM (P6) with maxval 255, plus frame directories.
//!
//! The writer always emits the canonical header `P5\n<w> <h>\n255\n`. The
//! reader also accepts arbitrary whitespace and `#` comment lines between
//! header fields. Exactly one whitespace byte separates maxval from the body,
//! and the body must be exactly `w * h * channels` bytes long.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::frame::{Frame, FrameSource, Shape};

struct Header {
    shape: Shape,
    body_offset: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, field: &str) -> Result<usize> {
        let start_sep = self.pos;
        self.skip_separators();
        if self.pos == start_sep {
            return Err(Error::format(
                self.pos,
                format!("expected whitespace before {field}"),
            ));
        }
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(usize::from(b - b'0')))
                .ok_or_else(|| Error::format(start, format!("{field} too large")))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::format(start, format!("expected decimal {field}")));
        }
        Ok(value)
    }
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        Some(other) => {
            return Err(Error::format(
                0,
                format!("unsupported magic {:?}", String::from_utf8_lossy(other)),
            ))
        }
        None => return Err(Error::format(0, "missing magic number")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(Error::format(
            maxval_at,
            format!("maxval must be 255, got {maxval}"),
        ));
    }
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        Some(_) => return Err(Error::format(cur.pos, "expected whitespace after maxval")),
        None => return Err(Error::format(cur.pos, "truncated header")),
    }
    let shape = Shape::new(width, height, channels).map_err(|e| Error::format(2, e.to_string()))?;
    Ok(Header {
        shape,
        body_offset: cur.pos,
    })
}

pub fn decode_frame(bytes: &[u8]) -> Result<Frame> {
    let header = parse_header(bytes)?;
    let len = header
        .shape
        .width
        .checked_mul(header.shape.height)
        .and_then(|n| n.checked_mul(header.shape.channels.count()))
        .ok_or_else(|| Error::format(2, "image dimensions overflow"))?;
    let body = &bytes[header.body_offset..];
    if body.len() < len {
        return Err(Error::format(
            bytes.len(),
            format!("truncated body: expected {len} bytes, found {}", body.len()),
        ));
    }
    if body.len() > len {
        return Err(Error::format(
            header.body_offset + len,
            format!("{} trailing bytes after body", body.len() - len),
        ));
    }
    Frame::with_shape(header.shape, body.to_vec())
}

pub fn encode_frame(frame: &Frame) -> Vec<u8> {
    let magic = if frame.channels() == 1 { "P5" } else { "P6" };
    let header = format!("{magic}\n{} {}\n255\n", frame.width(), frame.height());
    let mut out = Vec::with_capacity(header.len() + frame.data().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(frame.data());
    out
}

pub fn read_frame(path: impl AsRef<Path>) -> Result<Frame> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::from(e).in_file(path))?;
    decode_frame(&bytes).map_err(|e| e.in_file(path))
}

pub fn write_frame(path: impl AsRef<Path>, frame: &Frame) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_frame(frame)).map_err(|e| Error::from(e).in_file(path))
}

/// File extension matching the frame's channel count.
pub fn extension_for(frame: &Frame) -> &'static str {
    if frame.channels() == 1 {
        "pgm"
    } else {
        "ppm"
    }
}

/// A directory of `.pgm` / `.ppm` files, loaded in byte-wise filename order.
#[derive(Clone, Debug)]
pub struct FrameDirSpec {
    pub path: PathBuf,
}

impl FrameDirSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        FrameDirSpec { path: path.into() }
    }

    /// Matching files, sorted by filename bytes.
    pub fn list(&self) -> Result<Vec<PathBuf>> {
        let entries = fs::read_dir(&self.path).map_err(|e| Error::from(e).in_file(&self.path))?;
        let mut files = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| Error::from(e).in_file(&self.path))?;
            let path = entry.path();
            let accepted = path
                .extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e.eq_ignore_ascii_case("pgm") || e.eq_ignore_ascii_case("ppm"));
            if accepted && path.is_file() {
                files.push(path);
            }
        }
        files.sort_by(|a, b| {
            let key = |p: &PathBuf| p.file_name().map(|n| n.as_encoded_bytes().to_vec());
            key(a).cmp(&key(b))
        });
        Ok(files)
    }
}

pub fn load_frame_dir(spec: &FrameDirSpec) -> Result<FrameSource> {
    let files = spec.list()?;
    if files.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no .pgm or .ppm files in {}",
            spec.path.display()
        )));
    }
    let mut frames = Vec::with_capacity(files.len());
    for path in &files {
        let frame = read_frame(path)?;
        if let Some(first) = frames.first() {
            let first: &Frame = first;
            if first.shape() != frame.shape() {
                return Err(Error::Dimension(format!(
                    "{} has shape {}, expected {} from {}",
                    path.display(),
                    frame.shape(),
                    first.shape(),
                    files[0].display()
                )));
            }
        }
        frames.push(frame);
    }
    FrameSource::new(frames)
}

/// Writes `frames` as `<prefix>_NNN.<ext>` with zero-padded indices so that
/// filename order equals sequence order. Returns the written paths.
pub fn write_frame_dir(
    dir: impl AsRef<Path>,
    prefix: &str,
    frames: &[Frame],
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::from(e).in_file(dir))?;
    let digits = frames.len().saturating_sub(1).to_string().len().max(3);
    frames
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let path = dir.join(format!("{prefix}_{i:0digits$}.{}", extension_for(f)));
            write_frame(&path, f)?;
            Ok(path)
        })
        .collect()
}
