//! Binary portable-anymap images: P6 (RGB) and P5 (grayscale).
//!
//! Only `maxval = 255` is supported, matching what the tool writes.
//! Headers may contain `#` comments anywhere whitespace is allowed, per the
//! format; pixel data follows the single whitespace byte after the maxval.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use toolpose_core::augment::Frame;

/// A parse or IO failure, pinned to a file and byte offset.
#[derive(Debug)]
pub struct PnmError {
    /// File being read or written.
    pub path: PathBuf,
    /// Byte offset the failure was detected at.
    pub offset: u64,
    /// What went wrong.
    pub kind: PnmErrorKind,
}

/// Failure cases for P5/P6 files.
#[derive(Debug)]
pub enum PnmErrorKind {
    /// Underlying IO failure.
    Io(io::Error),
    /// The file starts with neither `P5` nor `P6`.
    BadMagic,
    /// A header field is missing or not a number.
    BadHeader(&'static str),
    /// Only maxval 255 is supported.
    UnsupportedMaxval(u64),
    /// The pixel payload ended early.
    Truncated {
        /// Bytes still expected.
        expected: u64,
    },
    /// Bytes remain after the pixel payload.
    TrailingData {
        /// Number of unconsumed bytes.
        extra: u64,
    },
    /// Width or height of zero.
    EmptyImage,
}

impl fmt::Display for PnmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self.path.display();
        let at = self.offset;
        match &self.kind {
            PnmErrorKind::Io(e) => write!(f, "{path}: {e}"),
            PnmErrorKind::BadMagic => write!(f, "{path}: byte {at}: not a P5/P6 file"),
            PnmErrorKind::BadHeader(field) => {
                write!(f, "{path}: byte {at}: bad or missing {field}")
            }
            PnmErrorKind::UnsupportedMaxval(v) => {
                write!(f, "{path}: byte {at}: maxval {v} unsupported, expected 255")
            }
            PnmErrorKind::Truncated { expected } => {
                write!(f, "{path}: byte {at}: truncated, {expected} more bytes expected")
            }
            PnmErrorKind::TrailingData { extra } => {
                write!(f, "{path}: byte {at}: {extra} trailing bytes after pixels")
            }
            PnmErrorKind::EmptyImage => write!(f, "{path}: byte {at}: zero-sized image"),
        }
    }
}

impl std::error::Error for PnmError {}

fn err(path: &Path, offset: usize, kind: PnmErrorKind) -> PnmError {
    PnmError { path: path.to_path_buf(), offset: offset as u64, kind }
}

/// A grayscale image, one byte per pixel, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    /// Number of columns.
    pub width: usize,
    /// Number of rows.
    pub height: usize,
    /// `height * width` intensity bytes.
    pub pixels: Vec<u8>,
}

struct Header {
    width: usize,
    height: usize,
    /// Offset of the first pixel byte.
    data: usize,
}

/// Skips whitespace and `#` comments, returning the next token's range.
fn next_token(bytes: &[u8], mut at: usize) -> Option<(usize, usize)> {
    loop {
        while at < bytes.len() && bytes[at].is_ascii_whitespace() {
            at += 1;
        }
        if at < bytes.len() && bytes[at] == b'#' {
            while at < bytes.len() && bytes[at] != b'\n' {
                at += 1;
            }
            continue;
        }
        break;
    }
    if at == bytes.len() {
        return None;
    }
    let start = at;
    while at < bytes.len() && !bytes[at].is_ascii_whitespace() {
        at += 1;
    }
    Some((start, at))
}

fn parse_header(path: &Path, bytes: &[u8], magic: &[u8]) -> Result<Header, PnmError> {
    if bytes.len() < 2 || &bytes[..2] != magic {
        return Err(err(path, 0, PnmErrorKind::BadMagic));
    }
    let mut at = 2;
    let mut fields = [0u64; 3];
    for (field, name) in fields.iter_mut().zip(["width", "height", "maxval"]) {
        let (start, end) =
            next_token(bytes, at).ok_or_else(|| err(path, bytes.len(), PnmErrorKind::BadHeader(name)))?;
        *field = std::str::from_utf8(&bytes[start..end])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err(path, start, PnmErrorKind::BadHeader(name)))?;
        at = end;
    }
    if fields[2] != 255 {
        return Err(err(path, at, PnmErrorKind::UnsupportedMaxval(fields[2])));
    }
    if fields[0] == 0 || fields[1] == 0 {
        return Err(err(path, 2, PnmErrorKind::EmptyImage));
    }
    // Exactly one whitespace byte separates the header from the pixels.
    if at >= bytes.len() || !bytes[at].is_ascii_whitespace() {
        return Err(err(path, at, PnmErrorKind::BadHeader("header terminator")));
    }
    Ok(Header { width: fields[0] as usize, height: fields[1] as usize, data: at + 1 })
}

fn payload<'a>(
    path: &Path,
    bytes: &'a [u8],
    header: &Header,
    per_pixel: usize,
) -> Result<&'a [u8], PnmError> {
    let need = header.width * header.height * per_pixel;
    let have = bytes.len() - header.data;
    if have < need {
        return Err(err(
            path,
            bytes.len(),
            PnmErrorKind::Truncated { expected: (need - have) as u64 },
        ));
    }
    if have > need {
        return Err(err(
            path,
            header.data + need,
            PnmErrorKind::TrailingData { extra: (have - need) as u64 },
        ));
    }
    Ok(&bytes[header.data..header.data + need])
}

/// Parses P6 bytes into a frame with no annotations; `path` labels errors.
pub fn frame_from_p6_bytes(path: &Path, bytes: &[u8]) -> Result<Frame, PnmError> {
    let header = parse_header(path, bytes, b"P6")?;
    let pixels = payload(path, bytes, &header, 3)?.to_vec();
    Ok(Frame::new(header.width, header.height, pixels, Vec::new())
        .expect("payload length was checked against the header"))
}

/// Serializes a frame's pixels as P6.
pub fn frame_to_p6_bytes(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width, frame.height).into_bytes();
    out.extend_from_slice(&frame.pixels);
    out
}

/// Parses P5 bytes; `path` labels errors.
pub fn gray_from_p5_bytes(path: &Path, bytes: &[u8]) -> Result<GrayImage, PnmError> {
    let header = parse_header(path, bytes, b"P5")?;
    let pixels = payload(path, bytes, &header, 1)?.to_vec();
    Ok(GrayImage { width: header.width, height: header.height, pixels })
}

/// Serializes a grayscale image as P5.
pub fn gray_to_p5_bytes(image: &GrayImage) -> Vec<u8> {
    assert_eq!(image.pixels.len(), image.width * image.height, "pixel buffer size");
    let mut out = format!("P5\n{} {}\n255\n", image.width, image.height).into_bytes();
    out.extend_from_slice(&image.pixels);
    out
}

/// Reads one P6 file into a frame (annotations are stored separately).
pub fn read_p6(path: &Path) -> Result<Frame, PnmError> {
    let bytes = fs::read(path).map_err(|e| err(path, 0, PnmErrorKind::Io(e)))?;
    frame_from_p6_bytes(path, &bytes)
}

/// Writes one P6 file.
pub fn write_p6(path: &Path, frame: &Frame) -> Result<(), PnmError> {
    fs::write(path, frame_to_p6_bytes(frame)).map_err(|e| err(path, 0, PnmErrorKind::Io(e)))
}

/// Reads one P5 file.
pub fn read_p5(path: &Path) -> Result<GrayImage, PnmError> {
    let bytes = fs::read(path).map_err(|e| err(path, 0, PnmErrorKind::Io(e)))?;
    gray_from_p5_bytes(path, &bytes)
}

/// Writes one P5 file.
pub fn write_p5(path: &Path, image: &GrayImage) -> Result<(), PnmError> {
    fs::write(path, gray_to_p5_bytes(image)).map_err(|e| err(path, 0, PnmErrorKind::Io(e)))
}
