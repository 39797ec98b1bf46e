//! Binary heatmap container, format "HMAP1".
//!
//! Layout: magic bytes `HMAP1\n`, three little-endian u32 fields `H`, `W`,
//! `C`, then `C` null-terminated UTF-8 channel names, then `H*W*C`
//! little-endian f32 values in row-major channel-last order. Values are
//! widened to f64 in memory and narrowed on write. Readers reject wrong
//! magic, truncation and trailing bytes, reporting the byte offset.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use toolpose_core::Heatmap;

const MAGIC: &[u8; 6] = b"HMAP1\n";

/// A parse or IO failure, pinned to a file and byte offset.
#[derive(Debug)]
pub struct HmapError {
    /// File being read or written.
    pub path: PathBuf,
    /// Byte offset the failure was detected at.
    pub offset: u64,
    /// What went wrong.
    pub kind: HmapErrorKind,
}

/// Failure cases for the heatmap container.
#[derive(Debug)]
pub enum HmapErrorKind {
    /// Underlying IO failure.
    Io(io::Error),
    /// The file does not start with `HMAP1\n`.
    BadMagic,
    /// The file ended before the declared content.
    Truncated {
        /// Bytes still expected at the failure point.
        expected: u64,
    },
    /// A channel name ran to the end of the file without a terminator.
    UnterminatedName,
    /// A channel name is not valid UTF-8.
    BadName,
    /// Bytes remain after the declared payload.
    TrailingData {
        /// Number of unconsumed bytes.
        extra: u64,
    },
    /// Declared dimensions are rejected by the in-memory type.
    BadDimensions(String),
    /// Dimensions overflow the addressable payload size.
    Oversized,
}

impl fmt::Display for HmapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self.path.display();
        let at = self.offset;
        match &self.kind {
            HmapErrorKind::Io(e) => write!(f, "{path}: {e}"),
            HmapErrorKind::BadMagic => {
                write!(f, "{path}: byte {at}: not an HMAP1 file (bad magic)")
            }
            HmapErrorKind::Truncated { expected } => {
                write!(f, "{path}: byte {at}: truncated, {expected} more bytes expected")
            }
            HmapErrorKind::UnterminatedName => {
                write!(f, "{path}: byte {at}: channel name missing terminator")
            }
            HmapErrorKind::BadName => {
                write!(f, "{path}: byte {at}: channel name is not valid UTF-8")
            }
            HmapErrorKind::TrailingData { extra } => {
                write!(f, "{path}: byte {at}: {extra} trailing bytes after payload")
            }
            HmapErrorKind::BadDimensions(why) => {
                write!(f, "{path}: byte {at}: bad dimensions: {why}")
            }
            HmapErrorKind::Oversized => {
                write!(f, "{path}: byte {at}: declared size overflows")
            }
        }
    }
}

impl std::error::Error for HmapError {}

fn err(path: &Path, offset: u64, kind: HmapErrorKind) -> HmapError {
    HmapError { path: path.to_path_buf(), offset, kind }
}

/// Parses HMAP1 bytes; `path` only labels errors.
pub fn heatmap_from_bytes(path: &Path, bytes: &[u8]) -> Result<Heatmap, HmapError> {
    let mut at = 0usize;
    let take = |at: &mut usize, n: usize| -> Result<usize, HmapError> {
        if bytes.len() - *at < n {
            return Err(err(
                path,
                bytes.len() as u64,
                HmapErrorKind::Truncated { expected: (n - (bytes.len() - *at)) as u64 },
            ));
        }
        let start = *at;
        *at += n;
        Ok(start)
    };

    let s = take(&mut at, MAGIC.len())?;
    if &bytes[s..s + MAGIC.len()] != MAGIC {
        return Err(err(path, 0, HmapErrorKind::BadMagic));
    }
    let mut dims = [0u32; 3];
    for d in &mut dims {
        let s = take(&mut at, 4)?;
        *d = u32::from_le_bytes(bytes[s..s + 4].try_into().unwrap());
    }
    let [h, w, c] = dims.map(|d| d as usize);

    let mut names = Vec::with_capacity(c);
    for _ in 0..c {
        let start = at;
        let end = bytes[at..]
            .iter()
            .position(|b| *b == 0)
            .map(|p| at + p)
            .ok_or_else(|| err(path, start as u64, HmapErrorKind::UnterminatedName))?;
        let name = std::str::from_utf8(&bytes[start..end])
            .map_err(|_| err(path, start as u64, HmapErrorKind::BadName))?;
        names.push(name.to_string());
        at = end + 1;
    }

    let count = h
        .checked_mul(w)
        .and_then(|hw| hw.checked_mul(c))
        .ok_or_else(|| err(path, 6, HmapErrorKind::Oversized))?;
    let payload = count
        .checked_mul(4)
        .ok_or_else(|| err(path, 6, HmapErrorKind::Oversized))?;
    let s = take(&mut at, payload)?;
    let mut data = Vec::with_capacity(count);
    for i in 0..count {
        let o = s + 4 * i;
        data.push(f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as f64);
    }
    if at != bytes.len() {
        return Err(err(
            path,
            at as u64,
            HmapErrorKind::TrailingData { extra: (bytes.len() - at) as u64 },
        ));
    }

    Heatmap::from_data(h, w, names, data)
        .map_err(|e| err(path, 6, HmapErrorKind::BadDimensions(e.to_string())))
}

/// Serializes a heatmap into HMAP1 bytes.
pub fn heatmap_to_bytes(map: &Heatmap) -> Vec<u8> {
    let (h, w, c) = (map.height(), map.width(), map.channels());
    let mut out = Vec::with_capacity(6 + 12 + map.data().len() * 4);
    out.extend_from_slice(MAGIC);
    for d in [h, w, c] {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for name in map.channel_names() {
        out.extend_from_slice(name.as_bytes());
        out.push(0);
    }
    for v in map.data() {
        out.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    out
}

/// Reads one HMAP1 file.
pub fn read_heatmap(path: &Path) -> Result<Heatmap, HmapError> {
    let bytes = fs::read(path).map_err(|e| err(path, 0, HmapErrorKind::Io(e)))?;
    heatmap_from_bytes(path, &bytes)
}

/// Writes one HMAP1 file.
pub fn write_heatmap(path: &Path, map: &Heatmap) -> Result<(), HmapError> {
    fs::write(path, heatmap_to_bytes(map)).map_err(|e| err(path, 0, HmapErrorKind::Io(e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Heatmap {
        let names = vec!["a".to_string(), "b".to_string()];
        let data: Vec<f64> = (0..3 * 4 * 2).map(|i| i as f64 * 0.25).collect();
        Heatmap::from_data(3, 4, names, data).unwrap()
    }

    #[test]
    fn round_trips_through_bytes() {
        let m = sample();
        let bytes = heatmap_to_bytes(&m);
        let back = heatmap_from_bytes(Path::new("mem"), &bytes).unwrap();
        assert_eq!(back.height(), 3);
        assert_eq!(back.width(), 4);
        assert_eq!(back.channel_names(), m.channel_names());
        // f32 is exact for these values.
        assert_eq!(back.data(), m.data());
    }

    #[test]
    fn rejects_bad_magic_at_offset_zero() {
        let mut bytes = heatmap_to_bytes(&sample());
        bytes[0] = b'X';
        let e = heatmap_from_bytes(Path::new("m"), &bytes).unwrap_err();
        assert_eq!(e.offset, 0);
        assert!(matches!(e.kind, HmapErrorKind::BadMagic));
    }

    #[test]
    fn rejects_truncation_with_expected_count() {
        let bytes = heatmap_to_bytes(&sample());
        let cut = bytes.len() - 5;
        let e = heatmap_from_bytes(Path::new("m"), &bytes[..cut]).unwrap_err();
        assert_eq!(e.offset, cut as u64);
        assert!(matches!(e.kind, HmapErrorKind::Truncated { expected: 5 }));
    }

    #[test]
    fn rejects_trailing_bytes() {
        let mut bytes = heatmap_to_bytes(&sample());
        let at = bytes.len() as u64;
        bytes.extend_from_slice(&[1, 2, 3]);
        let e = heatmap_from_bytes(Path::new("m"), &bytes).unwrap_err();
        assert_eq!(e.offset, at);
        assert!(matches!(e.kind, HmapErrorKind::TrailingData { extra: 3 }));
    }

    #[test]
    fn rejects_unterminated_channel_name() {
        let m = sample();
        let bytes = heatmap_to_bytes(&m);
        // Cut inside the first channel name region.
        let e = heatmap_from_bytes(Path::new("m"), &bytes[..19]).unwrap_err();
        assert!(matches!(
            e.kind,
            HmapErrorKind::UnterminatedName | HmapErrorKind::Truncated { .. }
        ));
    }

    #[test]
    fn rejects_dimension_underflow() {
        // H = 1 violates the in-memory minimum of 2.
        let mut bytes = Vec::new();
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&4u32.to_le_bytes());
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(b"c0\0");
        bytes.extend_from_slice(&[0u8; 4 * 4]);
        let e = heatmap_from_bytes(Path::new("m"), &bytes).unwrap_err();
        assert!(matches!(e.kind, HmapErrorKind::BadDimensions(_)));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.hmap");
        let m = sample();
        write_heatmap(&path, &m).unwrap();
        let back = read_heatmap(&path).unwrap();
        assert_eq!(back.data(), m.data());
    }
}
