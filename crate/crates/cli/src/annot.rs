//! Line-oriented joint annotations.
//!
//! One joint per line, five whitespace-separated tokens:
//!
//! ```text
//! frame_id  instrument_index  joint_name  x  y
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Joint names must be
//! whitespace-free (all built-in skeletons are). A file may carry any number
//! of frames; instruments are numbered within their frame and need not be
//! contiguous. Writers emit frames and joints in sorted order so equal data
//! produces byte-identical files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use toolpose_core::{InstrumentAnnotation, Point2};

/// Annotations of a whole dataset, keyed by frame id.
pub type FrameAnnotations = BTreeMap<String, Vec<InstrumentAnnotation>>;

/// A parse or IO failure, pinned to a file, line and byte offset.
#[derive(Debug)]
pub struct AnnotError {
    /// File being read or written.
    pub path: PathBuf,
    /// 1-based line of the failure; 0 for file-level failures.
    pub line: usize,
    /// Byte offset of the offending line's start.
    pub offset: u64,
    /// What went wrong.
    pub kind: AnnotErrorKind,
}

/// Failure cases for annotation files.
#[derive(Debug)]
pub enum AnnotErrorKind {
    /// Underlying IO failure.
    Io(io::Error),
    /// A line did not split into five tokens.
    FieldCount(usize),
    /// The instrument index is not an unsigned integer.
    BadIndex,
    /// A coordinate is not a finite number.
    BadCoordinate(&'static str),
    /// The same joint appeared twice for one instrument.
    DuplicateJoint {
        /// Frame the duplicate is in.
        frame: String,
        /// Instrument the duplicate is in.
        instrument: usize,
        /// Repeated joint name.
        joint: String,
    },
}

impl fmt::Display for AnnotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self.path.display();
        let (line, at) = (self.line, self.offset);
        match &self.kind {
            AnnotErrorKind::Io(e) => write!(f, "{path}: {e}"),
            AnnotErrorKind::FieldCount(n) => {
                write!(f, "{path}: line {line} (byte {at}): expected 5 fields, got {n}")
            }
            AnnotErrorKind::BadIndex => {
                write!(f, "{path}: line {line} (byte {at}): instrument index is not an integer")
            }
            AnnotErrorKind::BadCoordinate(axis) => {
                write!(f, "{path}: line {line} (byte {at}): {axis} is not a finite number")
            }
            AnnotErrorKind::DuplicateJoint { frame, instrument, joint } => write!(
                f,
                "{path}: line {line} (byte {at}): joint {joint} repeated for \
                 instrument {instrument} of frame {frame}"
            ),
        }
    }
}

impl std::error::Error for AnnotError {}

/// Parses annotation text; `path` only labels errors.
pub fn parse_annotations(path: &Path, text: &str) -> Result<FrameAnnotations, AnnotError> {
    let err = |line: usize, offset: usize, kind| AnnotError {
        path: path.to_path_buf(),
        line,
        offset: offset as u64,
        kind,
    };
    // frame -> instrument index -> annotation, re-packed densely below.
    let mut frames: BTreeMap<String, BTreeMap<usize, InstrumentAnnotation>> = BTreeMap::new();
    let mut offset = 0usize;
    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line_start = offset;
        offset += raw.len() + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 5 {
            return Err(err(line_no, line_start, AnnotErrorKind::FieldCount(tokens.len())));
        }
        let index: usize = tokens[1]
            .parse()
            .map_err(|_| err(line_no, line_start, AnnotErrorKind::BadIndex))?;
        let parse_coord = |token: &str, axis| -> Result<f64, AnnotError> {
            token
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(line_no, line_start, AnnotErrorKind::BadCoordinate(axis)))
        };
        let x = parse_coord(tokens[3], "x")?;
        let y = parse_coord(tokens[4], "y")?;
        let instrument = frames
            .entry(tokens[0].to_string())
            .or_default()
            .entry(index)
            .or_default();
        if instrument.get(tokens[2]).is_some() {
            return Err(err(
                line_no,
                line_start,
                AnnotErrorKind::DuplicateJoint {
                    frame: tokens[0].to_string(),
                    instrument: index,
                    joint: tokens[2].to_string(),
                },
            ));
        }
        instrument.set(tokens[2], Point2::new(x, y));
    }
    Ok(frames
        .into_iter()
        .map(|(id, by_index)| (id, by_index.into_values().collect()))
        .collect())
}

/// Serializes annotations; inverse of [`parse_annotations`].
pub fn annotations_to_string(frames: &FrameAnnotations) -> String {
    let mut out = String::from("# frame_id instrument_index joint_name x y\n");
    for (id, instruments) in frames {
        for (index, ann) in instruments.iter().enumerate() {
            for (joint, p) in ann.joints() {
                out.push_str(&format!("{id} {index} {joint} {} {}\n", p.x, p.y));
            }
        }
    }
    out
}

/// Reads one annotation file.
pub fn read_annotations(path: &Path) -> Result<FrameAnnotations, AnnotError> {
    let text = fs::read_to_string(path).map_err(|e| AnnotError {
        path: path.to_path_buf(),
        line: 0,
        offset: 0,
        kind: AnnotErrorKind::Io(e),
    })?;
    parse_annotations(path, &text)
}

/// Writes one annotation file.
pub fn write_annotations(path: &Path, frames: &FrameAnnotations) -> Result<(), AnnotError> {
    fs::write(path, annotations_to_string(frames)).map_err(|e| AnnotError {
        path: path.to_path_buf(),
        line: 0,
        offset: 0,
        kind: AnnotErrorKind::Io(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FrameAnnotations {
        let mut a = InstrumentAnnotation::new();
        a.set("head", Point2::new(10.0, 20.5));
        a.set("shaft", Point2::new(30.0, 40.0));
        let mut b = InstrumentAnnotation::new();
        b.set("head", Point2::new(100.0, 120.0));
        let mut frames = FrameAnnotations::new();
        frames.insert("f0".to_string(), vec![a, b]);
        frames
    }

    #[test]
    fn round_trips_through_text() {
        let frames = sample();
        let text = annotations_to_string(&frames);
        let back = parse_annotations(Path::new("m"), &text).unwrap();
        assert_eq!(back, frames);
    }

    #[test]
    fn serialization_is_stable() {
        let frames = sample();
        assert_eq!(annotations_to_string(&frames), annotations_to_string(&frames.clone()));
    }

    #[test]
    fn comments_blanks_and_sparse_indices_are_accepted() {
        let text = "# header\n\nf0 4 head 1 2\nf0 1 head 3 4\n";
        let frames = parse_annotations(Path::new("m"), text).unwrap();
        // Indices 1 and 4 pack densely, lowest index first.
        let instruments = &frames["f0"];
        assert_eq!(instruments.len(), 2);
        assert_eq!(instruments[0].get("head"), Some(Point2::new(3.0, 4.0)));
        assert_eq!(instruments[1].get("head"), Some(Point2::new(1.0, 2.0)));
    }

    #[test]
    fn reports_field_count_with_line_and_offset() {
        let text = "f0 0 head 1 2\nf0 0 shaft 3\n";
        let e = parse_annotations(Path::new("m"), text).unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.offset, 14);
        assert!(matches!(e.kind, AnnotErrorKind::FieldCount(4)));
    }

    #[test]
    fn rejects_non_finite_coordinates_and_bad_indices() {
        let e = parse_annotations(Path::new("m"), "f0 0 head inf 2\n").unwrap_err();
        assert!(matches!(e.kind, AnnotErrorKind::BadCoordinate("x")));
        let e = parse_annotations(Path::new("m"), "f0 -1 head 1 2\n").unwrap_err();
        assert!(matches!(e.kind, AnnotErrorKind::BadIndex));
    }

    #[test]
    fn rejects_duplicate_joints() {
        let text = "f0 0 head 1 2\nf0 0 head 3 4\n";
        let e = parse_annotations(Path::new("m"), text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, AnnotErrorKind::DuplicateJoint { .. }));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        let frames = sample();
        write_annotations(&path, &frames).unwrap();
        assert_eq!(read_annotations(&path).unwrap(), frames);
    }
}
