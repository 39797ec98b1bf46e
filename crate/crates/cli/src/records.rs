//! JSON-lines pose records, the output of decoding and the input to
//! evaluation.
//!
//! One JSON object per line, one line per frame:
//!
//! ```text
//! {"frame":"f0","poses":[{"joints":{"head":{"x":1.0,"y":2.0,"score":0.9}},
//!  "edges":[{"edge":"head-shaft","score":0.8}]}],
//!  "confidence":{"per_channel":{"head":12.0},"total":12.0}}
//! ```
//!
//! Keys serialize in sorted order, so equal records produce byte-identical
//! lines. Unknown fields are schema errors, not silently dropped.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toolpose_core::decode::InstrumentPose;
use toolpose_core::tv::ConfidenceReport;
use toolpose_core::{Heatmap, SkeletonSpec};

/// One decoded frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseRecord {
    /// Frame identifier, unique within a record file.
    pub frame: String,
    /// Decoded instruments, strongest first.
    pub poses: Vec<PoseEntry>,
    /// Confidence of the raw prediction the poses came from.
    pub confidence: ConfidenceEntry,
}

/// One decoded instrument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseEntry {
    /// Detected joints keyed by joint name.
    pub joints: BTreeMap<String, JointEntry>,
    /// Scored skeleton edges backing the grouping.
    pub edges: Vec<EdgeEntry>,
}

/// One detected joint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointEntry {
    /// Column, in pixels.
    pub x: f64,
    /// Row, in pixels.
    pub y: f64,
    /// Peak score.
    pub score: f64,
}

/// One matched skeleton edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    /// Edge channel name, `a-b`.
    pub edge: String,
    /// Line-integral score.
    pub score: f64,
}

/// Total-variation confidence of the frame's prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfidenceEntry {
    /// Per-channel variation, keyed by channel name.
    pub per_channel: BTreeMap<String, f64>,
    /// Sum over channels.
    pub total: f64,
}

/// Builds the record for one decoded frame.
pub fn pose_record(
    frame: String,
    poses: &[InstrumentPose],
    confidence: &ConfidenceReport,
    map: &Heatmap,
    skeleton: &SkeletonSpec,
) -> PoseRecord {
    let entries = poses
        .iter()
        .map(|pose| PoseEntry {
            joints: pose
                .joints
                .iter()
                .map(|(name, d)| {
                    let entry =
                        JointEntry { x: d.position.x, y: d.position.y, score: d.score };
                    (name.clone(), entry)
                })
                .collect(),
            edges: pose
                .edges
                .iter()
                .map(|&(e, score)| EdgeEntry { edge: skeleton.edge_name(e), score })
                .collect(),
        })
        .collect();
    let per_channel = map
        .channel_names()
        .iter()
        .cloned()
        .zip(confidence.per_channel.iter().copied())
        .collect();
    PoseRecord {
        frame,
        poses: entries,
        confidence: ConfidenceEntry { per_channel, total: confidence.total },
    }
}

/// A parse or IO failure, pinned to a file, line and byte offset.
#[derive(Debug)]
pub struct RecordsError {
    /// File being read.
    pub path: PathBuf,
    /// 1-based line of the failure; 0 for file-level failures.
    pub line: usize,
    /// Byte offset of the offending line's start.
    pub offset: u64,
    /// What went wrong.
    pub kind: RecordsErrorKind,
}

/// Failure cases for record files.
#[derive(Debug)]
pub enum RecordsErrorKind {
    /// Underlying IO failure.
    Io(io::Error),
    /// A line is not a valid record object.
    BadRecord(serde_json::Error),
    /// Two lines carry the same frame id.
    DuplicateFrame(String),
}

impl fmt::Display for RecordsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self.path.display();
        let (line, at) = (self.line, self.offset);
        match &self.kind {
            RecordsErrorKind::Io(e) => write!(f, "{path}: {e}"),
            RecordsErrorKind::BadRecord(e) => {
                write!(f, "{path}: line {line} (byte {at}): {e}")
            }
            RecordsErrorKind::DuplicateFrame(id) => {
                write!(f, "{path}: line {line} (byte {at}): duplicate frame {id}")
            }
        }
    }
}

impl std::error::Error for RecordsError {}

/// Parses record text; `path` only labels errors.
pub fn parse_records(path: &Path, text: &str) -> Result<Vec<PoseRecord>, RecordsError> {
    let err = |line: usize, offset: usize, kind| RecordsError {
        path: path.to_path_buf(),
        line,
        offset: offset as u64,
        kind,
    };
    let mut records: Vec<PoseRecord> = Vec::new();
    let mut offset = 0usize;
    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line_start = offset;
        offset += raw.len() + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let record: PoseRecord = serde_json::from_str(raw)
            .map_err(|e| err(line_no, line_start, RecordsErrorKind::BadRecord(e)))?;
        if records.iter().any(|r| r.frame == record.frame) {
            return Err(err(
                line_no,
                line_start,
                RecordsErrorKind::DuplicateFrame(record.frame),
            ));
        }
        records.push(record);
    }
    Ok(records)
}

/// Serializes one record as a single JSON line (no trailing newline).
pub fn record_to_line(record: &PoseRecord) -> String {
    serde_json::to_string(record).expect("record serialization is infallible")
}

/// Reads one record file.
pub fn read_records(path: &Path) -> Result<Vec<PoseRecord>, RecordsError> {
    let text = fs::read_to_string(path).map_err(|e| RecordsError {
        path: path.to_path_buf(),
        line: 0,
        offset: 0,
        kind: RecordsErrorKind::Io(e),
    })?;
    parse_records(path, &text)
}
