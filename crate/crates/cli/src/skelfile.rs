//! Skeleton definition files and the built-in presets.
//!
//! Two directives, one per line, with `#` comments and blank lines allowed:
//!
//! ```text
//! joint left_clasper
//! joint head
//! edge  left_clasper head
//! ```
//!
//! Joints must be declared before edges reference them; declaration order is
//! channel order. The strings `endovis` and `rmit` resolve to the built-in
//! skeletons instead of a file.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use toolpose_core::skeleton::SkeletonError;
use toolpose_core::SkeletonSpec;

/// A parse or IO failure, pinned to a file, line and byte offset.
#[derive(Debug)]
pub struct SkelFileError {
    /// File being read.
    pub path: PathBuf,
    /// 1-based line of the failure; 0 for file-level failures.
    pub line: usize,
    /// Byte offset of the offending line's start.
    pub offset: u64,
    /// What went wrong.
    pub kind: SkelFileErrorKind,
}

/// Failure cases for skeleton files.
#[derive(Debug)]
pub enum SkelFileErrorKind {
    /// Underlying IO failure.
    Io(io::Error),
    /// A line started with something other than `joint` or `edge`.
    UnknownDirective(String),
    /// Wrong token count for the directive.
    FieldCount {
        /// Directive on the line.
        directive: &'static str,
        /// Tokens required (including the directive).
        expected: usize,
        /// Tokens found.
        got: usize,
    },
    /// An edge referenced a joint that was never declared.
    UnknownJoint(String),
    /// The assembled skeleton violates a structural rule.
    Invalid(SkeletonError),
}

impl fmt::Display for SkelFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = self.path.display();
        let (line, at) = (self.line, self.offset);
        match &self.kind {
            SkelFileErrorKind::Io(e) => write!(f, "{path}: {e}"),
            SkelFileErrorKind::UnknownDirective(d) => {
                write!(f, "{path}: line {line} (byte {at}): unknown directive {d:?}")
            }
            SkelFileErrorKind::FieldCount { directive, expected, got } => write!(
                f,
                "{path}: line {line} (byte {at}): {directive} takes {} tokens, got {}",
                expected - 1,
                got - 1
            ),
            SkelFileErrorKind::UnknownJoint(j) => {
                write!(f, "{path}: line {line} (byte {at}): edge references unknown joint {j}")
            }
            SkelFileErrorKind::Invalid(e) => {
                write!(f, "{path}: line {line} (byte {at}): {e}")
            }
        }
    }
}

impl std::error::Error for SkelFileError {}

/// Parses skeleton text; `path` only labels errors.
pub fn parse_skeleton(path: &Path, text: &str) -> Result<SkeletonSpec, SkelFileError> {
    let err = |line: usize, offset: usize, kind| SkelFileError {
        path: path.to_path_buf(),
        line,
        offset: offset as u64,
        kind,
    };
    let mut joints: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut offset = 0usize;
    let mut last_line = 0;
    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line_start = offset;
        offset += raw.len() + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "joint" => {
                if tokens.len() != 2 {
                    return Err(err(
                        line_no,
                        line_start,
                        SkelFileErrorKind::FieldCount {
                            directive: "joint",
                            expected: 2,
                            got: tokens.len(),
                        },
                    ));
                }
                joints.push(tokens[1].to_string());
            }
            "edge" => {
                if tokens.len() != 3 {
                    return Err(err(
                        line_no,
                        line_start,
                        SkelFileErrorKind::FieldCount {
                            directive: "edge",
                            expected: 3,
                            got: tokens.len(),
                        },
                    ));
                }
                let resolve = |name: &str| -> Result<usize, SkelFileError> {
                    joints.iter().position(|j| j == name).ok_or_else(|| {
                        err(line_no, line_start, SkelFileErrorKind::UnknownJoint(name.to_string()))
                    })
                };
                let a = resolve(tokens[1])?;
                let b = resolve(tokens[2])?;
                edges.push((a, b));
            }
            other => {
                return Err(err(
                    line_no,
                    line_start,
                    SkelFileErrorKind::UnknownDirective(other.to_string()),
                ));
            }
        }
    }
    SkeletonSpec::new(joints, edges)
        .map_err(|e| err(last_line, 0, SkelFileErrorKind::Invalid(e)))
}

/// Resolves a skeleton selector: `endovis`, `rmit`, or a file path.
pub fn load_skeleton(selector: &str) -> Result<SkeletonSpec, SkelFileError> {
    match selector {
        "endovis" => Ok(SkeletonSpec::endovis()),
        "rmit" => Ok(SkeletonSpec::rmit()),
        path => {
            let path = Path::new(path);
            let text = fs::read_to_string(path).map_err(|e| SkelFileError {
                path: path.to_path_buf(),
                line: 0,
                offset: 0,
                kind: SkelFileErrorKind::Io(e),
            })?;
            parse_skeleton(path, &text)
        }
    }
}

/// Serializes a skeleton; inverse of [`parse_skeleton`].
pub fn skeleton_to_string(skeleton: &SkeletonSpec) -> String {
    let mut out = String::new();
    for joint in skeleton.joint_names() {
        out.push_str(&format!("joint {joint}\n"));
    }
    for &(a, b) in skeleton.edges() {
        out.push_str(&format!(
            "edge {} {}\n",
            skeleton.joint_names()[a],
            skeleton.joint_names()[b]
        ));
    }
    out
}
