//! Instrument skeleton descriptions and per-instrument joint annotations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::Point2;

/// Validation failures when constructing a [`SkeletonSpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    /// Joint list was empty.
    NoJoints,
    /// A joint name was empty or contained whitespace.
    BadJointName(String),
    /// Two joints share a name.
    DuplicateJoint(String),
    /// An edge referenced a joint index outside the joint list.
    EdgeOutOfRange(usize, usize),
    /// An edge connected a joint to itself.
    SelfEdge(usize),
    /// The same joint pair appeared twice (in either orientation).
    DuplicateEdge(usize, usize),
}

impl fmt::Display for SkeletonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkeletonError::NoJoints => write!(f, "skeleton has no joints"),
            SkeletonError::BadJointName(name) => {
                write!(f, "bad joint name {name:?} (must be non-empty, no whitespace)")
            }
            SkeletonError::DuplicateJoint(name) => write!(f, "duplicate joint name {name:?}"),
            SkeletonError::EdgeOutOfRange(a, b) => {
                write!(f, "edge ({a}, {b}) references a joint out of range")
            }
            SkeletonError::SelfEdge(a) => write!(f, "edge connects joint {a} to itself"),
            SkeletonError::DuplicateEdge(a, b) => write!(f, "duplicate edge ({a}, {b})"),
        }
    }
}

impl core::error::Error for SkeletonError {}

/// Joint names plus the joint pairs that form instrument parts.
///
/// Channel layout derived from a skeleton is always: one channel per joint in
/// declaration order, then one channel per edge in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonSpec {
    joint_names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl SkeletonSpec {
    /// Builds a skeleton, validating names and edges.
    pub fn new(joint_names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, SkeletonError> {
        if joint_names.is_empty() {
            return Err(SkeletonError::NoJoints);
        }
        for name in &joint_names {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(SkeletonError::BadJointName(name.clone()));
            }
        }
        for (i, name) in joint_names.iter().enumerate() {
            if joint_names[..i].contains(name) {
                return Err(SkeletonError::DuplicateJoint(name.clone()));
            }
        }
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= joint_names.len() || b >= joint_names.len() {
                return Err(SkeletonError::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(SkeletonError::SelfEdge(a));
            }
            if edges[..i].iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                return Err(SkeletonError::DuplicateEdge(a, b));
            }
        }
        Ok(SkeletonSpec { joint_names, edges })
    }

    /// Five-joint laparoscopic tool skeleton with four edges.
    pub fn endovis() -> Self {
        let joints = ["left_clasper", "right_clasper", "head", "shaft", "end"];
        let names = joints.iter().map(|s| s.to_string()).collect();
        // left_clasper-head, right_clasper-head, head-shaft, shaft-end
        let edges = alloc::vec![(0, 2), (1, 2), (2, 3), (3, 4)];
        SkeletonSpec::new(names, edges).expect("built-in skeleton is valid")
    }

    /// Four-joint retinal tool skeleton; joints only, no edges.
    pub fn rmit() -> Self {
        let joints = ["tip1", "tip2", "shaft", "end"];
        let names = joints.iter().map(|s| s.to_string()).collect();
        SkeletonSpec::new(names, Vec::new()).expect("built-in skeleton is valid")
    }

    /// Joint names in channel order.
    pub fn joint_names(&self) -> &[String] {
        &self.joint_names
    }

    /// Edges as joint index pairs, in channel order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Index of the named joint.
    pub fn joint_index(&self, name: &str) -> Option<usize> {
        self.joint_names.iter().position(|n| n == name)
    }

    /// Display name of edge `e`, e.g. `left_clasper-head`.
    pub fn edge_name(&self, e: usize) -> String {
        let (a, b) = self.edges[e];
        format!("{}-{}", self.joint_names[a], self.joint_names[b])
    }

    /// Heatmap channel names: all joints, then all edges.
    pub fn channel_names(&self) -> Vec<String> {
        let mut names = self.joint_names.clone();
        names.extend((0..self.edges.len()).map(|e| self.edge_name(e)));
        names
    }

    /// Total channel count (`joints + edges`).
    pub fn channel_count(&self) -> usize {
        self.joint_names.len() + self.edges.len()
    }
}

/// Name of the joint a given joint maps to under a horizontal mirror.
///
/// Swaps a leading `left`/`right` (or capitalised `Left`/`Right`) marker and
/// leaves other names unchanged, so `left_clasper` becomes `right_clasper`
/// while `shaft` stays `shaft`. Applying the mapping twice is the identity.
pub fn mirror_joint_name(name: &str) -> String {
    for (from, to) in [
        ("left", "right"),
        ("right", "left"),
        ("Left", "Right"),
        ("Right", "Left"),
    ] {
        if let Some(rest) = name.strip_prefix(from) {
            return format!("{to}{rest}");
        }
    }
    name.to_string()
}

/// Joint positions of one instrument, keyed by joint name.
///
/// Joints may be missing (partially visible instruments); ordering is always
/// by name, which keeps downstream output deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstrumentAnnotation {
    joints: BTreeMap<String, Point2>,
}

impl InstrumentAnnotation {
    /// Creates an empty annotation.
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an annotation from `(name, position)` pairs.
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Point2)>,
        S: Into<String>,
    {
        let mut a = Self::new();
        for (name, p) in pairs {
            a.set(name, p);
        }
        a
    }

    /// Inserts or replaces a joint position.
    pub fn set(&mut self, name: impl Into<String>, position: Point2) {
        self.joints.insert(name.into(), position);
    }

    /// Position of the named joint, if annotated.
    pub fn get(&self, name: &str) -> Option<Point2> {
        self.joints.get(name).copied()
    }

    /// Removes a joint, returning its position if it was present.
    pub fn remove(&mut self, name: &str) -> Option<Point2> {
        self.joints.remove(name)
    }

    /// Iterates `(name, position)` in name order.
    pub fn joints(&self) -> impl Iterator<Item = (&str, Point2)> {
        self.joints.iter().map(|(n, p)| (n.as_str(), *p))
    }

    /// Number of annotated joints.
    pub fn len(&self) -> usize {
        self.joints.len()
    }

    /// True when no joints are annotated.
    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }
}
