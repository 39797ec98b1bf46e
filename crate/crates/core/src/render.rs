//! Gaussian training-target rendering.
//!
//! Every joint of a skeleton gets a channel holding, per instrument, an
//! isotropic Gaussian blob centred on the annotated position. Every skeleton
//! edge gets a channel holding a Gaussian fall-off of the distance to the
//! segment between its two joints, which forms a stripe connecting them.
//! Multiple instruments compose by pointwise maximum, so overlapping tools
//! never push values above the configured amplitude.

use alloc::string::String;
use alloc::vec;
use core::fmt;

use crate::geometry::{point_segment_distance_sq, FrameSize, Point2};
use crate::heatmap::Heatmap;
use crate::skeleton::{InstrumentAnnotation, SkeletonSpec};

/// Default blob/stripe width in pixels.
pub const DEFAULT_SIGMA: f64 = 20.0;

/// Rendering parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderConfig {
    /// Gaussian width in pixels. Must be `> 0`.
    pub sigma: f64,
    /// Peak value of each blob and stripe. Must be `> 0`.
    pub amplitude: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig { sigma: DEFAULT_SIGMA, amplitude: 1.0 }
    }
}

/// Failures when rendering targets.
#[derive(Debug, Clone, PartialEq)]
pub enum RenderError {
    /// Sigma or amplitude was not strictly positive.
    BadConfig {
        /// Rejected sigma.
        sigma: f64,
        /// Rejected amplitude.
        amplitude: f64,
    },
    /// An annotation used a joint name that is not in the skeleton.
    UnknownJoint(String),
    /// A joint position fell outside the frame.
    OutOfFrame {
        /// Joint name.
        joint: String,
        /// Offending position.
        position: Point2,
    },
    /// Frame too small to carry a heatmap.
    FrameTooSmall(FrameSize),
}

impl fmt::Display for RenderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderError::BadConfig { sigma, amplitude } => {
                write!(f, "render config needs sigma > 0 and amplitude > 0, got sigma={sigma}, amplitude={amplitude}")
            }
            RenderError::UnknownJoint(name) => {
                write!(f, "annotation joint {name:?} is not part of the skeleton")
            }
            RenderError::OutOfFrame { joint, position } => write!(
                f,
                "joint {joint:?} at ({}, {}) lies outside the frame",
                position.x, position.y
            ),
            RenderError::FrameTooSmall(s) => {
                write!(f, "frame {}x{} too small (need at least 2x2)", s.height, s.width)
            }
        }
    }
}

impl core::error::Error for RenderError {}

/// Renders joint and edge target maps for a set of instruments.
///
/// Output channels follow [`SkeletonSpec::channel_names`]: joints first,
/// then edges. Joints missing from an annotation leave no blob; an edge is
/// rendered only when both of its joints are annotated. Rendering is
/// invariant under permutation of `instruments` because channels compose by
/// maximum.
pub fn render_targets(
    instruments: &[InstrumentAnnotation],
    skeleton: &SkeletonSpec,
    frame: FrameSize,
    config: &RenderConfig,
) -> Result<Heatmap, RenderError> {
    if !(config.sigma > 0.0) || !(config.amplitude > 0.0) {
        return Err(RenderError::BadConfig { sigma: config.sigma, amplitude: config.amplitude });
    }
    let mut out = Heatmap::zeros(frame.height, frame.width, skeleton.channel_names())
        .map_err(|_| RenderError::FrameTooSmall(frame))?;

    for annotation in instruments {
        for (name, position) in annotation.joints() {
            if skeleton.joint_index(name).is_none() {
                return Err(RenderError::UnknownJoint(String::from(name)));
            }
            if !frame.contains(position) {
                return Err(RenderError::OutOfFrame {
                    joint: String::from(name),
                    position,
                });
            }
        }
    }

    let inv = 1.0 / (2.0 * config.sigma * config.sigma);
    let n_joints = skeleton.joint_names().len();
    let mut col_weights = vec![0.0; frame.width];
    let mut row_weights = vec![0.0; frame.height];

    for annotation in instruments {
        // Joint blobs: exp(-d^2 / 2 sigma^2) separates into per-axis factors.
        for (j, name) in skeleton.joint_names().iter().enumerate() {
            let Some(p) = annotation.get(name) else { continue };
            for (x, w_) in col_weights.iter_mut().enumerate() {
                let d = x as f64 - p.x;
                *w_ = libm::exp(-d * d * inv);
            }
            for (y, w_) in row_weights.iter_mut().enumerate() {
                let d = y as f64 - p.y;
                *w_ = libm::exp(-d * d * inv);
            }
            for (y, ry) in row_weights.iter().enumerate() {
                for (x, cx) in col_weights.iter().enumerate() {
                    let v = config.amplitude * ry * cx;
                    if v > out.get(x, y, j) {
                        out.set(x, y, j, v);
                    }
                }
            }
        }
        // Edge stripes: Gaussian in the distance to the joint-joint segment.
        for (e, &(a, b)) in skeleton.edges().iter().enumerate() {
            let (Some(pa), Some(pb)) = (
                annotation.get(&skeleton.joint_names()[a]),
                annotation.get(&skeleton.joint_names()[b]),
            ) else {
                continue;
            };
            let c = n_joints + e;
            for y in 0..frame.height {
                for x in 0..frame.width {
                    let d2 =
                        point_segment_distance_sq(Point2::new(x as f64, y as f64), pa, pb);
                    let v = config.amplitude * libm::exp(-d2 * inv);
                    if v > out.get(x, y, c) {
                        out.set(x, y, c, v);
                    }
                }
            }
        }
    }

    Ok(out)
}

/// Convenience for rendering with the default config at a given sigma.
pub fn render_targets_sigma(
    instruments: &[InstrumentAnnotation],
    skeleton: &SkeletonSpec,
    frame: FrameSize,
    sigma: f64,
) -> Result<Heatmap, RenderError> {
    render_targets(instruments, skeleton, frame, &RenderConfig { sigma, ..Default::default() })
}
