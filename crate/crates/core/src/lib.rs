//! Numeric core for heatmap-based 2D pose estimation of surgical instruments.
//!
//! Everything in this crate operates on in-memory buffers and is `no_std`
//! (requires `alloc`). File formats, configuration files and the command-line
//! front end live in the companion `toolpose` crate.
//!
//! The pipeline this crate supports, end to end:
//!
//! 1. [`render::render_targets`] turns joint annotations into Gaussian
//!    heatmaps (one channel per joint, one per skeleton edge).
//! 2. [`decode::parse_instruments`] recovers per-instrument poses from
//!    predicted maps: smoothing, non-maximum suppression, line-integral
//!    scoring of joint pairs, optimal assignment and grouping.
//! 3. [`tv::total_variation`] measures prediction confidence; [`ssl`]
//!    gates pseudo-labels on it and carries the mean-teacher update.
//! 4. [`augment`] provides the label-preserving geometric and photometric
//!    transforms used during training, including two-frame instrument
//!    swapping.
//! 5. [`eval`] scores predictions against ground truth with optimal
//!    per-joint matching.
//!
//! All randomized operations take an explicit `u64` seed and are
//! deterministic for a given seed, input and crate version.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod assign;
pub mod augment;
pub mod decode;
pub mod eval;
pub mod filter;
pub mod geometry;
pub mod heatmap;
pub mod nn;
pub mod render;
pub mod skeleton;
pub mod ssl;
pub mod synth;
pub mod tv;

mod rng;

pub use geometry::{FrameSize, Point2};
pub use heatmap::{Heatmap, HeatmapError};
pub use skeleton::{InstrumentAnnotation, SkeletonSpec};
