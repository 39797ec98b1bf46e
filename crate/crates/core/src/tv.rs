//! Anisotropic total variation as a prediction-confidence measure.
//!
//! For a channel `y` of size `H x W` the measure is the sum of absolute
//! forward differences along both axes, with no padding:
//!
//! ```text
//! V(y) = sum_{i<H-1, j} |y[i+1][j] - y[i][j]| + sum_{i, j<W-1} |y[i][j+1] - y[i][j]|
//! ```
//!
//! Well-formed predictions concentrate probability mass in a few sharp
//! blobs and ridges, which yields a high value; diffuse or washed-out
//! predictions yield a low one. The total over channels is what pseudo-label
//! gating thresholds (see [`crate::ssl`]).

use alloc::vec::Vec;

use crate::heatmap::Heatmap;

/// Total-variation confidence of one map.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceReport {
    /// Variation of each channel, in channel order.
    pub per_channel: Vec<f64>,
    /// Sum over channels.
    pub total: f64,
}

/// Computes per-channel and total anisotropic total variation.
///
/// Scale-homogeneous: scaling a map by `a >= 0` scales every component by
/// `a`. Constant channels measure exactly zero.
pub fn total_variation(map: &Heatmap) -> ConfidenceReport {
    let (h, w, c) = (map.height(), map.width(), map.channels());
    let data = map.data();
    let row_stride = w * c;
    let mut per_channel = alloc::vec![0.0; c];

    for y in 0..h {
        let row = y * row_stride;
        for x in 0..w {
            let px = row + x * c;
            for ch in 0..c {
                let v = data[px + ch];
                if y + 1 < h {
                    per_channel[ch] += (data[px + row_stride + ch] - v).abs();
                }
                if x + 1 < w {
                    per_channel[ch] += (data[px + c + ch] - v).abs();
                }
            }
        }
    }

    let total = per_channel.iter().sum();
    ConfidenceReport { per_channel, total }
}
