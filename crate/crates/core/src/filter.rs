//! Separable Gaussian smoothing, high-boost sharpening and label noise.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::heatmap::Heatmap;
use crate::rng::rng_from_seed;

/// Default amplitude for [`add_label_noise`] during training.
pub const DEFAULT_LABEL_NOISE_AMPLITUDE: f64 = 0.01;

/// Default boost factor for [`high_boost`].
pub const DEFAULT_HIGH_BOOST_K: f64 = 1.0;

/// Default sigma of the low-pass stage inside [`high_boost`].
pub const DEFAULT_HIGH_BOOST_SIGMA: f64 = 2.0;

/// Parameter failures for filtering operations.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterError {
    /// Gaussian sigma must be strictly positive.
    NonPositiveSigma(f64),
    /// Boost factor must be non-negative.
    NegativeBoost(f64),
    /// Noise amplitude must be non-negative.
    NegativeAmplitude(f64),
}

impl fmt::Display for FilterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterError::NonPositiveSigma(s) => write!(f, "sigma must be > 0, got {s}"),
            FilterError::NegativeBoost(k) => write!(f, "boost factor must be >= 0, got {k}"),
            FilterError::NegativeAmplitude(a) => {
                write!(f, "noise amplitude must be >= 0, got {a}")
            }
        }
    }
}

impl core::error::Error for FilterError {}

/// Normalized 1D Gaussian taps for `sigma`, truncated at radius
/// `ceil(3 sigma)`. Always has odd length `2r + 1`.
pub(crate) fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    debug_assert!(sigma > 0.0);
    let radius = libm::ceil(3.0 * sigma) as usize;
    let radius = radius.max(1);
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut taps: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let d = i as f64 - radius as f64;
            libm::exp(-d * d * inv)
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// One separable pass over a `height x width` plane with replicated borders.
fn smooth_plane(src: &[f64], dst: &mut [f64], height: usize, width: usize, taps: &[f64]) {
    let radius = taps.len() / 2;
    let mut tmp = vec![0.0; src.len()];
    // Horizontal pass.
    for y in 0..height {
        let row = y * width;
        for x in 0..width {
            let mut acc = 0.0;
            for (i, t) in taps.iter().enumerate() {
                let sx = (x + i).saturating_sub(radius).min(width - 1);
                acc += t * src[row + sx];
            }
            tmp[row + x] = acc;
        }
    }
    // Vertical pass.
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for (i, t) in taps.iter().enumerate() {
                let sy = (y + i).saturating_sub(radius).min(height - 1);
                acc += t * tmp[sy * width + x];
            }
            dst[y * width + x] = acc;
        }
    }
}

/// Gaussian-smooths every channel of `map`.
///
/// Replicated borders keep the filter mass-preserving on constant inputs:
/// a constant map comes back bitwise unchanged up to tap normalization.
pub fn gaussian_smooth(map: &Heatmap, sigma: f64) -> Result<Heatmap, FilterError> {
    let channels: Vec<usize> = (0..map.channels()).collect();
    gaussian_smooth_channels(map, &channels, sigma)
}

/// Gaussian-smooths only the listed channels, copying the rest through.
pub fn gaussian_smooth_channels(
    map: &Heatmap,
    channels: &[usize],
    sigma: f64,
) -> Result<Heatmap, FilterError> {
    if !(sigma > 0.0) {
        return Err(FilterError::NonPositiveSigma(sigma));
    }
    let taps = gaussian_kernel(sigma);
    let (h, w) = (map.height(), map.width());
    let mut out = map.clone();
    let mut src = vec![0.0; h * w];
    let mut dst = vec![0.0; h * w];
    for &c in channels {
        map.copy_channel(c, &mut src).expect("channel in range");
        smooth_plane(&src, &mut dst, h, w, &taps);
        out.set_channel(c, &dst).expect("channel in range");
    }
    Ok(out)
}

/// High-boost sharpening: `clamp(map + k * (map - smooth(map, sigma)), 0, 1)`.
///
/// `k = 0` reduces to the identity up to the final clamp.
pub fn high_boost(map: &Heatmap, k: f64, sigma: f64) -> Result<Heatmap, FilterError> {
    let channels: Vec<usize> = (0..map.channels()).collect();
    high_boost_channels(map, &channels, k, sigma)
}

/// High-boost sharpening restricted to the listed channels.
pub fn high_boost_channels(
    map: &Heatmap,
    channels: &[usize],
    k: f64,
    sigma: f64,
) -> Result<Heatmap, FilterError> {
    if k < 0.0 {
        return Err(FilterError::NegativeBoost(k));
    }
    if !(sigma > 0.0) {
        return Err(FilterError::NonPositiveSigma(sigma));
    }
    let taps = gaussian_kernel(sigma);
    let (h, w) = (map.height(), map.width());
    let mut out = map.clone();
    let mut src = vec![0.0; h * w];
    let mut low = vec![0.0; h * w];
    for &c in channels {
        map.copy_channel(c, &mut src).expect("channel in range");
        smooth_plane(&src, &mut low, h, w, &taps);
        let boosted: Vec<f64> = src
            .iter()
            .zip(low.iter())
            .map(|(v, l)| (v + k * (v - l)).clamp(0.0, 1.0))
            .collect();
        out.set_channel(c, &boosted).expect("channel in range");
    }
    Ok(out)
}

/// Adds seeded uniform noise in `[-amplitude, amplitude]` to every value.
///
/// Draws follow the buffer layout (row-major, channel-last), so a given
/// `(map shape, seed)` always produces the same perturbation. Amplitude 0 is
/// the exact identity.
pub fn add_label_noise(map: &Heatmap, amplitude: f64, seed: u64) -> Result<Heatmap, FilterError> {
    if amplitude < 0.0 {
        return Err(FilterError::NegativeAmplitude(amplitude));
    }
    let mut out = map.clone();
    if amplitude == 0.0 {
        return Ok(out);
    }
    let mut rng = rng_from_seed(seed);
    for v in out.data_mut() {
        *v += rng.random_range(-amplitude..=amplitude);
    }
    Ok(out)
}
