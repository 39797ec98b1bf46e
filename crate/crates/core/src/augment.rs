//! Label-preserving training augmentations.
//!
//! All geometric transforms move the image and its joint annotations with
//! the same map, so targets rendered from transformed annotations agree
//! with transformed targets. Joints pushed outside the frame are dropped,
//! and instruments that lose all joints disappear entirely.
//!
//! [`random_swap`] builds a new two-instrument scene by cutting two frames
//! vertically at a clasper and splicing the left part of one onto the right
//! part of the other, padding or cropping columns to keep the original
//! width.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::geometry::{FrameSize, Point2};
use crate::rng::rng_from_seed;
use crate::skeleton::{mirror_joint_name, InstrumentAnnotation};

/// Default expansion factor for [`bbox_from_joints`].
pub const DEFAULT_BBOX_ALPHA: f64 = 1.0;

/// An RGB image with its per-instrument joint annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// Number of columns.
    pub width: usize,
    /// Number of rows.
    pub height: usize,
    /// Row-major RGB bytes, `height * width * 3`.
    pub pixels: Vec<u8>,
    /// Instruments visible in the frame.
    pub annotations: Vec<InstrumentAnnotation>,
}

/// Failures in augmentation operations.
#[derive(Debug, Clone, PartialEq)]
pub enum AugmentError {
    /// Pixel buffer length does not match the dimensions.
    PixelLength {
        /// Required length.
        expected: usize,
        /// Provided length.
        got: usize,
    },
    /// A translation exceeded the configured cap.
    TranslationBeyondCap {
        /// Requested shift.
        requested: (i64, i64),
        /// Allowed magnitude per axis.
        cap: i64,
    },
    /// A rotation exceeded the configured cap.
    RotationBeyondCap {
        /// Requested angle in degrees.
        requested: f64,
        /// Allowed magnitude.
        cap: f64,
    },
    /// Frames passed to a swap differ in size.
    SizeMismatch,
    /// A split column fell outside `[0, width]`.
    SplitOutOfRange {
        /// Rejected split.
        split: usize,
        /// Frame width.
        width: usize,
    },
    /// A frame had no clasper joint to split at.
    NoClasper,
    /// A bounding box needs at least one joint.
    NoJoints,
    /// Expansion factor must be non-negative.
    NegativeAlpha(f64),
}

impl fmt::Display for AugmentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AugmentError::PixelLength { expected, got } => {
                write!(f, "pixel buffer length {got}, expected {expected}")
            }
            AugmentError::TranslationBeyondCap { requested, cap } => write!(
                f,
                "translation ({}, {}) beyond cap {cap}",
                requested.0, requested.1
            ),
            AugmentError::RotationBeyondCap { requested, cap } => {
                write!(f, "rotation {requested} deg beyond cap {cap} deg")
            }
            AugmentError::SizeMismatch => write!(f, "frames differ in size"),
            AugmentError::SplitOutOfRange { split, width } => {
                write!(f, "split column {split} outside [0, {width}]")
            }
            AugmentError::NoClasper => write!(f, "no clasper joint to split at"),
            AugmentError::NoJoints => write!(f, "bounding box needs at least one joint"),
            AugmentError::NegativeAlpha(a) => write!(f, "alpha must be >= 0, got {a}"),
        }
    }
}

impl core::error::Error for AugmentError {}

/// Caps for the randomized geometric transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentConfig {
    /// Maximum translation magnitude per axis, in pixels.
    pub max_translate: i64,
    /// Maximum rotation magnitude, in degrees.
    pub max_rotate_deg: f64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig { max_translate: 5, max_rotate_deg: 20.0 }
    }
}

/// Image resampling used by [`rotate_sampled`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageSampling {
    /// Nearest source pixel. The only mode valid for label maps, which must
    /// not invent intermediate probabilities.
    Nearest,
    /// Bilinear blend of the four surrounding pixels. Images only.
    Bilinear,
}

impl Frame {
    /// Builds a frame, checking the pixel buffer length.
    pub fn new(
        width: usize,
        height: usize,
        pixels: Vec<u8>,
        annotations: Vec<InstrumentAnnotation>,
    ) -> Result<Self, AugmentError> {
        let expected = width * height * 3;
        if pixels.len() != expected {
            return Err(AugmentError::PixelLength { expected, got: pixels.len() });
        }
        Ok(Frame { width, height, pixels, annotations })
    }

    /// Black frame of the given size.
    pub fn zeros(width: usize, height: usize) -> Self {
        Frame { width, height, pixels: vec![0; width * height * 3], annotations: Vec::new() }
    }

    /// Frame dimensions.
    pub fn size(&self) -> FrameSize {
        FrameSize::new(self.height, self.width)
    }

    /// RGB triple at `(x, y)`.
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    /// Sets the RGB triple at `(x, y)`.
    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }

    fn retain_in_bounds(&mut self) {
        let size = self.size();
        for ann in &mut self.annotations {
            let dropped: Vec<String> = ann
                .joints()
                .filter(|&(_, p)| !size.contains(p))
                .map(|(n, _)| String::from(n))
                .collect();
            for name in dropped {
                ann.remove(&name);
            }
        }
        self.annotations.retain(|a| !a.is_empty());
    }
}

/// Horizontal mirror of the frame and its annotations.
///
/// Pixel columns reverse; joint x becomes `width - 1 - x` and left/right
/// joint names swap, so a mirrored left clasper is annotated as the right
/// clasper. Applying the flip twice restores the frame exactly (joints with
/// `x > width - 1`, which would mirror to negative positions, are dropped).
pub fn flip_h(frame: &Frame) -> Frame {
    let mut out = Frame::zeros(frame.width, frame.height);
    for y in 0..frame.height {
        for x in 0..frame.width {
            out.set_pixel(frame.width - 1 - x, y, frame.pixel(x, y));
        }
    }
    let last = (frame.width - 1) as f64;
    out.annotations = frame
        .annotations
        .iter()
        .map(|ann| {
            InstrumentAnnotation::from_pairs(
                ann.joints()
                    .map(|(name, p)| (mirror_joint_name(name), Point2::new(last - p.x, p.y))),
            )
        })
        .collect();
    out.retain_in_bounds();
    out
}

/// Integer translation by `(dx, dy)` with zero fill.
///
/// Joints shift by the same offset; any that leave the frame are dropped.
pub fn translate(
    frame: &Frame,
    dx: i64,
    dy: i64,
    config: &AugmentConfig,
) -> Result<Frame, AugmentError> {
    if dx.abs() > config.max_translate || dy.abs() > config.max_translate {
        return Err(AugmentError::TranslationBeyondCap {
            requested: (dx, dy),
            cap: config.max_translate,
        });
    }
    let mut out = Frame::zeros(frame.width, frame.height);
    for y in 0..frame.height as i64 {
        let sy = y - dy;
        if sy < 0 || sy >= frame.height as i64 {
            continue;
        }
        for x in 0..frame.width as i64 {
            let sx = x - dx;
            if sx < 0 || sx >= frame.width as i64 {
                continue;
            }
            out.set_pixel(x as usize, y as usize, frame.pixel(sx as usize, sy as usize));
        }
    }
    out.annotations = frame
        .annotations
        .iter()
        .map(|ann| {
            InstrumentAnnotation::from_pairs(
                ann.joints()
                    .map(|(name, p)| (name, Point2::new(p.x + dx as f64, p.y + dy as f64))),
            )
        })
        .collect();
    out.retain_in_bounds();
    Ok(out)
}

/// Rotation about the frame centre with nearest-neighbour resampling.
///
/// Positive angles rotate from the +x axis towards +y (clockwise on screen,
/// where y points down). See [`rotate_sampled`] to choose the resampling.
pub fn rotate(frame: &Frame, degrees: f64, config: &AugmentConfig) -> Result<Frame, AugmentError> {
    rotate_sampled(frame, degrees, ImageSampling::Nearest, config)
}

/// Rotation with an explicit resampling mode.
pub fn rotate_sampled(
    frame: &Frame,
    degrees: f64,
    sampling: ImageSampling,
    config: &AugmentConfig,
) -> Result<Frame, AugmentError> {
    if degrees.abs() > config.max_rotate_deg {
        return Err(AugmentError::RotationBeyondCap {
            requested: degrees,
            cap: config.max_rotate_deg,
        });
    }
    let theta = degrees * core::f64::consts::PI / 180.0;
    let (sin, cos) = (libm::sin(theta), libm::cos(theta));
    let cx = (frame.width - 1) as f64 / 2.0;
    let cy = (frame.height - 1) as f64 / 2.0;

    let mut out = Frame::zeros(frame.width, frame.height);
    for y in 0..frame.height {
        for x in 0..frame.width {
            // Inverse map: rotate the output pixel back by -theta.
            let rx = x as f64 - cx;
            let ry = y as f64 - cy;
            let sx = cx + rx * cos + ry * sin;
            let sy = cy - rx * sin + ry * cos;
            let rgb = match sampling {
                ImageSampling::Nearest => {
                    let nx = libm::round(sx);
                    let ny = libm::round(sy);
                    if nx < 0.0
                        || ny < 0.0
                        || nx >= frame.width as f64
                        || ny >= frame.height as f64
                    {
                        continue;
                    }
                    frame.pixel(nx as usize, ny as usize)
                }
                ImageSampling::Bilinear => {
                    if sx < 0.0
                        || sy < 0.0
                        || sx > (frame.width - 1) as f64
                        || sy > (frame.height - 1) as f64
                    {
                        continue;
                    }
                    bilinear_rgb(frame, sx, sy)
                }
            };
            out.set_pixel(x, y, rgb);
        }
    }
    out.annotations = frame
        .annotations
        .iter()
        .map(|ann| {
            InstrumentAnnotation::from_pairs(ann.joints().map(|(name, p)| {
                let rx = p.x - cx;
                let ry = p.y - cy;
                (
                    name,
                    Point2::new(cx + rx * cos - ry * sin, cy + rx * sin + ry * cos),
                )
            }))
        })
        .collect();
    out.retain_in_bounds();
    Ok(out)
}

fn bilinear_rgb(frame: &Frame, x: f64, y: f64) -> [u8; 3] {
    let x0 = libm::floor(x) as usize;
    let y0 = libm::floor(y) as usize;
    let x1 = (x0 + 1).min(frame.width - 1);
    let y1 = (y0 + 1).min(frame.height - 1);
    let tx = x - x0 as f64;
    let ty = y - y0 as f64;
    let mut rgb = [0u8; 3];
    for ch in 0..3 {
        let v00 = frame.pixel(x0, y0)[ch] as f64;
        let v10 = frame.pixel(x1, y0)[ch] as f64;
        let v01 = frame.pixel(x0, y1)[ch] as f64;
        let v11 = frame.pixel(x1, y1)[ch] as f64;
        let top = v00 + tx * (v10 - v00);
        let bottom = v01 + tx * (v11 - v01);
        rgb[ch] = libm::round(top + ty * (bottom - top)).clamp(0.0, 255.0) as u8;
    }
    rgb
}

/// Splices the left part of `a` (columns `[0, split_a)`) onto the right
/// part of `b` (columns `[split_b, width)`), keeping the original frame
/// size.
///
/// When the parts cover less than the width, black columns pad the seam; in
/// that case both parts keep their absolute positions. When they cover
/// more, the excess is cropped from the outer edges (left edge of the `a`
/// part, right edge of the `b` part), split as evenly as possible.
/// Annotations travel with their part; joints falling outside their kept
/// column range are dropped, as are instruments left without joints.
pub fn swap_at(a: &Frame, b: &Frame, split_a: usize, split_b: usize) -> Result<Frame, AugmentError> {
    if a.width != b.width || a.height != b.height {
        return Err(AugmentError::SizeMismatch);
    }
    let w = a.width;
    for split in [split_a, split_b] {
        if split > w {
            return Err(AugmentError::SplitOutOfRange { split, width: w });
        }
    }
    let combined = split_a + (w - split_b);
    let (crop_left, crop_right, pad) = if combined <= w {
        (0usize, 0usize, w - combined)
    } else {
        let excess = combined - w;
        (excess / 2, excess - excess / 2, 0usize)
    };

    // Column ranges: a[crop_left, split_a) then pad zeros then
    // b[split_b, w - crop_right).
    let a_width = split_a - crop_left;
    let offset_b = a_width as i64 + pad as i64 - split_b as i64;
    let mut out = Frame::zeros(w, a.height);
    for y in 0..a.height {
        for x in crop_left..split_a {
            out.set_pixel(x - crop_left, y, a.pixel(x, y));
        }
        for x in split_b..w - crop_right {
            out.set_pixel((x as i64 + offset_b) as usize, y, b.pixel(x, y));
        }
    }

    let mut annotations = Vec::new();
    let carry = |source: &Frame, lo: f64, hi: f64, dx: f64, out_ann: &mut Vec<InstrumentAnnotation>| {
        for ann in &source.annotations {
            let kept = InstrumentAnnotation::from_pairs(
                ann.joints()
                    .filter(|&(_, p)| p.x >= lo && p.x < hi)
                    .map(|(name, p)| (name, Point2::new(p.x + dx, p.y))),
            );
            if !kept.is_empty() {
                out_ann.push(kept);
            }
        }
    };
    carry(a, crop_left as f64, split_a as f64, -(crop_left as f64), &mut annotations);
    carry(b, split_b as f64, (w - crop_right) as f64, offset_b as f64, &mut annotations);
    out.annotations = annotations;
    Ok(out)
}

/// Instrument-swap augmentation: cuts both frames just right of a randomly
/// chosen clasper joint and splices them via [`swap_at`].
///
/// The split column for a clasper at `x` is `floor(x) + 1`, so the clasper
/// pixel itself stays in the left part. Both frames need at least one joint
/// whose name contains `clasper`. Deterministic per seed.
pub fn random_swap(a: &Frame, b: &Frame, seed: u64) -> Result<Frame, AugmentError> {
    if a.width != b.width || a.height != b.height {
        return Err(AugmentError::SizeMismatch);
    }
    let claspers = |f: &Frame| -> Vec<f64> {
        let mut xs = Vec::new();
        for ann in &f.annotations {
            for (name, p) in ann.joints() {
                if name.to_ascii_lowercase().contains("clasper") {
                    xs.push(p.x);
                }
            }
        }
        xs
    };
    let xs_a = claspers(a);
    let xs_b = claspers(b);
    if xs_a.is_empty() || xs_b.is_empty() {
        return Err(AugmentError::NoClasper);
    }
    let mut rng = rng_from_seed(seed);
    let pick_a = xs_a[rng.random_range(0..xs_a.len())];
    let pick_b = xs_b[rng.random_range(0..xs_b.len())];
    let split = |x: f64, w: usize| ((libm::floor(x) as i64 + 1).max(0) as usize).min(w);
    swap_at(a, b, split(pick_a, a.width), split(pick_b, b.width))
}

/// Axis-aligned box around a joint set, expanded on every side by
/// `alpha * max(extent_x, extent_y)`.
///
/// The box may extend beyond the frame; clipping is the consumer's job.
/// Collinear and single-point joint sets still produce a box because the
/// expansion uses the larger extent of the two axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    /// Left edge.
    pub x_min: f64,
    /// Top edge.
    pub y_min: f64,
    /// Right edge.
    pub x_max: f64,
    /// Bottom edge.
    pub y_max: f64,
    /// Expansion factor the box was built with.
    pub alpha: f64,
}

/// Builds the expanded bounding box of a joint set.
pub fn bbox_from_joints(joints: &[Point2], alpha: f64) -> Result<BBox, AugmentError> {
    if joints.is_empty() {
        return Err(AugmentError::NoJoints);
    }
    if alpha < 0.0 {
        return Err(AugmentError::NegativeAlpha(alpha));
    }
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for p in joints {
        x_min = x_min.min(p.x);
        x_max = x_max.max(p.x);
        y_min = y_min.min(p.y);
        y_max = y_max.max(p.y);
    }
    let delta = alpha * (x_max - x_min).max(y_max - y_min);
    Ok(BBox {
        x_min: x_min - delta,
        y_min: y_min - delta,
        x_max: x_max + delta,
        y_max: y_max + delta,
        alpha,
    })
}

/// One photometric perturbation of an RGB frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PixelOp {
    /// Adds `delta` to every channel.
    Brightness {
        /// Signed shift in intensity levels.
        delta: i32,
    },
    /// Scales contrast around mid grey: `(v - 128) * factor + 128`.
    Contrast {
        /// Multiplier; 1 is the identity.
        factor: f64,
    },
    /// Blends each pixel between its luma and itself.
    Saturation {
        /// 0 = grayscale, 1 = identity, above 1 oversaturates.
        factor: f64,
    },
    /// Adds seeded Gaussian noise to every channel.
    GaussianNoise {
        /// Noise standard deviation in intensity levels.
        std_dev: f64,
    },
    /// Multiplies each pixel by seeded `1 + N(0, std_dev)` speckle.
    Speckle {
        /// Speckle standard deviation.
        std_dev: f64,
    },
    /// Sets random pixels to white.
    Salt {
        /// Per-pixel probability.
        prob: f64,
    },
    /// Sets random pixels to black.
    Pepper {
        /// Per-pixel probability.
        prob: f64,
    },
    /// Gaussian blur.
    Blur {
        /// Blur sigma in pixels.
        sigma: f64,
    },
    /// Spreads the luma histogram to the full range.
    HistogramEqualize,
    /// Blacks out a rectangle (random erasing).
    Erase {
        /// Left column.
        x: usize,
        /// Top row.
        y: usize,
        /// Rectangle width.
        w: usize,
        /// Rectangle height.
        h: usize,
    },
}

/// Applies a pipeline of photometric ops. Annotations are untouched: none
/// of these ops moves image content.
///
/// All randomness comes from `seed`, so a given `(frame, ops, seed)` triple
/// is reproducible.
pub fn apply_pixel_ops(frame: &Frame, ops: &[PixelOp], seed: u64) -> Frame {
    let mut rng = rng_from_seed(seed);
    let mut out = frame.clone();
    for op in ops {
        apply_one(&mut out, *op, &mut rng);
    }
    out
}

fn apply_one(frame: &mut Frame, op: PixelOp, rng: &mut rand_chacha::ChaCha8Rng) {
    let clamp = |v: f64| -> u8 { libm::round(v).clamp(0.0, 255.0) as u8 };
    match op {
        PixelOp::Brightness { delta } => {
            for v in &mut frame.pixels {
                *v = (*v as i32 + delta).clamp(0, 255) as u8;
            }
        }
        PixelOp::Contrast { factor } => {
            for v in &mut frame.pixels {
                *v = clamp((*v as f64 - 128.0) * factor + 128.0);
            }
        }
        PixelOp::Saturation { factor } => {
            for px in frame.pixels.chunks_exact_mut(3) {
                let luma = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
                for v in px {
                    *v = clamp(luma + (*v as f64 - luma) * factor);
                }
            }
        }
        PixelOp::GaussianNoise { std_dev } => {
            for v in &mut frame.pixels {
                *v = clamp(*v as f64 + std_dev * gaussian_sample(rng));
            }
        }
        PixelOp::Speckle { std_dev } => {
            for v in &mut frame.pixels {
                *v = clamp(*v as f64 * (1.0 + std_dev * gaussian_sample(rng)));
            }
        }
        PixelOp::Salt { prob } => {
            for y in 0..frame.height {
                for x in 0..frame.width {
                    if rng.random_range(0.0..1.0) < prob {
                        frame.set_pixel(x, y, [255, 255, 255]);
                    }
                }
            }
        }
        PixelOp::Pepper { prob } => {
            for y in 0..frame.height {
                for x in 0..frame.width {
                    if rng.random_range(0.0..1.0) < prob {
                        frame.set_pixel(x, y, [0, 0, 0]);
                    }
                }
            }
        }
        PixelOp::Blur { sigma } => {
            if sigma > 0.0 {
                blur_rgb(frame, sigma);
            }
        }
        PixelOp::HistogramEqualize => equalize(frame),
        PixelOp::Erase { x, y, w, h } => {
            for yy in y..(y + h).min(frame.height) {
                for xx in x..(x + w).min(frame.width) {
                    frame.set_pixel(xx, yy, [0, 0, 0]);
                }
            }
        }
    }
}

/// Standard normal via Box-Muller; two uniforms per sample keeps the
/// consumption pattern simple and fully determined by draw order.
fn gaussian_sample(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

fn blur_rgb(frame: &mut Frame, sigma: f64) {
    let taps = crate::filter::gaussian_kernel(sigma);
    let radius = taps.len() / 2;
    let (w, h) = (frame.width, frame.height);
    let mut tmp = vec![0.0f64; w * h * 3];
    for y in 0..h {
        for x in 0..w {
            for ch in 0..3 {
                let mut acc = 0.0;
                for (i, t) in taps.iter().enumerate() {
                    let sx = (x + i).saturating_sub(radius).min(w - 1);
                    acc += t * frame.pixel(sx, y)[ch] as f64;
                }
                tmp[(y * w + x) * 3 + ch] = acc;
            }
        }
    }
    for y in 0..h {
        for x in 0..w {
            let mut rgb = [0u8; 3];
            for ch in 0..3 {
                let mut acc = 0.0;
                for (i, t) in taps.iter().enumerate() {
                    let sy = (y + i).saturating_sub(radius).min(h - 1);
                    acc += t * tmp[(sy * w + x) * 3 + ch];
                }
                rgb[ch] = libm::round(acc).clamp(0.0, 255.0) as u8;
            }
            frame.set_pixel(x, y, rgb);
        }
    }
}

fn equalize(frame: &mut Frame) {
    let mut hist = [0usize; 256];
    for px in frame.pixels.chunks_exact(3) {
        let luma = libm::round(0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64)
            .clamp(0.0, 255.0) as usize;
        hist[luma] += 1;
    }
    let total: usize = hist.iter().sum();
    if total == 0 {
        return;
    }
    let mut cdf = [0usize; 256];
    let mut acc = 0;
    for (i, count) in hist.iter().enumerate() {
        acc += count;
        cdf[i] = acc;
    }
    let cdf_min = cdf.iter().copied().find(|&c| c > 0).unwrap_or(0);
    let denom = (total - cdf_min).max(1) as f64;
    for px in frame.pixels.chunks_exact_mut(3) {
        let luma = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
        let bin = libm::round(luma).clamp(0.0, 255.0) as usize;
        let target = 255.0 * (cdf[bin].saturating_sub(cdf_min)) as f64 / denom;
        let gain = if luma > 0.0 { target / luma } else { 0.0 };
        for v in px {
            *v = libm::round((*v as f64 * gain).clamp(0.0, 255.0)) as u8;
        }
    }
}

/// Applies a seeded random subset of photometric ops with moderate,
/// training-appropriate parameter ranges. Each op is included with
/// probability one half; parameters are drawn from fixed ranges
/// (brightness +-32, contrast and saturation 0.7..1.3, noise sigma up to
/// 10 levels, blur sigma up to 1.5 px, erase up to 20% of the area).
pub fn random_pixel_augment(frame: &Frame, seed: u64) -> Frame {
    let mut rng = rng_from_seed(seed);
    let mut ops = Vec::new();
    if rng.random_range(0.0..1.0) < 0.5 {
        ops.push(PixelOp::Brightness { delta: rng.random_range(-32..=32) });
    }
    if rng.random_range(0.0..1.0) < 0.5 {
        ops.push(PixelOp::Contrast { factor: rng.random_range(0.7..1.3) });
    }
    if rng.random_range(0.0..1.0) < 0.5 {
        ops.push(PixelOp::Saturation { factor: rng.random_range(0.7..1.3) });
    }
    if rng.random_range(0.0..1.0) < 0.5 {
        ops.push(PixelOp::GaussianNoise { std_dev: rng.random_range(1.0..10.0) });
    }
    if rng.random_range(0.0..1.0) < 0.5 {
        ops.push(PixelOp::Blur { sigma: rng.random_range(0.3..1.5) });
    }
    if rng.random_range(0.0..1.0) < 0.5 {
        let w = rng.random_range(frame.width / 10..=frame.width / 5).max(1);
        let h = rng.random_range(frame.height / 10..=frame.height / 5).max(1);
        let x = rng.random_range(0..frame.width.saturating_sub(w).max(1));
        let y = rng.random_range(0..frame.height.saturating_sub(h).max(1));
        ops.push(PixelOp::Erase { x, y, w, h });
    }
    let op_seed = rng.random_range(0..u64::MAX);
    apply_pixel_ops(frame, &ops, op_seed)
}
