//! Dense multi-channel probability maps.
//!
//! A [`Heatmap`] stores `height * width * channels` values in row-major,
//! channel-last order: the value for pixel `(x, y)` in channel `c` lives at
//! `(y * width + x) * channels + c`. Values are `f64` in memory; the on-disk
//! format (handled by the companion crate) stores `f32`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::FrameSize;

/// Validation failures when constructing or indexing a [`Heatmap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeatmapError {
    /// Dimensions outside the supported range (`height >= 2`, `width >= 2`,
    /// `channels >= 1`).
    BadDimensions {
        /// Rejected height.
        height: usize,
        /// Rejected width.
        width: usize,
        /// Rejected channel count.
        channels: usize,
    },
    /// Data buffer length does not equal `height * width * channels`.
    DataLength {
        /// Required length.
        expected: usize,
        /// Provided length.
        got: usize,
    },
    /// Channel name list length does not equal the channel count.
    NameCount {
        /// Required number of names.
        expected: usize,
        /// Provided number of names.
        got: usize,
    },
    /// Channel index out of range.
    ChannelRange {
        /// Rejected index.
        channel: usize,
        /// Number of channels in the map.
        channels: usize,
    },
}

impl fmt::Display for HeatmapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeatmapError::BadDimensions { height, width, channels } => write!(
                f,
                "heatmap dimensions {height}x{width}x{channels} out of range \
                 (need height >= 2, width >= 2, channels >= 1)"
            ),
            HeatmapError::DataLength { expected, got } => {
                write!(f, "heatmap data length {got}, expected {expected}")
            }
            HeatmapError::NameCount { expected, got } => {
                write!(f, "{got} channel names for {expected} channels")
            }
            HeatmapError::ChannelRange { channel, channels } => {
                write!(f, "channel {channel} out of range for {channels} channels")
            }
        }
    }
}

impl core::error::Error for HeatmapError {}

/// A `height x width x channels` map of real values with named channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    height: usize,
    width: usize,
    channels: usize,
    channel_names: Vec<String>,
    data: Vec<f64>,
}

impl Heatmap {
    /// Creates a zero-filled map. Names define the channel count.
    pub fn zeros(
        height: usize,
        width: usize,
        channel_names: Vec<String>,
    ) -> Result<Self, HeatmapError> {
        let channels = channel_names.len();
        Self::check_dims(height, width, channels)?;
        Ok(Heatmap {
            height,
            width,
            channels,
            channel_names,
            data: vec![0.0; height * width * channels],
        })
    }

    /// Creates a zero-filled map with generated channel names `c0..cN`.
    pub fn zeros_unnamed(
        height: usize,
        width: usize,
        channels: usize,
    ) -> Result<Self, HeatmapError> {
        Self::zeros(height, width, default_channel_names(channels))
    }

    /// Wraps an existing buffer laid out row-major, channel-last.
    pub fn from_data(
        height: usize,
        width: usize,
        channel_names: Vec<String>,
        data: Vec<f64>,
    ) -> Result<Self, HeatmapError> {
        let channels = channel_names.len();
        Self::check_dims(height, width, channels)?;
        let expected = height * width * channels;
        if data.len() != expected {
            return Err(HeatmapError::DataLength { expected, got: data.len() });
        }
        Ok(Heatmap { height, width, channels, channel_names, data })
    }

    fn check_dims(height: usize, width: usize, channels: usize) -> Result<(), HeatmapError> {
        if height < 2 || width < 2 || channels < 1 {
            return Err(HeatmapError::BadDimensions { height, width, channels });
        }
        Ok(())
    }

    /// Number of rows.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of columns.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of channels.
    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Frame dimensions of the map.
    pub fn frame(&self) -> FrameSize {
        FrameSize::new(self.height, self.width)
    }

    /// Channel names, in channel order.
    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    /// Index of the named channel, if present.
    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channel_names.iter().position(|n| n == name)
    }

    /// Flat index of `(x, y, c)`.
    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        debug_assert!(x < self.width && y < self.height && c < self.channels);
        (y * self.width + x) * self.channels + c
    }

    /// Value at `(x, y, c)`. Panics when out of bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[self.index(x, y, c)]
    }

    /// Sets the value at `(x, y, c)`. Panics when out of bounds.
    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, value: f64) {
        let i = self.index(x, y, c);
        self.data[i] = value;
    }

    /// Full backing buffer, row-major channel-last.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Mutable backing buffer.
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Copies channel `c` into `out` (row-major, length `height * width`).
    pub fn copy_channel(&self, c: usize, out: &mut [f64]) -> Result<(), HeatmapError> {
        self.check_channel(c)?;
        assert_eq!(out.len(), self.height * self.width, "channel buffer size");
        for (pixel, slot) in self.data.chunks_exact(self.channels).zip(out.iter_mut()) {
            *slot = pixel[c];
        }
        Ok(())
    }

    /// Overwrites channel `c` from `values` (row-major, length `height * width`).
    pub fn set_channel(&mut self, c: usize, values: &[f64]) -> Result<(), HeatmapError> {
        self.check_channel(c)?;
        assert_eq!(values.len(), self.height * self.width, "channel buffer size");
        for (pixel, value) in self.data.chunks_exact_mut(self.channels).zip(values.iter()) {
            pixel[c] = *value;
        }
        Ok(())
    }

    fn check_channel(&self, c: usize) -> Result<(), HeatmapError> {
        if c >= self.channels {
            return Err(HeatmapError::ChannelRange { channel: c, channels: self.channels });
        }
        Ok(())
    }

    /// Bilinear sample of channel `c` at a real-valued position.
    ///
    /// Coordinates are clamped to the pixel grid, so samples outside the
    /// frame continue the border values.
    pub fn sample_bilinear(&self, c: usize, x: f64, y: f64) -> f64 {
        debug_assert!(c < self.channels);
        let x0f = libm::floor(x);
        let y0f = libm::floor(y);
        let tx = x - x0f;
        let ty = y - y0f;
        let clamp_x = |v: f64| (v.max(0.0) as usize).min(self.width - 1);
        let clamp_y = |v: f64| (v.max(0.0) as usize).min(self.height - 1);
        let x0 = clamp_x(x0f);
        let x1 = clamp_x(x0f + 1.0);
        let y0 = clamp_y(y0f);
        let y1 = clamp_y(y0f + 1.0);
        let v00 = self.get(x0, y0, c);
        let v10 = self.get(x1, y0, c);
        let v01 = self.get(x0, y1, c);
        let v11 = self.get(x1, y1, c);
        let top = v00 + tx * (v10 - v00);
        let bottom = v01 + tx * (v11 - v01);
        top + ty * (bottom - top)
    }

    /// Returns a copy shifted by `(dx, dy)` whole pixels, zero-filled at the
    /// uncovered border. All channels shift together.
    pub fn translated(&self, dx: i64, dy: i64) -> Heatmap {
        let mut out = Heatmap {
            height: self.height,
            width: self.width,
            channels: self.channels,
            channel_names: self.channel_names.clone(),
            data: vec![0.0; self.data.len()],
        };
        for y in 0..self.height as i64 {
            let sy = y - dy;
            if sy < 0 || sy >= self.height as i64 {
                continue;
            }
            for x in 0..self.width as i64 {
                let sx = x - dx;
                if sx < 0 || sx >= self.width as i64 {
                    continue;
                }
                let src = ((sy as usize) * self.width + sx as usize) * self.channels;
                let dst = ((y as usize) * self.width + x as usize) * self.channels;
                out.data[dst..dst + self.channels]
                    .copy_from_slice(&self.data[src..src + self.channels]);
            }
        }
        out
    }
}

/// Generated channel names `c0, c1, ...` for maps without semantic names.
pub fn default_channel_names(channels: usize) -> Vec<String> {
    (0..channels).map(|i| format!("c{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_degenerate_dimensions() {
        assert!(Heatmap::zeros_unnamed(1, 4, 1).is_err());
        assert!(Heatmap::zeros_unnamed(4, 1, 1).is_err());
        assert!(Heatmap::zeros_unnamed(4, 4, 0).is_err());
        assert!(Heatmap::zeros_unnamed(2, 2, 1).is_ok());
    }

    #[test]
    fn rejects_mismatched_data_length() {
        let err = Heatmap::from_data(2, 2, default_channel_names(2), vec![0.0; 7]).unwrap_err();
        assert_eq!(err, HeatmapError::DataLength { expected: 8, got: 7 });
    }

    #[test]
    fn layout_is_row_major_channel_last() {
        let mut m = Heatmap::zeros_unnamed(2, 3, 2).unwrap();
        m.set(1, 0, 1, 5.0);
        // (y * width + x) * channels + c = (0 * 3 + 1) * 2 + 1 = 3
        assert_eq!(m.data()[3], 5.0);
        m.set(2, 1, 0, 7.0);
        assert_eq!(m.data()[(1 * 3 + 2) * 2], 7.0);
    }

    #[test]
    fn channel_copy_round_trips() {
        let mut m = Heatmap::zeros_unnamed(2, 2, 3).unwrap();
        let values = [1.0, 2.0, 3.0, 4.0];
        m.set_channel(1, &values).unwrap();
        let mut out = [0.0; 4];
        m.copy_channel(1, &mut out).unwrap();
        assert_eq!(out, values);
        // Other channels untouched.
        m.copy_channel(0, &mut out).unwrap();
        assert_eq!(out, [0.0; 4]);
    }

    #[test]
    fn bilinear_interpolates_and_clamps() {
        let mut m = Heatmap::zeros_unnamed(2, 2, 1).unwrap();
        m.set(0, 0, 0, 0.0);
        m.set(1, 0, 0, 1.0);
        m.set(0, 1, 0, 2.0);
        m.set(1, 1, 0, 3.0);
        assert_relative_eq!(m.sample_bilinear(0, 0.5, 0.0), 0.5);
        assert_relative_eq!(m.sample_bilinear(0, 0.5, 0.5), 1.5);
        // Exactly on a grid point.
        assert_relative_eq!(m.sample_bilinear(0, 1.0, 1.0), 3.0);
        // Outside the frame the border value continues.
        assert_relative_eq!(m.sample_bilinear(0, -3.0, 0.0), 0.0);
        assert_relative_eq!(m.sample_bilinear(0, 5.0, 5.0), 3.0);
    }

    #[test]
    fn translated_shifts_and_zero_fills() {
        let mut m = Heatmap::zeros_unnamed(3, 3, 1).unwrap();
        m.set(1, 1, 0, 9.0);
        let t = m.translated(1, -1);
        assert_eq!(t.get(2, 0, 0), 9.0);
        assert_eq!(t.get(1, 1, 0), 0.0);
        // Bottom row is uncovered, so zero.
        for x in 0..3 {
            assert_eq!(t.get(x, 2, 0), 0.0);
        }
    }
}
