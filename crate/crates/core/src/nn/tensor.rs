//! Minimal dense 4D tensor in `(n, h, w, c)` channel-last layout.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::heatmap::Heatmap;

/// Failures in tensor construction or kernel application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NnError {
    /// A dimension was zero.
    ZeroDimension,
    /// Buffer length does not match the dimensions.
    DataLength {
        /// Required length.
        expected: usize,
        /// Provided length.
        got: usize,
    },
    /// Two tensors that must agree in shape do not.
    ShapeMismatch {
        /// Shape of the first operand.
        left: (usize, usize, usize, usize),
        /// Shape of the second operand.
        right: (usize, usize, usize, usize),
    },
    /// Channel count is not divisible by the group count.
    GroupMismatch {
        /// Requested groups.
        groups: usize,
        /// Available channels.
        channels: usize,
    },
    /// A parameter vector has the wrong length.
    ParamLength {
        /// Required length.
        expected: usize,
        /// Provided length.
        got: usize,
    },
    /// A scalar parameter was out of range.
    BadParameter(&'static str),
    /// Spatial size is not divisible as required by the architecture.
    NotDivisible {
        /// Offending spatial size `(h, w)`.
        size: (usize, usize),
        /// Required divisor.
        divisor: usize,
    },
}

impl fmt::Display for NnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NnError::ZeroDimension => write!(f, "tensor dimensions must be positive"),
            NnError::DataLength { expected, got } => {
                write!(f, "tensor data length {got}, expected {expected}")
            }
            NnError::ShapeMismatch { left, right } => {
                write!(f, "shape mismatch: {left:?} vs {right:?}")
            }
            NnError::GroupMismatch { groups, channels } => {
                write!(f, "{groups} groups do not divide {channels} channels")
            }
            NnError::ParamLength { expected, got } => {
                write!(f, "parameter length {got}, expected {expected}")
            }
            NnError::BadParameter(msg) => write!(f, "{msg}"),
            NnError::NotDivisible { size, divisor } => {
                write!(f, "spatial size {}x{} not divisible by {divisor}", size.0, size.1)
            }
        }
    }
}

impl core::error::Error for NnError {}

/// Dense `(n, h, w, c)` tensor of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    n: usize,
    h: usize,
    w: usize,
    c: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    /// Zero tensor of the given shape.
    pub fn zeros(n: usize, h: usize, w: usize, c: usize) -> Result<Self, NnError> {
        if n == 0 || h == 0 || w == 0 || c == 0 {
            return Err(NnError::ZeroDimension);
        }
        Ok(Tensor4 { n, h, w, c, data: vec![0.0; n * h * w * c] })
    }

    /// Wraps a buffer laid out `(n, h, w, c)`.
    pub fn from_data(
        n: usize,
        h: usize,
        w: usize,
        c: usize,
        data: Vec<f64>,
    ) -> Result<Self, NnError> {
        if n == 0 || h == 0 || w == 0 || c == 0 {
            return Err(NnError::ZeroDimension);
        }
        let expected = n * h * w * c;
        if data.len() != expected {
            return Err(NnError::DataLength { expected, got: data.len() });
        }
        Ok(Tensor4 { n, h, w, c, data })
    }

    /// Single-sample tensor sharing a heatmap's values and layout.
    pub fn from_heatmap(map: &Heatmap) -> Self {
        Tensor4 {
            n: 1,
            h: map.height(),
            w: map.width(),
            c: map.channels(),
            data: map.data().to_vec(),
        }
    }

    /// Shape as `(n, h, w, c)`.
    pub fn shape(&self) -> (usize, usize, usize, usize) {
        (self.n, self.h, self.w, self.c)
    }

    /// Number of channels.
    pub fn channels(&self) -> usize {
        self.c
    }

    /// Flat index of `(n, y, x, c)`.
    #[inline]
    pub fn index(&self, n: usize, y: usize, x: usize, c: usize) -> usize {
        ((n * self.h + y) * self.w + x) * self.c + c
    }

    /// Value at `(n, y, x, c)`.
    #[inline]
    pub fn get(&self, n: usize, y: usize, x: usize, c: usize) -> f64 {
        self.data[self.index(n, y, x, c)]
    }

    /// Sets the value at `(n, y, x, c)`.
    #[inline]
    pub fn set(&mut self, n: usize, y: usize, x: usize, c: usize, value: f64) {
        let i = self.index(n, y, x, c);
        self.data[i] = value;
    }

    /// Backing buffer.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Mutable backing buffer.
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Zero tensor with this tensor's shape.
    pub fn zeros_like(&self) -> Tensor4 {
        Tensor4 { n: self.n, h: self.h, w: self.w, c: self.c, data: vec![0.0; self.data.len()] }
    }

    /// Errors unless `other` has the same shape.
    pub fn check_same_shape(&self, other: &Tensor4) -> Result<(), NnError> {
        if self.shape() != other.shape() {
            return Err(NnError::ShapeMismatch { left: self.shape(), right: other.shape() });
        }
        Ok(())
    }
}
