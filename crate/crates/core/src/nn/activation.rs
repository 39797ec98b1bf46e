//! Randomized leaky rectifier.
//!
//! Negative inputs are scaled by a slope drawn uniformly per element from
//! `[lower, upper]` during training; at inference the deterministic mean
//! slope `(lower + upper) / 2` is used instead. Positive inputs pass
//! through unchanged. The slope draw is a pure function of the seed and the
//! element index, so forward and backward agree exactly when given the same
//! seed.

use rand::Rng;

use super::tensor::{NnError, Tensor4};
use crate::rng::rng_from_seed;

/// Slope regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlreluMode {
    /// Per-element random slopes in `[lower, upper]`.
    Train,
    /// Deterministic mean slope.
    Inference,
}

/// Randomized leaky rectifier parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlreluConfig {
    /// Lower slope bound.
    pub lower: f64,
    /// Upper slope bound.
    pub upper: f64,
    /// Active regime.
    pub mode: RlreluMode,
}

impl Default for RlreluConfig {
    fn default() -> Self {
        RlreluConfig { lower: 1.0 / 8.0, upper: 1.0 / 3.0, mode: RlreluMode::Train }
    }
}

impl RlreluConfig {
    fn validate(&self) -> Result<(), NnError> {
        if !(self.lower > 0.0 && self.lower <= self.upper && self.upper < 1.0) {
            return Err(NnError::BadParameter("need 0 < lower <= upper < 1"));
        }
        Ok(())
    }

    fn mean_slope(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }
}

/// Slope for every element. One draw per element regardless of sign keeps
/// the stream aligned between forward and backward.
fn slopes(len: usize, config: &RlreluConfig, seed: u64) -> impl Iterator<Item = f64> + '_ {
    let mut rng = rng_from_seed(seed);
    let mean = config.mean_slope();
    let (lower, upper, train) = (config.lower, config.upper, config.mode == RlreluMode::Train);
    (0..len).map(move |_| {
        if train {
            rng.random_range(lower..=upper)
        } else {
            mean
        }
    })
}

/// Forward randomized leaky rectifier.
pub fn rlrelu(x: &Tensor4, config: &RlreluConfig, seed: u64) -> Result<Tensor4, NnError> {
    config.validate()?;
    let mut out = x.clone();
    for (v, slope) in out.data_mut().iter_mut().zip(slopes(x.data().len(), config, seed)) {
        if *v < 0.0 {
            *v *= slope;
        }
    }
    Ok(out)
}

/// Backward randomized leaky rectifier for the same `(config, seed)` as the
/// forward pass.
///
/// The derivative is 1 for positive inputs and the element's slope for
/// negative ones; at exactly 0 the positive branch applies.
pub fn rlrelu_backward(
    x: &Tensor4,
    config: &RlreluConfig,
    seed: u64,
    upstream: &Tensor4,
) -> Result<Tensor4, NnError> {
    config.validate()?;
    x.check_same_shape(upstream)?;
    let mut out = upstream.clone();
    for ((g, v), slope) in out
        .data_mut()
        .iter_mut()
        .zip(x.data())
        .zip(slopes(x.data().len(), config, seed))
    {
        if *v < 0.0 {
            *g *= slope;
        }
    }
    Ok(out)
}
