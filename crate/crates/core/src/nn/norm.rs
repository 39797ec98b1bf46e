//! Group normalization with affine parameters.
//!
//! Channels are split into contiguous groups; each `(sample, group)` slice
//! is standardized by its own mean and biased variance, then scaled and
//! shifted per channel:
//!
//! ```text
//! xhat = (x - mean) / sqrt(var + eps)
//! out  = gamma[c] * xhat + beta[c]
//! ```

use alloc::vec;
use alloc::vec::Vec;

use super::tensor::{NnError, Tensor4};

/// Group-normalization parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupNormConfig {
    /// Number of channel groups; must divide the channel count.
    pub groups: usize,
    /// Variance stabilizer; must be positive.
    pub epsilon: f64,
}

impl Default for GroupNormConfig {
    fn default() -> Self {
        GroupNormConfig { groups: 8, epsilon: 1e-5 }
    }
}

fn check(x: &Tensor4, gamma: &[f64], beta: Option<&[f64]>, config: &GroupNormConfig) -> Result<(), NnError> {
    let (_, _, _, c) = x.shape();
    if config.groups == 0 || c % config.groups != 0 {
        return Err(NnError::GroupMismatch { groups: config.groups, channels: c });
    }
    if !(config.epsilon > 0.0) {
        return Err(NnError::BadParameter("epsilon must be > 0"));
    }
    if gamma.len() != c {
        return Err(NnError::ParamLength { expected: c, got: gamma.len() });
    }
    if let Some(beta) = beta {
        if beta.len() != c {
            return Err(NnError::ParamLength { expected: c, got: beta.len() });
        }
    }
    Ok(())
}

/// Forward group normalization.
pub fn group_norm_forward(
    x: &Tensor4,
    gamma: &[f64],
    beta: &[f64],
    config: &GroupNormConfig,
) -> Result<Tensor4, NnError> {
    check(x, gamma, Some(beta), config)?;
    let (n, h, w, c) = x.shape();
    let group_size = c / config.groups;
    let m = (h * w * group_size) as f64;
    let mut out = x.zeros_like();
    for ni in 0..n {
        for g in 0..config.groups {
            let c_lo = g * group_size;
            let c_hi = c_lo + group_size;
            let mut mean = 0.0;
            for y in 0..h {
                for xx in 0..w {
                    for ci in c_lo..c_hi {
                        mean += x.get(ni, y, xx, ci);
                    }
                }
            }
            mean /= m;
            let mut var = 0.0;
            for y in 0..h {
                for xx in 0..w {
                    for ci in c_lo..c_hi {
                        let d = x.get(ni, y, xx, ci) - mean;
                        var += d * d;
                    }
                }
            }
            var /= m;
            let inv_std = 1.0 / libm::sqrt(var + config.epsilon);
            for y in 0..h {
                for xx in 0..w {
                    for ci in c_lo..c_hi {
                        let xhat = (x.get(ni, y, xx, ci) - mean) * inv_std;
                        out.set(ni, y, xx, ci, gamma[ci] * xhat + beta[ci]);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Backward group normalization.
///
/// Returns `(d x, d gamma, d beta)` for the upstream gradient `d out`. Per
/// `(sample, group)` slice with `m` elements:
///
/// ```text
/// g      = up * gamma[c]                    (gradient wrt xhat)
/// d x    = inv_std * (g - mean(g) - xhat * mean(g * xhat))
/// ```
///
/// and per channel `d gamma[c] = sum up * xhat`, `d beta[c] = sum up`.
pub fn group_norm_backward(
    x: &Tensor4,
    gamma: &[f64],
    config: &GroupNormConfig,
    upstream: &Tensor4,
) -> Result<(Tensor4, Vec<f64>, Vec<f64>), NnError> {
    check(x, gamma, None, config)?;
    x.check_same_shape(upstream)?;
    let (n, h, w, c) = x.shape();
    let group_size = c / config.groups;
    let m = (h * w * group_size) as f64;
    let mut dx = x.zeros_like();
    let mut d_gamma = vec![0.0; c];
    let mut d_beta = vec![0.0; c];

    let mut xhat = vec![0.0; h * w * group_size];
    for ni in 0..n {
        for g in 0..config.groups {
            let c_lo = g * group_size;
            let c_hi = c_lo + group_size;
            let mut mean = 0.0;
            for y in 0..h {
                for xx in 0..w {
                    for ci in c_lo..c_hi {
                        mean += x.get(ni, y, xx, ci);
                    }
                }
            }
            mean /= m;
            let mut var = 0.0;
            for y in 0..h {
                for xx in 0..w {
                    for ci in c_lo..c_hi {
                        let d = x.get(ni, y, xx, ci) - mean;
                        var += d * d;
                    }
                }
            }
            var /= m;
            let inv_std = 1.0 / libm::sqrt(var + config.epsilon);

            // First sweep: xhat plus the two reduction terms.
            let mut mean_g = 0.0;
            let mut mean_gx = 0.0;
            let mut k = 0;
            for y in 0..h {
                for xx in 0..w {
                    for ci in c_lo..c_hi {
                        let xh = (x.get(ni, y, xx, ci) - mean) * inv_std;
                        xhat[k] = xh;
                        k += 1;
                        let up = upstream.get(ni, y, xx, ci);
                        let grad_xhat = up * gamma[ci];
                        mean_g += grad_xhat;
                        mean_gx += grad_xhat * xh;
                        d_gamma[ci] += up * xh;
                        d_beta[ci] += up;
                    }
                }
            }
            mean_g /= m;
            mean_gx /= m;

            // Second sweep: assemble d x.
            let mut k = 0;
            for y in 0..h {
                for xx in 0..w {
                    for ci in c_lo..c_hi {
                        let up = upstream.get(ni, y, xx, ci);
                        let grad_xhat = up * gamma[ci];
                        let v = inv_std * (grad_xhat - mean_g - xhat[k] * mean_gx);
                        dx.set(ni, y, xx, ci, v);
                        k += 1;
                    }
                }
            }
        }
    }
    Ok((dx, d_gamma, d_beta))
}
