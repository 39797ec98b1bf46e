//! Sigmoid attention gate over feature maps.
//!
//! The gate takes decoder features and a single-channel pre-attention map
//! `a`, squashes the map through a sigmoid and scales every feature channel
//! by it: `out[n,y,x,c] = features[n,y,x,c] * sigmoid(a[n,y,x,0])`.

use super::tensor::{NnError, Tensor4};

/// Numerically stable logistic function.
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

fn check_gate_shapes(features: &Tensor4, pre_attention: &Tensor4) -> Result<(), NnError> {
    let (fn_, fh, fw, _) = features.shape();
    let (an, ah, aw, ac) = pre_attention.shape();
    if ac != 1 || (an, ah, aw) != (fn_, fh, fw) {
        return Err(NnError::ShapeMismatch {
            left: features.shape(),
            right: pre_attention.shape(),
        });
    }
    Ok(())
}

/// Forward pass of the attention gate.
///
/// `pre_attention` must be `(n, h, w, 1)` matching the spatial shape of
/// `features`. Pre-attention value 0 scales features by exactly one half.
pub fn attention_gate_forward(
    features: &Tensor4,
    pre_attention: &Tensor4,
) -> Result<Tensor4, NnError> {
    check_gate_shapes(features, pre_attention)?;
    let (n, h, w, c) = features.shape();
    let mut out = features.zeros_like();
    for ni in 0..n {
        for y in 0..h {
            for x in 0..w {
                let g = sigmoid(pre_attention.get(ni, y, x, 0));
                for ci in 0..c {
                    out.set(ni, y, x, ci, features.get(ni, y, x, ci) * g);
                }
            }
        }
    }
    Ok(out)
}

/// Backward pass of the attention gate.
///
/// Given the upstream gradient `d out`, returns
/// `(d features, d pre_attention)`:
///
/// * `d features[n,y,x,c] = up[n,y,x,c] * sigmoid(a)`
/// * `d a[n,y,x,0] = sigmoid(a) * (1 - sigmoid(a)) * sum_c up[n,y,x,c] * features[n,y,x,c]`
pub fn attention_gate_backward(
    features: &Tensor4,
    pre_attention: &Tensor4,
    upstream: &Tensor4,
) -> Result<(Tensor4, Tensor4), NnError> {
    check_gate_shapes(features, pre_attention)?;
    features.check_same_shape(upstream)?;
    let (n, h, w, c) = features.shape();
    let mut d_features = features.zeros_like();
    let mut d_pre = pre_attention.zeros_like();
    for ni in 0..n {
        for y in 0..h {
            for x in 0..w {
                let g = sigmoid(pre_attention.get(ni, y, x, 0));
                let mut dot = 0.0;
                for ci in 0..c {
                    let up = upstream.get(ni, y, x, ci);
                    d_features.set(ni, y, x, ci, up * g);
                    dot += up * features.get(ni, y, x, ci);
                }
                d_pre.set(ni, y, x, 0, g * (1.0 - g) * dot);
            }
        }
    }
    Ok((d_features, d_pre))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    #[test]
    fn zero_pre_attention_halves_features() {
        let features = Tensor4::from_data(1, 1, 2, 2, vec![2.0, -4.0, 6.0, 8.0]).unwrap();
        let pre = Tensor4::zeros(1, 1, 2, 1).unwrap();
        let out = attention_gate_forward(&features, &pre).unwrap();
        assert_eq!(out.data(), [1.0, -2.0, 3.0, 4.0]);
    }

    #[test]
    fn saturated_gate_passes_or_blocks() {
        let features = Tensor4::from_data(1, 1, 2, 1, vec![3.0, 3.0]).unwrap();
        let pre = Tensor4::from_data(1, 1, 2, 1, vec![40.0, -40.0]).unwrap();
        let out = attention_gate_forward(&features, &pre).unwrap();
        assert_relative_eq!(out.data()[0], 3.0, max_relative = 1e-12);
        assert!(out.data()[1].abs() < 1e-12);
    }

    #[test]
    fn shape_checks() {
        let features = Tensor4::zeros(1, 2, 2, 3).unwrap();
        let wrong_spatial = Tensor4::zeros(1, 2, 3, 1).unwrap();
        assert!(attention_gate_forward(&features, &wrong_spatial).is_err());
        let wrong_channels = Tensor4::zeros(1, 2, 2, 2).unwrap();
        assert!(attention_gate_forward(&features, &wrong_channels).is_err());
    }

    #[test]
    fn matches_scalar_loop_oracle_exactly() {
        let features = Tensor4::from_data(
            1,
            4,
            4,
            3,
            (0..48).map(|i| libm::sin(i as f64 * 0.41) * 2.3).collect(),
        )
        .unwrap();
        let pre = Tensor4::from_data(
            1,
            4,
            4,
            1,
            (0..16).map(|i| libm::cos(i as f64 * 0.77)).collect(),
        )
        .unwrap();
        let out = attention_gate_forward(&features, &pre).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                let g = 1.0 / (1.0 + libm::exp(-pre.get(0, y, x, 0)));
                for c in 0..3 {
                    // The textbook sigmoid form differs from the stable one
                    // by at most an ulp on negative inputs.
                    assert_relative_eq!(
                        out.get(0, y, x, c),
                        features.get(0, y, x, c) * g,
                        max_relative = 1e-14,
                        epsilon = 1e-300
                    );
                }
            }
        }
    }

    #[test]
    fn homogeneous_in_features() {
        let features = Tensor4::from_data(1, 2, 2, 2, vec![0.5, -1.0, 2.0, 0.3, -0.7, 1.1, 0.0, 0.9])
            .unwrap();
        let pre = Tensor4::from_data(1, 2, 2, 1, vec![0.2, -0.4, 1.0, 0.0]).unwrap();
        let k = 2.5;
        let scaled = Tensor4::from_data(
            1,
            2,
            2,
            2,
            features.data().iter().map(|v| k * v).collect(),
        )
        .unwrap();
        let base = attention_gate_forward(&features, &pre).unwrap();
        let out = attention_gate_forward(&scaled, &pre).unwrap();
        for (a, b) in out.data().iter().zip(base.data()) {
            assert_relative_eq!(*a, k * b, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_upstream_and_zero_features_kill_the_gradients() {
        let features = Tensor4::from_data(1, 1, 2, 2, vec![1.0, -2.0, 3.0, 0.5]).unwrap();
        let pre = Tensor4::from_data(1, 1, 2, 1, vec![0.3, -0.6]).unwrap();
        let zero_up = Tensor4::zeros(1, 1, 2, 2).unwrap();
        let (d_f, d_a) = attention_gate_backward(&features, &pre, &zero_up).unwrap();
        assert!(d_f.data().iter().all(|v| *v == 0.0));
        assert!(d_a.data().iter().all(|v| *v == 0.0));

        let zero_features = Tensor4::zeros(1, 1, 2, 2).unwrap();
        let up = Tensor4::from_data(1, 1, 2, 2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let (_, d_a) = attention_gate_backward(&zero_features, &pre, &up).unwrap();
        assert!(d_a.data().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn backward_matches_finite_differences() {
        // Small deterministic input; full check lives in the gradient suite.
        let features =
            Tensor4::from_data(1, 2, 2, 2, vec![0.5, -1.0, 2.0, 0.3, -0.7, 1.1, 0.0, 0.9])
                .unwrap();
        let pre = Tensor4::from_data(1, 2, 2, 1, vec![0.2, -0.4, 1.0, 0.0]).unwrap();
        let upstream =
            Tensor4::from_data(1, 2, 2, 2, vec![1.0, 0.5, -0.3, 0.8, 0.2, -1.0, 0.6, 0.4])
                .unwrap();
        let (d_f, d_a) = attention_gate_backward(&features, &pre, &upstream).unwrap();

        let loss = |f: &Tensor4, a: &Tensor4| -> f64 {
            let out = attention_gate_forward(f, a).unwrap();
            out.data().iter().zip(upstream.data()).map(|(o, u)| o * u).sum()
        };
        let h = 1e-6;
        for i in 0..features.data().len() {
            let mut plus = features.clone();
            plus.data_mut()[i] += h;
            let mut minus = features.clone();
            minus.data_mut()[i] -= h;
            let fd = (loss(&plus, &pre) - loss(&minus, &pre)) / (2.0 * h);
            assert_relative_eq!(d_f.data()[i], fd, max_relative = 1e-6, epsilon = 1e-9);
        }
        for i in 0..pre.data().len() {
            let mut plus = pre.clone();
            plus.data_mut()[i] += h;
            let mut minus = pre.clone();
            minus.data_mut()[i] -= h;
            let fd = (loss(&features, &plus) - loss(&features, &minus)) / (2.0 * h);
            assert_relative_eq!(d_a.data()[i], fd, max_relative = 1e-6, epsilon = 1e-9);
        }
    }
}
