//! Shape propagation for the attention U-Net style encoder-decoder.
//!
//! The network is three encoder blocks (the last without pooling), then two
//! decoder stages. Each decoder stage upsamples by two while halving
//! channels, concatenates the matching encoder skip, applies a spatial
//! attention gate and convolves back down to the skip's channel count. A
//! final 1x1 head maps to the output channels at full input resolution.
//!
//! This module only propagates shapes; it exists so export and debugging
//! tools can verify layer dimensions without instantiating weights.

use alloc::string::String;
use alloc::vec::Vec;

use super::tensor::NnError;

/// Architecture hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttentionUnetConfig {
    /// Channels of the first encoder block; doubles each level.
    pub base_features: usize,
    /// Output channels of the final 1x1 head.
    pub out_channels: usize,
}

impl Default for AttentionUnetConfig {
    fn default() -> Self {
        AttentionUnetConfig { base_features: 32, out_channels: 9 }
    }
}

/// One named stage with its output shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageShape {
    /// Stage label, e.g. `enc1` or `dec1.attention`.
    pub name: String,
    /// Rows of the stage output.
    pub height: usize,
    /// Columns of the stage output.
    pub width: usize,
    /// Channels of the stage output.
    pub channels: usize,
}

impl StageShape {
    fn new(name: &str, height: usize, width: usize, channels: usize) -> Self {
        StageShape { name: String::from(name), height, width, channels }
    }
}

/// Computes the output shape of every stage for an input of `h x w`.
///
/// Two poolings occur, so `h` and `w` must be divisible by 4 and at least 8.
/// The plan ends with the head stage at the input resolution; skip
/// concatenations are checked for spatial agreement as they are built.
pub fn attention_unet_plan(
    h: usize,
    w: usize,
    config: &AttentionUnetConfig,
) -> Result<Vec<StageShape>, NnError> {
    if config.base_features == 0 || config.out_channels == 0 {
        return Err(NnError::BadParameter("base_features and out_channels must be positive"));
    }
    if h % 4 != 0 || w % 4 != 0 || h < 8 || w < 8 {
        return Err(NnError::NotDivisible { size: (h, w), divisor: 4 });
    }
    let f = config.base_features;
    let mut plan = Vec::new();

    // Encoder: conv blocks at f, 2f, 4f; pooling after the first two only.
    plan.push(StageShape::new("enc1", h, w, f));
    plan.push(StageShape::new("pool1", h / 2, w / 2, f));
    plan.push(StageShape::new("enc2", h / 2, w / 2, 2 * f));
    plan.push(StageShape::new("pool2", h / 4, w / 4, 2 * f));
    plan.push(StageShape::new("enc3", h / 4, w / 4, 4 * f));

    // Decoder stage 1: up to half resolution, fuse the enc2 skip.
    let skip2 = (h / 2, w / 2, 2 * f);
    plan.push(StageShape::new("dec1.up", h / 2, w / 2, 2 * f));
    debug_assert_eq!((h / 2, w / 2), (skip2.0, skip2.1), "skip resolution");
    plan.push(StageShape::new("dec1.concat", h / 2, w / 2, 2 * f + skip2.2));
    plan.push(StageShape::new("dec1.attention", h / 2, w / 2, 1));
    plan.push(StageShape::new("dec1.conv", h / 2, w / 2, 2 * f));

    // Decoder stage 2: back to full resolution, fuse the enc1 skip.
    let skip1 = (h, w, f);
    plan.push(StageShape::new("dec2.up", h, w, f));
    debug_assert_eq!((h, w), (skip1.0, skip1.1), "skip resolution");
    plan.push(StageShape::new("dec2.concat", h, w, f + skip1.2));
    plan.push(StageShape::new("dec2.attention", h, w, 1));
    plan.push(StageShape::new("dec2.conv", h, w, f));

    plan.push(StageShape::new("head", h, w, config.out_channels));
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_for_default_input() {
        let plan = attention_unet_plan(256, 320, &AttentionUnetConfig::default()).unwrap();
        let find = |name: &str| plan.iter().find(|s| s.name == name).unwrap();

        let enc3 = find("enc3");
        assert_eq!((enc3.height, enc3.width, enc3.channels), (64, 80, 128));
        // Attention maps are single-channel at the stage resolution.
        assert_eq!(find("dec1.attention").channels, 1);
        assert_eq!(find("dec2.attention").channels, 1);
        // Concat channel counts double the incoming features.
        assert_eq!(find("dec1.concat").channels, 128);
        assert_eq!(find("dec2.concat").channels, 64);
        // Head restores the input resolution.
        let head = find("head");
        assert_eq!((head.height, head.width, head.channels), (256, 320, 9));
        // Resolution never collapses below a quarter.
        assert!(plan.iter().all(|s| s.height >= 64 && s.width >= 80));
    }

    #[test]
    fn channels_double_down_and_halve_up() {
        let plan = attention_unet_plan(64, 64, &AttentionUnetConfig { base_features: 16, out_channels: 4 })
            .unwrap();
        let channels: Vec<usize> = ["enc1", "enc2", "enc3", "dec1.conv", "dec2.conv"]
            .iter()
            .map(|n| plan.iter().find(|s| s.name == *n).unwrap().channels)
            .collect();
        assert_eq!(channels, [16, 32, 64, 32, 16]);
    }

    #[test]
    fn rejects_indivisible_input() {
        let cfg = AttentionUnetConfig::default();
        assert!(matches!(
            attention_unet_plan(250, 320, &cfg),
            Err(NnError::NotDivisible { .. })
        ));
        assert!(matches!(
            attention_unet_plan(256, 321, &cfg),
            Err(NnError::NotDivisible { .. })
        ));
        assert!(matches!(attention_unet_plan(4, 4, &cfg), Err(NnError::NotDivisible { .. })));
        assert!(attention_unet_plan(8, 8, &cfg).is_ok());
    }
}
