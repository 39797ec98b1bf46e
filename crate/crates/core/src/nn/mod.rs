//! Reference implementations of the network building blocks.
//!
//! These are small, exact CPU kernels with analytic backward passes, meant
//! for verifying trained-model exports and for unit-level gradient checks,
//! not for training speed. Shapes follow `(n, h, w, c)` channel-last
//! layout, matching the heatmap convention.

mod activation;
mod attention;
mod norm;
mod shape;
mod tensor;

pub use activation::{rlrelu, rlrelu_backward, RlreluConfig, RlreluMode};
pub use attention::{attention_gate_backward, attention_gate_forward};
pub use norm::{group_norm_backward, group_norm_forward, GroupNormConfig};
pub use shape::{attention_unet_plan, AttentionUnetConfig, StageShape};
pub use tensor::{NnError, Tensor4};
