//! Layered run configuration.
//!
//! Precedence, highest first: command-line flag, config file, preset
//! default, built-in default. The resolved configuration is fully concrete,
//! validated against every module's invariants at load time, and printable
//! as TOML via `--print-config`.
//!
//! The file mirrors the resolved sections; every key is optional:
//!
//! ```toml
//! [run]
//! seed = 7
//! threads = 4
//! preset = "endovis"      # or "rmit"
//! skeleton = "endovis"    # preset name or a skeleton file path
//! height = 256
//! width = 320
//!
//! [render]
//! sigma = 20.0
//! amplitude = 1.0
//!
//! [decode]
//! smooth_sigma = 3.0
//! nms_threshold = 0.3
//! nms_window = 5
//! tv_boost_threshold = 1000.0
//! line_samples = 10
//! pair_score_threshold = 0.3
//! high_boost_k = 1.0
//! high_boost_sigma = 2.0
//!
//! [gate]
//! mode = "multi"          # or "single"
//! tv_threshold_multi = 1000.0
//! tv_threshold_single = 400.0
//!
//! [eval]
//! pixel_threshold = 20.0
//! frame_scale = 1.0
//! strategy = "optimal"    # or "greedy"
//!
//! [synth]
//! count = 2
//! separation = 80.0
//! ```
//!
//! Unknown keys anywhere are errors: a typo must not silently fall back to
//! a default.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toolpose_core::decode::DecodeConfig;
use toolpose_core::eval::{EvalConfig, MatchStrategy};
use toolpose_core::render::RenderConfig;
use toolpose_core::ssl::{GateMode, PseudoLabelConfig};
use toolpose_core::FrameSize;

/// Frame-geometry and threshold preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// 256x320 frames, five-joint skeleton with edges, 20 px match radius.
    Endovis,
    /// 288x384 frames, four-joint edgeless skeleton, 15 px match radius.
    Rmit,
}

impl Preset {
    fn height(self) -> usize {
        match self {
            Preset::Endovis => 256,
            Preset::Rmit => 288,
        }
    }

    fn width(self) -> usize {
        match self {
            Preset::Endovis => 320,
            Preset::Rmit => 384,
        }
    }

    fn skeleton(self) -> &'static str {
        match self {
            Preset::Endovis => "endovis",
            Preset::Rmit => "rmit",
        }
    }

    fn pixel_threshold(self) -> f64 {
        match self {
            Preset::Endovis => 20.0,
            Preset::Rmit => 15.0,
        }
    }
}

/// Gate regime, the serializable face of [`GateMode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One instrument per frame.
    Single,
    /// Several instruments per frame.
    Multi,
}

impl From<Mode> for GateMode {
    fn from(m: Mode) -> GateMode {
        match m {
            Mode::Single => GateMode::Single,
            Mode::Multi => GateMode::Multi,
        }
    }
}

/// Matching rule, the serializable face of [`MatchStrategy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Exact minimum-cost matching.
    Optimal,
    /// Nearest-first matching, for sensitivity comparisons.
    Greedy,
}

impl From<Strategy> for MatchStrategy {
    fn from(s: Strategy) -> MatchStrategy {
        match s {
            Strategy::Optimal => MatchStrategy::Optimal,
            Strategy::Greedy => MatchStrategy::Greedy,
        }
    }
}

/// Every setting a command can override, all optional.
///
/// The shared command-line flags fill the top group; subcommands fill the
/// scoped group below it. Anything left `None` falls through to the config
/// file, then the preset, then the built-in default.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    /// Config file to layer under the flags.
    pub config: Option<PathBuf>,
    /// Base RNG seed.
    pub seed: Option<u64>,
    /// Worker thread count; 0 means one per core.
    pub threads: Option<usize>,
    /// Rendering Gaussian width.
    pub sigma: Option<f64>,
    /// Candidate peak threshold for decoding.
    pub nms_threshold: Option<f64>,
    /// Confidence threshold: replaces the active gate mode's threshold and
    /// the decode boost threshold.
    pub tv_threshold: Option<f64>,
    /// Match radius for evaluation.
    pub pixel_threshold: Option<f64>,
    /// Skeleton selector: preset name or file path.
    pub skeleton: Option<String>,
    /// Geometry preset.
    pub preset: Option<Preset>,

    /// Frame height, from a subcommand flag.
    pub height: Option<usize>,
    /// Frame width, from a subcommand flag.
    pub width: Option<usize>,
    /// Gate regime, from the gate subcommand.
    pub gate_mode: Option<Mode>,
    /// Matching rule, from the eval subcommand.
    pub eval_strategy: Option<Strategy>,
    /// Instruments per synthetic scene, from the synth subcommand.
    pub synth_count: Option<usize>,
    /// Minimum joint separation for synthetic scenes.
    pub synth_separation: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    run: RunFile,
    render: RenderFile,
    decode: DecodeFile,
    gate: GateFile,
    eval: EvalFile,
    synth: SynthFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RunFile {
    seed: Option<u64>,
    threads: Option<usize>,
    preset: Option<Preset>,
    skeleton: Option<String>,
    height: Option<usize>,
    width: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RenderFile {
    sigma: Option<f64>,
    amplitude: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct DecodeFile {
    smooth_sigma: Option<f64>,
    nms_threshold: Option<f64>,
    nms_window: Option<usize>,
    tv_boost_threshold: Option<f64>,
    line_samples: Option<usize>,
    pair_score_threshold: Option<f64>,
    high_boost_k: Option<f64>,
    high_boost_sigma: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GateFile {
    mode: Option<Mode>,
    tv_threshold_multi: Option<f64>,
    tv_threshold_single: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct EvalFile {
    pixel_threshold: Option<f64>,
    frame_scale: Option<f64>,
    strategy: Option<Strategy>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SynthFile {
    count: Option<usize>,
    separation: Option<f64>,
}

/// Fully resolved, validated settings for one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    /// Process-level settings.
    pub run: RunSettings,
    /// Target rendering.
    pub render: RenderSettings,
    /// Pose decoding.
    pub decode: DecodeSettings,
    /// Pseudo-label gating.
    pub gate: GateSettings,
    /// Metric computation.
    pub eval: EvalSettings,
    /// Synthetic scene generation.
    pub synth: SynthSettings,
}

/// Process-level settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSettings {
    /// Base RNG seed.
    pub seed: u64,
    /// Worker threads; 0 means one per core.
    pub threads: usize,
    /// Active preset.
    pub preset: Preset,
    /// Skeleton selector: preset name or file path.
    pub skeleton: String,
    /// Frame height in pixels.
    pub height: usize,
    /// Frame width in pixels.
    pub width: usize,
}

/// Target rendering settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenderSettings {
    /// Gaussian width in pixels.
    pub sigma: f64,
    /// Peak value of blobs and stripes.
    pub amplitude: f64,
}

/// Pose decoding settings; see the core decode pipeline for semantics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeSettings {
    /// Pre-suppression smoothing width.
    pub smooth_sigma: f64,
    /// Candidate peak threshold.
    pub nms_threshold: f64,
    /// Suppression window side length.
    pub nms_window: usize,
    /// Confidence level below which edge channels get sharpened.
    pub tv_boost_threshold: f64,
    /// Samples per line integral.
    pub line_samples: usize,
    /// Minimum admissible pair score.
    pub pair_score_threshold: f64,
    /// Sharpening strength.
    pub high_boost_k: f64,
    /// Sharpening low-pass width.
    pub high_boost_sigma: f64,
}

/// Pseudo-label gate settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateSettings {
    /// Active regime.
    pub mode: Mode,
    /// Threshold applied in multi-instrument mode.
    pub tv_threshold_multi: f64,
    /// Threshold applied in single-instrument mode.
    pub tv_threshold_single: f64,
}

/// Metric computation settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalSettings {
    /// Match radius in original-frame pixels.
    pub pixel_threshold: f64,
    /// Prediction-to-original resolution factor.
    pub frame_scale: f64,
    /// Assignment rule.
    pub strategy: Strategy,
}

/// Synthetic scene settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthSettings {
    /// Instruments per scene.
    pub count: usize,
    /// Minimum pairwise joint separation in pixels.
    pub separation: f64,
}

/// A configuration failure.
#[derive(Debug)]
pub enum ConfigError {
    /// The config file could not be read.
    Io(PathBuf, io::Error),
    /// The config file is not valid TOML for the documented schema.
    Parse(PathBuf, toml::de::Error),
    /// A resolved value violates a module invariant.
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            ConfigError::Parse(path, e) => write!(f, "{}: {e}", path.display()),
            ConfigError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn load_file(path: &Path) -> Result<FileConfig, ConfigError> {
    let text =
        fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
    toml::from_str(&text).map_err(|e| ConfigError::Parse(path.to_path_buf(), e))
}

/// Resolves overrides against the config file, preset and defaults, then
/// validates every module's invariants.
pub fn resolve(overrides: &Overrides) -> Result<ResolvedConfig, ConfigError> {
    let file = match &overrides.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    let preset = overrides.preset.or(file.run.preset).unwrap_or(Preset::Endovis);
    let decode_defaults = DecodeConfig::default();

    let mut gate = GateSettings {
        mode: overrides.gate_mode.or(file.gate.mode).unwrap_or(Mode::Multi),
        tv_threshold_multi: file
            .gate
            .tv_threshold_multi
            .unwrap_or(toolpose_core::ssl::DEFAULT_TV_THRESHOLD_MULTI),
        tv_threshold_single: file
            .gate
            .tv_threshold_single
            .unwrap_or(toolpose_core::ssl::DEFAULT_TV_THRESHOLD_SINGLE),
    };
    if let Some(tv) = overrides.tv_threshold {
        match gate.mode {
            Mode::Multi => gate.tv_threshold_multi = tv,
            Mode::Single => gate.tv_threshold_single = tv,
        }
    }

    let resolved = ResolvedConfig {
        run: RunSettings {
            seed: overrides.seed.or(file.run.seed).unwrap_or(0),
            threads: overrides.threads.or(file.run.threads).unwrap_or(0),
            preset,
            skeleton: overrides
                .skeleton
                .clone()
                .or(file.run.skeleton)
                .unwrap_or_else(|| preset.skeleton().to_string()),
            height: overrides.height.or(file.run.height).unwrap_or(preset.height()),
            width: overrides.width.or(file.run.width).unwrap_or(preset.width()),
        },
        render: RenderSettings {
            sigma: overrides
                .sigma
                .or(file.render.sigma)
                .unwrap_or(toolpose_core::render::DEFAULT_SIGMA),
            amplitude: file.render.amplitude.unwrap_or(1.0),
        },
        decode: DecodeSettings {
            smooth_sigma: file.decode.smooth_sigma.unwrap_or(decode_defaults.smooth_sigma),
            nms_threshold: overrides
                .nms_threshold
                .or(file.decode.nms_threshold)
                .unwrap_or(decode_defaults.nms_threshold),
            nms_window: file.decode.nms_window.unwrap_or(decode_defaults.nms_window),
            tv_boost_threshold: overrides
                .tv_threshold
                .or(file.decode.tv_boost_threshold)
                .unwrap_or(decode_defaults.tv_boost_threshold),
            line_samples: file.decode.line_samples.unwrap_or(decode_defaults.line_samples),
            pair_score_threshold: file
                .decode
                .pair_score_threshold
                .unwrap_or(decode_defaults.pair_score_threshold),
            high_boost_k: file.decode.high_boost_k.unwrap_or(decode_defaults.high_boost_k),
            high_boost_sigma: file
                .decode
                .high_boost_sigma
                .unwrap_or(decode_defaults.high_boost_sigma),
        },
        gate,
        eval: EvalSettings {
            pixel_threshold: overrides
                .pixel_threshold
                .or(file.eval.pixel_threshold)
                .unwrap_or(preset.pixel_threshold()),
            frame_scale: file.eval.frame_scale.unwrap_or(1.0),
            strategy: overrides
                .eval_strategy
                .or(file.eval.strategy)
                .unwrap_or(Strategy::Optimal),
        },
        synth: SynthSettings {
            count: overrides.synth_count.or(file.synth.count).unwrap_or(2),
            separation: overrides
                .synth_separation
                .or(file.synth.separation)
                .unwrap_or(80.0),
        },
    };
    validate(&resolved)?;
    Ok(resolved)
}

fn validate(cfg: &ResolvedConfig) -> Result<(), ConfigError> {
    let invalid = |msg: String| Err(ConfigError::Invalid(msg));
    if cfg.run.height < 2 || cfg.run.width < 2 {
        return invalid(format!(
            "run.height and run.width must be >= 2, got {}x{}",
            cfg.run.height, cfg.run.width
        ));
    }
    for (name, value) in [
        ("render.sigma", cfg.render.sigma),
        ("render.amplitude", cfg.render.amplitude),
        ("eval.pixel_threshold", cfg.eval.pixel_threshold),
        ("eval.frame_scale", cfg.eval.frame_scale),
        ("synth.separation", cfg.synth.separation),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return invalid(format!("{name} must be a positive number, got {value}"));
        }
    }
    cfg.decode_config()
        .validate()
        .map_err(|e| ConfigError::Invalid(format!("decode: {e}")))?;
    cfg.gate_config()
        .validate()
        .map_err(|e| ConfigError::Invalid(format!("gate: {e}")))?;
    Ok(())
}

impl ResolvedConfig {
    /// Frame size from the run section.
    pub fn frame_size(&self) -> FrameSize {
        FrameSize::new(self.run.height, self.run.width)
    }

    /// Rendering parameters for the core pipeline.
    pub fn render_config(&self) -> RenderConfig {
        RenderConfig { sigma: self.render.sigma, amplitude: self.render.amplitude }
    }

    /// Decoding parameters for the core pipeline.
    pub fn decode_config(&self) -> DecodeConfig {
        DecodeConfig {
            smooth_sigma: self.decode.smooth_sigma,
            nms_threshold: self.decode.nms_threshold,
            nms_window: self.decode.nms_window,
            tv_boost_threshold: self.decode.tv_boost_threshold,
            line_samples: self.decode.line_samples,
            pair_score_threshold: self.decode.pair_score_threshold,
            high_boost_k: self.decode.high_boost_k,
            high_boost_sigma: self.decode.high_boost_sigma,
        }
    }

    /// Gate parameters for the core pipeline.
    pub fn gate_config(&self) -> PseudoLabelConfig {
        PseudoLabelConfig {
            tv_threshold_multi: self.gate.tv_threshold_multi,
            tv_threshold_single: self.gate.tv_threshold_single,
            mode: self.gate.mode.into(),
        }
    }

    /// Matching parameters for the core pipeline.
    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            pixel_threshold: self.eval.pixel_threshold,
            frame_scale: self.eval.frame_scale,
            strategy: self.eval.strategy.into(),
        }
    }

    /// Resolved settings as pretty TOML, the `--print-config` output.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("resolved settings serialize infallibly")
    }
}
