//! `toolpose`: batch workflows for heatmap-based 2D pose estimation of
//! surgical instruments.
//!
//! Every command is deterministic given identical inputs, configuration and
//! seeds; `--threads` changes wall time, never output. Failures print one
//! diagnostic line to stderr and exit nonzero; malformed files are reported
//! with the file name and byte offset.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use toolpose::cmd::{self, CmdResult};
use toolpose::config::{self, Mode, Overrides, Preset, Strategy};

#[derive(Parser)]
#[command(
    name = "toolpose",
    version,
    about = "Render, decode, gate, augment and score instrument pose heatmaps"
)]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Option<Command>,
}

/// Flags shared by every subcommand. Precedence: flag, then config file,
/// then preset default, then built-in default.
#[derive(Args)]
struct Shared {
    /// TOML config file layered under the flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Base RNG seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads; 0 means one per core.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Gaussian width for target rendering, in pixels.
    #[arg(long, global = true, value_name = "PX")]
    sigma: Option<f64>,

    /// Minimum peak value for joint candidates when decoding.
    #[arg(long, global = true, value_name = "SCORE")]
    nms_threshold: Option<f64>,

    /// Total-variation threshold for the active gate mode; also the level
    /// below which decoding sharpens edge channels.
    #[arg(long, global = true, value_name = "TV")]
    tv_threshold: Option<f64>,

    /// Match radius for evaluation, in original-frame pixels.
    #[arg(long, global = true, value_name = "PX")]
    pixel_threshold: Option<f64>,

    /// Skeleton: "endovis", "rmit", or a skeleton file path.
    #[arg(long, global = true, value_name = "SEL")]
    skeleton: Option<String>,

    /// Frame geometry and threshold preset.
    #[arg(long, global = true, value_enum, value_name = "NAME")]
    preset: Option<Preset>,

    /// Print the fully resolved configuration as TOML and exit without
    /// running the command.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic scenes: annotations, target heatmaps, previews.
    Synth {
        /// Output directory.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Number of frames to generate.
        #[arg(long, default_value_t = 1, value_name = "N")]
        frames: usize,
        /// Instruments per frame.
        #[arg(long, value_name = "N")]
        count: Option<usize>,
        /// Minimum pairwise joint separation, in pixels.
        #[arg(long, value_name = "PX")]
        separation: Option<f64>,
        /// Frame height, in pixels.
        #[arg(long, value_name = "PX")]
        height: Option<usize>,
        /// Frame width, in pixels.
        #[arg(long, value_name = "PX")]
        width: Option<usize>,
    },
    /// Render an annotation file into HMAP1 target heatmaps.
    Render {
        /// Annotation file; may describe any number of frames.
        #[arg(long, value_name = "FILE")]
        annotations: PathBuf,
        /// Output directory for `{frame_id}.hmap`.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Also write a grayscale channel-max preview per frame.
        #[arg(long)]
        preview: bool,
        /// Frame height, in pixels.
        #[arg(long, value_name = "PX")]
        height: Option<usize>,
        /// Frame width, in pixels.
        #[arg(long, value_name = "PX")]
        width: Option<usize>,
    },
    /// Decode HMAP1 predictions into pose records (JSON lines).
    Decode {
        /// Input heatmap files.
        #[arg(value_name = "HMAP")]
        inputs: Vec<PathBuf>,
        /// Write records here instead of stdout.
        #[arg(long, value_name = "FILE")]
        records: Option<PathBuf>,
    },
    /// Report total-variation confidence per heatmap file.
    Tv {
        /// Input heatmap files.
        #[arg(value_name = "HMAP")]
        inputs: Vec<PathBuf>,
        /// Also list per-channel variation.
        #[arg(long)]
        per_channel: bool,
    },
    /// Select pseudo-label candidates by total-variation confidence.
    Gate {
        /// Input heatmap files.
        #[arg(value_name = "HMAP")]
        inputs: Vec<PathBuf>,
        /// Scene regime choosing which threshold applies.
        #[arg(long, value_enum, value_name = "MODE")]
        mode: Option<Mode>,
    },
    /// Fuse two annotated frames by swapping instrument halves.
    Swap {
        /// First image (P6).
        #[arg(long, value_name = "PPM")]
        a_image: PathBuf,
        /// First annotation file (single frame).
        #[arg(long, value_name = "FILE")]
        a_annotations: PathBuf,
        /// Second image (P6).
        #[arg(long, value_name = "PPM")]
        b_image: PathBuf,
        /// Second annotation file (single frame).
        #[arg(long, value_name = "FILE")]
        b_annotations: PathBuf,
        /// Output directory.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Frame id of the fused output; names the files.
        #[arg(long, default_value = "swap", value_name = "ID")]
        name: String,
    },
    /// Score pose records against ground-truth annotations.
    Eval {
        /// Pose records (JSON lines), as written by decode.
        #[arg(long, value_name = "FILE")]
        predictions: PathBuf,
        /// Ground-truth annotation file.
        #[arg(long, value_name = "FILE")]
        truth: PathBuf,
        /// Also write the metrics as key=value records.
        #[arg(long, value_name = "FILE")]
        records: Option<PathBuf>,
        /// Assignment rule for matching detections.
        #[arg(long, value_enum, value_name = "RULE")]
        strategy: Option<Strategy>,
    },
    /// Measure decode latency (median and p95 over >= 100 iterations).
    Bench {
        /// Heatmap to decode; a synthetic scene is used when omitted.
        #[arg(value_name = "HMAP")]
        input: Option<PathBuf>,
        /// Timed iterations; values below 100 are raised to 100.
        #[arg(long, default_value_t = 100, value_name = "N")]
        iterations: usize,
    },
}

fn overrides(cli: &Cli) -> Overrides {
    let s = &cli.shared;
    let mut overrides = Overrides {
        config: s.config.clone(),
        seed: s.seed,
        threads: s.threads,
        sigma: s.sigma,
        nms_threshold: s.nms_threshold,
        tv_threshold: s.tv_threshold,
        pixel_threshold: s.pixel_threshold,
        skeleton: s.skeleton.clone(),
        preset: s.preset,
        ..Overrides::default()
    };
    match &cli.command {
        Some(Command::Synth { count, separation, height, width, .. }) => {
            overrides.synth_count = *count;
            overrides.synth_separation = *separation;
            overrides.height = *height;
            overrides.width = *width;
        }
        Some(Command::Render { height, width, .. }) => {
            overrides.height = *height;
            overrides.width = *width;
        }
        Some(Command::Gate { mode, .. }) => overrides.gate_mode = *mode,
        Some(Command::Eval { strategy, .. }) => overrides.eval_strategy = *strategy,
        _ => {}
    }
    overrides
}

fn run(cli: Cli) -> CmdResult {
    let cfg = config::resolve(&overrides(&cli))?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if cli.shared.print_config {
        write!(out, "{}", cfg.to_toml())?;
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err("no command given; see --help, or --print-config for the defaults".into());
    };
    match command {
        Command::Synth { out: dir, frames, .. } => cmd::synth::run(&cfg, &dir, frames, &mut out),
        Command::Render { annotations, out: dir, preview, .. } => {
            cmd::render::run(&cfg, &annotations, &dir, preview, &mut out)
        }
        Command::Decode { inputs, records } => {
            cmd::decode::run(&cfg, &inputs, records.as_deref(), &mut out)
        }
        Command::Tv { inputs, per_channel } => {
            cmd::tv::run(&cfg, &inputs, per_channel, &mut out)
        }
        Command::Gate { inputs, .. } => cmd::gate::run(&cfg, &inputs, &mut out),
        Command::Swap { a_image, a_annotations, b_image, b_annotations, out: dir, name } => {
            cmd::swap::run(
                &cfg,
                &a_image,
                &a_annotations,
                &b_image,
                &b_annotations,
                &dir,
                &name,
                &mut out,
            )
        }
        Command::Eval { predictions, truth, records, .. } => {
            cmd::eval::run(&cfg, &predictions, &truth, records.as_deref(), &mut out)
        }
        Command::Bench { input, iterations } => {
            cmd::bench::run(&cfg, input.as_deref(), iterations, &mut out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
