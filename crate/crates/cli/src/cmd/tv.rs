//! `toolpose tv`: total-variation confidence per heatmap file.
//!
//! One line per input, in input order: `{frame_id} total={v}`. With
//! `--per-channel`, indented `{channel}={v}` lines follow each total.

use std::io::Write;
use std::path::PathBuf;

use toolpose_core::tv::total_variation;

use crate::cmd::{chunked_ordered, CmdResult};
use crate::config::ResolvedConfig;
use crate::{frame_id, hmap, thread_pool};

/// Runs the command.
pub fn run(
    cfg: &ResolvedConfig,
    inputs: &[PathBuf],
    per_channel: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let pool = thread_pool(cfg.run.threads);
    chunked_ordered(
        &pool,
        inputs,
        |path| {
            let map = hmap::read_heatmap(path)?;
            let report = total_variation(&map);
            let mut text = format!("{} total={}\n", frame_id(path), report.total);
            if per_channel {
                for (name, v) in map.channel_names().iter().zip(&report.per_channel) {
                    text.push_str(&format!("  {name}={v}\n"));
                }
            }
            Ok(text)
        },
        |text| {
            write!(out, "{text}")?;
            Ok(())
        },
    )
}
