//! `toolpose gate`: pseudo-label selection on total variation.
//!
//! Output, all to stdout:
//!
//! ```text
//! mode=multi
//! threshold=1000
//! accept frame_0000 tv=2481.5260233419988
//! reject frame_0001 tv=561.0763624484768
//! accepted=1 rejected=1
//! ```
//!
//! The exit code stays 0 even when every frame is rejected: an empty
//! selection is a result, not a failure.

use std::io::Write;
use std::path::PathBuf;

use toolpose_core::ssl::gate_pseudo_label;

use crate::cmd::{chunked_ordered, CmdResult};
use crate::config::{Mode, ResolvedConfig};
use crate::{frame_id, hmap, thread_pool};

/// Runs the command.
pub fn run(cfg: &ResolvedConfig, inputs: &[PathBuf], out: &mut dyn Write) -> CmdResult {
    let gate_cfg = cfg.gate_config();
    let mode = match cfg.gate.mode {
        Mode::Single => "single",
        Mode::Multi => "multi",
    };
    writeln!(out, "mode={mode}")?;
    writeln!(out, "threshold={}", gate_cfg.threshold())?;

    let pool = thread_pool(cfg.run.threads);
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    chunked_ordered(
        &pool,
        inputs,
        |path| {
            let map = hmap::read_heatmap(path)?;
            let (accept, tv) = gate_pseudo_label(&map, &gate_cfg);
            Ok((frame_id(path), accept, tv))
        },
        |(id, accept, tv)| {
            let verdict = if accept { "accept" } else { "reject" };
            if accept {
                accepted += 1;
            } else {
                rejected += 1;
            }
            writeln!(out, "{verdict} {id} tv={tv}")?;
            Ok(())
        },
    )?;
    writeln!(out, "accepted={accepted} rejected={rejected}")?;
    Ok(())
}
