//! `toolpose render`: annotation files to HMAP1 target heatmaps.
//!
//! The annotation file may carry any number of frames; each becomes
//! `{frame_id}.hmap` in the output directory. With `--preview`, a grayscale
//! channel-max composite is written alongside as `{frame_id}.pgm`.

use std::fs;
use std::io::Write;
use std::path::Path;

use toolpose_core::render::render_targets;
use toolpose_core::{Heatmap, InstrumentAnnotation};

use crate::annot::read_annotations;
use crate::cmd::{chunked_ordered, CmdResult};
use crate::config::ResolvedConfig;
use crate::pnm::{write_p5, GrayImage};
use crate::skelfile::load_skeleton;
use crate::{hmap, thread_pool};

/// Grayscale channel-max composite, scaled so `amplitude` maps to 255.
fn composite(map: &Heatmap, amplitude: f64) -> GrayImage {
    let (h, w, c) = (map.height(), map.width(), map.channels());
    let mut pixels = Vec::with_capacity(h * w);
    for pixel in map.data().chunks_exact(c) {
        let peak = pixel.iter().fold(0.0f64, |a, &v| a.max(v));
        pixels.push((peak / amplitude * 255.0).clamp(0.0, 255.0).round() as u8);
    }
    GrayImage { width: w, height: h, pixels }
}

/// Runs the command.
pub fn run(
    cfg: &ResolvedConfig,
    annotations_path: &Path,
    out_dir: &Path,
    preview: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let skeleton = load_skeleton(&cfg.run.skeleton)?;
    let frames: Vec<(String, Vec<InstrumentAnnotation>)> =
        read_annotations(annotations_path)?.into_iter().collect();
    fs::create_dir_all(out_dir)?;
    let pool = thread_pool(cfg.run.threads);
    let total = frames.len();
    chunked_ordered(
        &pool,
        &frames,
        |(id, instruments)| {
            let map =
                render_targets(instruments, &skeleton, cfg.frame_size(), &cfg.render_config())?;
            hmap::write_heatmap(&out_dir.join(format!("{id}.hmap")), &map)?;
            if preview {
                write_p5(
                    &out_dir.join(format!("{id}.pgm")),
                    &composite(&map, cfg.render.amplitude),
                )?;
            }
            Ok(format!("{id}: {} instruments, {} channels", instruments.len(), map.channels()))
        },
        |line| {
            writeln!(out, "{line}")?;
            Ok(())
        },
    )?;
    writeln!(out, "wrote {total} heatmaps to {}", out_dir.display())?;
    Ok(())
}
