//! `toolpose synth`: generate synthetic scenes.
//!
//! Per frame `i` the command writes `frame_{i:04}.txt` (annotations),
//! `frame_{i:04}.hmap` (rendered targets) and `frame_{i:04}.ppm` (a stroke
//! preview), seeding scene `i` with `run.seed + i` so a dataset is
//! reproducible frame-by-frame and extending it never reshuffles earlier
//! frames.

use std::fs;
use std::io::Write;
use std::path::Path;

use toolpose_core::augment::Frame;
use toolpose_core::render::render_targets;
use toolpose_core::synth::{generate_scene, SceneSpec};

use crate::annot::{write_annotations, FrameAnnotations};
use crate::cmd::{chunked_ordered, CmdResult};
use crate::config::ResolvedConfig;
use crate::skelfile::load_skeleton;
use crate::{draw, hmap, pnm, thread_pool};

/// Runs the command; `frames` scenes into `out_dir`.
pub fn run(
    cfg: &ResolvedConfig,
    out_dir: &Path,
    frames: usize,
    out: &mut dyn Write,
) -> CmdResult {
    let skeleton = load_skeleton(&cfg.run.skeleton)?;
    fs::create_dir_all(out_dir)?;
    let pool = thread_pool(cfg.run.threads);
    let indices: Vec<usize> = (0..frames).collect();
    chunked_ordered(
        &pool,
        &indices,
        |&i| {
            let spec = SceneSpec {
                frame: cfg.frame_size(),
                skeleton: skeleton.clone(),
                instrument_count: cfg.synth.count,
                min_separation: cfg.synth.separation,
                seed: cfg.run.seed.wrapping_add(i as u64),
            };
            let instruments = generate_scene(&spec)?;
            let map = render_targets(&instruments, &skeleton, spec.frame, &cfg.render_config())?;
            let id = format!("frame_{i:04}");

            let mut annotations = FrameAnnotations::new();
            annotations.insert(id.clone(), instruments.clone());
            write_annotations(&out_dir.join(format!("{id}.txt")), &annotations)?;
            hmap::write_heatmap(&out_dir.join(format!("{id}.hmap")), &map)?;

            let mut preview = Frame::zeros(cfg.run.width, cfg.run.height);
            draw::draw_instruments(&mut preview, &instruments, &skeleton);
            pnm::write_p6(&out_dir.join(format!("{id}.ppm")), &preview)?;

            Ok(format!("{id}: {} instruments", instruments.len()))
        },
        |line| {
            writeln!(out, "{line}")?;
            Ok(())
        },
    )?;
    writeln!(out, "wrote {frames} frames to {}", out_dir.display())?;
    Ok(())
}
