//! `toolpose swap`: fuse two frames by exchanging instrument halves.
//!
//! Each input is a P6 image plus a single-frame annotation file. The fused
//! frame and its transported annotations are written as `{name}.ppm` and
//! `{name}.txt`; the split columns are drawn from `run.seed`.

use std::fs;
use std::io::Write;
use std::path::Path;

use toolpose_core::augment::{random_swap, Frame};

use crate::annot::{read_annotations, write_annotations, FrameAnnotations};
use crate::cmd::{CmdError, CmdResult};
use crate::config::ResolvedConfig;
use crate::pnm;

/// Loads a P6 image and attaches the instruments of its annotation file.
fn load_frame(image_path: &Path, annotations_path: &Path) -> Result<Frame, CmdError> {
    let mut frame = pnm::read_p6(image_path)?;
    let mut annotations = read_annotations(annotations_path)?;
    if annotations.len() > 1 {
        return Err(format!(
            "{}: describes {} frames; swap inputs must describe one",
            annotations_path.display(),
            annotations.len()
        )
        .into());
    }
    if let Some((_, instruments)) = annotations.pop_first() {
        frame.annotations = instruments;
    }
    Ok(frame)
}

/// Runs the command.
#[allow(clippy::too_many_arguments)]
pub fn run(
    cfg: &ResolvedConfig,
    a_image: &Path,
    a_annotations: &Path,
    b_image: &Path,
    b_annotations: &Path,
    out_dir: &Path,
    name: &str,
    out: &mut dyn Write,
) -> CmdResult {
    let a = load_frame(a_image, a_annotations)?;
    let b = load_frame(b_image, b_annotations)?;
    let fused = random_swap(&a, &b, cfg.run.seed)?;

    fs::create_dir_all(out_dir)?;
    pnm::write_p6(&out_dir.join(format!("{name}.ppm")), &fused)?;
    let mut annotations = FrameAnnotations::new();
    annotations.insert(name.to_string(), fused.annotations.clone());
    write_annotations(&out_dir.join(format!("{name}.txt")), &annotations)?;

    writeln!(
        out,
        "wrote {name}.ppm and {name}.txt to {} ({} instruments)",
        out_dir.display(),
        fused.annotations.len()
    )?;
    Ok(())
}
