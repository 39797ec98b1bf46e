//! `toolpose decode`: HMAP1 predictions to pose records.
//!
//! Emits one JSON record per input file, in input order, to stdout or to
//! `--records FILE`. Frame ids are the input file stems.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use toolpose_core::decode::parse_instruments;

use crate::cmd::{chunked_ordered, CmdResult};
use crate::config::ResolvedConfig;
use crate::records::{pose_record, record_to_line};
use crate::skelfile::load_skeleton;
use crate::{frame_id, hmap, thread_pool};

/// Runs the command.
pub fn run(
    cfg: &ResolvedConfig,
    inputs: &[PathBuf],
    records_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let skeleton = load_skeleton(&cfg.run.skeleton)?;
    let decode_cfg = cfg.decode_config();
    let pool = thread_pool(cfg.run.threads);

    let mut file_sink: Option<BufWriter<fs::File>> = match records_path {
        Some(path) => Some(BufWriter::new(fs::File::create(path)?)),
        None => None,
    };
    chunked_ordered(
        &pool,
        inputs,
        |path| {
            let map = hmap::read_heatmap(path)?;
            let (poses, confidence) = parse_instruments(&map, &skeleton, &decode_cfg)?;
            let record = pose_record(frame_id(path), &poses, &confidence, &map, &skeleton);
            Ok(record_to_line(&record))
        },
        |line| {
            match &mut file_sink {
                Some(sink) => writeln!(sink, "{line}")?,
                None => writeln!(out, "{line}")?,
            }
            Ok(())
        },
    )?;
    if let Some(mut sink) = file_sink {
        sink.flush()?;
        let path = records_path.expect("sink exists only with a records path");
        writeln!(out, "wrote {} records to {}", inputs.len(), path.display())?;
    }
    Ok(())
}
