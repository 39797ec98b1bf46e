//! `toolpose bench`: wall-time of the full decode per frame.
//!
//! Decodes one heatmap repeatedly on a single thread after a short warm-up
//! and reports the median and 95th percentile in milliseconds. Without an
//! input file, a synthetic scene at the configured geometry is rendered and
//! benchmarked, so `toolpose bench` works on a bare checkout.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use toolpose_core::decode::parse_instruments;
use toolpose_core::render::render_targets;
use toolpose_core::synth::{generate_scene, SceneSpec};
use toolpose_core::Heatmap;

use crate::cmd::CmdResult;
use crate::config::ResolvedConfig;
use crate::skelfile::load_skeleton;
use crate::hmap;

/// Untimed decodes before measurement starts.
const WARMUP: usize = 5;

/// Value at quantile `q` of an ascending sample.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

/// Runs the command; `iterations` is clamped up to 100.
pub fn run(
    cfg: &ResolvedConfig,
    input: Option<&Path>,
    iterations: usize,
    out: &mut dyn Write,
) -> CmdResult {
    let skeleton = load_skeleton(&cfg.run.skeleton)?;
    let decode_cfg = cfg.decode_config();
    let (source, map): (String, Heatmap) = match input {
        Some(path) => (path.display().to_string(), hmap::read_heatmap(path)?),
        None => {
            let spec = SceneSpec {
                frame: cfg.frame_size(),
                skeleton: skeleton.clone(),
                instrument_count: cfg.synth.count,
                min_separation: cfg.synth.separation,
                seed: cfg.run.seed,
            };
            let instruments = generate_scene(&spec)?;
            let map =
                render_targets(&instruments, &skeleton, spec.frame, &cfg.render_config())?;
            ("synthetic scene".to_string(), map)
        }
    };

    for _ in 0..WARMUP {
        parse_instruments(&map, &skeleton, &decode_cfg)?;
    }
    let iterations = iterations.max(100);
    let mut times_ms = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let start = Instant::now();
        let decoded = parse_instruments(&map, &skeleton, &decode_cfg)?;
        times_ms.push(start.elapsed().as_secs_f64() * 1e3);
        // Keep the decode observable so the timed call is never elided.
        std::hint::black_box(decoded);
    }
    times_ms.sort_by(f64::total_cmp);

    writeln!(
        out,
        "input={source} size={}x{}x{}",
        map.height(),
        map.width(),
        map.channels()
    )?;
    writeln!(out, "iterations={iterations}")?;
    writeln!(out, "median_ms={:.3}", quantile(&times_ms, 0.5))?;
    writeln!(out, "p95_ms={:.3}", quantile(&times_ms, 0.95))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_pick_order_statistics() {
        let sorted: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(quantile(&sorted, 0.5), 51.0);
        assert_eq!(quantile(&sorted, 0.95), 95.0);
        assert_eq!(quantile(&sorted, 1.0), 100.0);
    }
}
