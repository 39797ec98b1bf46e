//! `toolpose eval`: score pose records against ground-truth annotations.
//!
//! Frames are the union of both files; a frame absent from one side simply
//! contributes misses or false alarms. Joint classes are the skeleton's
//! joints first, then any further names found in the data, sorted. The
//! summary table goes to stdout; `--records FILE` additionally writes the
//! rows as `key=value` lines. Only malformed input exits nonzero; poor
//! scores are results, not failures.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use toolpose_core::eval::{compute_metrics, match_detections, DetectionTally, MetricsSummary};
use toolpose_core::Point2;

use crate::annot::read_annotations;
use crate::cmd::CmdResult;
use crate::config::ResolvedConfig;
use crate::records::{read_records, PoseRecord};
use crate::skelfile::load_skeleton;

/// Tallies matches for every class over the union of frames.
fn tally_classes(
    records: &[PoseRecord],
    truth: &crate::annot::FrameAnnotations,
    classes: &[String],
    cfg: &ResolvedConfig,
) -> Vec<(String, DetectionTally)> {
    let eval_cfg = cfg.eval_config();
    let predictions: BTreeMap<&str, &PoseRecord> =
        records.iter().map(|r| (r.frame.as_str(), r)).collect();
    let frames: BTreeSet<&str> = predictions
        .keys()
        .copied()
        .chain(truth.keys().map(String::as_str))
        .collect();

    let mut tallies: Vec<(String, DetectionTally)> =
        classes.iter().map(|c| (c.clone(), DetectionTally::default())).collect();
    for frame in frames {
        for (class, tally) in &mut tallies {
            let preds: Vec<Point2> = predictions
                .get(frame)
                .map(|r| {
                    r.poses
                        .iter()
                        .filter_map(|pose| pose.joints.get(class))
                        .map(|j| Point2::new(j.x, j.y))
                        .collect()
                })
                .unwrap_or_default();
            let gts: Vec<Point2> = truth
                .get(frame)
                .map(|instruments| {
                    instruments.iter().filter_map(|ann| ann.get(class)).collect()
                })
                .unwrap_or_default();
            if preds.is_empty() && gts.is_empty() {
                continue;
            }
            tally.add(&match_detections(&preds, &gts, &eval_cfg));
        }
    }
    tallies
}

fn format_score(v: f64) -> String {
    format!("{v:.4}")
}

fn format_rmse(rmse: Option<f64>) -> String {
    match rmse {
        Some(v) => format!("{v:.4}"),
        None => "-".to_string(),
    }
}

/// Aligned text table, one row per class plus the unweighted average.
fn render_table(summary: &MetricsSummary) -> String {
    let name_width = summary
        .per_joint
        .iter()
        .map(|m| m.joint.len())
        .chain(["joint".len(), "average".len()])
        .max()
        .unwrap_or(5);
    let mut out = format!(
        "{:<name_width$}  {:>9}  {:>9}  {:>9}  {:>9}  {:>6}  {:>6}  {:>6}\n",
        "joint", "precision", "recall", "f1", "rmse", "tp", "fp", "fn"
    );
    for m in &summary.per_joint {
        out.push_str(&format!(
            "{:<name_width$}  {:>9}  {:>9}  {:>9}  {:>9}  {:>6}  {:>6}  {:>6}\n",
            m.joint,
            format_score(m.precision),
            format_score(m.recall),
            format_score(m.f1),
            format_rmse(m.rmse),
            m.true_positives,
            m.false_positives,
            m.false_negatives,
        ));
    }
    let avg = &summary.average;
    out.push_str(&format!(
        "{:<name_width$}  {:>9}  {:>9}  {:>9}  {:>9}\n",
        "average",
        format_score(avg.precision),
        format_score(avg.recall),
        format_score(avg.f1),
        format_rmse(avg.rmse),
    ));
    out
}

/// Machine-readable rows: full-precision `key=value` pairs, one class per
/// line, average last.
fn render_records(summary: &MetricsSummary) -> String {
    let mut out = String::new();
    for m in &summary.per_joint {
        out.push_str(&format!(
            "joint={} tp={} fp={} fn={} precision={} recall={} f1={}",
            m.joint,
            m.true_positives,
            m.false_positives,
            m.false_negatives,
            m.precision,
            m.recall,
            m.f1
        ));
        if let Some(rmse) = m.rmse {
            out.push_str(&format!(" rmse={rmse}"));
        }
        out.push('\n');
    }
    let avg = &summary.average;
    out.push_str(&format!(
        "joint=average precision={} recall={} f1={}",
        avg.precision, avg.recall, avg.f1
    ));
    if let Some(rmse) = avg.rmse {
        out.push_str(&format!(" rmse={rmse}"));
    }
    out.push('\n');
    out
}

/// Runs the command.
pub fn run(
    cfg: &ResolvedConfig,
    predictions_path: &Path,
    truth_path: &Path,
    records_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let skeleton = load_skeleton(&cfg.run.skeleton)?;
    let records = read_records(predictions_path)?;
    let truth = read_annotations(truth_path)?;

    // Skeleton joints first, then anything else the data mentions, sorted.
    let mut classes: Vec<String> = skeleton.joint_names().to_vec();
    let known: BTreeSet<&String> = classes.iter().collect();
    let mut extra: BTreeSet<String> = BTreeSet::new();
    for record in &records {
        for pose in &record.poses {
            extra.extend(pose.joints.keys().filter(|k| !known.contains(k)).cloned());
        }
    }
    for instruments in truth.values() {
        for ann in instruments {
            extra.extend(
                ann.joints().map(|(n, _)| n.to_string()).filter(|n| !known.contains(n)),
            );
        }
    }
    classes.extend(extra);

    let tallies = tally_classes(&records, &truth, &classes, cfg);
    let summary = compute_metrics(&tallies);
    write!(out, "{}", render_table(&summary))?;
    if let Some(path) = records_path {
        fs::write(path, render_records(&summary))?;
        writeln!(out, "wrote metric records to {}", path.display())?;
    }
    Ok(())
}
