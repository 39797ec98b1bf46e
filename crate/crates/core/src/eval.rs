//! Detection metrics: optimal matching, precision/recall/F1 and RMSE.
//!
//! Predictions and ground truth are matched per joint class and per frame.
//! A prediction counts as a true positive when it is assigned to a ground
//! truth point within the pixel threshold; the assignment maximizes the
//! number of matches and, among those, minimizes total distance, so a
//! crossed pair of detections is never double-booked the way per-point
//! nearest-neighbour matching can be. Greedy matching remains available for
//! comparison but is never the silent default.

use alloc::string::String;
use alloc::vec::Vec;

use crate::assign::min_distance_matching;
use crate::geometry::Point2;

/// Matching parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Maximum pixel distance for a prediction to count as a hit.
    pub pixel_threshold: f64,
    /// Factor applied to prediction coordinates before matching, for
    /// predictions made at a different resolution than the ground truth.
    pub frame_scale: f64,
    /// Assignment strategy.
    pub strategy: MatchStrategy,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { pixel_threshold: 20.0, frame_scale: 1.0, strategy: MatchStrategy::Optimal }
    }
}

/// How predictions are assigned to ground truth points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchStrategy {
    /// Maximum cardinality, then minimum total distance (exact).
    Optimal,
    /// Repeatedly take the globally nearest unmatched pair. Kept for
    /// comparison experiments; can under-match crossed detections.
    Greedy,
}

/// Outcome of matching one class on one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMatching {
    /// `(prediction index, ground truth index, distance)` per match.
    pub pairs: Vec<(usize, usize, f64)>,
    /// Predictions left unmatched.
    pub false_positives: usize,
    /// Ground truth points left unmatched.
    pub false_negatives: usize,
}

/// Matches scaled predictions to ground truth within the pixel threshold.
pub fn match_detections(
    predictions: &[Point2],
    ground_truth: &[Point2],
    config: &EvalConfig,
) -> ClassMatching {
    let scaled: Vec<Point2> = predictions
        .iter()
        .map(|p| Point2::new(p.x * config.frame_scale, p.y * config.frame_scale))
        .collect();
    let pairs = match config.strategy {
        MatchStrategy::Optimal => min_distance_matching(
            scaled.len(),
            ground_truth.len(),
            config.pixel_threshold,
            |i, j| scaled[i].distance(ground_truth[j]),
        ),
        MatchStrategy::Greedy => greedy_matching(&scaled, ground_truth, config.pixel_threshold),
    };
    ClassMatching {
        false_positives: scaled.len() - pairs.len(),
        false_negatives: ground_truth.len() - pairs.len(),
        pairs,
    }
}

fn greedy_matching(preds: &[Point2], gts: &[Point2], threshold: f64) -> Vec<(usize, usize, f64)> {
    let mut all: Vec<(usize, usize, f64)> = Vec::new();
    for (i, p) in preds.iter().enumerate() {
        for (j, g) in gts.iter().enumerate() {
            let d = p.distance(*g);
            if d <= threshold {
                all.push((i, j, d));
            }
        }
    }
    // Nearest pair first; ties resolved by index for determinism.
    all.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut used_p = alloc::vec![false; preds.len()];
    let mut used_g = alloc::vec![false; gts.len()];
    let mut out = Vec::new();
    for (i, j, d) in all {
        if !used_p[i] && !used_g[j] {
            used_p[i] = true;
            used_g[j] = true;
            out.push((i, j, d));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Running match counts for one joint class across frames.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DetectionTally {
    /// Matched pairs.
    pub true_positives: usize,
    /// Unmatched predictions.
    pub false_positives: usize,
    /// Unmatched ground truth points.
    pub false_negatives: usize,
    /// Sum of squared match distances, for RMSE.
    pub squared_error: f64,
}

impl DetectionTally {
    /// Folds one frame's matching into the tally.
    pub fn add(&mut self, matching: &ClassMatching) {
        self.true_positives += matching.pairs.len();
        self.false_positives += matching.false_positives;
        self.false_negatives += matching.false_negatives;
        for (_, _, d) in &matching.pairs {
            self.squared_error += d * d;
        }
    }

    /// Merges another tally (parallel reduction is order-insensitive for
    /// the counts; the error sum is associative to rounding).
    pub fn merge(&mut self, other: &DetectionTally) {
        self.true_positives += other.true_positives;
        self.false_positives += other.false_positives;
        self.false_negatives += other.false_negatives;
        self.squared_error += other.squared_error;
    }
}

/// Final scores of one joint class.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMetrics {
    /// Class (joint) name.
    pub joint: String,
    /// Matched pairs.
    pub true_positives: usize,
    /// Unmatched predictions.
    pub false_positives: usize,
    /// Unmatched ground truth points.
    pub false_negatives: usize,
    /// `TP / (TP + FP)`; 0 when no predictions.
    pub precision: f64,
    /// `TP / (TP + FN)`; 0 when no ground truth.
    pub recall: f64,
    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub f1: f64,
    /// Root-mean-square match distance; `None` without any match.
    pub rmse: Option<f64>,
}

/// Unweighted averages over classes.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageMetrics {
    /// Mean precision over all classes.
    pub precision: f64,
    /// Mean recall over all classes.
    pub recall: f64,
    /// Mean F1 over all classes.
    pub f1: f64,
    /// Mean RMSE over classes that have one; `None` when none do.
    pub rmse: Option<f64>,
}

/// Per-class scores plus their unweighted average.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSummary {
    /// One row per class, in input order.
    pub per_joint: Vec<JointMetrics>,
    /// Unweighted average row.
    pub average: AverageMetrics,
}

/// Turns per-class tallies into precision/recall/F1/RMSE plus averages.
///
/// The average row weights every class equally regardless of its support.
pub fn compute_metrics(per_class: &[(String, DetectionTally)]) -> MetricsSummary {
    let mut per_joint = Vec::with_capacity(per_class.len());
    for (name, tally) in per_class {
        let tp = tally.true_positives as f64;
        let precision = ratio(tp, tp + tally.false_positives as f64);
        let recall = ratio(tp, tp + tally.false_negatives as f64);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        let rmse = (tally.true_positives > 0)
            .then(|| libm::sqrt(tally.squared_error / tp));
        per_joint.push(JointMetrics {
            joint: name.clone(),
            true_positives: tally.true_positives,
            false_positives: tally.false_positives,
            false_negatives: tally.false_negatives,
            precision,
            recall,
            f1,
            rmse,
        });
    }

    let n = per_joint.len().max(1) as f64;
    let mean = |f: &dyn Fn(&JointMetrics) -> f64| per_joint.iter().map(|m| f(m)).sum::<f64>() / n;
    let with_rmse: Vec<f64> = per_joint.iter().filter_map(|m| m.rmse).collect();
    let average = AverageMetrics {
        precision: mean(&|m| m.precision),
        recall: mean(&|m| m.recall),
        f1: mean(&|m| m.f1),
        rmse: (!with_rmse.is_empty())
            .then(|| with_rmse.iter().sum::<f64>() / with_rmse.len() as f64),
    };
    MetricsSummary { per_joint, average }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}
