//! Pseudo-label selection and the mean-teacher weight update.
//!
//! Unlabelled frames are decoded by the teacher and only predictions whose
//! total variation clears a threshold become training targets; diffuse,
//! low-confidence maps are discarded rather than learned from. The teacher
//! itself trails the student by an exponential moving average.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::heatmap::Heatmap;
use crate::tv::total_variation;

/// Default acceptance threshold for multi-instrument scenes.
pub const DEFAULT_TV_THRESHOLD_MULTI: f64 = 1000.0;
/// Default acceptance threshold for single-instrument scenes.
pub const DEFAULT_TV_THRESHOLD_SINGLE: f64 = 400.0;
/// Default teacher retention factor.
pub const DEFAULT_EMA_ALPHA: f64 = 0.95;

/// Which scene regime a pool of frames belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateMode {
    /// One instrument per frame; lower threshold.
    Single,
    /// Several instruments per frame; higher threshold.
    Multi,
}

/// Pseudo-label gate parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoLabelConfig {
    /// Threshold used in [`GateMode::Multi`].
    pub tv_threshold_multi: f64,
    /// Threshold used in [`GateMode::Single`].
    pub tv_threshold_single: f64,
    /// Active regime.
    pub mode: GateMode,
}

impl Default for PseudoLabelConfig {
    fn default() -> Self {
        PseudoLabelConfig {
            tv_threshold_multi: DEFAULT_TV_THRESHOLD_MULTI,
            tv_threshold_single: DEFAULT_TV_THRESHOLD_SINGLE,
            mode: GateMode::Multi,
        }
    }
}

impl PseudoLabelConfig {
    /// Threshold of the active mode.
    pub fn threshold(&self) -> f64 {
        match self.mode {
            GateMode::Single => self.tv_threshold_single,
            GateMode::Multi => self.tv_threshold_multi,
        }
    }

    /// Rejects thresholds that are not strictly positive.
    pub fn validate(&self) -> Result<(), SslError> {
        if !(self.tv_threshold_multi > 0.0) || !(self.tv_threshold_single > 0.0) {
            return Err(SslError::NonPositiveThreshold);
        }
        Ok(())
    }
}

/// Failures in pseudo-label selection or the teacher update.
#[derive(Debug, Clone, PartialEq)]
pub enum SslError {
    /// A gate threshold was zero or negative.
    NonPositiveThreshold,
    /// Two pool entries share a frame id.
    DuplicateFrame(String),
    /// Teacher and student buffers differ in length.
    LengthMismatch {
        /// Teacher length.
        teacher: usize,
        /// Student length.
        student: usize,
    },
    /// Retention factor outside `[0, 1]`.
    BadAlpha(f64),
}

impl fmt::Display for SslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SslError::NonPositiveThreshold => write!(f, "gate thresholds must be > 0"),
            SslError::DuplicateFrame(id) => write!(f, "duplicate frame id {id:?} in pool"),
            SslError::LengthMismatch { teacher, student } => write!(
                f,
                "teacher has {teacher} weights but student has {student}"
            ),
            SslError::BadAlpha(a) => write!(f, "alpha must be within [0, 1], got {a}"),
        }
    }
}

impl core::error::Error for SslError {}

/// Gate decision for one predicted map: `(accepted, total variation)`.
///
/// Acceptance is inclusive: a map measuring exactly the threshold passes.
pub fn gate_pseudo_label(map: &Heatmap, config: &PseudoLabelConfig) -> (bool, f64) {
    let tv = total_variation(map).total;
    (tv >= config.threshold(), tv)
}

/// One gated frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionEntry {
    /// Frame identifier supplied by the caller.
    pub frame_id: String,
    /// Measured total variation.
    pub tv_total: f64,
}

/// Outcome of gating a pool of predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    /// Frames that cleared the threshold, in pool order.
    pub accepted: Vec<SelectionEntry>,
    /// Frames that did not, in pool order.
    pub rejected: Vec<SelectionEntry>,
    /// Threshold that was applied.
    pub threshold: f64,
    /// Regime the threshold came from.
    pub mode: GateMode,
}

/// Gates a pool of `(frame id, prediction)` pairs.
///
/// Pool order is preserved within the accepted and rejected lists. Frame ids
/// must be unique.
pub fn select_pool(
    pool: &[(String, Heatmap)],
    config: &PseudoLabelConfig,
) -> Result<SelectionReport, SslError> {
    config.validate()?;
    for (i, (id, _)) in pool.iter().enumerate() {
        if pool[..i].iter().any(|(other, _)| other == id) {
            return Err(SslError::DuplicateFrame(id.clone()));
        }
    }
    let mut report = SelectionReport {
        accepted: Vec::new(),
        rejected: Vec::new(),
        threshold: config.threshold(),
        mode: config.mode,
    };
    for (id, map) in pool {
        let (accepted, tv_total) = gate_pseudo_label(map, config);
        let entry = SelectionEntry { frame_id: id.clone(), tv_total };
        if accepted {
            report.accepted.push(entry);
        } else {
            report.rejected.push(entry);
        }
    }
    Ok(report)
}

/// Mean-teacher parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmaConfig {
    /// Fraction of the old teacher kept each step.
    pub alpha: f64,
}

impl Default for EmaConfig {
    fn default() -> Self {
        EmaConfig { alpha: DEFAULT_EMA_ALPHA }
    }
}

/// One exponential-moving-average step:
/// `out[i] = alpha * teacher[i] + (1 - alpha) * student[i]`.
///
/// `alpha = 1` freezes the teacher; `alpha = 0` copies the student.
pub fn ema_update(teacher: &[f64], student: &[f64], config: &EmaConfig) -> Result<Vec<f64>, SslError> {
    if !(0.0..=1.0).contains(&config.alpha) {
        return Err(SslError::BadAlpha(config.alpha));
    }
    if teacher.len() != student.len() {
        return Err(SslError::LengthMismatch {
            teacher: teacher.len(),
            student: student.len(),
        });
    }
    let a = config.alpha;
    Ok(teacher
        .iter()
        .zip(student.iter())
        .map(|(t, s)| a * t + (1.0 - a) * s)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{FrameSize, Point2};
    use crate::render::render_targets_sigma;
    use crate::skeleton::{InstrumentAnnotation, SkeletonSpec};
    use alloc::string::ToString;
    use alloc::vec;
    use approx::assert_relative_eq;

    /// Map with a known total variation: a single column step of height v
    /// in an h x w channel has TV v * (h + ...) -- easier to just measure.
    fn map_with_tv(target: f64) -> Heatmap {
        // One interior impulse of value v has TV 4v in its channel.
        let mut m = Heatmap::zeros_unnamed(8, 8, 1).unwrap();
        m.set(4, 4, 0, target / 4.0);
        debug_assert!((total_variation(&m).total - target).abs() < 1e-9);
        m
    }

    #[test]
    fn gate_is_inclusive_at_both_thresholds() {
        let multi = PseudoLabelConfig::default();
        let single = PseudoLabelConfig { mode: GateMode::Single, ..multi };

        let at_multi = map_with_tv(1000.0);
        let below_multi = map_with_tv(1000.0 - 1e-6);
        assert!(gate_pseudo_label(&at_multi, &multi).0);
        assert!(!gate_pseudo_label(&below_multi, &multi).0);

        let at_single = map_with_tv(400.0);
        let below_single = map_with_tv(400.0 - 1e-6);
        assert!(gate_pseudo_label(&at_single, &single).0);
        assert!(!gate_pseudo_label(&below_single, &single).0);
        // The same map clears the single gate but not the multi gate.
        assert!(!gate_pseudo_label(&at_single, &multi).0);
    }

    #[test]
    fn sharp_prediction_outgates_smoothed_one() {
        use crate::filter::gaussian_smooth;
        let sk = SkeletonSpec::endovis();
        let ann = InstrumentAnnotation::from_pairs([
            ("left_clasper", Point2::new(100.0, 60.0)),
            ("right_clasper", Point2::new(140.0, 60.0)),
            ("head", Point2::new(120.0, 90.0)),
            ("shaft", Point2::new(120.0, 150.0)),
            ("end", Point2::new(120.0, 200.0)),
        ]);
        let sharp =
            render_targets_sigma(&[ann], &sk, FrameSize::new(256, 320), 20.0).unwrap();
        let washed = gaussian_smooth(&sharp, 40.0).unwrap();
        let tv_sharp = total_variation(&sharp).total;
        let tv_washed = total_variation(&washed).total;
        assert!(tv_sharp > tv_washed, "{tv_sharp} vs {tv_washed}");
    }

    #[test]
    fn pool_selection_partitions_in_order() {
        let cfg = PseudoLabelConfig::default();
        let pool = vec![
            ("f0".to_string(), map_with_tv(1500.0)),
            ("f1".to_string(), map_with_tv(200.0)),
            ("f2".to_string(), map_with_tv(1000.0)),
            ("f3".to_string(), map_with_tv(999.0)),
        ];
        let report = select_pool(&pool, &cfg).unwrap();
        let ids = |list: &[SelectionEntry]| {
            list.iter().map(|e| e.frame_id.clone()).collect::<Vec<_>>()
        };
        assert_eq!(ids(&report.accepted), ["f0", "f2"]);
        assert_eq!(ids(&report.rejected), ["f1", "f3"]);
        assert_eq!(report.threshold, 1000.0);

        let dup = vec![
            ("f0".to_string(), map_with_tv(1.0)),
            ("f0".to_string(), map_with_tv(2.0)),
        ];
        assert!(matches!(select_pool(&dup, &cfg), Err(SslError::DuplicateFrame(_))));
    }

    #[test]
    fn ema_blends_and_respects_extremes() {
        let teacher = [1.0, 0.0, -2.0];
        let student = [0.0, 1.0, 2.0];
        let out = ema_update(&teacher, &student, &EmaConfig::default()).unwrap();
        assert_relative_eq!(out[0], 0.95);
        assert_relative_eq!(out[1], 0.05);
        assert_relative_eq!(out[2], -1.8);

        let frozen = ema_update(&teacher, &student, &EmaConfig { alpha: 1.0 }).unwrap();
        assert_eq!(frozen, teacher);
        let copied = ema_update(&teacher, &student, &EmaConfig { alpha: 0.0 }).unwrap();
        assert_eq!(copied, student);
    }

    #[test]
    fn ema_rejects_bad_inputs() {
        assert!(matches!(
            ema_update(&[1.0], &[1.0, 2.0], &EmaConfig::default()),
            Err(SslError::LengthMismatch { .. })
        ));
        assert!(matches!(
            ema_update(&[1.0], &[1.0], &EmaConfig { alpha: 1.5 }),
            Err(SslError::BadAlpha(_))
        ));
        assert!(matches!(
            ema_update(&[1.0], &[1.0], &EmaConfig { alpha: -0.1 }),
            Err(SslError::BadAlpha(_))
        ));
    }

    #[test]
    fn ema_converges_geometrically_to_a_constant_student() {
        // Iterating the update against a fixed student contracts the gap
        // by alpha each step: |t_k - s| = alpha^k |t_0 - s|.
        let cfg = EmaConfig::default();
        let student = [2.0, -3.0];
        let mut teacher = vec![10.0, 5.0];
        let gap0 = [8.0, 8.0];
        for k in 1..=40 {
            teacher = ema_update(&teacher, &student, &cfg).unwrap();
            let shrink = libm::pow(cfg.alpha, k as f64);
            for i in 0..2 {
                let expect = gap0[i] * shrink;
                assert!(
                    ((teacher[i] - student[i]).abs() - expect).abs() <= 1e-9,
                    "step {k} lane {i}"
                );
            }
        }
    }

    #[test]
    fn nonpositive_thresholds_are_rejected() {
        for bad in [0.0, -1.0] {
            let cfg = PseudoLabelConfig {
                tv_threshold_multi: bad,
                ..PseudoLabelConfig::default()
            };
            assert_eq!(cfg.validate(), Err(SslError::NonPositiveThreshold));
            assert_eq!(
                select_pool(&[], &cfg),
                Err(SslError::NonPositiveThreshold)
            );
        }
        let cfg = PseudoLabelConfig {
            tv_threshold_single: 0.0,
            ..PseudoLabelConfig::default()
        };
        assert_eq!(cfg.validate(), Err(SslError::NonPositiveThreshold));
    }

    #[test]
    fn selection_is_permutation_invariant_as_a_set() {
        let cfg = PseudoLabelConfig::default();
        let pool = vec![
            ("a".to_string(), map_with_tv(1200.0)),
            ("b".to_string(), map_with_tv(700.0)),
            ("c".to_string(), map_with_tv(1000.0)),
            ("d".to_string(), map_with_tv(50.0)),
        ];
        let mut shuffled = pool.clone();
        shuffled.swap(0, 3);
        shuffled.swap(1, 2);
        let sets = |r: &SelectionReport| {
            let mut acc: Vec<String> =
                r.accepted.iter().map(|e| e.frame_id.clone()).collect();
            let mut rej: Vec<String> =
                r.rejected.iter().map(|e| e.frame_id.clone()).collect();
            acc.sort();
            rej.sort();
            (acc, rej)
        };
        let a = select_pool(&pool, &cfg).unwrap();
        let b = select_pool(&shuffled, &cfg).unwrap();
        assert_eq!(sets(&a), sets(&b));
    }
}
