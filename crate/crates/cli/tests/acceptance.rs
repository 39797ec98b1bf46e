//! Acceptance suite for the pose pipeline: nine numbered criteria, one
//! verdict line each. Criteria 1 to 8 are correctness checks and fail the
//! suite; criterion 9 is a performance goal whose misses are reported but
//! only counted when the measurement itself breaks.
//!
//! Run with `cargo test -p toolpose --test acceptance -- --nocapture` to see
//! the verdict lines on success too.

use std::panic::catch_unwind;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toolpose::annot::{write_annotations, FrameAnnotations};
use toolpose::config::{resolve, Overrides};
use toolpose::records::{pose_record, record_to_line};
use toolpose_core::augment::{
    bbox_from_joints, flip_h, random_swap, translate, AugmentConfig, BBox, Frame,
    DEFAULT_BBOX_ALPHA,
};
use toolpose_core::decode::{
    line_integral_score, match_pairs, parse_instruments, DecodeConfig, JointCandidate,
};
use toolpose_core::eval::{match_detections, EvalConfig, MatchStrategy};
use toolpose_core::filter::gaussian_smooth;
use toolpose_core::nn::{
    attention_gate_backward, attention_gate_forward, group_norm_backward, group_norm_forward,
    rlrelu, rlrelu_backward, GroupNormConfig, RlreluConfig, Tensor4,
};
use toolpose_core::render::render_targets_sigma;
use toolpose_core::ssl::{gate_pseudo_label, GateMode, PseudoLabelConfig};
use toolpose_core::synth::{generate_scene, SceneSpec};
use toolpose_core::tv::total_variation;
use toolpose_core::{FrameSize, Heatmap, InstrumentAnnotation, Point2, SkeletonSpec};

#[test]
fn acceptance() {
    let mut failures: Vec<String> = Vec::new();

    check(1, "total variation equals a double-sum oracle", Some(5.0), criterion_1, &mut failures);
    check(
        2,
        "synthetic scenes decode to every joint within 1 px and a perfect f1",
        Some(60.0),
        criterion_2,
        &mut failures,
    );
    check(
        3,
        "pair and detection matching equal brute-force enumeration",
        Some(10.0),
        criterion_3,
        &mut failures,
    );
    check(
        4,
        "backward passes match central finite differences",
        Some(30.0),
        criterion_4,
        &mut failures,
    );
    check(5, "confidence gate is inclusive and monotone", None, criterion_5, &mut failures);
    check(
        6,
        "sharp targets always score higher total variation than blurred ones",
        None,
        criterion_6,
        &mut failures,
    );
    check(
        7,
        "bounding boxes match direct formula evaluation",
        None,
        criterion_7,
        &mut failures,
    );
    check(
        8,
        "flip involution, translation transport and swap bounds hold",
        None,
        criterion_8,
        &mut failures,
    );
    // Latency is a goal, not a correctness claim: a slow median prints FAIL
    // but only measurement breakage counts against the suite.
    match criterion_9() {
        Ok(median) if median <= 50.0 => {
            println!("criterion 9: PASS (decode latency, median {median:.3} ms per frame, goal 50 ms)");
        }
        Ok(median) => {
            println!(
                "criterion 9: FAIL (decode latency, median {median:.3} ms per frame over the 50 ms goal; performance regression, not a correctness failure)"
            );
        }
        Err(why) => {
            println!("criterion 9: FAIL (latency measurement broke: {why})");
            failures.push("9 (measurement)".into());
        }
    }

    assert!(failures.is_empty(), "failed criteria: {}", failures.join(", "));
}

fn check(
    number: u32,
    name: &str,
    budget_secs: Option<f64>,
    body: fn(),
    failures: &mut Vec<String>,
) {
    let start = Instant::now();
    let outcome = catch_unwind(body);
    let secs = start.elapsed().as_secs_f64();
    let timing = match budget_secs {
        Some(budget) => format!("{secs:.2}s of {budget:.0}s budget"),
        None => format!("{secs:.2}s"),
    };
    match outcome {
        Ok(()) if budget_secs.map_or(true, |budget| secs < budget) => {
            println!("criterion {number}: PASS ({name}; {timing})");
        }
        Ok(()) => {
            println!("criterion {number}: FAIL ({name}; over budget at {timing})");
            failures.push(format!("{number} (budget)"));
        }
        Err(panic) => {
            let why = panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("panic without message");
            println!("criterion {number}: FAIL ({name}; {why})");
            failures.push(number.to_string());
        }
    }
}

/// Total variation of 200 random maps up to 32x32x4 matches an independent
/// double-sum oracle within 1e-9 relative; constant maps measure exactly 0.
fn criterion_1() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0001);
    for case in 0..200 {
        let h = rng.random_range(2..=32);
        let w = rng.random_range(2..=32);
        let c = rng.random_range(1..=4);
        let mut map = Heatmap::zeros_unnamed(h, w, c).unwrap();
        for v in map.data_mut() {
            *v = rng.random_range(-5.0..5.0);
        }
        let report = total_variation(&map);
        let (want_per_channel, want_total) = oracle_tv(&map);
        assert!(
            (report.total - want_total).abs() <= 1e-9 * want_total.abs().max(1.0),
            "case {case}: total {} vs oracle {want_total}",
            report.total
        );
        for (ch, (got, want)) in report.per_channel.iter().zip(&want_per_channel).enumerate() {
            assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                "case {case} channel {ch}: {got} vs oracle {want}"
            );
        }
    }
    for (h, w, c, level) in [(2, 2, 1, -3.25), (7, 5, 2, 0.0), (32, 32, 4, 123.0)] {
        let mut map = Heatmap::zeros_unnamed(h, w, c).unwrap();
        for v in map.data_mut() {
            *v = level;
        }
        let report = total_variation(&map);
        assert_eq!(report.total, 0.0, "constant map at {level} must measure exactly 0");
        assert!(report.per_channel.iter().all(|&v| v == 0.0));
    }
}

fn oracle_tv(map: &Heatmap) -> (Vec<f64>, f64) {
    let mut per_channel = vec![0.0; map.channels()];
    for (c, acc) in per_channel.iter_mut().enumerate() {
        for y in 0..map.height() {
            for x in 0..map.width() {
                let v = map.get(x, y, c);
                if y + 1 < map.height() {
                    *acc += (map.get(x, y + 1, c) - v).abs();
                }
                if x + 1 < map.width() {
                    *acc += (map.get(x + 1, y, c) - v).abs();
                }
            }
        }
    }
    let total = per_channel.iter().sum();
    (per_channel, total)
}

/// 100 seeded scenes at 256x320 with 1 or 2 instruments render, decode back
/// to exactly the placed instruments with every joint within 1 px, and score
/// a perfect f1 through the eval command.
fn criterion_2() {
    let skeleton = SkeletonSpec::endovis();
    let frame = FrameSize::new(256, 320);
    let decode_cfg = DecodeConfig::default();
    let mut lines = String::new();
    let mut truth = FrameAnnotations::new();

    for i in 0..100u64 {
        let spec = SceneSpec {
            frame,
            skeleton: skeleton.clone(),
            instrument_count: 1 + (i as usize % 2),
            min_separation: 80.0,
            seed: 0x5EED_2000 + i,
        };
        let instruments = generate_scene(&spec).unwrap();
        let map = render_targets_sigma(&instruments, &skeleton, frame, 20.0).unwrap();
        let (poses, confidence) = parse_instruments(&map, &skeleton, &decode_cfg).unwrap();
        assert_eq!(
            poses.len(),
            instruments.len(),
            "scene {i}: decode must find exactly the placed instruments"
        );
        // Bijective match: each pose claims a distinct instrument with every
        // joint within 1 px.
        let mut used = vec![false; instruments.len()];
        for (p, pose) in poses.iter().enumerate() {
            assert_eq!(pose.joints.len(), skeleton.joint_names().len(), "scene {i} pose {p}");
            let k = instruments
                .iter()
                .enumerate()
                .position(|(k, ann)| {
                    !used[k]
                        && ann.joints().all(|(name, at)| {
                            pose.joints
                                .get(name)
                                .is_some_and(|d| d.position.distance(at) <= 1.0)
                        })
                })
                .unwrap_or_else(|| {
                    panic!("scene {i} pose {p}: no unclaimed instrument within 1 px")
                });
            used[k] = true;
        }
        let id = format!("scene_{i:03}");
        lines.push_str(&record_to_line(&pose_record(
            id.clone(),
            &poses,
            &confidence,
            &map,
            &skeleton,
        )));
        lines.push('\n');
        truth.insert(id, instruments);
    }

    let dir = tempfile::tempdir().unwrap();
    let predictions = dir.path().join("predictions.jsonl");
    let truth_path = dir.path().join("truth.txt");
    let metrics = dir.path().join("metrics.txt");
    std::fs::write(&predictions, lines).unwrap();
    write_annotations(&truth_path, &truth).unwrap();

    let cfg = resolve(&Overrides::default()).unwrap();
    let mut table = Vec::new();
    toolpose::cmd::eval::run(&cfg, &predictions, &truth_path, Some(&metrics), &mut table)
        .unwrap();

    let text = std::fs::read_to_string(&metrics).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 6, "five joint rows plus the average: {text}");
    for row in &rows {
        let f1 = row
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix("f1="))
            .unwrap_or_else(|| panic!("row without f1: {row}"))
            .parse::<f64>()
            .unwrap();
        assert_eq!(f1, 1.0, "row must score a perfect f1: {row}");
    }
}

/// Both matchers agree exactly with brute-force enumeration of every
/// one-to-one assignment on 500 random instances of up to 4 candidates per
/// side (each matcher checked on all 500).
fn criterion_3() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0003);

    let mut decode_cfg = DecodeConfig::default();
    decode_cfg.line_samples = 8;
    for case in 0..500 {
        let mut map = Heatmap::zeros_unnamed(16, 16, 1).unwrap();
        for v in map.data_mut() {
            *v = rng.random_range(0.0..1.0);
        }
        let candidates = |rng: &mut ChaCha8Rng| -> Vec<JointCandidate> {
            (0..rng.random_range(0..=4))
                .map(|_| JointCandidate {
                    channel: 0,
                    x: rng.random_range(2..14),
                    y: rng.random_range(2..14),
                    score: 1.0,
                })
                .collect()
        };
        let cands_a = candidates(&mut rng);
        let cands_b = candidates(&mut rng);
        decode_cfg.pair_score_threshold = rng.random_range(0.2..0.8);

        let pairs = match_pairs(&cands_a, &cands_b, &map, 0, &decode_cfg).unwrap();
        let score = |i: usize, j: usize| {
            line_integral_score(
                &map,
                0,
                cands_a[i].position(),
                cands_b[j].position(),
                decode_cfg.line_samples,
            )
            .unwrap()
        };
        for m in &pairs {
            assert!(m.score >= decode_cfg.pair_score_threshold, "case {case}: inadmissible pair");
            assert_eq!(m.score, score(m.a, m.b), "case {case}: reported score must be the true score");
        }
        // Identical left-to-right folds make the equality exact: the optimum
        // is unique for continuous random scores, so both sides sum the same
        // terms in the same order.
        let got: f64 = fold_scores(pairs.iter().map(|m| m.score));
        let best = enumerate_assignments(cands_a.len(), cands_b.len(), |i, j| {
            let s = score(i, j);
            (s >= decode_cfg.pair_score_threshold).then_some(s)
        })
        .into_iter()
        .map(|set| fold_scores(set.iter().map(|&(i, j)| score(i, j))))
        .fold(0.0f64, f64::max);
        assert_eq!(got, best, "case {case}: pairing total must be the enumerated optimum");
    }

    for case in 0..500 {
        let points = |rng: &mut ChaCha8Rng| -> Vec<Point2> {
            (0..rng.random_range(0..=4))
                .map(|_| Point2::new(rng.random_range(0.0..40.0), rng.random_range(0.0..40.0)))
                .collect()
        };
        let preds = points(&mut rng);
        let gts = points(&mut rng);
        let eval_cfg = EvalConfig {
            pixel_threshold: rng.random_range(5.0..25.0),
            frame_scale: 1.0,
            strategy: MatchStrategy::Optimal,
        };
        let matching = match_detections(&preds, &gts, &eval_cfg);
        let dist = |i: usize, j: usize| preds[i].distance(gts[j]);
        for &(i, j, d) in &matching.pairs {
            assert!(d <= eval_cfg.pixel_threshold, "case {case}: pair beyond the threshold");
            assert_eq!(d, dist(i, j), "case {case}: reported distance must be the true distance");
        }
        // Maximum cardinality first, then minimum total distance.
        let assignments = enumerate_assignments(preds.len(), gts.len(), |i, j| {
            let d = dist(i, j);
            (d <= eval_cfg.pixel_threshold).then_some(d)
        });
        let best = assignments
            .iter()
            .max_by(|a, b| {
                let (ta, tb) = (
                    fold_scores(a.iter().map(|&(i, j)| dist(i, j))),
                    fold_scores(b.iter().map(|&(i, j)| dist(i, j))),
                );
                a.len().cmp(&b.len()).then(tb.total_cmp(&ta))
            })
            .unwrap();
        assert_eq!(matching.pairs.len(), best.len(), "case {case}: cardinality");
        let got = fold_scores(matching.pairs.iter().map(|&(_, _, d)| d));
        let want = fold_scores(best.iter().map(|&(i, j)| dist(i, j)));
        assert_eq!(got, want, "case {case}: total distance must be the enumerated optimum");
        assert_eq!(matching.false_positives, preds.len() - best.len());
        assert_eq!(matching.false_negatives, gts.len() - best.len());
    }
}

fn fold_scores(values: impl Iterator<Item = f64>) -> f64 {
    let mut acc = 0.0;
    for v in values {
        acc += v;
    }
    acc
}

/// Every one-to-one assignment of rows to columns restricted to admissible
/// pairs, as index sets sorted by row. Sides are at most 4 wide, so the
/// enumeration stays tiny.
fn enumerate_assignments(
    rows: usize,
    cols: usize,
    admissible: impl Fn(usize, usize) -> Option<f64>,
) -> Vec<Vec<(usize, usize)>> {
    fn go(
        i: usize,
        rows: usize,
        cols: usize,
        admissible: &dyn Fn(usize, usize) -> Option<f64>,
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == rows {
            out.push(current.clone());
            return;
        }
        go(i + 1, rows, cols, admissible, used, current, out);
        for j in 0..cols {
            if !used[j] && admissible(i, j).is_some() {
                used[j] = true;
                current.push((i, j));
                go(i + 1, rows, cols, admissible, used, current, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, rows, cols, &admissible, &mut vec![false; cols], &mut Vec::new(), &mut out);
    out
}

/// Attention gate, group norm and the randomized rectifier backward passes
/// match central finite differences of their forwards over 50 seeded shapes.
fn criterion_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0004);
    for case in 0..50 {
        let n = rng.random_range(1..=2);
        let h = rng.random_range(2..=8);
        let w = rng.random_range(2..=8);
        let c = rng.random_range(1..=4);

        let features = random_tensor(&mut rng, n, h, w, c);
        let pre = random_tensor(&mut rng, n, h, w, 1);
        let upstream = random_tensor(&mut rng, n, h, w, c);
        let (d_features, d_pre) = attention_gate_backward(&features, &pre, &upstream).unwrap();
        grad_check(case, "attention d features", &d_features, &features, |t| {
            dot(&attention_gate_forward(t, &pre).unwrap(), &upstream)
        });
        grad_check(case, "attention d pre", &d_pre, &pre, |t| {
            dot(&attention_gate_forward(&features, t).unwrap(), &upstream)
        });

        let divisors: Vec<usize> = (1..=c).filter(|g| c % g == 0).collect();
        let norm_cfg = GroupNormConfig {
            groups: divisors[rng.random_range(0..divisors.len())],
            epsilon: 1e-5,
        };
        let x = random_tensor(&mut rng, n, h, w, c);
        let gamma: Vec<f64> = (0..c).map(|_| rng.random_range(0.5..1.5)).collect();
        let beta: Vec<f64> = (0..c).map(|_| rng.random_range(-0.5..0.5)).collect();
        let up_norm = random_tensor(&mut rng, n, h, w, c);
        let (dx, d_gamma, d_beta) = group_norm_backward(&x, &gamma, &norm_cfg, &up_norm).unwrap();
        grad_check(case, "group norm d x", &dx, &x, |t| {
            dot(&group_norm_forward(t, &gamma, &beta, &norm_cfg).unwrap(), &up_norm)
        });
        for i in 0..c {
            let fd = central_diff(|v| {
                let mut g = gamma.clone();
                g[i] = v;
                dot(&group_norm_forward(&x, &g, &beta, &norm_cfg).unwrap(), &up_norm)
            }, gamma[i]);
            assert_grad(case, "group norm d gamma", i, d_gamma[i], fd);
            let fd = central_diff(|v| {
                let mut b = beta.clone();
                b[i] = v;
                dot(&group_norm_forward(&x, &gamma, &b, &norm_cfg).unwrap(), &up_norm)
            }, beta[i]);
            assert_grad(case, "group norm d beta", i, d_beta[i], fd);
        }

        // Inputs keep a margin around zero: the rectifier has a kink there
        // and finite differences across it are meaningless.
        let relu_cfg = RlreluConfig::default();
        let seed = rng.random::<u64>();
        let mut xr = random_tensor(&mut rng, n, h, w, c);
        for v in xr.data_mut() {
            let sign = if *v < 0.0 { -1.0 } else { 1.0 };
            *v = sign * (v.abs() + 0.05);
        }
        let up_relu = random_tensor(&mut rng, n, h, w, c);
        let d = rlrelu_backward(&xr, &relu_cfg, seed, &up_relu).unwrap();
        grad_check(case, "rectifier d x", &d, &xr, |t| {
            dot(&rlrelu(t, &relu_cfg, seed).unwrap(), &up_relu)
        });
    }
}

fn random_tensor(rng: &mut ChaCha8Rng, n: usize, h: usize, w: usize, c: usize) -> Tensor4 {
    let mut t = Tensor4::zeros(n, h, w, c).unwrap();
    for v in t.data_mut() {
        *v = rng.random_range(-1.0..1.0);
    }
    t
}

fn dot(a: &Tensor4, b: &Tensor4) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| x * y).sum()
}

fn central_diff(mut loss: impl FnMut(f64) -> f64, at: f64) -> f64 {
    const STEP: f64 = 1e-5;
    (loss(at + STEP) - loss(at - STEP)) / (2.0 * STEP)
}

fn grad_check(
    case: usize,
    what: &str,
    analytic: &Tensor4,
    at: &Tensor4,
    mut loss: impl FnMut(&Tensor4) -> f64,
) {
    for i in 0..at.data().len() {
        let fd = central_diff(
            |v| {
                let mut t = at.clone();
                t.data_mut()[i] = v;
                loss(&t)
            },
            at.data()[i],
        );
        assert_grad(case, what, i, analytic.data()[i], fd);
    }
}

fn assert_grad(case: usize, what: &str, i: usize, analytic: f64, fd: f64) {
    assert!(
        (analytic - fd).abs() <= 1e-4 * analytic.abs().max(1.0),
        "case {case}, {what}[{i}]: analytic {analytic} vs finite difference {fd}"
    );
}

/// The gate accepts maps measuring exactly its threshold (1000 multi, 400
/// single) and acceptance is monotone in total variation over 1000 random
/// map pairs. An interior impulse of amplitude A measures exactly 4A, which
/// pins the threshold values without rounding.
fn criterion_5() {
    let impulse = |amplitude: f64| {
        let mut map = Heatmap::zeros_unnamed(8, 8, 1).unwrap();
        map.set(4, 4, 0, amplitude);
        map
    };

    let multi = PseudoLabelConfig::default();
    assert_eq!(multi.mode, GateMode::Multi);
    let (accepted, tv) = gate_pseudo_label(&impulse(250.0), &multi);
    assert_eq!(tv, 1000.0);
    assert!(accepted, "exactly at the multi threshold must be accepted");
    let (accepted, tv) = gate_pseudo_label(&impulse(249.75), &multi);
    assert_eq!(tv, 999.0);
    assert!(!accepted, "just below the multi threshold must be rejected");

    let single = PseudoLabelConfig { mode: GateMode::Single, ..PseudoLabelConfig::default() };
    let (accepted, tv) = gate_pseudo_label(&impulse(100.0), &single);
    assert_eq!(tv, 400.0);
    assert!(accepted, "exactly at the single threshold must be accepted");
    let (accepted, tv) = gate_pseudo_label(&impulse(99.75), &single);
    assert_eq!(tv, 399.0);
    assert!(!accepted, "just below the single threshold must be rejected");

    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0005);
    for case in 0..1000 {
        let random_map = |rng: &mut ChaCha8Rng| {
            let h = rng.random_range(2..=12);
            let w = rng.random_range(2..=12);
            let c = rng.random_range(1..=3);
            let scale = rng.random_range(0.1..40.0);
            let mut map = Heatmap::zeros_unnamed(h, w, c).unwrap();
            for v in map.data_mut() {
                *v = rng.random_range(0.0..scale);
            }
            map
        };
        let config = PseudoLabelConfig {
            tv_threshold_multi: rng.random_range(1.0..2000.0),
            tv_threshold_single: rng.random_range(1.0..2000.0),
            mode: if rng.random::<bool>() { GateMode::Multi } else { GateMode::Single },
        };
        let (acc_a, tv_a) = gate_pseudo_label(&random_map(&mut rng), &config);
        let (acc_b, tv_b) = gate_pseudo_label(&random_map(&mut rng), &config);
        let ((tv_lo, acc_lo), (tv_hi, acc_hi)) = if tv_a <= tv_b {
            ((tv_a, acc_a), (tv_b, acc_b))
        } else {
            ((tv_b, acc_b), (tv_a, acc_a))
        };
        assert!(
            !(acc_lo && !acc_hi),
            "case {case}: tv {tv_lo} accepted while tv {tv_hi} rejected"
        );
    }
}

/// Sharply rendered targets score strictly higher total variation than the
/// same maps smoothed at sigma 40, in 50 out of 50 paired cases.
fn criterion_6() {
    let skeleton = SkeletonSpec::endovis();
    let frame = FrameSize::new(160, 200);
    let mut wins = 0;
    for i in 0..50u64 {
        let spec = SceneSpec {
            frame,
            skeleton: skeleton.clone(),
            instrument_count: 1,
            min_separation: 50.0,
            seed: 0x5EED_6000 + i,
        };
        let instruments = generate_scene(&spec).unwrap();
        let sharp = render_targets_sigma(&instruments, &skeleton, frame, 10.0).unwrap();
        let blurred = gaussian_smooth(&sharp, 40.0).unwrap();
        if total_variation(&sharp).total > total_variation(&blurred).total {
            wins += 1;
        }
    }
    assert_eq!(wins, 50, "every sharp map must outscore its blurred counterpart");
}

/// Bounding boxes of 100 random joint sets equal direct evaluation of the
/// expansion rule bit for bit, and the default expansion factor is 1.
fn criterion_7() {
    assert_eq!(DEFAULT_BBOX_ALPHA, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0007);
    for case in 0..100 {
        let joints: Vec<Point2> = (0..rng.random_range(1..=8))
            .map(|_| Point2::new(rng.random_range(-100.0..400.0), rng.random_range(-100.0..400.0)))
            .collect();
        let alpha = [0.0, 0.25, 1.0, 2.5][rng.random_range(0..4)];
        let got = bbox_from_joints(&joints, alpha).unwrap();

        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for p in &joints {
            x_min = x_min.min(p.x);
            x_max = x_max.max(p.x);
            y_min = y_min.min(p.y);
            y_max = y_max.max(p.y);
        }
        let delta = alpha * (x_max - x_min).max(y_max - y_min);
        let want = BBox {
            x_min: x_min - delta,
            y_min: y_min - delta,
            x_max: x_max + delta,
            y_max: y_max + delta,
            alpha,
        };
        assert_eq!(got, want, "case {case}");
        assert_eq!(
            bbox_from_joints(&joints, DEFAULT_BBOX_ALPHA).unwrap(),
            bbox_from_joints(&joints, 1.0).unwrap(),
            "case {case}: the default must behave as alpha 1"
        );
    }
}

/// Flipping twice restores a frame bit for bit; translating annotations and
/// re-rendering matches shifting the rendered map within 1e-6; random
/// swapping preserves frame size and keeps every joint in bounds across 100
/// seeds.
fn criterion_8() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0008);
    let names = ["left_clasper", "right_clasper", "head", "shaft", "end"];

    for case in 0..25 {
        let w = rng.random_range(8..=64);
        let h = rng.random_range(8..=64);
        let mut frame = Frame::zeros(w, h);
        for b in frame.pixels.iter_mut() {
            *b = rng.random();
        }
        // Quarter-pixel coordinates mirror exactly; arbitrary fractions
        // would pick up rounding in width - 1 - x and break the round trip.
        frame.annotations = (0..rng.random_range(1..=3))
            .map(|_| {
                InstrumentAnnotation::from_pairs(names.iter().map(|n| {
                    let x = rng.random_range(0..=4 * (w - 1)) as f64 / 4.0;
                    let y = rng.random_range(0..=4 * (h - 1)) as f64 / 4.0;
                    (*n, Point2::new(x, y))
                }))
            })
            .collect();
        let back = flip_h(&flip_h(&frame));
        assert_eq!(back, frame, "case {case}: double flip must restore the frame");
    }

    let skeleton = SkeletonSpec::endovis();
    let frame_size = FrameSize::new(96, 128);
    let aug = AugmentConfig::default();
    for case in 0..10 {
        let mut frame = Frame::zeros(128, 96);
        // A 35 px margin keeps Gaussian tails at the border below 1e-6 even
        // after a 5 px shift, so the zero-filled band cannot disagree.
        frame.annotations = (0..rng.random_range(1..=2))
            .map(|_| {
                InstrumentAnnotation::from_pairs(skeleton.joint_names().iter().map(|n| {
                    let x = rng.random_range(35.0..92.0);
                    let y = rng.random_range(35.0..60.0);
                    (n.clone(), Point2::new(x, y))
                }))
            })
            .collect();
        let dx = rng.random_range(-5..=5);
        let dy = rng.random_range(-5..=5);
        let moved = translate(&frame, dx, dy, &aug).unwrap();
        assert_eq!(moved.annotations.len(), frame.annotations.len(), "case {case}: no joint may drop");
        let direct = render_targets_sigma(&frame.annotations, &skeleton, frame_size, 5.0)
            .unwrap()
            .translated(dx, dy);
        let rerendered =
            render_targets_sigma(&moved.annotations, &skeleton, frame_size, 5.0).unwrap();
        let worst = rerendered
            .data()
            .iter()
            .zip(direct.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1e-6, "case {case}: shift {dx},{dy} disagrees by {worst}");
    }

    for seed in 0..100u64 {
        let random_frame = |rng: &mut ChaCha8Rng| {
            let mut f = Frame::zeros(80, 64);
            for b in f.pixels.iter_mut() {
                *b = rng.random();
            }
            f.annotations = (0..2)
                .map(|_| {
                    InstrumentAnnotation::from_pairs(skeleton.joint_names().iter().map(|n| {
                        let x = rng.random_range(0.0..79.0);
                        let y = rng.random_range(0.0..63.0);
                        (n.clone(), Point2::new(x, y))
                    }))
                })
                .collect();
            f
        };
        let a = random_frame(&mut rng);
        let b = random_frame(&mut rng);
        let fused = random_swap(&a, &b, seed).unwrap();
        assert_eq!((fused.width, fused.height), (a.width, a.height), "seed {seed}: size");
        let size = fused.size();
        for ann in &fused.annotations {
            for (name, p) in ann.joints() {
                assert!(size.contains(p), "seed {seed}: {name} at {p:?} out of bounds");
            }
        }
    }
}

/// Median decode latency of the shipped bench command on the default
/// 256x320x9 scene, in milliseconds.
fn criterion_9() -> Result<f64, String> {
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_toolpose"))
        .args(["bench", "--iterations", "100"])
        .output()
        .map_err(|e| format!("could not launch the bench command: {e}"))?;
    if !output.status.success() {
        return Err(format!(
            "bench exited with {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr).trim()
        ));
    }
    let stdout = String::from_utf8_lossy(&output.stdout);
    stdout
        .lines()
        .find_map(|l| l.strip_prefix("median_ms="))
        .ok_or_else(|| format!("bench output lacks median_ms: {stdout}"))?
        .parse::<f64>()
        .map_err(|e| format!("unparseable median: {e}"))
}
