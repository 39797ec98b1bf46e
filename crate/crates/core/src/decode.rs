//! Decoding instrument poses from predicted heatmaps.
//!
//! The full parse runs in five steps:
//!
//! 1. Gaussian-smooth the joint channels and run thresholded non-maximum
//!    suppression on each, yielding joint candidates.
//! 2. Measure total variation of the raw prediction; below the configured
//!    threshold the map is considered washed out and the edge channels are
//!    high-boost sharpened before pairing.
//! 3. Score every candidate pair of each skeleton edge by the mean of the
//!    edge channel sampled along the straight line between them.
//! 4. Keep the one-to-one pairing per edge that maximizes total score.
//! 5. Group candidates connected by matched edges into instruments.
//!
//! [`decode_single`] is the degenerate single-instrument path: one argmax
//! per channel, no pairing.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::assign::max_score_matching;
use crate::filter::{gaussian_smooth, gaussian_smooth_channels, high_boost_channels, FilterError};
use crate::geometry::Point2;
use crate::heatmap::Heatmap;
use crate::skeleton::SkeletonSpec;
use crate::tv::{total_variation, ConfidenceReport};

/// Parameters of the decoding pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeConfig {
    /// Sigma of the Gaussian applied to joint channels before suppression.
    pub smooth_sigma: f64,
    /// Minimum peak value for a joint candidate.
    pub nms_threshold: f64,
    /// Suppression window side length; odd, at least 3.
    pub nms_window: usize,
    /// Total-variation level below which edge channels get high-boosted.
    pub tv_boost_threshold: f64,
    /// Sample count for line-integral scores; at least 2.
    pub line_samples: usize,
    /// Minimum line-integral score for a joint pair to be admissible.
    pub pair_score_threshold: f64,
    /// High-boost strength applied to washed-out edge channels.
    pub high_boost_k: f64,
    /// Sigma of the high-boost low-pass.
    pub high_boost_sigma: f64,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            smooth_sigma: 3.0,
            nms_threshold: 0.3,
            nms_window: 5,
            tv_boost_threshold: 1000.0,
            line_samples: 10,
            pair_score_threshold: 0.3,
            high_boost_k: crate::filter::DEFAULT_HIGH_BOOST_K,
            high_boost_sigma: crate::filter::DEFAULT_HIGH_BOOST_SIGMA,
        }
    }
}

impl DecodeConfig {
    /// Validates every field; called by all decoding entry points.
    pub fn validate(&self) -> Result<(), DecodeError> {
        if !(self.smooth_sigma > 0.0) {
            return Err(DecodeError::BadConfig("smooth_sigma must be > 0"));
        }
        if self.nms_window < 3 || self.nms_window % 2 == 0 {
            return Err(DecodeError::BadConfig("nms_window must be odd and >= 3"));
        }
        if !(self.nms_threshold >= 0.0) {
            return Err(DecodeError::BadConfig("nms_threshold must be >= 0"));
        }
        if !(self.tv_boost_threshold >= 0.0) {
            return Err(DecodeError::BadConfig("tv_boost_threshold must be >= 0"));
        }
        if self.line_samples < 2 {
            return Err(DecodeError::BadConfig("line_samples must be >= 2"));
        }
        if !(self.pair_score_threshold >= 0.0) {
            return Err(DecodeError::BadConfig("pair_score_threshold must be >= 0"));
        }
        if self.high_boost_k < 0.0 {
            return Err(DecodeError::BadConfig("high_boost_k must be >= 0"));
        }
        if !(self.high_boost_sigma > 0.0) {
            return Err(DecodeError::BadConfig("high_boost_sigma must be > 0"));
        }
        Ok(())
    }
}

/// Failures while decoding.
#[derive(Debug, Clone, PartialEq)]
pub enum DecodeError {
    /// A configuration field was out of range.
    BadConfig(&'static str),
    /// A channel index was out of range for the map.
    ChannelRange {
        /// Rejected index.
        channel: usize,
        /// Channels in the map.
        channels: usize,
    },
    /// Map channels do not line up with the skeleton layout.
    ChannelMismatch {
        /// What the skeleton requires.
        expected: Vec<String>,
        /// What the map carries.
        got: Vec<String>,
    },
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::BadConfig(msg) => write!(f, "decode config: {msg}"),
            DecodeError::ChannelRange { channel, channels } => {
                write!(f, "channel {channel} out of range for {channels} channels")
            }
            DecodeError::ChannelMismatch { expected, got } => write!(
                f,
                "map channels {got:?} do not match the skeleton layout {expected:?}"
            ),
        }
    }
}

impl core::error::Error for DecodeError {}

impl From<FilterError> for DecodeError {
    fn from(_: FilterError) -> Self {
        // Config validation runs first, so filter parameters are in range;
        // this arm exists only to satisfy `?` plumbing.
        DecodeError::BadConfig("filter parameter out of range")
    }
}

/// A local maximum on one joint channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointCandidate {
    /// Channel the candidate came from.
    pub channel: usize,
    /// Column of the peak.
    pub x: usize,
    /// Row of the peak.
    pub y: usize,
    /// Smoothed map value at the peak.
    pub score: f64,
}

impl JointCandidate {
    /// Peak position as a point.
    pub fn position(&self) -> Point2 {
        Point2::new(self.x as f64, self.y as f64)
    }
}

/// Thresholded non-maximum suppression over every channel of `map`.
///
/// A pixel survives when its value reaches `nms_threshold` and no pixel in
/// the centred `nms_window` square beats it; exact ties go to the earlier
/// pixel in row-major order, so plateaus yield exactly one candidate.
/// Surviving candidates therefore sit at least `window / 2 + 1` apart in
/// Chebyshev distance on each channel. Sorted by descending score, ties by
/// channel then row-major position.
pub fn nms_candidates(map: &Heatmap, config: &DecodeConfig) -> Result<Vec<JointCandidate>, DecodeError> {
    config.validate()?;
    let mut out = Vec::new();
    let radius = (config.nms_window / 2) as i64;
    let (h, w) = (map.height() as i64, map.width() as i64);
    for c in 0..map.channels() {
        for y in 0..h {
            'pixel: for x in 0..w {
                let v = map.get(x as usize, y as usize, c);
                if v < config.nms_threshold {
                    continue;
                }
                for ny in (y - radius).max(0)..=(y + radius).min(h - 1) {
                    for nx in (x - radius).max(0)..=(x + radius).min(w - 1) {
                        if nx == x && ny == y {
                            continue;
                        }
                        let nv = map.get(nx as usize, ny as usize, c);
                        if nv > v || (nv == v && (ny, nx) < (y, x)) {
                            continue 'pixel;
                        }
                    }
                }
                out.push(JointCandidate { channel: c, x: x as usize, y: y as usize, score: v });
            }
        }
    }
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.channel.cmp(&b.channel))
            .then(a.y.cmp(&b.y))
            .then(a.x.cmp(&b.x))
    });
    Ok(out)
}

/// Mean of channel `c` bilinearly sampled at `samples` points spaced evenly
/// on the segment `p..q`, endpoints included.
///
/// `p == q` degenerates to the value at `p`. For maps valued in `[0, 1]`
/// the result stays in `[0, 1]`.
pub fn line_integral_score(
    map: &Heatmap,
    c: usize,
    p: Point2,
    q: Point2,
    samples: usize,
) -> Result<f64, DecodeError> {
    if c >= map.channels() {
        return Err(DecodeError::ChannelRange { channel: c, channels: map.channels() });
    }
    if samples < 2 {
        return Err(DecodeError::BadConfig("line_samples must be >= 2"));
    }
    if p == q {
        return Ok(map.sample_bilinear(c, p.x, p.y));
    }
    let mut acc = 0.0;
    let last = (samples - 1) as f64;
    for k in 0..samples {
        let t = k as f64 / last;
        let x = p.x + t * (q.x - p.x);
        let y = p.y + t * (q.y - p.y);
        acc += map.sample_bilinear(c, x, y);
    }
    Ok(acc / samples as f64)
}

/// A matched candidate pair on one edge channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMatch {
    /// Index into the first candidate list.
    pub a: usize,
    /// Index into the second candidate list.
    pub b: usize,
    /// Line-integral score of the pair.
    pub score: f64,
}

/// Optimal one-to-one pairing of two candidate lists against an edge channel.
///
/// Every pair is scored by [`line_integral_score`]; pairs below
/// `pair_score_threshold` are inadmissible. Among admissible pairings the
/// total score is maximized exactly (no greedy shortcuts). Results are
/// sorted by the index into `cands_a`.
pub fn match_pairs(
    cands_a: &[JointCandidate],
    cands_b: &[JointCandidate],
    map: &Heatmap,
    c: usize,
    config: &DecodeConfig,
) -> Result<Vec<PairMatch>, DecodeError> {
    config.validate()?;
    if c >= map.channels() {
        return Err(DecodeError::ChannelRange { channel: c, channels: map.channels() });
    }
    let mut scores = vec![0.0f64; cands_a.len() * cands_b.len()];
    for (i, a) in cands_a.iter().enumerate() {
        for (j, b) in cands_b.iter().enumerate() {
            scores[i * cands_b.len() + j] = line_integral_score(
                map,
                c,
                a.position(),
                b.position(),
                config.line_samples,
            )?;
        }
    }
    let matches = max_score_matching(
        cands_a.len(),
        cands_b.len(),
        config.pair_score_threshold,
        |i, j| scores[i * cands_b.len() + j],
    );
    Ok(matches.into_iter().map(|(a, b, score)| PairMatch { a, b, score }).collect())
}

/// One detected joint of a pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDetection {
    /// Peak position in pixels.
    pub position: Point2,
    /// Peak score from the smoothed joint channel.
    pub score: f64,
}

/// One decoded instrument.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstrumentPose {
    /// Detected joints keyed by joint name.
    pub joints: BTreeMap<String, JointDetection>,
    /// Matched skeleton edges as `(edge index, line score)`, sorted by edge.
    pub edges: Vec<(usize, f64)>,
}

impl InstrumentPose {
    /// Sum of joint scores; poses are ordered by this, descending.
    pub fn total_score(&self) -> f64 {
        self.joints.values().map(|j| j.score).sum()
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins, keeping componenting order-independent.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Full multi-instrument parse of a predicted map stack.
///
/// `map` channels must match `skeleton.channel_names()` exactly (joints,
/// then edges). Returns the decoded poses ordered by descending total joint
/// score alongside the confidence report of the raw prediction. Candidates
/// that end up with no matched edge are dropped; for skeletons without any
/// edges every candidate becomes its own single-joint pose.
pub fn parse_instruments(
    map: &Heatmap,
    skeleton: &SkeletonSpec,
    config: &DecodeConfig,
) -> Result<(Vec<InstrumentPose>, ConfidenceReport), DecodeError> {
    config.validate()?;
    let expected = skeleton.channel_names();
    if map.channel_names() != expected.as_slice() {
        return Err(DecodeError::ChannelMismatch {
            expected,
            got: map.channel_names().to_vec(),
        });
    }

    let n_joints = skeleton.joint_names().len();
    let joint_channels: Vec<usize> = (0..n_joints).collect();
    let edge_channels: Vec<usize> = (n_joints..map.channels()).collect();

    // Joint candidates come from the smoothed joint channels.
    let smoothed = gaussian_smooth_channels(map, &joint_channels, config.smooth_sigma)?;
    let mut per_joint: Vec<Vec<JointCandidate>> = vec![Vec::new(); n_joints];
    for cand in nms_candidates(&smoothed, config)? {
        if cand.channel < n_joints {
            per_joint[cand.channel].push(cand);
        }
    }

    // Confidence is measured on the raw prediction; a washed-out map gets
    // its edge channels sharpened before pairing.
    let report = total_variation(map);
    let edge_source;
    let edge_map: &Heatmap = if report.total < config.tv_boost_threshold && !edge_channels.is_empty()
    {
        edge_source =
            high_boost_channels(map, &edge_channels, config.high_boost_k, config.high_boost_sigma)?;
        &edge_source
    } else {
        map
    };

    // Candidate ids are global across joint channels.
    let offsets: Vec<usize> = per_joint
        .iter()
        .scan(0usize, |acc, c| {
            let start = *acc;
            *acc += c.len();
            Some(start)
        })
        .collect();
    let total_cands: usize = per_joint.iter().map(Vec::len).sum();

    let mut dsu = DisjointSet::new(total_cands);
    // (edge index, global a, global b, score)
    let mut matched_edges: Vec<(usize, usize, usize, f64)> = Vec::new();
    for (e, &(ja, jb)) in skeleton.edges().iter().enumerate() {
        let matches = match_pairs(
            &per_joint[ja],
            &per_joint[jb],
            edge_map,
            n_joints + e,
            config,
        )?;
        for m in matches {
            let ga = offsets[ja] + m.a;
            let gb = offsets[jb] + m.b;
            dsu.union(ga, gb);
            matched_edges.push((e, ga, gb, m.score));
        }
    }

    let flat: Vec<&JointCandidate> = per_joint.iter().flatten().collect();

    // Collect components. With no edges at all, each candidate stands alone
    // as a single-joint instrument; otherwise only matched components count.
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for gid in 0..total_cands {
        let root = dsu.find(gid);
        components.entry(root).or_default().push(gid);
    }

    let mut poses = Vec::new();
    for (_, members) in components {
        let is_group = members.len() > 1;
        if !is_group && !skeleton.edges().is_empty() {
            continue;
        }
        // Resolve same-joint conflicts inside a component: keep the higher
        // score, break ties towards the earlier candidate.
        let mut best_for_joint: BTreeMap<usize, usize> = BTreeMap::new();
        for &gid in &members {
            let cand = flat[gid];
            match best_for_joint.get(&cand.channel) {
                Some(&held) if flat[held].score >= cand.score => {}
                _ => {
                    best_for_joint.insert(cand.channel, gid);
                }
            }
        }
        let kept: Vec<usize> = best_for_joint.values().copied().collect();
        let mut pose = InstrumentPose::default();
        for &gid in &kept {
            let cand = flat[gid];
            pose.joints.insert(
                skeleton.joint_names()[cand.channel].clone(),
                JointDetection { position: cand.position(), score: cand.score },
            );
        }
        for &(e, ga, gb, score) in &matched_edges {
            if kept.contains(&ga) && kept.contains(&gb) {
                pose.edges.push((e, score));
            }
        }
        pose.edges.sort_by(|a, b| a.0.cmp(&b.0));
        poses.push(pose);
    }

    poses.sort_by(|a, b| b.total_score().total_cmp(&a.total_score()));
    Ok((poses, report))
}

/// Single-instrument decode: argmax per channel of the smoothed map.
///
/// Every channel is treated as a joint channel named by the map. Ties go to
/// the first maximum in row-major order. The reported score is the smoothed
/// value at the chosen pixel, so it reflects local support rather than a
/// single noisy peak.
pub fn decode_single(map: &Heatmap, smooth_sigma: f64) -> Result<InstrumentPose, DecodeError> {
    if !(smooth_sigma > 0.0) {
        return Err(DecodeError::BadConfig("smooth_sigma must be > 0"));
    }
    let smoothed = gaussian_smooth(map, smooth_sigma)?;
    let mut pose = InstrumentPose::default();
    for c in 0..smoothed.channels() {
        let mut best = (0usize, 0usize, f64::NEG_INFINITY);
        for y in 0..smoothed.height() {
            for x in 0..smoothed.width() {
                let v = smoothed.get(x, y, c);
                if v > best.2 {
                    best = (x, y, v);
                }
            }
        }
        pose.joints.insert(
            smoothed.channel_names()[c].clone(),
            JointDetection {
                position: Point2::new(best.0 as f64, best.1 as f64),
                score: best.2,
            },
        );
    }
    Ok(pose)
}
