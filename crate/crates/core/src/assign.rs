//! Exact minimum-cost assignment on small dense matrices.
//!
//! Joint pairing during decoding and prediction/ground-truth matching during
//! evaluation are both assignment problems over a handful of candidates, so
//! a dense O(n^3) shortest-augmenting-path solver (the Jonker-Volgenant
//! potential formulation) is used everywhere. Greedy matching is offered as
//! an explicit alternative in the evaluation module, never silently.

use alloc::vec;
use alloc::vec::Vec;

/// Solves the square min-cost perfect assignment problem.
///
/// `costs` is `dim * dim` row-major; entry `(i, j)` is the cost of giving
/// row `i` column `j`. Returns the column assigned to each row. Negative
/// costs are fine. `dim = 0` returns an empty assignment.
pub fn min_cost_assignment(dim: usize, costs: &[f64]) -> Vec<usize> {
    assert_eq!(costs.len(), dim * dim, "cost matrix must be square");
    if dim == 0 {
        return Vec::new();
    }
    // Rows and columns are 1-based internally; index 0 is the virtual
    // starting column of each augmenting search. p[j] = row matched to
    // column j (0 = free).
    let n = dim;
    let cost = |i: usize, j: usize| costs[(i - 1) * n + (j - 1)];
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        // Walk the alternating path back, flipping matches.
        while j0 != 0 {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[p[j] - 1] = j - 1;
    }
    assignment
}

/// One-to-one matching maximizing total score over pairs with
/// `score >= threshold`.
///
/// Entries below the threshold can never match; rows and columns left over
/// stay unmatched. Returns `(row, col, score)` triples sorted by row.
pub fn max_score_matching<F>(
    rows: usize,
    cols: usize,
    threshold: f64,
    score: F,
) -> Vec<(usize, usize, f64)>
where
    F: Fn(usize, usize) -> f64,
{
    let dim = rows.max(cols);
    if dim == 0 {
        return Vec::new();
    }
    // Forbidden and padding cells cost 0; admissible cells cost -score, so
    // minimizing total cost maximizes total admitted score.
    let mut costs = vec![0.0f64; dim * dim];
    let mut scores = vec![f64::NEG_INFINITY; dim * dim];
    for r in 0..rows {
        for c in 0..cols {
            let s = score(r, c);
            if s >= threshold {
                costs[r * dim + c] = -s;
                scores[r * dim + c] = s;
            }
        }
    }
    let assignment = min_cost_assignment(dim, &costs);
    let mut out = Vec::new();
    for r in 0..rows {
        let c = assignment[r];
        let s = scores[r * dim + c];
        if c < cols && s != f64::NEG_INFINITY {
            out.push((r, c, s));
        }
    }
    out
}

/// One-to-one matching of maximum cardinality, then minimum total distance,
/// over pairs with `distance <= threshold`.
///
/// Returns `(row, col, distance)` triples sorted by row.
pub fn min_distance_matching<F>(
    rows: usize,
    cols: usize,
    threshold: f64,
    distance: F,
) -> Vec<(usize, usize, f64)>
where
    F: Fn(usize, usize) -> f64,
{
    assert!(threshold.is_finite(), "distance threshold must be finite");
    let dim = rows.max(cols);
    if dim == 0 {
        return Vec::new();
    }
    // A forbidden cell costs more than any full admissible assignment can,
    // which makes cardinality dominate distance. Distances are bounded by
    // the threshold, so `forbidden` stays far outside their range while the
    // sums stay well within f64's exact-comparison headroom.
    let forbidden = (threshold.max(1.0) + 1.0) * 1.0e6;
    let mut costs = vec![forbidden; dim * dim];
    let mut dists = vec![f64::INFINITY; dim * dim];
    for r in 0..rows {
        for c in 0..cols {
            let d = distance(r, c);
            if d <= threshold {
                costs[r * dim + c] = d;
                dists[r * dim + c] = d;
            }
        }
    }
    let assignment = min_cost_assignment(dim, &costs);
    let mut out = Vec::new();
    for r in 0..rows {
        let c = assignment[r];
        let d = dists[r * dim + c];
        if c < cols && d != f64::INFINITY {
            out.push((r, c, d));
        }
    }
    out
}
