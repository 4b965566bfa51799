//! Independent check of the interval engine: a truncated subset-sum oracle
//! enumerates all 2^m sums of the m largest shape probabilities, widens each
//! by the residual mass, and the resulting union of intervals must agree
//! with the engine's decomposition up to that radius.

use limprob::fragment::enumerate_fragments;
use limprob::intervals::{build_term_table, connected_classes, subsum_intervals};
use limprob::limits::shape_probability;
use limprob::model::ModelParams;

/// All shape probabilities for fragments of size <= depth, descending.
fn shape_probs(model: &ModelParams, depth: u32) -> Vec<f64> {
    let classes = connected_classes(model.kind, depth, depth).unwrap();
    let fragments = enumerate_fragments(&classes, depth).unwrap();
    let mut probs: Vec<f64> = fragments
        .iter()
        .map(|f| shape_probability(model, f.size, &f.aut).unwrap())
        .collect();
    probs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    probs
}

/// Exhaustive subset sums of the head terms, merged into intervals of
/// radius `slack`.
fn oracle_intervals(head: &[f64], slack: f64) -> Vec<(f64, f64)> {
    assert!(head.len() <= 22, "oracle explosion");
    let mut sums = vec![0.0f64];
    for &p in head {
        let shifted: Vec<f64> = sums.iter().map(|s| s + p).collect();
        sums.extend(shifted);
    }
    sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for s in sums {
        match intervals.last_mut() {
            Some(last) if s <= last.1 + 1e-12 => last.1 = s + slack,
            _ => intervals.push((s, s + slack)),
        }
    }
    intervals
}

fn check_against_oracle(model: &ModelParams, head_count: usize) {
    let depth = 10;
    let probs = shape_probs(model, depth);
    let m = head_count.min(probs.len());
    let head = &probs[..m];
    // Residual: everything outside the oracle head (all shapes sum to 1).
    let slack = 1.0 - head.iter().sum::<f64>();
    assert!(slack > 0.0 && slack < 0.2, "oracle slack {slack}");
    let oracle = oracle_intervals(head, slack);

    let table = build_term_table(model, 16).unwrap();
    assert!(table.certified());
    let engine = subsum_intervals(&table);

    // Wide oracle gaps (wider than 2*slack cannot be artifacts) must appear
    // in the engine output and conversely.
    let wide_oracle_gaps: Vec<(f64, f64)> = oracle
        .windows(2)
        .map(|w| (w[0].1, w[1].0))
        .filter(|(a, b)| b - a > 2.0 * slack)
        .collect();
    let engine_gaps: Vec<(f64, f64)> = engine.gaps();
    for (a, b) in &wide_oracle_gaps {
        assert!(
            engine_gaps
                .iter()
                .any(|(ga, gb)| (ga - a).abs() <= slack && (gb - b).abs() <= slack),
            "oracle gap ({a}, {b}) missing from engine at c = {}",
            model.c
        );
    }
    for (ga, gb) in engine_gaps.iter().filter(|(a, b)| b - a > 2.0 * slack) {
        assert!(
            wide_oracle_gaps
                .iter()
                .any(|(a, b)| (ga - a).abs() <= slack && (gb - b).abs() <= slack),
            "engine gap ({ga}, {gb}) not seen by oracle at c = {}",
            model.c
        );
    }
    // Every engine interval endpoint must be achievable for the oracle.
    for &(a, b) in &engine.intervals {
        assert!(
            oracle.iter().any(|&(oa, ob)| oa - slack <= a && b <= ob + slack),
            "engine interval ({a}, {b}) outside oracle coverage"
        );
    }
}

#[test]
fn engine_matches_subset_sum_oracle_mid_density() {
    check_against_oracle(&ModelParams::graph(0.5).unwrap(), 20);
}

#[test]
fn engine_matches_subset_sum_oracle_high_density() {
    check_against_oracle(&ModelParams::graph(0.8).unwrap(), 20);
}

#[test]
fn engine_matches_subset_sum_oracle_low_density() {
    check_against_oracle(&ModelParams::graph(0.35).unwrap(), 20);
}

#[test]
fn engine_two_intervals_at_half_density_match_oracle_exactly() {
    // At c = 0.5 the decomposition is [0, 1-q] u [q, 1] with q the acyclic
    // probability; the oracle confirms both endpoints within its radius.
    let model = ModelParams::graph(0.5).unwrap();
    let probs = shape_probs(&model, 10);
    let head = &probs[..20];
    let slack = 1.0 - head.iter().sum::<f64>();
    let oracle = oracle_intervals(head, slack);
    let q = limprob::limits::acyclic_probability(&model).unwrap();
    // The oracle's last interval must start within slack of q.
    let last = oracle.last().unwrap();
    assert!((last.0 - q).abs() <= slack);
    let table = build_term_table(&model, 16).unwrap();
    let engine = subsum_intervals(&table);
    assert_eq!(engine.intervals.len(), 2);
    assert!((engine.intervals[1].0 - q).abs() < 1e-12);
    assert!((engine.intervals[0].1 - (1.0 - q)).abs() < 1e-12);
}
