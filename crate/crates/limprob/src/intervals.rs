//! The interval engine: sorted term tables of fragment probabilities, the
//! subsum-series criterion that certifies where the tail fills a full
//! interval, and the resulting decomposition of the closure of limiting
//! probabilities into closed subintervals of [0,1].
//!
//! A fragment shape H has limiting probability p_H = e^{-f} w^{|H|}/aut(H)
//! and the shape probabilities sum to 1. The closure of limiting
//! probabilities equals the set of subsums of that series. Terms are split
//! into a finite head and a certified tail: every tail term provably
//! satisfies p_i <= sum of smaller terms, so the tail's subsums fill
//! [0, tail_mass] and the full set is the union of head-subset translates of
//! that interval.

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fragment::{self, ComponentClass, FragmentShape};
use crate::hyper;
use crate::jsonout::format_sig;
use crate::limits;
use crate::model::{ModelKind, ModelParams};
use crate::unicycle;

/// Endpoints closer than this are merged; binary64 noise must not fabricate
/// gaps.
pub const MERGE_TOL: f64 = 1e-12;

/// Comparison slack when testing the subsum condition numerically.
const KAKEYA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Certified,
    /// Enumeration stopped at this size before reaching the certified depth.
    Heuristic { max_size_reached: u32 },
}

/// One head term of the sorted series.
#[derive(Debug, Clone)]
pub struct HeadTerm {
    pub code: String,
    pub size: u32,
    /// Exact 1/aut(H).
    pub inverse_aut: BigRational,
    pub p: f64,
    /// The threshold index k(i): least k with p > e^{-f} w_bound s^k.
    pub k_index: i32,
}

/// Sorted head terms with the certified tail mass.
#[derive(Debug, Clone)]
pub struct TermTable {
    pub model: ModelParams,
    /// Sorted by decreasing probability.
    pub head: Vec<HeadTerm>,
    /// 1 - sum of head probabilities: everything below the threshold.
    pub tail_mass: f64,
    pub certification: Certification,
    /// Least integer beyond which the subsum condition holds analytically.
    pub k_star: u32,
    /// Depth actually enumerated.
    pub enumerated_to: u32,
    /// Head-selection threshold theta.
    pub threshold: f64,
    /// Bound on the probability mass never enumerated (0 when certified).
    pub uncertainty_radius: f64,
}

impl TermTable {
    pub fn certified(&self) -> bool {
        self.certification == Certification::Certified
    }
}

/// Connected unicyclic classes for either model, sizes min_cycle..=max_size.
pub fn connected_classes(kind: ModelKind, max_size: u32, cap: u32) -> Result<Vec<ComponentClass>> {
    match kind {
        ModelKind::Graph => Ok(unicycle::enumerate_unicycles_up_to(max_size, cap)?
            .into_iter()
            .map(|s| ComponentClass {
                code: s.code,
                size: s.size,
                aut: s.aut,
            })
            .collect()),
        ModelKind::Hypergraph { d } => Ok(hyper::enumerate_hyper_unicycles_up_to(d, max_size, cap)?
            .into_iter()
            .map(|s| ComponentClass {
                code: s.code,
                size: s.size,
                aut: s.aut,
            })
            .collect()),
    }
}

/// The enumeration depth that certifies the head/tail split: all shapes of
/// size below k_star must be enumerated.
pub fn certified_depth(model: &ModelParams) -> u32 {
    k_star(model).saturating_sub(1)
}

/// Least k beyond which every term of that threshold index provably
/// satisfies the subsum condition.
fn k_star(model: &ModelParams) -> u32 {
    let s = model.s();
    match model.kind {
        // least integer strictly exceeding 1/s + 7/2
        ModelKind::Graph => ((1.0 / s + 3.5).floor() + 1.0) as u32,
        // least integer with (k - 4)/2 >= 1/s
        ModelKind::Hypergraph { .. } => (2.0 / s + 4.0).ceil() as u32,
    }
}

/// Aut-ratio bound entering the hypergraph threshold: ((d-2)/(d-1))^2 for
/// hypergraphs, 1 for graphs.
fn bound_factor(kind: ModelKind) -> f64 {
    match kind {
        ModelKind::Graph => 1.0,
        ModelKind::Hypergraph { d } => {
            let q = (d as f64 - 2.0) / (d as f64 - 1.0);
            q * q
        }
    }
}

/// Build the sorted term table at the given enumeration budget.
pub fn build_term_table(model: &ModelParams, budget: u32) -> Result<TermTable> {
    model.require_subcritical()?;
    let need = certified_depth(model);
    let depth = need.min(budget);
    let certification = if depth == need {
        Certification::Certified
    } else {
        Certification::Heuristic {
            max_size_reached: depth,
        }
    };
    let emf = limits::acyclic_probability(model)?;
    let s = model.s();
    let bound = bound_factor(model.kind);
    let theta = emf * s.powi(k_star(model) as i32 - 1) * bound;
    let classes = if depth >= model.kind.min_cycle_len() {
        connected_classes(model.kind, depth, depth)?
    } else {
        Vec::new()
    };
    let fragments = fragment::enumerate_fragments(&classes, depth)?;
    let mut head: Vec<(FragmentShape, f64)> = Vec::new();
    let mut enumerated_mass = 0.0;
    for f in fragments {
        let p = limits::shape_probability(model, f.size, &f.aut)?;
        enumerated_mass += p;
        if p > theta {
            head.push((f, p));
        }
    }
    head.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then_with(|| a.0.code.cmp(&b.0.code))
    });
    let head: Vec<HeadTerm> = head
        .into_iter()
        .map(|(f, p)| HeadTerm {
            inverse_aut: BigRational::new(1.into(), f.aut.clone().into()),
            k_index: k_index_of(p, emf, s, bound),
            code: f.code,
            size: f.size,
            p,
        })
        .collect();
    let head_mass: f64 = head.iter().map(|t| t.p).sum();
    let tail_mass = 1.0 - head_mass;
    let uncertainty_radius = if certification == Certification::Certified {
        0.0
    } else {
        (1.0 - enumerated_mass).max(0.0)
    };
    Ok(TermTable {
        model: *model,
        head,
        tail_mass,
        certification,
        k_star: k_star(model),
        enumerated_to: depth,
        threshold: theta,
        uncertainty_radius,
    })
}

/// Least k with p > emf * bound * s^k; may be non-positive for the largest
/// terms.
fn k_index_of(p: f64, emf: f64, s: f64, bound: f64) -> i32 {
    let t = (p / (emf * bound)).ln() / s.ln();
    let mut k = t.floor() as i32 + 1;
    let level = |k: i32| emf * bound * s.powi(k);
    while p <= level(k) {
        k += 1;
    }
    while k > i32::MIN + 1 && p > level(k - 1) {
        k -= 1;
    }
    k
}

/// Indices of head terms violating the subsum condition, and the first index
/// from which the condition holds for every later term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KakeyaSplit {
    /// 0-based head indices i with p_i > sum_{j>i} p_j + tail.
    pub violations: Vec<usize>,
    pub certified_tail_start: usize,
}

pub fn kakeya_split(table: &TermTable) -> KakeyaSplit {
    let mut violations = Vec::new();
    let mut suffix = table.tail_mass;
    let mut marks = vec![false; table.head.len()];
    for i in (0..table.head.len()).rev() {
        if table.head[i].p > suffix + KAKEYA_TOL {
            marks[i] = true;
        }
        suffix += table.head[i].p;
    }
    for (i, &m) in marks.iter().enumerate() {
        if m {
            violations.push(i);
        }
    }
    let certified_tail_start = violations.last().map_or(0, |&v| v + 1);
    KakeyaSplit {
        violations,
        certified_tail_start,
    }
}

/// Sorted disjoint closed subintervals of [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    pub intervals: Vec<(f64, f64)>,
    pub certified: bool,
    /// Endpoint uncertainty inherited from a heuristic table.
    pub uncertainty_radius: f64,
}

impl IntervalSet {
    pub fn covered_length(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Open gaps between consecutive intervals.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.intervals
            .windows(2)
            .map(|w| (w[0].1, w[1].0))
            .collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(a, b)| a - MERGE_TOL <= x && x <= b + MERGE_TOL)
    }
}

/// The closure of all subsums of the series: start from the tail interval
/// [0, T] and fold in head terms from smallest to largest, merging overlaps.
pub fn subsum_intervals(table: &TermTable) -> IntervalSet {
    let mut intervals: Vec<(f64, f64)> = vec![(0.0, table.tail_mass.max(0.0))];
    for term in table.head.iter().rev() {
        let shifted: Vec<(f64, f64)> = intervals
            .iter()
            .map(|&(a, b)| (a + term.p, b + term.p))
            .collect();
        intervals.extend(shifted);
        intervals = merge_sorted(intervals);
    }
    // The full sum is exactly 1 by construction; snap the boundary endpoints.
    if let Some(first) = intervals.first_mut() {
        debug_assert!(first.0.abs() < 1e-9);
        first.0 = 0.0;
    }
    if let Some(last) = intervals.last_mut() {
        debug_assert!((last.1 - 1.0).abs() < 1e-9);
        last.1 = 1.0;
    }
    IntervalSet {
        intervals,
        certified: table.certified(),
        uncertainty_radius: table.uncertainty_radius,
    }
}

fn merge_sorted(mut intervals: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    intervals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
    for (a, b) in intervals {
        match out.last_mut() {
            Some(last) if a <= last.1 + MERGE_TOL => {
                last.1 = last.1.max(b);
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Interval decomposition plus its complement and the analytic gap check.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub c: f64,
    pub interval_count: usize,
    pub intervals: Vec<(f64, f64)>,
    pub gaps: Vec<(f64, f64)>,
    /// (1 - e^{-f}, e^{-f}) when c < c0.
    pub theoretical_gap: Option<(f64, f64)>,
    pub certified: bool,
    pub uncertainty_radius: f64,
}

pub fn gap_report(model: &ModelParams, budget: u32) -> Result<GapReport> {
    let table = build_term_table(model, budget)?;
    let set = subsum_intervals(&table);
    let gaps = set.gaps();
    let c0 = limits::solve_c0(model.kind);
    let emf = limits::acyclic_probability(model)?;
    let theoretical_gap = if model.c < c0 {
        Some((1.0 - emf, emf))
    } else {
        None
    };
    if set.certified {
        match theoretical_gap {
            Some((lo, hi)) => {
                let contained = gaps
                    .iter()
                    .any(|&(a, b)| a <= lo + 1e-9 && hi - 1e-9 <= b);
                assert!(
                    contained,
                    "certified decomposition misses the analytic gap ({lo}, {hi}) at c = {}",
                    model.c
                );
            }
            None => {
                assert!(
                    gaps.is_empty(),
                    "certified decomposition has unexpected gaps at c = {} >= c0 = {c0}",
                    model.c
                );
            }
        }
    }
    Ok(GapReport {
        c: model.c,
        interval_count: set.intervals.len(),
        intervals: set.intervals,
        gaps,
        theoretical_gap,
        certified: set.certified,
        uncertainty_radius: set.uncertainty_radius,
    })
}

/// One row of a density sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub c: f64,
    pub interval_count: usize,
    pub certified: bool,
    pub gaps: Vec<(f64, f64)>,
    pub uncertainty_radius: f64,
}

/// Gap reports across a density grid; rows are independent and computed in
/// parallel. The range must stay strictly inside (0, criticality).
pub fn sweep_intervals(
    kind: ModelKind,
    c_from: f64,
    c_to: f64,
    steps: u32,
    budget: u32,
) -> Result<Vec<SweepRow>> {
    if steps == 0 {
        return Err(Error::Domain("sweep needs at least one step".into()));
    }
    if c_from.is_nan() || c_from <= 0.0 || c_to < c_from || c_to >= kind.criticality() {
        return Err(Error::Domain(format!(
            "sweep range must satisfy 0 < from <= to < {}, got [{c_from}, {c_to}]",
            kind.criticality()
        )));
    }
    let grid: Vec<f64> = if steps == 1 || c_from == c_to {
        vec![c_from]
    } else {
        (0..steps)
            .map(|i| c_from + (c_to - c_from) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    grid.par_iter()
        .map(|&c| {
            let model = ModelParams { kind, c };
            let rep = gap_report(&model, budget)?;
            Ok(SweepRow {
                c,
                interval_count: rep.interval_count,
                certified: rep.certified,
                gaps: rep.gaps,
                uncertainty_radius: rep.uncertainty_radius,
            })
        })
        .collect()
}

/// CSV rendering: header `c,interval_count,certified,gaps`, gaps serialized
/// as `a1:b1|a2:b2|...` with 12 significant digits.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("c,interval_count,certified,gaps\n");
    for r in rows {
        let gaps = r
            .gaps
            .iter()
            .map(|(a, b)| format!("{}:{}", format_sig(*a), format_sig(*b)))
            .collect::<Vec<_>>()
            .join("|");
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_sig(r.c),
            r.interval_count,
            r.certified,
            gaps
        ));
    }
    out
}

/// Head mass plus tail of a table, for consistency checks.
pub fn total_mass(table: &TermTable) -> f64 {
    table.head.iter().map(|t| t.p).sum::<f64>() + table.tail_mass
}

#[allow(dead_code)]
fn synthetic_table(head_p: &[f64], tail: f64) -> TermTable {
    TermTable {
        model: ModelParams::graph(0.5).unwrap(),
        head: head_p
            .iter()
            .enumerate()
            .map(|(i, &p)| HeadTerm {
                code: format!("t{i}"),
                size: i as u32,
                inverse_aut: BigRational::new(1.into(), BigUint::from(1u32).into()),
                p,
                k_index: 0,
            })
            .collect(),
        tail_mass: tail,
        certification: Certification::Certified,
        k_star: 0,
        enumerated_to: 0,
        threshold: 0.0,
        uncertainty_radius: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(c: f64) -> ModelParams {
        ModelParams::graph(c).unwrap()
    }

    #[test]
    fn geometric_series_has_no_violations() {
        let t = synthetic_table(&[0.5, 0.25, 0.125], 0.125);
        let split = kakeya_split(&t);
        assert!(split.violations.is_empty());
        assert_eq!(split.certified_tail_start, 0);
    }

    #[test]
    fn dominant_term_violates() {
        let t = synthetic_table(&[0.6, 0.2, 0.1], 0.1);
        let split = kakeya_split(&t);
        assert_eq!(split.violations, vec![0]);
        assert_eq!(split.certified_tail_start, 1);
    }

    #[test]
    fn subsum_of_synthetic_head() {
        // All 4 subsets of {0.6, 0.25} translated by [0, 0.15].
        let t = synthetic_table(&[0.6, 0.25], 0.15);
        let set = subsum_intervals(&t);
        let expect = [(0.0, 0.15), (0.25, 0.4), (0.6, 0.75), (0.85, 1.0)];
        assert_eq!(set.intervals.len(), 4);
        for ((a, b), (ea, eb)) in set.intervals.iter().zip(expect.iter()) {
            assert!((a - ea).abs() < 1e-12 && (b - eb).abs() < 1e-12);
        }
        assert!((set.covered_length() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn empty_shape_violates_at_low_density() {
        let table = build_term_table(&graph(0.2), 16).unwrap();
        assert_eq!(table.head[0].code, "empty");
        let split = kakeya_split(&table);
        assert!(split.violations.contains(&0));
    }

    #[test]
    fn no_violations_at_or_above_c0() {
        for c in [0.937, 0.95, 0.99] {
            let table = build_term_table(&graph(c), 16).unwrap();
            let split = kakeya_split(&table);
            assert!(split.violations.is_empty(), "c={c}: {:?}", split.violations);
            assert!(table.head[0].p <= 0.5 + 1e-12);
        }
        // Same for hypergraphs past the shared ratio, covering the small
        // head terms (empty, 2-cycle, size 3) individually.
        let h = ModelParams::hypergraph(3, 0.95).unwrap();
        let table = build_term_table(&h, 10).unwrap();
        assert!(kakeya_split(&table).violations.is_empty());
    }

    #[test]
    fn head_composition_examples() {
        // At c = 0.5 the empty shape is the only term above 1/2.
        let table = build_term_table(&graph(0.5), 16).unwrap();
        assert_eq!(table.head[0].code, "empty");
        assert!(table.head[0].p > 0.5);
        assert!(table.head[1..].iter().all(|t| t.p < 0.5));
        // Hypergraph d = 3, c = 0.5: the largest non-empty term is the
        // 2-cycle with p = e^{-f} s^2 / 4.
        let h = ModelParams::hypergraph(3, 0.5).unwrap();
        let table = build_term_table(&h, 10).unwrap();
        assert_eq!(table.head[0].code, "empty");
        let first = &table.head[1];
        assert_eq!(first.size, 2);
        let expect = limits::acyclic_probability(&h).unwrap() * h.s().powi(2) / 4.0;
        assert!((first.p - expect).abs() < 1e-15, "p = {}", first.p);
    }

    #[test]
    fn supercritical_region_fills_the_interval() {
        let rep = gap_report(&graph(0.95), 16).unwrap();
        assert!(rep.certified);
        assert_eq!(rep.interval_count, 1);
        assert_eq!(rep.intervals, vec![(0.0, 1.0)]);
        assert!(rep.gaps.is_empty());
    }

    #[test]
    fn hypergraph_supercritical_fills_the_interval() {
        let m = ModelParams::hypergraph(3, 0.95).unwrap();
        let rep = gap_report(&m, 10).unwrap();
        assert!(rep.certified, "needed depth {}", certified_depth(&m));
        assert_eq!(rep.interval_count, 1);
    }

    #[test]
    fn subcritical_gap_matches_acyclic_probability() {
        let m = graph(0.5);
        let rep = gap_report(&m, 16).unwrap();
        assert!(rep.certified);
        assert_eq!(rep.interval_count, 2);
        let emf = limits::acyclic_probability(&m).unwrap();
        let (a, b) = rep.gaps[0];
        assert!((a - (1.0 - emf)).abs() < 1e-12);
        assert!((b - emf).abs() < 1e-12);
        assert_eq!(rep.intervals[0].0, 0.0);
        assert_eq!(rep.intervals[1].1, 1.0);
    }

    #[test]
    fn head_terms_respect_k_index_size_bound() {
        for c in [0.3, 0.5, 0.8, 0.95] {
            let table = build_term_table(&graph(c), 16).unwrap();
            assert!(table.certified());
            for t in &table.head {
                assert!(
                    (t.size as i32) < t.k_index || t.size == 0,
                    "c={c} code={} size={} k={}",
                    t.code,
                    t.size,
                    t.k_index
                );
                assert!(t.p > table.threshold);
            }
            assert!((total_mass(&table) - 1.0).abs() < 1e-12);
            assert!(table.tail_mass > 0.0);
        }
    }

    #[test]
    fn heuristic_mode_reports_radius() {
        // Tiny budget forces the heuristic path.
        let table = build_term_table(&graph(0.5), 4).unwrap();
        assert!(matches!(
            table.certification,
            Certification::Heuristic { max_size_reached: 4 }
        ));
        assert!(table.uncertainty_radius > 0.0);
        let set = subsum_intervals(&table);
        assert!(!set.certified);
        assert_eq!(set.uncertainty_radius, table.uncertainty_radius);
    }

    #[test]
    fn interval_set_invariants() {
        for c in [0.1, 0.25, 0.5, 0.7, 0.9, 0.95] {
            let table = build_term_table(&graph(c), 16).unwrap();
            let set = subsum_intervals(&table);
            let iv = &set.intervals;
            assert_eq!(iv.first().unwrap().0, 0.0);
            assert_eq!(iv.last().unwrap().1, 1.0);
            for w in iv.windows(2) {
                assert!(w[0].1 < w[1].0, "intervals not strictly separated");
            }
            for &(a, b) in iv {
                assert!(a <= b && (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
            }
            assert!(set.covered_length() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn sweep_counts_cross_c0() {
        let rows = sweep_intervals(ModelKind::Graph, 0.5, 0.95, 4, 16).unwrap();
        assert_eq!(rows.len(), 4);
        let c0 = limits::solve_c0(ModelKind::Graph);
        for r in &rows {
            if r.c < c0 {
                assert!(r.interval_count >= 2, "c={}", r.c);
            } else {
                assert_eq!(r.interval_count, 1, "c={}", r.c);
            }
            assert!(r.certified);
        }
        let single = sweep_intervals(ModelKind::Graph, 0.5, 0.5, 1, 16).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert!(sweep_intervals(ModelKind::Graph, 0.0, 0.5, 3, 16).is_err());
        assert!(sweep_intervals(ModelKind::Graph, 0.5, 1.0, 3, 16).is_err());
        assert!(sweep_intervals(ModelKind::Graph, 0.5, 0.4, 3, 16).is_err());
    }

    #[test]
    fn covered_length_monotone_under_merging() {
        // Adding head terms never shrinks the covered length, and with no
        // violations anywhere the union is all of [0,1].
        let head = [0.4, 0.25, 0.15, 0.1];
        let tail = 0.1;
        let mut prev = 0.0;
        for take in 0..=head.len() {
            let t = synthetic_table(&head[head.len() - take..], tail);
            let mut intervals = vec![(0.0, t.tail_mass)];
            for term in t.head.iter().rev() {
                let shifted: Vec<(f64, f64)> =
                    intervals.iter().map(|&(a, b)| (a + term.p, b + term.p)).collect();
                intervals.extend(shifted);
                intervals = merge_sorted(intervals);
            }
            let len: f64 = intervals.iter().map(|(a, b)| b - a).sum();
            assert!(len >= prev - 1e-12, "shrunk at prefix {take}");
            prev = len;
        }
        let full = synthetic_table(&head, tail);
        assert!(kakeya_split(&full).violations.is_empty());
        let set = subsum_intervals(&full);
        assert_eq!(set.intervals, vec![(0.0, 1.0)]);
    }

    #[test]
    fn kakeya_condition_holds_from_certified_start() {
        for c in [0.2, 0.5, 0.8, 0.95] {
            let table = build_term_table(&graph(c), 16).unwrap();
            let split = kakeya_split(&table);
            let mut suffix = table.tail_mass;
            for i in (0..table.head.len()).rev() {
                if i >= split.certified_tail_start {
                    assert!(
                        table.head[i].p <= suffix + KAKEYA_TOL,
                        "c={c} i={i} violates past certified start"
                    );
                }
                suffix += table.head[i].p;
            }
        }
    }

    #[test]
    fn csv_format() {
        let rows = vec![SweepRow {
            c: 0.5,
            interval_count: 2,
            certified: true,
            gaps: vec![(0.03349962301, 0.966500376987)],
            uncertainty_radius: 0.0,
        }];
        let csv = sweep_to_csv(&rows);
        assert!(csv.starts_with("c,interval_count,certified,gaps\n"));
        assert!(csv.contains("0.5,2,true,0.03349962301:0.966500376987"));
    }
}
