//! Cross-checks between the enumeration layer and the closed-form analytic
//! quantities: component-law means sum to the total cycle mass, and the
//! fragment probabilities are a complete law.

use num_traits::ToPrimitive;

use limprob::fragment::{enumerate_fragments, fragment_mass_series};
use limprob::hyper::hyper_weight_sum;
use limprob::intervals::connected_classes;
use limprob::limits::{acyclic_probability, f_value, shape_probability};
use limprob::model::ModelParams;
use limprob::unicycle::{inverse_aut_sum, inverse_aut_sum_closed};

/// Expected number of unicyclic components of a given size is
/// s^k * sum(1/aut); summed over all sizes this converges to f(c). The
/// remainder past size 40 is 8.3e-6 at c = 0.5, well inside the
/// (c e^{1-c})^k e^{c/2} tail bound.
#[test]
fn component_means_sum_to_total_cycle_mass() {
    let m = ModelParams::graph(0.5).unwrap();
    let f = f_value(&m).unwrap();
    let s = m.s();
    let sum: f64 = (3..=40u32)
        .map(|k| s.powi(k as i32) * inverse_aut_sum_closed(k).to_f64().unwrap())
        .sum();
    let diff = f - sum;
    assert!(diff > 0.0, "partial sums stay below the limit");
    assert!((8.2e-6..8.4e-6).contains(&diff), "diff = {diff:.3e}");
    let ce = 0.5 * (1.0f64 - 0.5).exp();
    let tail_bound: f64 = (41..300).map(|k| ce.powi(k)).sum::<f64>() * (0.25f64).exp();
    assert!(diff < tail_bound);
}

#[test]
fn enumerated_lambdas_approach_f_within_tail_bound() {
    let m = ModelParams::graph(0.5).unwrap();
    let f = f_value(&m).unwrap();
    let s = m.s();
    let depth = 12u32;
    let sum: f64 = (3..=depth)
        .map(|k| s.powi(k as i32) * inverse_aut_sum(k, 16).unwrap().to_f64().unwrap())
        .sum();
    let ce = 0.5 * (1.0f64 - 0.5).exp();
    let tail_bound: f64 =
        (depth as i32 + 1..300).map(|k| ce.powi(k)).sum::<f64>() * (0.25f64).exp();
    assert!(f - sum > 0.0);
    assert!(f - sum < tail_bound, "diff {} vs bound {tail_bound}", f - sum);
}

#[test]
fn closed_form_inverse_aut_matches_enumeration() {
    for k in 3..=12u32 {
        assert_eq!(inverse_aut_sum(k, 16).unwrap(), inverse_aut_sum_closed(k), "k={k}");
    }
}

#[test]
fn hyper_lambdas_converge_monotonically_to_f() {
    let m = ModelParams::hypergraph(3, 0.5).unwrap();
    let f = f_value(&m).unwrap();
    let s = m.s();
    let mut partial = 0.0;
    let mut prev_gap = f;
    for k in 2..=8u32 {
        partial += s.powi(k as i32) * hyper_weight_sum(3, k, 10).unwrap().to_f64().unwrap();
        let gap = f - partial;
        assert!(gap > 0.0, "k={k}: partial overshoots");
        assert!(gap < prev_gap, "k={k}: not improving");
        prev_gap = gap;
    }
    // Frozen from the converged run: remainder past 8 edges.
    assert!(prev_gap < 0.014, "gap = {prev_gap:.4e}");
}

/// Shape probabilities are a complete probability law: the enumerated mass
/// up to size 10 plus the series remainder reconstructs 1 to 1e-9.
#[test]
fn fragment_law_is_complete() {
    let m = ModelParams::graph(0.5).unwrap();
    let emf = acyclic_probability(&m).unwrap();
    let s = m.s();
    let depth = 10u32;
    let classes = connected_classes(m.kind, depth, 16).unwrap();
    let fragments = enumerate_fragments(&classes, depth).unwrap();
    let enumerated: f64 = fragments
        .iter()
        .map(|f| shape_probability(&m, f.size, &f.aut).unwrap())
        .sum();
    // Remainder via the exp-of-series coefficients from closed-form
    // connected sums, evaluated far enough that the terms vanish.
    let top = 130usize;
    let mut ias = vec![0.0f64; 3];
    ias.extend((3..=top).map(|k| inverse_aut_sum_closed(k as u32).to_f64().unwrap()));
    let mut b = vec![0.0f64; top + 1];
    b[0] = 1.0;
    for k in 1..=top {
        let mut acc = 0.0;
        for j in 3..=k {
            acc += j as f64 * ias[j] * b[k - j];
        }
        b[k] = acc / k as f64;
    }
    let remainder: f64 = (depth as usize + 1..=top)
        .map(|k| emf * b[k] * s.powi(k as i32))
        .sum();
    let total = enumerated + remainder;
    assert!((total - 1.0).abs() < 1e-9, "total = {total:.15}");
    // The per-size enumerated masses equal the series coefficients too.
    let classes_small = connected_classes(m.kind, 8, 16).unwrap();
    let frags_small = enumerate_fragments(&classes_small, 8).unwrap();
    let mut per_size = [0.0f64; 9];
    for f in &frags_small {
        per_size[f.size as usize] +=
            num_traits::ToPrimitive::to_f64(&f.aut).map(|a| 1.0 / a).unwrap();
    }
    let exact = {
        use num_rational::BigRational;
        use num_traits::Zero;
        let mut conn = vec![BigRational::zero(); 9];
        for k in 3..=8u32 {
            conn[k as usize] = inverse_aut_sum(k, 16).unwrap();
        }
        fragment_mass_series(&conn, 8)
    };
    for k in 0..=8usize {
        assert!(
            (per_size[k] - exact[k].to_f64().unwrap()).abs() < 1e-12,
            "size {k}"
        );
    }
}

/// f and the acyclic probability hold across a grid for both models.
#[test]
fn closed_forms_match_series_on_grid() {
    let mut checked = 0;
    for i in 1..=10 {
        let c = i as f64 * 0.09;
        let m = ModelParams::graph(c).unwrap();
        let f = f_value(&m).unwrap();
        let series: f64 = (3..=1200u32)
            .map(|k| m.x().powi(k as i32) / (2.0 * k as f64))
            .sum();
        assert!((f - series).abs() < 1e-12, "graph c={c}");
        checked += 1;
    }
    for d in [3u32, 4] {
        for i in 1..=5 {
            let crit = ModelParams::hypergraph(d, 0.1).unwrap().kind.criticality();
            let c = crit * i as f64 * 0.16;
            let m = ModelParams::hypergraph(d, c).unwrap();
            let f = f_value(&m).unwrap();
            let series: f64 = (2..=1200u32)
                .map(|k| m.x().powi(k as i32) / (2.0 * k as f64))
                .sum();
            assert!((f - series).abs() < 1e-12, "hyper d={d} c={c}");
            checked += 1;
        }
    }
    assert!(checked >= 20);
}
