//! Compute the interval decomposition of the closure of limiting
//! probabilities at a chosen density. Below c0 the decomposition has gaps;
//! from c0 on it is the whole of [0,1].
//!
//! Run with: cargo run --release --example interval_structure [c]

use limprob::intervals::{build_term_table, gap_report, kakeya_split};
use limprob::model::ModelParams;

fn main() {
    let c: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.5);
    let model = ModelParams::graph(c).expect("valid density");
    model.require_subcritical().expect("needs c < 1");

    let table = build_term_table(&model, 16).unwrap();
    let split = kakeya_split(&table);
    println!("density c = {c}");
    println!(
        "term table: {} head terms above {:.3e}, tail mass {:.6e}, certified: {}",
        table.head.len(),
        table.threshold,
        table.tail_mass,
        table.certified()
    );
    println!("largest head terms:");
    for t in table.head.iter().take(6) {
        println!("  p = {:<12.6e} size {:<2} {}", t.p, t.size, t.code);
    }
    println!(
        "subsum-condition violations at head indices {:?} (tail certified from index {})",
        split.violations, split.certified_tail_start
    );
    println!();
    let rep = gap_report(&model, 16).unwrap();
    println!("closure decomposes into {} interval(s):", rep.interval_count);
    for (a, b) in &rep.intervals {
        println!("  [{a:.12}, {b:.12}]");
    }
    for (a, b) in &rep.gaps {
        println!("gap: ({a:.12}, {b:.12})");
    }
    if let Some((a, b)) = rep.theoretical_gap {
        println!("analytic gap around 1/2: ({a:.12}, {b:.12})");
    }
}
