//! Sweep the density range and emit the interval counts as CSV, showing the
//! transition to a single interval at c0 and the growing interval count
//! toward small c.
//!
//! Run with: cargo run --release --example density_sweep > sweep.csv

use limprob::intervals::{sweep_intervals, sweep_to_csv};
use limprob::model::ModelKind;

fn main() {
    let rows = sweep_intervals(ModelKind::Graph, 0.08, 0.99, 24, 16).unwrap();
    print!("{}", sweep_to_csv(&rows));
    eprintln!();
    eprintln!("interval count by density:");
    for r in &rows {
        let bar = "#".repeat(r.interval_count.min(60));
        eprintln!(
            "  c = {:<8.4} {:>3} {} {}",
            r.c,
            r.interval_count,
            if r.certified { " " } else { "~" },
            bar
        );
    }
    eprintln!("(~ marks heuristic rows where the certified depth exceeded the budget)");
}
