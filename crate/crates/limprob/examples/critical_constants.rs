//! Locate the critical densities where the limiting acyclic probability
//! crosses 1/2: the threshold between a gapped closure and the full
//! interval [0,1].
//!
//! Run with: cargo run --release --example critical_constants

use limprob::limits::{acyclic_probability, solve_c0};
use limprob::model::{ModelKind, ModelParams};

fn main() {
    let c0 = solve_c0(ModelKind::Graph);
    let m = ModelParams { kind: ModelKind::Graph, c: c0 };
    println!("graph G(n, c/n):");
    println!("  c0       = {c0:.12}");
    println!(
        "  residual = {:.3e}",
        (acyclic_probability(&m).unwrap() - 0.5).abs()
    );
    println!();
    println!("d-uniform hypergraphs G^d(n, c/n^(d-1)):");
    for d in [3u32, 4, 5] {
        let kind = ModelKind::Hypergraph { d };
        let c0d = solve_c0(kind);
        println!(
            "  d = {d}: c0 = {c0d:.12}   c0/(d-2)! = {:.12}",
            c0d / kind.criticality()
        );
    }
    println!();
    println!("the hypergraph ratio r = c0/(d-2)! is shared across all d");
}
