//! Enumerate unicyclic shapes with their exact automorphism counts, for the
//! graph model and a 3-uniform hypergraph.
//!
//! Run with: cargo run --release --example enumerate_shapes

use limprob::hyper::enumerate_hyper_unicycles;
use limprob::unicycle::{enumerate_unicycles, inverse_aut_sum};

fn main() {
    println!("connected unicyclic graphs by size (edges = vertices):");
    for size in 3..=6u32 {
        let shapes = enumerate_unicycles(size, 16).unwrap();
        println!("  size {size}: {} shapes, sum 1/aut = {}", shapes.len(), inverse_aut_sum(size, 16).unwrap());
        for s in &shapes {
            println!("    {:<28} aut = {}", s.code, s.aut);
        }
    }
    println!();
    println!("3-uniform hypergraph unicycles by edge count:");
    for size in 2..=4u32 {
        let shapes = enumerate_hyper_unicycles(3, size, 8).unwrap();
        println!("  size {size}: {} shapes", shapes.len());
        for s in &shapes {
            println!(
                "    {:<44} aut = {:<6} (d-2)!^k/aut = {}",
                s.code,
                s.aut.to_string(),
                s.weight_ratio()
            );
        }
    }
}
