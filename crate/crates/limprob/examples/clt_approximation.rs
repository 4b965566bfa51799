//! At or above criticality the cumulative short-cycle count has unbounded
//! Poisson mean, so statements "at most a cycles of length at most k" can
//! approximate any target probability. Search for the (k, a) pair hitting a
//! grid of targets.
//!
//! Run with: cargo run --release --example clt_approximation

use limprob::limits::fo_approximation;
use limprob::model::ModelParams;

fn main() {
    let model = ModelParams::graph(1.5).unwrap();
    let eps = 0.02;
    println!("c = {}, eps = {eps}", model.c);
    println!("{:>6} {:>4} {:>7} {:>12} {:>12} {:>10}", "target", "k", "a", "mu", "achieved", "error");
    for p in [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95] {
        let r = fo_approximation(&model, p, eps).unwrap();
        println!(
            "{p:>6} {:>4} {:>7} {:>12.3} {:>12.6} {:>10.2e}{}",
            r.k,
            r.a,
            r.mu,
            r.achieved,
            r.error,
            if r.certified { "" } else { "  (uncertified)" }
        );
    }
}
