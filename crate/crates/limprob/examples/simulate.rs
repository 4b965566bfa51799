//! Monte Carlo validation at desk scale: sample G(n, c/n), classify
//! components, extract fragments, and compare the empirical laws with the
//! analytic predictions.
//!
//! Run with: cargo run --release --example simulate [trials]

use limprob::model::ModelParams;
use limprob::montecarlo::{run_experiment, SampleConfig};

fn main() {
    let trials: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let model = ModelParams::graph(0.5).unwrap();
    let cfg = SampleConfig::new(model, 20_000, trials, 42).unwrap();
    let sim = run_experiment(&cfg).unwrap();

    println!("G(n = {}, c = {}) over {} trials, seed {}", sim.n, sim.c, sim.trials, sim.master_seed);
    println!(
        "acyclic fraction: {:.5} (predicted {:.5}, z = {:+.2})",
        sim.acyclic_fraction,
        sim.predicted_acyclic.unwrap(),
        sim.acyclic_z.unwrap()
    );
    for law in &sim.cycle_laws {
        println!(
            "{}-cycles: mean {:.5} vs lambda {:.5}, tv distance {:.4}",
            law.len, law.mean, law.lambda, law.tv_distance
        );
    }
    if let Some(cov) = &sim.cycle_covariance {
        println!(
            "cov({}-cycles, {}-cycles) = {:+.3e} ({:+.2} standard errors)",
            cov.len_a, cov.len_b, cov.covariance, cov.z
        );
    }
    println!("most frequent fragments:");
    let mut freqs: Vec<(&String, &u64)> = sim.fragment_freqs.iter().collect();
    freqs.sort_by(|a, b| b.1.cmp(a.1));
    for (code, count) in freqs.iter().take(6) {
        println!("  {code:<28} {count}");
    }
    if let Some(cs) = &sim.fragment_chi_square {
        println!(
            "fragment law chi-square: {:.3} on {} dof, p = {:.4}",
            cs.statistic, cs.dof, cs.p_value
        );
    }
}
