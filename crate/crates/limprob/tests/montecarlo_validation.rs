//! Statistical validation runs beyond the acceptance criteria: cycle means
//! at criticality, complex-component incidence, empty-fragment frequency,
//! and the stability of the expected fragment size in n.

use limprob::model::ModelParams;
use limprob::montecarlo::{run_experiment, SampleConfig, SimResult};

fn run(model: ModelParams, n: u32, trials: u32, seed: u64) -> SimResult {
    let cfg = SampleConfig::new(model, n, trials, seed).unwrap();
    run_experiment(&cfg).unwrap()
}

#[test]
fn three_cycle_mean_at_criticality() {
    // At c = 1 the number of triangles is asymptotically Poisson(1/6).
    let sim = run(ModelParams::graph(1.0).unwrap(), 100_000, 2000, 42);
    let three = sim.cycle_laws.iter().find(|c| c.len == 3).unwrap();
    assert!((three.lambda - 1.0 / 6.0).abs() < 1e-15);
    let se = (three.lambda / 2000.0f64).sqrt();
    let dev = (three.mean - three.lambda).abs();
    assert!(dev < 3.0 * se, "mean {} vs 1/6 ({} se)", three.mean, dev / se);
    // Supercritical runs carry no subcritical predictions.
    assert!(sim.predicted_acyclic.is_none());
    assert!(sim.fragment_chi_square.is_none());
}

#[test]
fn subcritical_complex_components_are_rare() {
    let sim = run(ModelParams::graph(0.5).unwrap(), 100_000, 1000, 7);
    let complex_fraction = sim.complex_trials as f64 / sim.trials as f64;
    assert!(complex_fraction < 0.05, "complex fraction {complex_fraction}");
    // Empty-fragment frequency tracks the acyclic probability.
    let empty = sim.fragment_freqs.get("empty").copied().unwrap_or(0);
    let frac = empty as f64 / sim.trials as f64;
    assert!((frac - 0.96650).abs() < 0.03, "empty fraction {frac}");
}

#[test]
fn fragment_size_mean_is_stable_in_n() {
    // The limiting expected fragment size exists; means at n = 10^4 and
    // 10^5 must agree within 3 combined standard errors.
    let a = run(ModelParams::graph(0.5).unwrap(), 10_000, 1000, 9);
    let b = run(ModelParams::graph(0.5).unwrap(), 100_000, 1000, 10);
    let se = (a.fragment_size_variance / 1000.0 + b.fragment_size_variance / 1000.0).sqrt();
    let dev = (a.mean_fragment_size - b.mean_fragment_size).abs();
    assert!(
        dev < 3.0 * se,
        "means {} vs {} ({} se)",
        a.mean_fragment_size,
        b.mean_fragment_size,
        dev / se
    );
}

#[test]
fn hypergraph_uniformity_four_runs() {
    // d = 4 smoke at subcritical density: 2-cycle rate x^2/4 with
    // x = c/(d-2)!.
    let m = ModelParams::hypergraph(4, 1.0).unwrap();
    let sim = run(m, 2000, 400, 11);
    let two = sim.cycle_laws.iter().find(|c| c.len == 2).unwrap();
    assert!((two.lambda - 0.0625).abs() < 1e-15);
    let se = (two.lambda / 400.0f64).sqrt();
    assert!((two.mean - two.lambda).abs() < 4.0 * se, "mean {}", two.mean);
    let total: u64 = sim.fragment_freqs.values().sum();
    assert_eq!(total, 400);
}

#[test]
fn unicyclic_component_rate_matches_normalized_law() {
    // The expected number of size-3 unicyclic components is s^3/6 (the
    // per-shape Poisson mean), an order of magnitude below the raw labeled
    // count normalization; the simulation separates the two decisively.
    let m = ModelParams::graph(0.5).unwrap();
    let sim = run(m, 100_000, 2000, 13);
    let s = m.s();
    let lam = s.powi(3) / 6.0;
    let mut triangles = 0u64;
    for (code, count) in &sim.fragment_freqs {
        // Count component multiplicity of the bare triangle in each shape.
        if code == "U3((),(),())" {
            triangles += count;
        } else if let Some(rest) = code.strip_prefix("U3((),(),())*") {
            let mult: u64 = rest.split('+').next().unwrap().parse().unwrap_or(1);
            triangles += mult * count;
        } else if code.contains("U3((),(),())") {
            triangles += count; // appears once alongside other components
        }
    }
    let mean = triangles as f64 / sim.trials as f64;
    let se = (lam / sim.trials as f64).sqrt();
    assert!(
        (mean - lam).abs() < 4.0 * se,
        "triangle-component mean {mean} vs {lam}"
    );
    // The unnormalized alternative (6x larger) is excluded decisively.
    assert!((mean - 6.0 * lam).abs() > 5.0 * se);
}
