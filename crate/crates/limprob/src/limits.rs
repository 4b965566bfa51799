//! Closed-form limiting quantities: the cycle-mass function f(c), acyclic
//! probabilities, critical constants, Poisson parameters for cycle and
//! component counts, fragment-shape probabilities, and the central-limit
//! search that approximates a target probability by counting short cycles.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::model::{ModelKind, ModelParams};
use crate::stats;

/// Total asymptotic expected cycle count,
/// f = sum over k >= min_cycle_len of x^k / (2k).
///
/// Closed forms: graphs f = ln(1/(1-x))/2 - x/2 - x^2/4;
/// hypergraphs (cycles start at length 2) f = ln(1/(1-x))/2 - x/2.
pub fn f_value(model: &ModelParams) -> Result<f64> {
    model.require_subcritical()?;
    let x = model.x();
    let base = -0.5 * (1.0 - x).ln() - 0.5 * x;
    Ok(match model.kind {
        ModelKind::Graph => base - 0.25 * x * x,
        ModelKind::Hypergraph { .. } => base,
    })
}

/// Truncated series for f, used as the independent cross-check.
pub fn f_series(model: &ModelParams, terms_to: u32) -> Result<f64> {
    model.require_subcritical()?;
    let x = model.x();
    let mut sum = 0.0;
    for k in model.kind.min_cycle_len()..=terms_to {
        sum += x.powi(k as i32) / (2.0 * k as f64);
    }
    Ok(sum)
}

/// Limiting probability that the sample has no cycle: e^{-f}.
pub fn acyclic_probability(model: &ModelParams) -> Result<f64> {
    Ok((-f_value(model)?).exp())
}

/// The density c0 at which the acyclic probability crosses 1/2, found by
/// bisection on (0, criticality). The residual |e^{-f(c0)} - 1/2| is below
/// 1e-12.
pub fn solve_c0(kind: ModelKind) -> f64 {
    let crit = kind.criticality();
    let at = |c: f64| {
        let m = ModelParams { kind, c };
        acyclic_probability(&m).expect("bisection stays subcritical") - 0.5
    };
    let mut lo = crit * 1e-9;
    let mut hi = crit * (1.0 - 1e-12);
    debug_assert!(at(lo) > 0.0 && at(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Poisson parameter for the count of k-cycles: x^k / (2k).
pub fn cycle_lambda(model: &ModelParams, k: u32) -> Result<f64> {
    let min = model.kind.min_cycle_len();
    if k < min {
        return Err(Error::Domain(format!(
            "cycle length {k} below the minimum {min}"
        )));
    }
    let x = model.x();
    Ok(x.powi(k as i32) / (2.0 * k as f64))
}

/// Poisson parameter for components isomorphic to a fixed connected shape:
/// (c e^{-x})^{|H|} / aut(H).
pub fn component_lambda(model: &ModelParams, size: u32, aut: &BigUint) -> f64 {
    let w = model.shape_weight_base();
    w.powi(size as i32) / aut_f64(aut)
}

/// Limiting probability that the fragment is isomorphic to a fixed shape:
/// e^{-f} (c e^{-x})^{|H|} / aut(H). The empty shape gives e^{-f}.
pub fn shape_probability(model: &ModelParams, size: u32, aut: &BigUint) -> Result<f64> {
    Ok(acyclic_probability(model)? * component_lambda(model, size, aut))
}

pub fn aut_f64(aut: &BigUint) -> f64 {
    aut.to_f64().unwrap_or(f64::INFINITY)
}

/// P(Po(lambda) <= a) by direct stable summation. Terms far below the mode
/// contribute less than 1e-18 and are windowed out for large lambda.
pub fn poisson_cdf(lambda: f64, a: u64) -> f64 {
    assert!(lambda >= 0.0 && lambda.is_finite());
    if lambda == 0.0 {
        return 1.0;
    }
    let lo = if lambda > 400.0 {
        let cut = lambda - 14.0 * lambda.sqrt() - 20.0;
        cut.max(0.0).floor() as u64
    } else {
        0
    };
    if a < lo {
        // Entire requested range is below the window: negligible mass.
        return 0.0;
    }
    // log pmf at lo, then multiplicative recurrence.
    let ln_pmf_lo = -lambda + (lo as f64) * lambda.ln() - stats::ln_gamma(lo as f64 + 1.0);
    let mut term = ln_pmf_lo.exp();
    let mut sum = term;
    for j in lo + 1..=a {
        term *= lambda / j as f64;
        sum += term;
        if j as f64 > lambda && term < 1e-18 * sum {
            break;
        }
    }
    sum.min(1.0)
}

/// Mean of the Poisson approximating the number of cycles of length at most
/// k: mu_k = sum_{i=min}^{k} x^i/(2i).
pub fn cumulative_cycle_mean(model: &ModelParams, k: u32) -> f64 {
    let x = model.x();
    (model.kind.min_cycle_len()..=k)
        .map(|i| x.powi(i as i32) / (2.0 * i as f64))
        .sum()
}

/// Outcome of the short-cycle counting approximation scheme.
#[derive(Debug, Clone, Copy)]
pub struct Approximation {
    /// Count cycles of length at most k ...
    pub k: u32,
    /// ... and ask for at most a of them.
    pub a: u64,
    /// The Poisson mean mu_k at the chosen k.
    pub mu: f64,
    /// Achieved limiting probability P(Po(mu_k) <= a).
    pub achieved: f64,
    /// |achieved - target|.
    pub error: f64,
    /// False when the growth cap was hit before reaching the CLT regime.
    pub certified: bool,
}

/// Maximum k explored by `fo_approximation`.
pub const APPROX_MAX_K: u32 = 400;
/// Maximum Poisson mean explored by `fo_approximation`.
pub const APPROX_MAX_MU: f64 = 5e6;

/// Find (k, a) such that the limiting probability of "at most a cycles of
/// length at most k" is within eps of the target. Requires the model at or
/// above criticality so that mu_k grows without bound.
///
/// Strategy: scan small k for an exact-enough hit first; otherwise grow k
/// until mu_k exceeds the normal-approximation threshold for eps, place
/// a near mu + z_p sqrt(mu) and refine by local scan. At criticality mu_k
/// grows only logarithmically; if the cap is reached the best effort is
/// returned with `certified: false`.
pub fn fo_approximation(model: &ModelParams, target: f64, eps: f64) -> Result<Approximation> {
    if target.is_nan() || target <= 0.0 || target >= 1.0 {
        return Err(Error::Domain(format!("target must lie in (0,1), got {target}")));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if model.x() < 1.0 {
        return Err(Error::Domain(format!(
            "approximation scheme needs c at or above criticality (x = {:.6})",
            model.x()
        )));
    }
    let min_len = model.kind.min_cycle_len();
    let best_at = |mu: f64, center: u64, radius: u64| -> (u64, f64) {
        let lo = center.saturating_sub(radius);
        let mut best = (lo, f64::INFINITY);
        for a in lo..=center + radius {
            let p = poisson_cdf(mu, a);
            let err = (p - target).abs();
            if err < best.1 {
                best = (a, err);
            }
        }
        best
    };
    // Small-k scan catches targets expressible at tiny means.
    for k in min_len..=min_len + 12 {
        let mu = cumulative_cycle_mean(model, k);
        let center = mu.ceil() as u64;
        let (a, err) = best_at(mu, center, center + 10);
        if err < eps {
            let achieved = poisson_cdf(mu, a);
            return Ok(Approximation {
                k,
                a,
                mu,
                achieved,
                error: err,
                certified: true,
            });
        }
    }
    // Berry-Esseen style threshold: normal approximation error ~ 0.8/sqrt(mu).
    let z = stats::normal_quantile(target);
    let mu0 = (1.6 / eps) * (1.6 / eps);
    let mut k = min_len;
    let mut mu = cumulative_cycle_mean(model, k);
    let mut capped = false;
    while mu < mu0 {
        if k >= APPROX_MAX_K || mu > APPROX_MAX_MU {
            capped = true;
            break;
        }
        k += 1;
        mu = cumulative_cycle_mean(model, k);
    }
    let center = (mu + z * mu.sqrt()).round().max(0.0) as u64;
    let (a, err) = best_at(mu, center, (4.0 * mu.sqrt()).ceil() as u64 + 4);
    let achieved = poisson_cdf(mu, a);
    Ok(Approximation {
        k,
        a,
        mu,
        achieved,
        error: err,
        certified: !capped && err < eps,
    })
}
