//! Model parameters for the sparse binomial random graph G(n, c/n) and the
//! d-uniform hypergraph G^d(n, c/n^(d-1)).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Graph,
    Hypergraph { d: u32 },
}

impl ModelKind {
    pub fn uniformity(&self) -> u32 {
        match self {
            ModelKind::Graph => 2,
            ModelKind::Hypergraph { d } => *d,
        }
    }

    /// Shortest cycle length: 3 for graphs, 2 for hypergraphs.
    pub fn min_cycle_len(&self) -> u32 {
        match self {
            ModelKind::Graph => 3,
            ModelKind::Hypergraph { .. } => 2,
        }
    }

    /// Phase transition point in c: 1 for graphs, (d-2)! for hypergraphs.
    pub fn criticality(&self) -> f64 {
        match self {
            ModelKind::Graph => 1.0,
            ModelKind::Hypergraph { d } => factorial_f64(d - 2),
        }
    }
}

pub fn factorial_f64(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Edge-density parameter together with the model selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub kind: ModelKind,
    pub c: f64,
}

impl ModelParams {
    pub fn graph(c: f64) -> Result<ModelParams> {
        ModelParams::new(ModelKind::Graph, c)
    }

    pub fn hypergraph(d: u32, c: f64) -> Result<ModelParams> {
        ModelParams::new(ModelKind::Hypergraph { d }, c)
    }

    pub fn new(kind: ModelKind, c: f64) -> Result<ModelParams> {
        if let ModelKind::Hypergraph { d } = kind {
            if d < 3 {
                return Err(Error::Domain(format!(
                    "hypergraph uniformity must be >= 3, got {d}"
                )));
            }
        }
        if c.is_nan() || !c.is_finite() || c < 0.0 {
            return Err(Error::Domain(format!("c must be finite and >= 0, got {c}")));
        }
        Ok(ModelParams { kind, c })
    }

    /// Expected-degree style ratio: c for graphs, c/(d-2)! for hypergraphs.
    /// The subcritical regime is x < 1.
    pub fn x(&self) -> f64 {
        self.c / self.kind.criticality()
    }

    /// s = x e^{-x}, the per-edge weight in shape probabilities.
    pub fn s(&self) -> f64 {
        let x = self.x();
        x * (-x).exp()
    }

    /// Per-shape weight base w = c e^{-x}; a shape H carries w^{|H|}/aut(H).
    /// Equals s for graphs and s (d-2)! for hypergraphs.
    pub fn shape_weight_base(&self) -> f64 {
        self.c * (-self.x()).exp()
    }

    pub fn is_subcritical(&self) -> bool {
        self.x() < 1.0
    }

    pub fn require_subcritical(&self) -> Result<()> {
        if self.is_subcritical() {
            Ok(())
        } else {
            Err(Error::Supercritical {
                c: self.c,
                x: self.x(),
            })
        }
    }
}

/// Poisson law parameter holder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonSpec {
    pub mean: f64,
}

impl PoissonSpec {
    pub fn new(mean: f64) -> Result<PoissonSpec> {
        if mean.is_nan() || !mean.is_finite() || mean < 0.0 {
            return Err(Error::Domain(format!(
                "Poisson mean must be finite and >= 0, got {mean}"
            )));
        }
        Ok(PoissonSpec { mean })
    }

    /// P(Po(mean) <= a).
    pub fn cdf(&self, a: u64) -> f64 {
        crate::limits::poisson_cdf(self.mean, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_and_weights() {
        let g = ModelParams::graph(0.5).unwrap();
        assert_eq!(g.x(), 0.5);
        assert!((g.s() - 0.5 * (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(g.s(), g.shape_weight_base());

        let h = ModelParams::hypergraph(4, 1.0).unwrap();
        assert_eq!(h.kind.criticality(), 2.0);
        assert_eq!(h.x(), 0.5);
        assert!((h.shape_weight_base() - 2.0 * h.s()).abs() < 1e-15);
        assert_eq!(h.kind.min_cycle_len(), 2);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::hypergraph(2, 0.5).is_err());
        assert!(ModelParams::graph(-0.1).is_err());
        assert!(ModelParams::graph(f64::NAN).is_err());
        let sup = ModelParams::graph(1.2).unwrap();
        assert!(matches!(
            sup.require_subcritical(),
            Err(Error::Supercritical { .. })
        ));
    }
}
