//! Fragment shapes: multisets of connected unicyclic components. The same
//! structure serves graphs and hypergraphs, since components are identified
//! by their canonical codes.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::unicycle::factorial;

/// Code used for the empty fragment (the acyclic case).
pub const EMPTY_CODE: &str = "empty";

/// A connected shape as seen by fragment composition.
#[derive(Debug, Clone)]
pub struct ComponentClass {
    pub code: String,
    pub size: u32,
    pub aut: BigUint,
}

/// A multiset of connected unicyclic components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentShape {
    /// (component code, multiplicity), sorted by code.
    pub components: Vec<(String, u32)>,
    /// Total edge count.
    pub size: u32,
    /// Exact automorphism count: product over distinct components U of
    /// aut(U)^a * a! with a the multiplicity.
    pub aut: BigUint,
    /// Canonical fragment code.
    pub code: String,
}

impl FragmentShape {
    pub fn empty() -> FragmentShape {
        FragmentShape {
            components: Vec::new(),
            size: 0,
            aut: BigUint::one(),
            code: EMPTY_CODE.to_string(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Assemble from unsorted component references.
    pub fn from_components(parts: &[&ComponentClass]) -> FragmentShape {
        if parts.is_empty() {
            return FragmentShape::empty();
        }
        let mut sorted: Vec<&ComponentClass> = parts.to_vec();
        sorted.sort_by(|a, b| a.code.cmp(&b.code));
        let mut components: Vec<(String, u32)> = Vec::new();
        let mut aut = BigUint::one();
        let mut size = 0u32;
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j < sorted.len() && sorted[j].code == sorted[i].code {
                j += 1;
            }
            let mult = (j - i) as u32;
            aut *= sorted[i].aut.pow(mult) * factorial(mult);
            size += sorted[i].size * mult;
            components.push((sorted[i].code.clone(), mult));
            i = j;
        }
        let code = components
            .iter()
            .map(|(c, m)| {
                if *m == 1 {
                    c.clone()
                } else {
                    format!("{c}*{m}")
                }
            })
            .collect::<Vec<_>>()
            .join("+");
        FragmentShape {
            components,
            size,
            aut,
            code,
        }
    }
}

/// Every fragment shape with total size <= max_size buildable from the given
/// connected classes, including the empty shape. Output is ordered by size,
/// then code.
pub fn enumerate_fragments(
    classes: &[ComponentClass],
    max_size: u32,
) -> Result<Vec<FragmentShape>> {
    let mut out = Vec::new();
    let mut chosen: Vec<&ComponentClass> = Vec::new();
    compose(classes, 0, max_size, &mut chosen, &mut out);
    out.sort_by(|a, b| a.size.cmp(&b.size).then_with(|| a.code.cmp(&b.code)));
    Ok(out)
}

fn compose<'a>(
    classes: &'a [ComponentClass],
    from: usize,
    budget: u32,
    chosen: &mut Vec<&'a ComponentClass>,
    out: &mut Vec<FragmentShape>,
) {
    out.push(FragmentShape::from_components(chosen));
    for idx in from..classes.len() {
        if classes[idx].size <= budget {
            chosen.push(&classes[idx]);
            compose(classes, idx, budget - classes[idx].size, chosen, out);
            chosen.pop();
        }
    }
}

/// Per-size total of s^|H| weights over all fragments, as exact rationals in
/// the formal variable coefficient sense: coefficient b_k of the exponential
/// of the connected series. Satisfies sum_H x^{|H|}/aut(H) = sum_k b_k x^k.
///
/// `connected[k]` must hold sum over connected shapes of size k of 1/aut
/// (zero where no shapes exist). Standard exp-of-series recurrence.
pub fn fragment_mass_series(connected: &[BigRational], max_k: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); max_k + 1];
    b[0] = BigRational::one();
    for k in 1..=max_k {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            let lj = connected.get(j).cloned().unwrap_or_else(BigRational::zero);
            if !lj.is_zero() {
                acc += BigRational::from_integer(j.into()) * lj * b[k - j].clone();
            }
        }
        b[k] = acc / BigRational::from_integer((k as i64).into());
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unicycle::{enumerate_unicycles_up_to, inverse_aut_sum, DEFAULT_GRAPH_BUDGET};
    use num_traits::ToPrimitive;

    fn graph_classes(max_size: u32) -> Vec<ComponentClass> {
        enumerate_unicycles_up_to(max_size, DEFAULT_GRAPH_BUDGET)
            .unwrap()
            .into_iter()
            .map(|s| ComponentClass {
                code: s.code,
                size: s.size,
                aut: s.aut,
            })
            .collect()
    }

    #[test]
    fn empty_budget_gives_only_empty_shape() {
        let fr = enumerate_fragments(&graph_classes(0), 0).unwrap();
        assert_eq!(fr.len(), 1);
        assert!(fr[0].is_empty());
        assert_eq!(fr[0].aut, BigUint::one());
        assert_eq!(fr[0].size, 0);
    }

    #[test]
    fn graph_fragments_up_to_six() {
        // empty + sizes 3..6 single components (1+2+5+13) + the two-triangle
        // shape.
        let fr = enumerate_fragments(&graph_classes(6), 6).unwrap();
        assert_eq!(fr.len(), 23);
        let two_triangles = fr
            .iter()
            .find(|f| f.components.len() == 1 && f.components[0].1 == 2)
            .expect("two-triangle shape");
        assert_eq!(two_triangles.size, 6);
        assert_eq!(two_triangles.aut.to_u64().unwrap(), 72);
    }

    #[test]
    fn mass_series_matches_enumeration_exactly() {
        // Exact rational identity: per-size fragment 1/aut totals from the
        // enumeration equal the exp-of-series coefficients.
        let max = 9u32;
        let fr = enumerate_fragments(&graph_classes(max), max).unwrap();
        let mut per_size = vec![BigRational::zero(); max as usize + 1];
        for f in &fr {
            per_size[f.size as usize] += BigRational::new(1.into(), f.aut.clone().into());
        }
        let mut connected = vec![BigRational::zero(); max as usize + 1];
        for k in 3..=max {
            connected[k as usize] = inverse_aut_sum(k, DEFAULT_GRAPH_BUDGET).unwrap();
        }
        let series = fragment_mass_series(&connected, max as usize);
        for k in 0..=max as usize {
            assert_eq!(per_size[k], series[k], "size {k}");
        }
    }
}
