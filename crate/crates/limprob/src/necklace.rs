//! Dihedral canonicalization of decorated cycles.
//!
//! A cycle of length l is stored as an alternating sequence of vertex
//! decorations v_0..v_{l-1} and edge decorations e_0..e_{l-1}, where e_i sits
//! between v_i and v_{i+1}. The dihedral group of order 2l acts by rotation
//! and reflection; reflections reverse vertex order and shift the edge track
//! by one, matching how a geometric mirror maps the incidence structure.
//!
//! Graph unicycles use unit edge decorations; hypergraph unicycles carry the
//! multiset of free-slot attachments on each edge. Both models share this
//! code path.

/// Canonical form of the decorated cycle plus the order of its stabilizer
/// inside the dihedral group.
pub fn dihedral_canonical<V, E>(vs: &[V], es: &[E]) -> (Vec<(V, E)>, u64)
where
    V: Ord + Clone,
    E: Ord + Clone,
{
    let l = vs.len();
    assert_eq!(l, es.len());
    assert!(l >= 1);
    let build = |vf: &dyn Fn(usize) -> usize, ef: &dyn Fn(usize) -> usize| -> Vec<(V, E)> {
        (0..l)
            .map(|i| (vs[vf(i)].clone(), es[ef(i)].clone()))
            .collect()
    };
    let mut best: Option<Vec<(V, E)>> = None;
    let mut stab = 0u64;
    for r in 0..l {
        for refl in [false, true] {
            let cand = if refl {
                // v_i <- v_{r-i}, e_i <- e_{r-i-1}
                build(&|i| (r + l - i) % l, &|i| (r + 2 * l - i - 1) % l)
            } else {
                build(&|i| (i + r) % l, &|i| (i + r) % l)
            };
            match &best {
                None => {
                    best = Some(cand);
                    stab = 1;
                }
                Some(b) => match cand.cmp(b) {
                    std::cmp::Ordering::Less => {
                        best = Some(cand);
                        stab = 1;
                    }
                    std::cmp::Ordering::Equal => stab += 1,
                    std::cmp::Ordering::Greater => {}
                },
            }
        }
    }
    (best.unwrap(), stab)
}

/// True when the sequence is already its own canonical form. Cheaper check
/// used to filter generated attachment tuples.
pub fn is_canonical<V, E>(vs: &[V], es: &[E]) -> bool
where
    V: Ord + Clone,
    E: Ord + Clone,
{
    let (canon, _) = dihedral_canonical(vs, es);
    canon
        .iter()
        .zip(vs.iter().zip(es.iter()))
        .all(|((cv, ce), (v, e))| cv == v && ce == e)
}
