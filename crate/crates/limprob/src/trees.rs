//! Enumeration of unlabeled rooted trees with canonical codes and exact
//! automorphism counts. These are the building blocks attached to cycle
//! vertices when unicyclic shapes are assembled.
//!
//! The canonical code is the classic sorted-bracket encoding: a single vertex
//! is `()` and an internal vertex wraps the ascending concatenation of its
//! child codes. Two rooted trees are isomorphic iff their codes are equal.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Default cap on tree sizes (vertices); requests above it are budget errors.
pub const DEFAULT_TREE_BUDGET: u32 = 16;

/// One isomorphism class of rooted trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    /// Canonical sorted-bracket code.
    pub code: String,
    /// Vertex count, >= 1.
    pub size: u32,
    /// Exact number of root-fixing automorphisms.
    pub aut: BigUint,
}

/// All rooted tree classes up to a size, in enumeration order
/// (size ascending, then code ascending).
#[derive(Debug, Clone)]
pub struct TreeTable {
    trees: Vec<RootedTree>,
    /// `ranges[s]` indexes the trees of size s (1-based; `ranges[0]` empty).
    ranges: Vec<std::ops::Range<usize>>,
    /// Rank of each tree under pure code order, for necklace comparisons.
    code_rank: Vec<u32>,
}

impl TreeTable {
    /// Enumerate every rooted tree class with `max_size` vertices or fewer.
    pub fn enumerate(max_size: u32, cap: u32) -> Result<TreeTable> {
        if max_size < 1 {
            return Err(Error::Domain(format!(
                "tree enumeration needs max_size >= 1, got {max_size}"
            )));
        }
        if max_size > cap {
            return Err(Error::Budget {
                requested: max_size,
                cap,
            });
        }
        let mut trees = vec![RootedTree {
            code: "()".to_string(),
            size: 1,
            aut: BigUint::one(),
        }];
        let mut ranges = vec![0..0, 0..1];
        for n in 2..=max_size {
            let start = trees.len();
            let mut fresh: Vec<RootedTree> = Vec::new();
            // Children form a multiset of smaller trees with sizes summing
            // to n - 1; indices are chosen non-increasing to visit each
            // multiset once.
            let mut stack: Vec<usize> = Vec::new();
            build_multisets(&trees, start, n - 1, &mut stack, &mut fresh);
            fresh.sort_by(|a, b| a.code.cmp(&b.code));
            trees.extend(fresh);
            ranges.push(start..trees.len());
        }
        let mut order: Vec<usize> = (0..trees.len()).collect();
        order.sort_by(|&a, &b| trees[a].code.cmp(&trees[b].code));
        let mut code_rank = vec![0u32; trees.len()];
        for (rank, idx) in order.into_iter().enumerate() {
            code_rank[idx] = rank as u32;
        }
        Ok(TreeTable {
            trees,
            ranges,
            code_rank,
        })
    }

    pub fn all(&self) -> &[RootedTree] {
        &self.trees
    }

    pub fn of_size(&self, size: u32) -> &[RootedTree] {
        match self.ranges.get(size as usize) {
            Some(r) => &self.trees[r.clone()],
            None => &[],
        }
    }

    /// Global indices of the trees with exactly `size` vertices.
    pub fn range_of_size(&self, size: u32) -> std::ops::Range<usize> {
        self.ranges.get(size as usize).cloned().unwrap_or(0..0)
    }

    pub fn max_size(&self) -> u32 {
        self.ranges.len() as u32 - 1
    }

    /// Index of the single-vertex tree.
    pub fn trivial_id(&self) -> usize {
        0
    }

    pub fn tree(&self, id: usize) -> &RootedTree {
        &self.trees[id]
    }

    /// Rank under pure code order; equal ranks iff equal codes.
    pub fn rank(&self, id: usize) -> u32 {
        self.code_rank[id]
    }

    /// Counts per size, `counts()[s]` for size s.
    pub fn counts(&self) -> Vec<usize> {
        self.ranges.iter().map(|r| r.len()).collect()
    }
}

/// Extend the current non-increasing child index stack until the remaining
/// size budget is exhausted, then emit the finished tree.
fn build_multisets(
    trees: &[RootedTree],
    limit: usize,
    remaining: u32,
    stack: &mut Vec<usize>,
    out: &mut Vec<RootedTree>,
) {
    if remaining == 0 {
        out.push(assemble(trees, stack));
        return;
    }
    let hi = stack.last().map_or(limit, |&i| i + 1);
    for idx in (0..hi.min(limit)).rev() {
        if trees[idx].size <= remaining {
            stack.push(idx);
            build_multisets(trees, limit, remaining - trees[idx].size, stack, out);
            stack.pop();
        }
    }
}

fn assemble(trees: &[RootedTree], children: &[usize]) -> RootedTree {
    let mut codes: Vec<&str> = children.iter().map(|&i| trees[i].code.as_str()).collect();
    codes.sort();
    let mut code = String::with_capacity(2 + codes.iter().map(|c| c.len()).sum::<usize>());
    code.push('(');
    for c in &codes {
        code.push_str(c);
    }
    code.push(')');
    let size = 1 + children.iter().map(|&i| trees[i].size).sum::<u32>();
    RootedTree {
        code,
        size,
        aut: multiset_aut(children.iter().map(|&i| (&trees[i].code, &trees[i].aut))),
    }
}

/// Automorphism count of a multiset of rooted subtrees: the product of the
/// subtree counts' factorials over identical codes, times each subtree's own
/// automorphisms.
pub fn multiset_aut<'a, I>(items: I) -> BigUint
where
    I: IntoIterator<Item = (&'a String, &'a BigUint)>,
{
    let mut sorted: Vec<(&String, &BigUint)> = items.into_iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(b.0));
    let mut aut = BigUint::one();
    let mut run = 0u64;
    let mut prev: Option<&String> = None;
    for (code, sub_aut) in sorted {
        aut *= sub_aut;
        if prev == Some(code) {
            run += 1;
        } else {
            run = 1;
            prev = Some(code);
        }
        aut *= BigUint::from(run);
    }
    aut
}

/// Canonical code and automorphism count of a rooted tree given as an
/// adjacency structure; used when classifying sampled components.
pub fn code_of_labeled(adj: &[Vec<usize>], root: usize, banned: &[bool]) -> (String, u32, BigUint) {
    fn rec(
        adj: &[Vec<usize>],
        v: usize,
        parent: Option<usize>,
        banned: &[bool],
    ) -> (String, u32, BigUint) {
        let mut children: Vec<(String, u32, BigUint)> = adj[v]
            .iter()
            .filter(|&&u| Some(u) != parent && !banned[u])
            .map(|&u| rec(adj, u, Some(v), banned))
            .collect();
        children.sort_by(|a, b| a.0.cmp(&b.0));
        let mut code = String::from("(");
        let mut size = 1;
        for (c, s, _) in &children {
            code.push_str(c);
            size += s;
        }
        code.push(')');
        let aut = multiset_aut(children.iter().map(|(c, _, a)| (c, a)));
        (code, size, aut)
    }
    rec(adj, root, None, banned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn single_vertex_identity() {
        let t = TreeTable::enumerate(1, DEFAULT_TREE_BUDGET).unwrap();
        assert_eq!(t.of_size(1).len(), 1);
        assert_eq!(t.of_size(1)[0].code, "()");
        assert_eq!(t.of_size(1)[0].aut, BigUint::one());
    }

    #[test]
    fn counts_up_to_size_four() {
        let t = TreeTable::enumerate(4, DEFAULT_TREE_BUDGET).unwrap();
        assert_eq!(&t.counts()[1..], &[1, 1, 2, 4]);
    }

    #[test]
    fn counts_match_known_sequence() {
        // Rooted tree class counts for sizes 1..10.
        let t = TreeTable::enumerate(10, DEFAULT_TREE_BUDGET).unwrap();
        assert_eq!(&t.counts()[1..], &[1, 1, 2, 4, 9, 20, 48, 115, 286, 719]);
    }

    #[test]
    fn budget_is_enforced() {
        match TreeTable::enumerate(17, 16) {
            Err(Error::Budget { requested, cap }) => {
                assert_eq!((requested, cap), (17, 16));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn star_and_path_automorphisms() {
        let t = TreeTable::enumerate(5, DEFAULT_TREE_BUDGET).unwrap();
        // Size-5 star: four identical leaf children -> 4! automorphisms.
        // Size-5 path rooted at an end: a chain -> exactly 1.
        let auts: Vec<u64> = t
            .of_size(5)
            .iter()
            .map(|x| x.aut.to_u64().unwrap())
            .collect();
        assert!(auts.contains(&24));
        assert!(auts.contains(&1));
    }

    #[test]
    fn codes_are_unique_and_sized() {
        let t = TreeTable::enumerate(8, DEFAULT_TREE_BUDGET).unwrap();
        let mut seen = std::collections::HashSet::new();
        for tree in t.all() {
            assert_eq!(tree.code.len() as u32, 2 * tree.size);
            assert!(seen.insert(tree.code.clone()), "duplicate {}", tree.code);
        }
    }
}
