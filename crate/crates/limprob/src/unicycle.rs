//! Connected unicyclic graph shapes: enumeration by size with exact
//! automorphism counts, classification of labeled components to canonical
//! shapes, and the exact-rational inverse-automorphism sums behind the tail
//! certification bounds.
//!
//! A unicyclic graph is a cycle of length at least 3 with rooted trees hanging
//! from its vertices. Size is the edge count, which equals the vertex count.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::necklace;
use crate::trees::{self, RootedTree, TreeTable};

/// Default cap on unicycle sizes; requests above it are budget errors.
pub const DEFAULT_GRAPH_BUDGET: u32 = 16;

/// One isomorphism class of connected unicyclic graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicycleShape {
    /// Length of the unique cycle, >= 3.
    pub cycle_len: u32,
    /// Attachment tree codes in canonical necklace order, one per cycle vertex.
    pub attachments: Vec<String>,
    /// Canonical code, invariant under rotation and reflection.
    pub code: String,
    /// Edge count (= vertex count).
    pub size: u32,
    /// Exact automorphism count.
    pub aut: BigUint,
}

impl UnicycleShape {
    fn from_parts(cycle_len: u32, attachments: Vec<(String, BigUint)>, stab: u64) -> UnicycleShape {
        let size = cycle_len
            + attachments
                .iter()
                .map(|(c, _)| (c.len() as u32 / 2) - 1)
                .sum::<u32>();
        let mut aut = BigUint::from(stab);
        for (_, a) in &attachments {
            aut *= a;
        }
        let codes: Vec<String> = attachments.into_iter().map(|(c, _)| c).collect();
        let code = format!("U{}({})", cycle_len, codes.join(","));
        UnicycleShape {
            cycle_len,
            attachments: codes,
            code,
            size,
            aut,
        }
    }
}

/// Every unicyclic shape with exactly `size` edges, ordered by canonical code.
pub fn enumerate_unicycles(size: u32, cap: u32) -> Result<Vec<UnicycleShape>> {
    if size < 3 {
        return Err(Error::Domain(format!(
            "unicyclic graphs need size >= 3, got {size}"
        )));
    }
    if size > cap {
        return Err(Error::Budget {
            requested: size,
            cap,
        });
    }
    let max_tree = size - 2;
    let table = TreeTable::enumerate(max_tree.max(1), max_tree.max(1))?;
    let mut shapes = Vec::new();
    for cycle_len in 3..=size {
        let extra = size - cycle_len;
        let mut slots: Vec<usize> = Vec::with_capacity(cycle_len as usize);
        fill_slots(&table, cycle_len, extra, &mut slots, &mut shapes);
    }
    shapes.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(shapes)
}

/// All unicyclic shapes of sizes 3..=max_size, enumeration order
/// (size ascending, then code).
pub fn enumerate_unicycles_up_to(max_size: u32, cap: u32) -> Result<Vec<UnicycleShape>> {
    let mut out = Vec::new();
    for size in 3..=max_size {
        out.extend(enumerate_unicycles(size, cap)?);
    }
    Ok(out)
}

fn fill_slots(
    table: &TreeTable,
    cycle_len: u32,
    remaining: u32,
    slots: &mut Vec<usize>,
    out: &mut Vec<UnicycleShape>,
) {
    let pos = slots.len() as u32;
    if pos == cycle_len {
        if remaining != 0 {
            return;
        }
        let ranks: Vec<u32> = slots.iter().map(|&id| table.rank(id)).collect();
        let unit = vec![(); ranks.len()];
        if !necklace::is_canonical(&ranks, &unit) {
            return;
        }
        let (_, stab) = necklace::dihedral_canonical(&ranks, &unit);
        let attachments: Vec<(String, BigUint)> = slots
            .iter()
            .map(|&id| {
                let t: &RootedTree = table.tree(id);
                (t.code.clone(), t.aut.clone())
            })
            .collect();
        out.push(UnicycleShape::from_parts(cycle_len, attachments, stab));
        return;
    }
    // The canonical necklace starts at a minimal rank, so later slots may not
    // go below slot 0.
    let floor_rank = slots.first().map(|&id| table.rank(id));
    let last_slot = pos + 1 == cycle_len;
    for sz in 1..=remaining + 1 {
        if last_slot && sz != remaining + 1 {
            continue;
        }
        for id in table.range_of_size(sz) {
            if let Some(f) = floor_rank {
                if table.rank(id) < f {
                    continue;
                }
            }
            slots.push(id);
            fill_slots(table, cycle_len, remaining - (sz - 1), slots, out);
            slots.pop();
        }
    }
}

/// Classify a labeled connected graph with edge count equal to vertex count
/// into its canonical unicyclic shape. Vertices are 0-based labels.
pub fn canonical_unicycle(n: usize, edges: &[(u32, u32)]) -> Result<UnicycleShape> {
    if edges.len() != n {
        return Err(Error::Classification(format!(
            "excess != 0: {} vertices, {} edges",
            n,
            edges.len()
        )));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        let (a, b) = (a as usize, b as usize);
        if a >= n || b >= n || a == b {
            return Err(Error::Classification(format!("bad edge ({a},{b})")));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    // Connectivity.
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                reached += 1;
                stack.push(u);
            }
        }
    }
    if reached != n {
        return Err(Error::Classification("input not connected".into()));
    }
    // Peel degree-1 vertices; what survives is the unique cycle.
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = queue.pop() {
        removed[v] = true;
        for &u in &adj[v] {
            if !removed[u] {
                deg[u] -= 1;
                if deg[u] == 1 {
                    queue.push(u);
                }
            }
        }
    }
    let cycle_vertices: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    let l = cycle_vertices.len();
    if l < 3 {
        return Err(Error::Classification("no cycle of length >= 3 found".into()));
    }
    // Each surviving vertex must have exactly two surviving neighbors.
    let cycle_next = |v: usize, prev: usize| -> Result<usize> {
        let nbrs: Vec<usize> = adj[v]
            .iter()
            .copied()
            .filter(|&u| !removed[u] && u != prev)
            .collect();
        match (nbrs.len(), prev) {
            (1, _) => Ok(nbrs[0]),
            (2, usize::MAX) => Ok(nbrs[0].min(nbrs[1])),
            _ => Err(Error::Classification("cycle walk failed".into())),
        }
    };
    let start = cycle_vertices[0];
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = cycle_next(cur, prev)?;
        if next == start {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    if order.len() != l {
        return Err(Error::Classification(
            "leftover vertices outside the walked cycle".into(),
        ));
    }
    // Attachment tree at each cycle vertex: the component hanging off it once
    // cycle vertices are barred, rooted at the cycle vertex itself.
    let mut banned = vec![false; n];
    for &v in &order {
        banned[v] = true;
    }
    let attach: Vec<(String, u32, BigUint)> = order
        .iter()
        .map(|&v| {
            banned[v] = false;
            let r = trees::code_of_labeled(&adj, v, &banned);
            banned[v] = true;
            r
        })
        .collect();
    let codes: Vec<&String> = attach.iter().map(|(c, _, _)| c).collect();
    let unit = vec![(); l];
    let (canon, stab) = necklace::dihedral_canonical(&codes, &unit);
    let canon_codes: Vec<String> = canon.iter().map(|(c, _)| (*c).clone()).collect();
    // Total size check: attachments cover every vertex exactly once.
    let covered: u32 = attach.iter().map(|(_, s, _)| s).sum();
    if covered as usize != n {
        return Err(Error::Classification("attachment cover mismatch".into()));
    }
    let mut by_code: std::collections::HashMap<&String, &BigUint> = std::collections::HashMap::new();
    for (c, _, a) in &attach {
        by_code.insert(c, a);
    }
    let attachments: Vec<(String, BigUint)> = canon_codes
        .into_iter()
        .map(|c| {
            let a = (*by_code[&c]).clone();
            (c, a)
        })
        .collect();
    Ok(UnicycleShape::from_parts(l as u32, attachments, stab))
}

/// Exact rational sum of 1/aut(H) over all connected unicyclic shapes with
/// `size` edges, from the enumeration.
pub fn inverse_aut_sum(size: u32, cap: u32) -> Result<BigRational> {
    let shapes = enumerate_unicycles(size, cap)?;
    Ok(shapes
        .iter()
        .map(|s| BigRational::new(1.into(), s.aut.clone().into()))
        .fold(BigRational::zero(), |acc, x| acc + x))
}

/// Number of labeled connected unicyclic graphs on k vertices, via the
/// closed-form sum over cycle lengths (Cayley's forest count).
pub fn labeled_unicyclic_count(k: u32) -> BigUint {
    assert!(k >= 3);
    let k_big = BigUint::from(k);
    let mut total = BigUint::zero();
    for j in 3..k {
        // choose(k, j) * (j-1)!/2 * j * k^(k-j-1)
        let mut term = binomial(k, j) * half_cycle_arrangements(j) * BigUint::from(j);
        term *= k_big.pow(k - j - 1);
        total += term;
    }
    // j = k: the bare cycle contributes (k-1)!/2.
    total += half_cycle_arrangements(k);
    total
}

/// Sum of 1/aut over connected unicyclic shapes of a size, from the labeled
/// count: equals labeled_unicyclic_count(k) / k!. Valid for any k, no budget.
pub fn inverse_aut_sum_closed(k: u32) -> BigRational {
    BigRational::new(
        labeled_unicyclic_count(k).into(),
        factorial(k).into(),
    )
}

fn binomial(n: u32, k: u32) -> BigUint {
    let mut r = BigUint::one();
    for i in 0..k {
        r *= BigUint::from(n - i);
        r /= BigUint::from(i + 1);
    }
    r
}

/// (j-1)!/2: distinct cyclic arrangements of j labeled vertices up to the
/// dihedral action, j >= 3.
fn half_cycle_arrangements(j: u32) -> BigUint {
    factorial(j - 1) / BigUint::from(2u32)
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

/// Labeled cycle of length x with a pendant path of length y at vertex 0.
pub fn build_tadpole(x: u32, y: u32) -> (usize, Vec<(u32, u32)>) {
    assert!(x >= 3);
    let mut edges: Vec<(u32, u32)> = (0..x).map(|i| (i, (i + 1) % x)).collect();
    let mut next = x;
    let mut at = 0u32;
    for _ in 0..y {
        edges.push((at, next));
        at = next;
        next += 1;
    }
    (next as usize, edges)
}

/// Labeled triangle with pendant paths of lengths (a, b, c) at its vertices.
pub fn build_triangle_paths(a: u32, b: u32, c: u32) -> (usize, Vec<(u32, u32)>) {
    let mut edges = vec![(0u32, 1u32), (1, 2), (2, 0)];
    let mut next = 3u32;
    for (root, len) in [(0u32, a), (1, b), (2, c)] {
        let mut at = root;
        for _ in 0..len {
            edges.push((at, next));
            at = next;
            next += 1;
        }
    }
    (next as usize, edges)
}

/// Exact family identities at size k for graphs, verified by classifying
/// labeled family members.
#[derive(Debug, Clone)]
pub struct GraphFamilyReport {
    pub k: u32,
    /// Cycle-with-path family: sum of 1/aut over C_{x, k-x}, x = 3..k-1.
    pub c_sum: BigRational,
    pub c_expected: BigRational,
    /// Triangle-with-two-paths family T_{0,i,k-3-i}, i = 1..floor((k-3)/2).
    pub t_sum: BigRational,
    pub t_expected: BigRational,
    /// Full inverse-aut sum over the size with its lower bound (2k-7)/2.
    pub inverse_aut: BigRational,
    pub inverse_aut_lower: BigRational,
}

impl GraphFamilyReport {
    pub fn all_match(&self) -> bool {
        self.c_sum == self.c_expected
            && self.t_sum == self.t_expected
            && self.inverse_aut >= self.inverse_aut_lower
    }
}

pub fn verify_graph_families(k: u32, cap: u32) -> Result<GraphFamilyReport> {
    if k < 4 {
        return Err(Error::Domain(format!("family sums need k >= 4, got {k}")));
    }
    let ratio = |num: i64, den: i64| BigRational::new(num.into(), den.into());
    let mut c_sum = BigRational::zero();
    for x in 3..k {
        let (n, edges) = build_tadpole(x, k - x);
        let shape = canonical_unicycle(n, &edges)?;
        c_sum += BigRational::new(1.into(), shape.aut.into());
    }
    let mut t_sum = BigRational::zero();
    for i in 1..=(k - 3) / 2 {
        let (n, edges) = build_triangle_paths(0, i, k - 3 - i);
        let shape = canonical_unicycle(n, &edges)?;
        t_sum += BigRational::new(1.into(), shape.aut.into());
    }
    Ok(GraphFamilyReport {
        k,
        c_sum,
        c_expected: ratio(k as i64 - 3, 2),
        t_sum,
        t_expected: ratio(k as i64 - 4, 2),
        inverse_aut: inverse_aut_sum(k, cap)?,
        inverse_aut_lower: ratio(2 * k as i64 - 7, 2),
    })
}
