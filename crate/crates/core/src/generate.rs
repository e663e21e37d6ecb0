//! Instance generators: seeded random SP blocks, partial 2-trees and
//! independent-parallel graphs built from explicit series/parallel
//! composition trees, plus the recursive lower-bound family whose drawings
//! force logarithmic spirality.

use crate::graph::{Graph, VertexId};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    Sp,
    Partial2Tree,
    IndependentParallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    OddN(u32),
    TooSmall(usize),
    TooLarge(usize),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::OddN(n) => write!(f, "N must be even, got {n}"),
            GenError::TooSmall(n) => write!(f, "target size {n} too small"),
            GenError::TooLarge(n) => write!(f, "instance would have ~{n} vertices"),
        }
    }
}

impl std::error::Error for GenError {}

/// Series/parallel composition tree over chains; expansion yields a simple
/// degree-4 SP graph by construction.
#[derive(Clone, Debug)]
enum Comp {
    Chain(usize),
    Series(Vec<Comp>),
    Parallel(Vec<Comp>),
}

impl Comp {
    /// Number of edges the component contributes at one of its poles.
    fn head_degree(&self) -> usize {
        match self {
            Comp::Chain(_) => 1,
            Comp::Series(ch) => ch.first().unwrap().head_degree(),
            Comp::Parallel(ch) => ch.iter().map(|c| c.head_degree()).sum(),
        }
    }

    fn tail_degree(&self) -> usize {
        match self {
            Comp::Chain(_) => 1,
            Comp::Series(ch) => ch.last().unwrap().tail_degree(),
            Comp::Parallel(ch) => ch.iter().map(|c| c.tail_degree()).sum(),
        }
    }

    /// True when expansion would create a single edge between the poles.
    fn is_direct_edge(&self) -> bool {
        matches!(self, Comp::Chain(1))
    }

    fn expand(&self, u: VertexId, v: VertexId, next: &mut u32, edges: &mut Vec<(u32, u32)>) {
        match self {
            Comp::Chain(len) => {
                let mut prev = u;
                for i in 0..*len {
                    let to = if i + 1 == *len {
                        v
                    } else {
                        let w = *next;
                        *next += 1;
                        w
                    };
                    edges.push((prev, to));
                    prev = to;
                }
            }
            Comp::Series(ch) => {
                let mut at = u;
                for (i, c) in ch.iter().enumerate() {
                    let to = if i + 1 == ch.len() {
                        v
                    } else {
                        let w = *next;
                        *next += 1;
                        w
                    };
                    c.expand(at, to, next, edges);
                    at = to;
                }
            }
            Comp::Parallel(ch) => {
                for c in ch {
                    c.expand(u, v, next, edges);
                }
            }
        }
    }
}

struct CompGen<'r> {
    rng: &'r mut ChaCha8Rng,
    independent: bool,
}

impl<'r> CompGen<'r> {
    /// A component with roughly `budget` edges whose head/tail degrees stay
    /// within the given bounds. Large budgets always recurse, so expansion
    /// sizes track the target.
    fn component(&mut self, budget: usize, head_cap: usize, tail_cap: usize) -> Comp {
        if budget <= 8 || head_cap < 2 || tail_cap < 2 {
            if budget > 8 {
                return self.series(budget, head_cap, tail_cap);
            }
            return Comp::Chain(budget.max(1));
        }
        if self.rng.gen_bool(0.45) {
            self.parallel(budget, head_cap, tail_cap)
        } else {
            self.series(budget, head_cap, tail_cap)
        }
    }

    fn series(&mut self, budget: usize, head_cap: usize, tail_cap: usize) -> Comp {
        let parts = if budget > 24 { 3 } else { 2 };
        // Random split keeping every share positive.
        let mut shares = vec![budget / parts; parts];
        shares[0] += budget % parts;
        if parts >= 2 && shares[0] > 2 {
            let shift = self.rng.gen_range(0..shares[0] / 2);
            shares[0] -= shift;
            shares[parts - 1] += shift;
        }
        let mut children = Vec::new();
        for (i, &share) in shares.iter().enumerate() {
            let hc = if i == 0 { head_cap } else { 3 };
            let tc = if i + 1 == parts { tail_cap } else { 3 };
            let mut child = self.component(share, hc, tc);
            if self.independent && !matches!(child, Comp::Chain(_)) {
                // Junction vertices and outer poles must not become poles
                // of two parallel structures: pad with chains.
                child = Comp::Series(vec![
                    Comp::Chain(self.rng.gen_range(1..=2)),
                    child,
                    Comp::Chain(self.rng.gen_range(1..=2)),
                ]);
            }
            children.push(child);
        }
        // Junction degrees: tail of child i plus head of child i+1 <= 4.
        for i in 0..children.len() - 1 {
            while children[i].tail_degree() + children[i + 1].head_degree() > 4 {
                children[i + 1] = Comp::Chain(2);
            }
        }
        Comp::Series(flatten_series(children))
    }

    fn parallel(&mut self, budget: usize, head_cap: usize, tail_cap: usize) -> Comp {
        let max_k = head_cap.min(tail_cap).min(3).max(2);
        let k = self.rng.gen_range(2..=max_k);
        let share = (budget / k).max(1);
        let mut children = Vec::new();
        let mut used_direct = false;
        let mut head_budget = head_cap;
        let mut tail_budget = tail_cap;
        for i in 0..k {
            // Occasionally let a child reach the pole with two edges (a
            // series starting with a parallel), exercising the half-weight
            // join coefficients.
            if !self.independent
                && i == 0
                && share >= 8
                && head_budget >= 3
                && tail_budget >= 2
                && self.rng.gen_bool(0.3)
            {
                let inner = self.parallel(share.saturating_sub(2).max(4), 2, 2);
                let child = Comp::Series(vec![inner, Comp::Chain(self.rng.gen_range(1..=2))]);
                head_budget -= child.head_degree();
                tail_budget -= child.tail_degree();
                children.push(child);
                continue;
            }
            let mut child = if share <= 4 {
                Comp::Chain(self.rng.gen_range(1..=share.max(1)))
            } else {
                // Inner structure between fresh junction chains.
                let cap_a = self.rng.gen_range(1..=2);
                let cap_b = self.rng.gen_range(1..=2);
                let inner = self.component(share.saturating_sub(cap_a + cap_b).max(1), 3, 3);
                Comp::Series(flatten_series(vec![
                    Comp::Chain(cap_a),
                    inner,
                    Comp::Chain(cap_b),
                ]))
            };
            if self.independent && child.head_degree() + child.tail_degree() > 2 {
                child = Comp::Chain(self.rng.gen_range(2..=4));
            }
            if child.is_direct_edge() {
                if used_direct {
                    child = Comp::Chain(2);
                } else {
                    used_direct = true;
                }
            }
            head_budget = head_budget.saturating_sub(child.head_degree());
            tail_budget = tail_budget.saturating_sub(child.tail_degree());
            children.push(child);
        }
        // Degree safety: if the budget went negative, demote extras.
        loop {
            let hd: usize = children.iter().map(|c| c.head_degree()).sum();
            let td: usize = children.iter().map(|c| c.tail_degree()).sum();
            if hd <= head_cap && td <= tail_cap {
                break;
            }
            let i = children
                .iter()
                .position(|c| c.head_degree() > 1 || c.tail_degree() > 1)
                .expect("some child must be demotable");
            children[i] = Comp::Chain(2);
        }
        Comp::Parallel(children)
    }
}

fn flatten_series(children: Vec<Comp>) -> Vec<Comp> {
    let mut out = Vec::new();
    for c in children {
        match c {
            Comp::Series(inner) => out.extend(flatten_series(inner)),
            other => out.push(other),
        }
    }
    out
}

/// Seeded random graph of the requested kind with roughly `n` vertices.
pub fn gen_random(kind: RandomKind, n: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 4 {
        return Err(GenError::TooSmall(n));
    }
    if n > 2_000_000 {
        return Err(GenError::TooLarge(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        RandomKind::Sp | RandomKind::IndependentParallel => {
            let independent = kind == RandomKind::IndependentParallel;
            let mut cg = CompGen {
                rng: &mut rng,
                independent,
            };
            // A top-level parallel composition between the outer poles,
            // wrapped so the poles have an outer chain connecting them.
            let body = cg.parallel(n.saturating_sub(2).max(4), 3, 3);
            let closing = Comp::Chain(cg.rng.gen_range(2..=4));
            let graph = expand_cycle(&[body, closing]);
            debug_assert!(matches!(
                crate::graph::validate_partial2tree(&graph),
                crate::graph::GraphClass::SpBlock
            ));
            if independent {
                debug_assert!(crate::spq::is_independent_parallel(
                    &crate::spq::build_spq_star(&graph).unwrap()
                ));
            }
            Ok(graph)
        }
        RandomKind::Partial2Tree => {
            let g = gen_partial2tree(n, &mut rng);
            debug_assert!(matches!(
                crate::graph::validate_partial2tree(&g),
                crate::graph::GraphClass::Partial2Tree
                    | crate::graph::GraphClass::SpBlock
                    | crate::graph::GraphClass::SimpleCycle
            ));
            Ok(g)
        }
    }
}

/// Close a sequence of components into a cycle (last pole joins the first).
fn expand_cycle(parts: &[Comp]) -> Graph {
    let mut next = parts.len() as u32;
    let mut edges = Vec::new();
    for (i, c) in parts.iter().enumerate() {
        let u = i as u32;
        let v = ((i + 1) % parts.len()) as u32;
        c.expand(u, v, &mut next, &mut edges);
    }
    Graph::new(next as usize, &edges).expect("composition must expand to a valid graph")
}

fn gen_partial2tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    // Grow blocks one at a time, gluing each at an existing vertex with
    // enough degree budget.
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut deg: Vec<usize> = Vec::new();
    let mut next = 0u32;
    let fresh = |deg: &mut Vec<usize>, next: &mut u32| {
        let v = *next;
        *next += 1;
        deg.push(0);
        v
    };
    let first = fresh(&mut deg, &mut next);
    let mut anchors = vec![first];
    while (next as usize) < n {
        // Pick an anchor with spare degree.
        let candidates: Vec<u32> = anchors.iter().copied().filter(|&v| deg[v as usize] <= 2).collect();
        if candidates.is_empty() {
            break;
        }
        let a = candidates[rng.gen_range(0..candidates.len())];
        let spare = 4 - deg[a as usize];
        let mut kind = rng.gen_range(0..4);
        if kind == 3 && spare < 3 {
            kind = 1;
        }
        if kind == 0 || spare < 2 {
            // Pendant edge.
            let b = fresh(&mut deg, &mut next);
            edges.push((a, b));
            deg[a as usize] += 1;
            deg[b as usize] += 1;
            anchors.push(b);
        } else if kind <= 2 {
            // Cycle block through the anchor.
            let len = rng.gen_range(4..=7);
            let mut prev = a;
            for i in 0..len - 1 {
                let b = fresh(&mut deg, &mut next);
                edges.push((prev, b));
                deg[prev as usize] += 1;
                deg[b as usize] += 1;
                anchors.push(b);
                if i == len - 2 {
                    edges.push((b, a));
                    deg[b as usize] += 1;
                    deg[a as usize] += 1;
                }
                prev = b;
            }
        } else {
            // Small theta block through the anchor.
            let other = fresh(&mut deg, &mut next);
            anchors.push(other);
            let mut lens = [0usize; 3];
            for l in lens.iter_mut() {
                *l = rng.gen_range(2..=3);
            }
            for &l in &lens {
                let mut prev = a;
                for i in 0..l {
                    let to = if i + 1 == l {
                        other
                    } else {
                        let b = fresh(&mut deg, &mut next);
                        anchors.push(b);
                        b
                    };
                    edges.push((prev, to));
                    deg[prev as usize] += 1;
                    deg[to as usize] += 1;
                    prev = to;
                }
            }
        }
    }
    if edges.is_empty() {
        let b = fresh(&mut deg, &mut next);
        edges.push((first, b));
    }
    Graph::new(next as usize, &edges).expect("grown graph must be valid")
}

/// Parameters of the lower-bound family: even `n_param` with
/// `levels = n_param / 2 + 1`.
#[derive(Clone, Copy, Debug)]
pub struct LowerBoundParams {
    pub n_param: u32,
    pub levels: u32,
}

impl LowerBoundParams {
    pub fn new(n_param: u32) -> Result<LowerBoundParams, GenError> {
        if n_param % 2 != 0 || n_param < 2 {
            return Err(GenError::OddN(n_param));
        }
        Ok(LowerBoundParams {
            n_param,
            levels: n_param / 2 + 1,
        })
    }
}

/// The recursive family. Level 0 is a chain of `N + 4` vertices; level 1
/// puts three copies in parallel; each later level wraps three copies in
/// edge-capped series; the full graph closes two top-level copies into a
/// cycle with two chains of length three.
pub fn gen_lower_bound(p: LowerBoundParams) -> Result<Graph, GenError> {
    let n = p.n_param as usize;
    let mut level: Comp = Comp::Chain(n + 3);
    let mut size = n + 3;
    for k in 1..=p.levels {
        size = 3 * size + if k == 1 { 0 } else { 6 };
        if size > 30_000_000 {
            return Err(GenError::TooLarge(size));
        }
        level = if k == 1 {
            Comp::Parallel(vec![level.clone(), level.clone(), level])
        } else {
            let leg = Comp::Series(vec![Comp::Chain(1), level, Comp::Chain(1)]);
            Comp::Parallel(vec![leg.clone(), leg.clone(), leg])
        };
    }
    let g = expand_cycle(&[
        Comp::Chain(3),
        level.clone(),
        Comp::Chain(3),
        level,
    ]);
    Ok(g)
}

/// Vertex count of the level-k component, for cross-checking the expansion.
pub fn lower_bound_level_size(p: LowerBoundParams, k: u32) -> usize {
    let mut size = p.n_param as usize + 4;
    for kk in 1..=k {
        size = if kk == 1 { 3 * size - 4 } else { 3 * size + 2 };
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate_partial2tree, GraphClass};
    use crate::spq::{build_spq_star, is_independent_parallel};

    #[test]
    fn deterministic_by_seed() {
        let a = gen_random(RandomKind::Sp, 50, 7).unwrap();
        let b = gen_random(RandomKind::Sp, 50, 7).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = gen_random(RandomKind::Sp, 50, 8).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn independent_parallel_kind() {
        for seed in 0..20 {
            let g = gen_random(RandomKind::IndependentParallel, 60, seed).unwrap();
            let t = build_spq_star(&g).unwrap();
            assert!(is_independent_parallel(&t), "seed {seed}");
        }
    }

    #[test]
    fn partial2tree_kind() {
        let mut multi_block = 0;
        for seed in 0..20 {
            let g = gen_random(RandomKind::Partial2Tree, 40, seed).unwrap();
            let class = validate_partial2tree(&g);
            assert!(
                matches!(
                    class,
                    GraphClass::Partial2Tree | GraphClass::SpBlock | GraphClass::SimpleCycle
                ),
                "seed {seed}: {class:?}"
            );
            if crate::graph::build_bc_tree(&g).blocks.len() >= 2 {
                multi_block += 1;
            }
        }
        assert!(multi_block >= 10);
    }

    #[test]
    fn lower_bound_counts() {
        let p = LowerBoundParams::new(2).unwrap();
        assert_eq!(p.levels, 2);
        assert_eq!(lower_bound_level_size(p, 0), 6);
        assert_eq!(lower_bound_level_size(p, 1), 14);
        assert_eq!(lower_bound_level_size(p, 2), 44);
        let g = gen_lower_bound(p).unwrap();
        // Ring: two copies of G_L plus two 3-chains.
        assert_eq!(g.vertex_count(), 2 * 44 + 4);
        let t = build_spq_star(&g).unwrap();
        assert!(is_independent_parallel(&t));
        assert!(matches!(validate_partial2tree(&g), GraphClass::SpBlock));
        // Independent recount by traversal: degree sums match edge count.
        let degsum: usize = (0..g.vertex_count()).map(|v| g.degree(v as u32)).sum();
        assert_eq!(degsum, 2 * g.edge_count());
    }

    #[test]
    fn lower_bound_rejects_odd() {
        assert!(LowerBoundParams::new(3).is_err());
        assert!(LowerBoundParams::new(0).is_err());
    }

    #[test]
    fn sp_blocks_are_blocks() {
        for seed in 0..20 {
            let g = gen_random(RandomKind::Sp, 30, seed).unwrap();
            assert!(
                matches!(validate_partial2tree(&g), GraphClass::SpBlock),
                "seed {seed}"
            );
        }
    }
}
