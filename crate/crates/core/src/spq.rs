//! SPQ*-tree decomposition of a biconnected series-parallel block, per-root
//! views, and the independent-parallel predicate.
//!
//! The tree is built by first contracting maximal degree-2 chains into
//! Q*-leaves, then running series-parallel reduction on the contracted
//! multigraph while recording the merge structure. Every skeleton vertex of
//! an S- or P-node is a branch vertex (degree >= 3) of the block.

use crate::graph::{Block, EdgeId, Graph, VertexId};
use std::collections::VecDeque;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    S,
    P,
    QStar,
}

/// A maximal chain through degree-2 vertices: `vertices` lists the full
/// path including both branch-vertex endpoints.
#[derive(Clone, Debug)]
pub struct Chain {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }
}

#[derive(Clone, Debug)]
pub struct SpqNode {
    pub kind: NodeKind,
    pub chain: Option<Chain>,
}

/// Unrooted SPQ*-tree. `adj[x]` holds `(neighbor, split_pair)` entries; for
/// S-nodes the entries appear in skeleton-cycle order, so consecutive
/// entries share exactly one split-pair vertex.
#[derive(Clone, Debug)]
pub struct SpqTree {
    pub nodes: Vec<SpqNode>,
    pub adj: Vec<Vec<(usize, (VertexId, VertexId))>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpqError {
    BlockIsCycle,
    NotSeriesParallel,
    RootNotQStar(usize),
}

impl fmt::Display for SpqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpqError::BlockIsCycle => write!(f, "block is a simple cycle"),
            SpqError::NotSeriesParallel => {
                write!(f, "block contains a triconnected component")
            }
            SpqError::RootNotQStar(id) => write!(f, "node {id} is not a Q*-node"),
        }
    }
}

impl std::error::Error for SpqError {}

impl SpqTree {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn kind(&self, x: usize) -> NodeKind {
        self.nodes[x].kind
    }

    pub fn chain(&self, x: usize) -> &Chain {
        self.nodes[x].chain.as_ref().expect("not a Q*-node")
    }

    pub fn q_star_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&x| self.nodes[x].kind == NodeKind::QStar)
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].len()
    }

    /// The pole pair of a P-node (identical for all of its tree edges).
    pub fn p_poles(&self, x: usize) -> (VertexId, VertexId) {
        debug_assert_eq!(self.nodes[x].kind, NodeKind::P);
        self.adj[x][0].1
    }

    /// Locate the Q*-node whose chain contains the edge `{u, v}`.
    pub fn q_star_with_edge(&self, g: &Graph, u: VertexId, v: VertexId) -> Option<usize> {
        for x in self.q_star_nodes() {
            let ch = self.chain(x);
            for w in ch.vertices.windows(2) {
                if (w[0] == u && w[1] == v) || (w[0] == v && w[1] == u) {
                    return Some(x);
                }
            }
            let _ = g;
        }
        None
    }

    /// JSON debug dump: node kinds, chains, and skeleton (split-pair) edges.
    pub fn to_debug_json(&self) -> String {
        let mut out = String::from("{\"nodes\":[");
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let kind = match node.kind {
                NodeKind::S => "S",
                NodeKind::P => "P",
                NodeKind::QStar => "Q*",
            };
            out.push_str(&format!("{{\"id\":{i},\"kind\":\"{kind}\""));
            if let Some(ch) = &node.chain {
                out.push_str(&format!(
                    ",\"chain\":{:?},\"len\":{}",
                    ch.vertices,
                    ch.len()
                ));
            }
            let nbrs: Vec<String> = self.adj[i]
                .iter()
                .map(|&(nb, (a, b))| format!("[{nb},{a},{b}]"))
                .collect();
            out.push_str(&format!(",\"edges\":[{}]}}", nbrs.join(",")));
        }
        out.push_str("]}");
        out
    }
}

/// Quick decision: is this block (given inside `g`) a series-parallel graph?
/// Cycles and trivial blocks count as series-parallel here.
pub fn is_sp_block(g: &Graph, block: &Block) -> bool {
    if block.trivial || block.is_cycle(g) {
        return true;
    }
    let (bg, _) = extract_block(g, block);
    build_spq_star(&bg).is_ok()
}

/// Copy a block out of `g` as a standalone graph with dense vertex ids.
/// Returns the graph and the new-to-old vertex map.
pub fn extract_block(g: &Graph, block: &Block) -> (Graph, Vec<VertexId>) {
    let mut old_to_new = std::collections::HashMap::new();
    for (i, &v) in block.vertices.iter().enumerate() {
        old_to_new.insert(v, i as VertexId);
    }
    let edges: Vec<(VertexId, VertexId)> = block
        .edges
        .iter()
        .map(|&e| {
            let (a, b) = g.endpoints(e);
            (old_to_new[&a], old_to_new[&b])
        })
        .collect();
    let bg = Graph::new(block.vertices.len(), &edges).expect("block must form a valid graph");
    (bg, block.vertices.clone())
}

struct RNode {
    kind: NodeKind,
    chain: Option<Chain>,
    // (neighbor, split pair). Logical order is `adj` read front-to-back,
    // reversed when `rev` is set. S-nodes keep path/cycle order here.
    adj: VecDeque<(usize, (VertexId, VertexId))>,
    rev: bool,
    alive: bool,
}

impl RNode {
    fn logical_first(&self) -> (usize, (VertexId, VertexId)) {
        if self.rev {
            *self.adj.back().unwrap()
        } else {
            *self.adj.front().unwrap()
        }
    }

    fn logical_last(&self) -> (usize, (VertexId, VertexId)) {
        if self.rev {
            *self.adj.front().unwrap()
        } else {
            *self.adj.back().unwrap()
        }
    }
}

struct MEdge {
    a: VertexId,
    b: VertexId,
    node: usize,
    alive: bool,
}

fn push_logical_end(nodes: &mut [RNode], x: usize, entry: (usize, (VertexId, VertexId))) {
    if nodes[x].rev {
        nodes[x].adj.push_front(entry);
    } else {
        nodes[x].adj.push_back(entry);
    }
}

fn link(nodes: &mut [RNode], x: usize, y: usize, split: (VertexId, VertexId)) {
    push_logical_end(nodes, x, (y, split));
    push_logical_end(nodes, y, (x, split));
}

fn pair_has(p: (VertexId, VertexId), v: VertexId) -> bool {
    p.0 == v || p.1 == v
}

/// Flip `s` if needed so its logical last entry touches `v`.
fn orient_end_at(nodes: &mut [RNode], s: usize, v: VertexId) {
    if nodes[s].adj.len() >= 2 && !pair_has(nodes[s].logical_last().1, v) {
        nodes[s].rev = !nodes[s].rev;
    }
    debug_assert!(pair_has(nodes[s].logical_last().1, v));
}

/// Flip `s` if needed so its logical first entry touches `v`.
fn orient_start_at(nodes: &mut [RNode], s: usize, v: VertexId) {
    if nodes[s].adj.len() >= 2 && !pair_has(nodes[s].logical_first().1, v) {
        nodes[s].rev = !nodes[s].rev;
    }
    debug_assert!(pair_has(nodes[s].logical_first().1, v));
}

/// Move all tree edges of `from` onto the logical end of `to`, preserving
/// `from`'s logical order, and kill `from`.
fn splice_union(nodes: &mut Vec<RNode>, to: usize, from: usize) {
    let mut moved: Vec<(usize, (VertexId, VertexId))> = nodes[from].adj.iter().copied().collect();
    if nodes[from].rev {
        moved.reverse();
    }
    for &(nb, _) in &moved {
        for entry in nodes[nb].adj.iter_mut() {
            if entry.0 == from {
                entry.0 = to;
            }
        }
    }
    nodes[from].alive = false;
    nodes[from].adj.clear();
    if nodes[to].rev {
        for &m in &moved {
            nodes[to].adj.push_front(m);
        }
    } else {
        for &m in &moved {
            nodes[to].adj.push_back(m);
        }
    }
}

/// Build the SPQ*-tree of a biconnected SP block that is not a simple cycle.
pub fn build_spq_star(block: &Graph) -> Result<SpqTree, SpqError> {
    let n = block.vertex_count();
    let branch: Vec<bool> = (0..n)
        .map(|v| block.degree(v as VertexId) >= 3)
        .collect();
    if !branch.iter().any(|&b| b) {
        return Err(SpqError::BlockIsCycle);
    }

    // Extract maximal chains between branch vertices.
    let mut chains: Vec<Chain> = Vec::new();
    let mut edge_used = vec![false; block.edge_count()];
    for v in 0..n as VertexId {
        if !branch[v as usize] {
            continue;
        }
        for &e0 in block.incident_edges(v) {
            if edge_used[e0 as usize] {
                continue;
            }
            let mut verts = vec![v];
            let mut edges = Vec::new();
            let mut cur = v;
            let mut ce = e0;
            loop {
                edge_used[ce as usize] = true;
                edges.push(ce);
                let nxt = block.other_end(ce, cur);
                verts.push(nxt);
                if branch[nxt as usize] {
                    break;
                }
                ce = *block
                    .incident_edges(nxt)
                    .iter()
                    .find(|&&e| e != ce)
                    .expect("degree-2 vertex must have a second edge");
                cur = nxt;
            }
            chains.push(Chain {
                vertices: verts,
                edges,
            });
        }
    }
    debug_assert!(edge_used.iter().all(|&u| u));

    reduce(n, &branch, chains)
}

fn reduce(n: usize, branch: &[bool], chains: Vec<Chain>) -> Result<SpqTree, SpqError> {
    let mut nodes: Vec<RNode> = Vec::new();
    let mut medges: Vec<MEdge> = Vec::new();
    let mut vert_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut alive_edges = 0usize;

    for chain in chains {
        let (a, b) = chain.endpoints();
        let node = nodes.len();
        nodes.push(RNode {
            kind: NodeKind::QStar,
            chain: Some(chain),
            adj: VecDeque::new(),
            rev: false,
            alive: true,
        });
        let eid = medges.len();
        medges.push(MEdge {
            a,
            b,
            node,
            alive: true,
        });
        vert_edges[a as usize].push(eid);
        vert_edges[b as usize].push(eid);
        alive_edges += 1;
    }

    let mut queue: VecDeque<VertexId> =
        (0..n as VertexId).filter(|&v| branch[v as usize]).collect();
    let mut queued: Vec<bool> = (0..n).map(|v| branch[v]).collect();
    let requeue = |queue: &mut VecDeque<VertexId>, queued: &mut Vec<bool>, v: VertexId| {
        if !queued[v as usize] {
            queued[v as usize] = true;
            queue.push_back(v);
        }
    };

    while alive_edges > 1 {
        let v = match queue.pop_front() {
            Some(v) => v,
            None => return Err(SpqError::NotSeriesParallel),
        };
        queued[v as usize] = false;
        vert_edges[v as usize]
            .retain(|&e| medges[e].alive && (medges[e].a == v || medges[e].b == v));
        let inc: Vec<usize> = vert_edges[v as usize].clone();

        // Parallel pair at v takes priority.
        let mut merged = false;
        'outer: for i in 0..inc.len() {
            for j in (i + 1)..inc.len() {
                let (e1, e2) = (inc[i], inc[j]);
                let o1 = if medges[e1].a == v { medges[e1].b } else { medges[e1].a };
                let o2 = if medges[e2].a == v { medges[e2].b } else { medges[e2].a };
                if o1 != o2 {
                    continue;
                }
                let w = o1;
                let split = (v.min(w), v.max(w));
                let (x, y) = (medges[e1].node, medges[e2].node);
                let closing = alive_edges == 2;
                let merged_node = if closing
                    && (nodes[x].kind == NodeKind::S || nodes[y].kind == NodeKind::S)
                {
                    // Last merge: close the series cycle instead of making
                    // a two-edge P skeleton.
                    if nodes[x].kind == NodeKind::S && nodes[y].kind == NodeKind::S {
                        orient_end_at(&mut nodes, x, split.1);
                        orient_start_at(&mut nodes, y, split.1);
                        splice_union(&mut nodes, x, y);
                        x
                    } else if nodes[x].kind == NodeKind::S {
                        link(&mut nodes, x, y, split);
                        x
                    } else {
                        link(&mut nodes, y, x, split);
                        y
                    }
                } else if nodes[x].kind == NodeKind::P && nodes[y].kind == NodeKind::P {
                    splice_union(&mut nodes, x, y);
                    x
                } else if nodes[x].kind == NodeKind::P {
                    link(&mut nodes, x, y, split);
                    x
                } else if nodes[y].kind == NodeKind::P {
                    link(&mut nodes, y, x, split);
                    y
                } else {
                    if closing {
                        // Exactly two chains in parallel: the block was a
                        // cycle, which the caller must not pass in.
                        return Err(SpqError::BlockIsCycle);
                    }
                    let p = nodes.len();
                    nodes.push(RNode {
                        kind: NodeKind::P,
                        chain: None,
                        adj: VecDeque::new(),
                        rev: false,
                        alive: true,
                    });
                    link(&mut nodes, p, x, split);
                    link(&mut nodes, p, y, split);
                    p
                };
                medges[e1].node = merged_node;
                medges[e2].alive = false;
                alive_edges -= 1;
                requeue(&mut queue, &mut queued, v);
                requeue(&mut queue, &mut queued, w);
                merged = true;
                break 'outer;
            }
        }
        if merged {
            continue;
        }

        // Series reduction at a degree-2 vertex (both edges to distinct ends).
        if inc.len() == 2 {
            let (e1, e2) = (inc[0], inc[1]);
            let u = if medges[e1].a == v { medges[e1].b } else { medges[e1].a };
            let w = if medges[e2].a == v { medges[e2].b } else { medges[e2].a };
            debug_assert_ne!(u, w);
            let (x, y) = (medges[e1].node, medges[e2].node);

            let s = if nodes[x].kind == NodeKind::S {
                orient_end_at(&mut nodes, x, v);
                x
            } else {
                let s = nodes.len();
                nodes.push(RNode {
                    kind: NodeKind::S,
                    chain: None,
                    adj: VecDeque::new(),
                    rev: false,
                    alive: true,
                });
                link(&mut nodes, s, x, (u.min(v), u.max(v)));
                s
            };
            if nodes[y].kind == NodeKind::S {
                orient_start_at(&mut nodes, y, v);
                splice_union(&mut nodes, s, y);
            } else {
                link(&mut nodes, s, y, (v.min(w), v.max(w)));
            }

            medges[e1].a = u;
            medges[e1].b = w;
            medges[e1].node = s;
            medges[e2].alive = false;
            alive_edges -= 1;
            vert_edges[w as usize].push(e1);
            requeue(&mut queue, &mut queued, u);
            requeue(&mut queue, &mut queued, w);
        }
        // Otherwise v is not reducible right now; a later merge at a
        // neighbor will requeue it.
    }

    // Compact alive nodes into a dense tree.
    let mut remap = vec![usize::MAX; nodes.len()];
    let mut out_nodes = Vec::new();
    for (i, nd) in nodes.iter().enumerate() {
        if nd.alive {
            remap[i] = out_nodes.len();
            out_nodes.push(SpqNode {
                kind: nd.kind,
                chain: nd.chain.clone(),
            });
        }
    }
    let mut adj = vec![Vec::new(); out_nodes.len()];
    for (i, nd) in nodes.iter().enumerate() {
        if !nd.alive {
            continue;
        }
        let mut entries: Vec<(usize, (VertexId, VertexId))> = nd.adj.iter().copied().collect();
        if nd.rev {
            entries.reverse();
        }
        adj[remap[i]] = entries
            .into_iter()
            .map(|(nb, sp)| (remap[nb], sp))
            .collect();
    }
    let tree = SpqTree {
        nodes: out_nodes,
        adj,
    };
    debug_assert!(check_tree_invariants(&tree), "spq invariants violated");
    Ok(tree)
}

fn check_tree_invariants(t: &SpqTree) -> bool {
    for x in 0..t.node_count() {
        match t.kind(x) {
            NodeKind::QStar => {
                if t.degree(x) != 1 {
                    return false;
                }
            }
            NodeKind::P => {
                if !(3..=4).contains(&t.degree(x)) {
                    return false;
                }
                let p = t.adj[x][0].1;
                if !t.adj[x].iter().all(|&(_, sp)| sp == p) {
                    return false;
                }
            }
            NodeKind::S => {
                if t.degree(x) < 3 {
                    return false;
                }
                // Consecutive skeleton edges share exactly one vertex.
                let k = t.degree(x);
                for i in 0..k {
                    let a = t.adj[x][i].1;
                    let b = t.adj[x][(i + 1) % k].1;
                    let shared = [a.0, a.1]
                        .iter()
                        .filter(|&&p| p == b.0 || p == b.1)
                        .count();
                    if shared != 1 {
                        return false;
                    }
                }
            }
        }
        for &(nb, _) in &t.adj[x] {
            if t.kind(nb) == t.kind(x) && t.kind(x) != NodeKind::QStar {
                return false;
            }
        }
    }
    true
}

/// True iff no graph vertex is a pole of two distinct P-nodes.
pub fn is_independent_parallel(t: &SpqTree) -> bool {
    let mut seen = std::collections::HashSet::new();
    for x in 0..t.node_count() {
        if t.kind(x) == NodeKind::P {
            let (a, b) = t.p_poles(x);
            if !seen.insert(a) || !seen.insert(b) {
                return false;
            }
        }
    }
    true
}

pub const NO_PARENT: usize = usize::MAX;

/// Per-root overlay: parents, ordered children, ordered poles, pole degrees
/// inside/outside each pertinent graph, and pertinent vertex counts.
#[derive(Clone, Debug)]
pub struct RootedView {
    pub root: usize,
    /// Non-root nodes, children before parents.
    pub post_order: Vec<usize>,
    pub parent: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    /// Ordered (u, v): u comes first in the st-orientation from the root.
    pub poles: Vec<(VertexId, VertexId)>,
    /// Degree of each pole inside the pertinent graph, as (at_u, at_v).
    pub indeg: Vec<(u8, u8)>,
    /// Degree of each pole outside the pertinent graph, within the block.
    pub outdeg: Vec<(u8, u8)>,
    /// Vertex count of each pertinent graph.
    pub pert_size: Vec<u32>,
}

impl RootedView {
    pub fn root_child(&self) -> usize {
        self.children[self.root][0]
    }

    /// Edge set of the pertinent graph of `node`: the union of the chains
    /// at the Q*-leaves of its subtree. A Q*-node's pertinent graph is its
    /// own chain, even for the root.
    pub fn pertinent_edges(&self, t: &SpqTree, node: usize) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            if t.kind(x) == NodeKind::QStar {
                out.extend_from_slice(&t.chain(x).edges);
                continue;
            }
            stack.extend_from_slice(&self.children[x]);
        }
        out.sort_unstable();
        out
    }
}

pub fn rooted_view(t: &SpqTree, g: &Graph, root: usize) -> Result<RootedView, SpqError> {
    if t.kind(root) != NodeKind::QStar {
        return Err(SpqError::RootNotQStar(root));
    }
    let n = t.node_count();
    let mut parent = vec![NO_PARENT; n];
    let mut children = vec![Vec::new(); n];
    let mut poles = vec![(0, 0); n];
    let mut order = Vec::with_capacity(n);

    let (re, rs) = t.chain(root).endpoints();
    // Deterministic pole orientation: the smaller endpoint of the reference
    // chain acts as the source.
    let (s, tp) = (re.min(rs), re.max(rs));
    poles[root] = (s, tp);

    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        order.push(x);
        let (u, v) = poles[x];
        match t.kind(x) {
            NodeKind::QStar | NodeKind::P => {
                for &(nb, _) in &t.adj[x] {
                    if nb == parent[x] {
                        continue;
                    }
                    parent[nb] = x;
                    poles[nb] = (u, v);
                    children[x].push(nb);
                    stack.push(nb);
                }
            }
            NodeKind::S => {
                let cyc = &t.adj[x];
                let pidx = cyc
                    .iter()
                    .position(|&(nb, _)| nb == parent[x])
                    .expect("s-node must see its parent");
                let mut path: Vec<(usize, (VertexId, VertexId))> = Vec::new();
                for k in 1..cyc.len() {
                    path.push(cyc[(pidx + k) % cyc.len()]);
                }
                if !pair_has(path[0].1, u) {
                    path.reverse();
                }
                debug_assert!(pair_has(path[0].1, u));
                let mut at = u;
                for (nb, sp) in path {
                    let nxt = if sp.0 == at { sp.1 } else { sp.0 };
                    debug_assert!(pair_has(sp, at));
                    parent[nb] = x;
                    poles[nb] = (at, nxt);
                    children[x].push(nb);
                    stack.push(nb);
                    at = nxt;
                }
                debug_assert_eq!(at, v);
            }
        }
    }

    let mut indeg = vec![(0u8, 0u8); n];
    let mut pert = vec![0u32; n];
    for &x in order.iter().rev() {
        match t.kind(x) {
            NodeKind::QStar => {
                indeg[x] = (1, 1);
                pert[x] = t.chain(x).len() as u32 + 1;
            }
            NodeKind::P => {
                let mut du = 0u8;
                let mut dv = 0u8;
                let mut pv = 0u32;
                for &c in &children[x] {
                    du += indeg[c].0;
                    dv += indeg[c].1;
                    pv += pert[c];
                }
                let k = children[x].len() as u32;
                indeg[x] = (du, dv);
                pert[x] = pv - 2 * (k - 1);
            }
            NodeKind::S => {
                let first = children[x][0];
                let last = *children[x].last().unwrap();
                indeg[x] = (indeg[first].0, indeg[last].1);
                let mut pv = 0u32;
                for &c in &children[x] {
                    pv += pert[c];
                }
                pert[x] = pv - (children[x].len() as u32 - 1);
            }
        }
    }
    let mut outdeg = vec![(0u8, 0u8); n];
    for x in 0..n {
        let (u, v) = poles[x];
        outdeg[x] = (
            g.degree(u) as u8 - indeg[x].0,
            g.degree(v) as u8 - indeg[x].1,
        );
    }

    let post_order: Vec<usize> = order.iter().rev().copied().filter(|&x| x != root).collect();
    Ok(RootedView {
        root,
        post_order,
        parent,
        children,
        poles,
        indeg,
        outdeg,
        pert_size: pert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(lens: &[usize]) -> Graph {
        let mut edges = Vec::new();
        let mut next = 2u32;
        for &len in lens {
            let mut prev = 0u32;
            for i in 0..len {
                let to = if i == len - 1 {
                    1
                } else {
                    let v = next;
                    next += 1;
                    v
                };
                edges.push((prev, to));
                prev = to;
            }
        }
        Graph::new(next as usize, &edges).unwrap()
    }

    #[test]
    fn theta_tree_shape() {
        let g = theta(&[3, 3, 3]);
        let t = build_spq_star(&g).unwrap();
        let q: Vec<usize> = t.q_star_nodes().collect();
        assert_eq!(q.len(), 3);
        assert!(q.iter().all(|&x| t.chain(x).len() == 3));
        let p: Vec<usize> = (0..t.node_count())
            .filter(|&x| t.kind(x) == NodeKind::P)
            .collect();
        assert_eq!(p.len(), 1);
        assert_eq!(t.degree(p[0]), 3);
        assert!(is_independent_parallel(&t));
    }

    #[test]
    fn cycle_is_rejected() {
        let edges: Vec<(u32, u32)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let g = Graph::new(5, &edges).unwrap();
        assert!(matches!(build_spq_star(&g), Err(SpqError::BlockIsCycle)));
    }

    #[test]
    fn k4_is_not_sp() {
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(build_spq_star(&g), Err(SpqError::NotSeriesParallel)));
    }

    /// Ring of two theta blocks joined by chains.
    fn theta_ring() -> Graph {
        let mut edges = vec![];
        for &mid in &[2u32, 3, 4] {
            edges.push((0, mid));
            edges.push((mid, 1));
        }
        edges.push((1, 5));
        edges.push((5, 6));
        for &mid in &[8u32, 9, 10] {
            edges.push((6, mid));
            edges.push((mid, 7));
        }
        edges.push((7, 11));
        edges.push((11, 0));
        Graph::new(12, &edges).unwrap()
    }

    #[test]
    fn series_of_thetas() {
        let g = theta_ring();
        let t = build_spq_star(&g).unwrap();
        let s: Vec<usize> = (0..t.node_count())
            .filter(|&x| t.kind(x) == NodeKind::S)
            .collect();
        let p: Vec<usize> = (0..t.node_count())
            .filter(|&x| t.kind(x) == NodeKind::P)
            .collect();
        assert_eq!(s.len(), 1);
        assert_eq!(p.len(), 2);
        assert_eq!(t.degree(s[0]), 4);
        assert_eq!(t.q_star_nodes().count(), 8);
        assert!(is_independent_parallel(&t));
    }

    #[test]
    fn rooted_view_theta() {
        let g = theta(&[3, 3, 3]);
        let t = build_spq_star(&g).unwrap();
        let root = t.q_star_nodes().next().unwrap();
        let view = rooted_view(&t, &g, root).unwrap();
        let p = (0..t.node_count())
            .find(|&x| t.kind(x) == NodeKind::P)
            .unwrap();
        assert_eq!(view.children[root], vec![p]);
        assert_eq!(view.children[p].len(), 2);
        assert_eq!(view.poles[p], (0, 1));
        assert_eq!(view.indeg[p], (2, 2));
        assert_eq!(view.outdeg[p], (1, 1));
        for r in t.q_star_nodes() {
            let v2 = rooted_view(&t, &g, r).unwrap();
            assert_eq!(v2.poles[p], (0, 1));
            assert_eq!(v2.children[p].len(), 2);
        }
    }

    #[test]
    fn pole_degrees_partition() {
        let g = theta_ring();
        let t = build_spq_star(&g).unwrap();
        for r in t.q_star_nodes() {
            let view = rooted_view(&t, &g, r).unwrap();
            for x in 0..t.node_count() {
                if x == r {
                    continue;
                }
                let (u, v) = view.poles[x];
                assert_eq!(
                    view.indeg[x].0 + view.outdeg[x].0,
                    g.degree(u) as u8,
                    "node {x} pole {u}"
                );
                assert_eq!(view.indeg[x].1 + view.outdeg[x].1, g.degree(v) as u8);
            }
        }
    }

    #[test]
    fn four_parallel_chains() {
        let g = theta(&[2, 2, 2, 2]);
        let t = build_spq_star(&g).unwrap();
        let p: Vec<usize> = (0..t.node_count())
            .filter(|&x| t.kind(x) == NodeKind::P)
            .collect();
        assert_eq!(p.len(), 1);
        assert_eq!(t.degree(p[0]), 4);
        let root = t.q_star_nodes().next().unwrap();
        let view = rooted_view(&t, &g, root).unwrap();
        assert_eq!(view.children[p[0]].len(), 3);
    }

    #[test]
    fn ring_of_p_and_chains_closes_series_cycle() {
        // Two 2-chain bundles joined by single chains in a ring; forces the
        // S-S closing union path.
        // 0 =2 chains= 1 -- 2 =2 chains= 3 -- 0, bundles have interior verts.
        let edges = vec![
            (0u32, 4u32),
            (4, 1),
            (0, 5),
            (5, 1),
            (1, 2),
            (2, 6),
            (6, 3),
            (2, 7),
            (7, 3),
            (3, 0),
        ];
        let g = Graph::new(8, &edges).unwrap();
        let t = build_spq_star(&g).unwrap();
        let s: Vec<usize> = (0..t.node_count())
            .filter(|&x| t.kind(x) == NodeKind::S)
            .collect();
        assert_eq!(s.len(), 1);
        assert_eq!(t.degree(s[0]), 4);
        for r in t.q_star_nodes() {
            rooted_view(&t, &g, r).unwrap();
        }
    }
}
