//! Graph representation, input parsing, classification, and the
//! block-cutvertex decomposition.
//!
//! Everything downstream indexes vertices and edges by dense integer ids,
//! so the structures here are plain arrays rather than maps.

use std::fmt;

pub type VertexId = u32;
pub type EdgeId = u32;

/// Simple undirected connected graph with maximum degree 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<EdgeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    Syntax(String),
    SelfLoop(VertexId),
    DuplicateEdge(VertexId, VertexId),
    VertexOutOfRange(VertexId, usize),
    DegreeExceeded(VertexId),
    Disconnected,
    Empty,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Syntax(msg) => write!(f, "syntax error: {msg}"),
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            GraphError::DuplicateEdge(u, v) => write!(f, "duplicate edge ({u}, {v})"),
            GraphError::VertexOutOfRange(v, n) => {
                write!(f, "vertex id {v} out of range (n = {n})")
            }
            GraphError::DegreeExceeded(v) => write!(f, "vertex {v} has degree > 4"),
            GraphError::Disconnected => write!(f, "graph is not connected"),
            GraphError::Empty => write!(f, "graph has no vertices"),
        }
    }
}

impl std::error::Error for GraphError {}

impl Graph {
    pub fn new(n: usize, edge_list: &[(VertexId, VertexId)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u as usize >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            let id = edges.len() as EdgeId;
            edges.push((u, v));
            adj[u as usize].push(id);
            adj[v as usize].push(id);
        }
        for v in 0..n {
            if adj[v].len() > 4 {
                return Err(GraphError::DegreeExceeded(v as VertexId));
            }
        }
        let g = Graph { n, edges, adj };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e as usize]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e as usize];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize]
            .iter()
            .any(|&e| self.other_end(e, u) == v)
    }

    fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0 as VertexId];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v as usize] {
                let w = self.other_end(e, v);
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Canonical JSON form with sorted edge lists.
    pub fn to_json(&self) -> String {
        let mut es: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        es.sort_unstable();
        let mut out = format!("{{\"n\":{},\"edges\":[", self.n);
        for (i, (u, v)) in es.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("[{u},{v}]"));
        }
        out.push_str("]}");
        out
    }
}

/// Parse a graph document: JSON `{"n": .., "edges": [[u,v],..]}` or a plain
/// whitespace edge list, one `u v` pair per line.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}

fn parse_json(text: &str) -> Result<Graph, GraphError> {
    #[derive(serde::Deserialize)]
    struct Doc {
        n: usize,
        edges: Vec<(VertexId, VertexId)>,
    }
    let doc: Doc = serde_json::from_str(text).map_err(|e| GraphError::Syntax(e.to_string()))?;
    Graph::new(doc.n, &doc.edges)
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut max_v: Option<VertexId> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let u: VertexId = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Syntax(format!("line {}: expected `u v`", lineno + 1)))?;
        let v: VertexId = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Syntax(format!("line {}: expected `u v`", lineno + 1)))?;
        if it.next().is_some() {
            return Err(GraphError::Syntax(format!(
                "line {}: trailing tokens",
                lineno + 1
            )));
        }
        max_v = Some(max_v.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = match max_v {
        Some(m) => m as usize + 1,
        None => return Err(GraphError::Empty),
    };
    Graph::new(n, &edges)
}

/// Classification of a connected degree-4 graph relative to the
/// partial-2-tree family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphClass {
    /// The whole graph is a single cycle.
    SimpleCycle,
    /// Biconnected series-parallel, not a cycle.
    SpBlock,
    /// Every block is series-parallel, a cycle, or a single edge; the graph
    /// itself is not biconnected (or is a trivial edge/vertex).
    Partial2Tree,
    /// Some block has a triconnected component that is a triconnected graph.
    NotPartial2Tree,
}

/// Classify `g`. Cycle feasibility itself is decided elsewhere; this only
/// establishes which algorithm applies.
pub fn validate_partial2tree(g: &Graph) -> GraphClass {
    if g.vertex_count() >= 3
        && g.edge_count() == g.vertex_count()
        && (0..g.vertex_count()).all(|v| g.degree(v as VertexId) == 2)
    {
        return GraphClass::SimpleCycle;
    }
    let bc = build_bc_tree(g);
    let single_block = bc.blocks.len() == 1 && bc.blocks[0].vertices.len() == g.vertex_count();
    let mut all_ok = true;
    for block in &bc.blocks {
        if block.trivial || block.is_cycle(g) {
            continue;
        }
        if !crate::spq::is_sp_block(g, block) {
            all_ok = false;
            break;
        }
    }
    if !all_ok {
        GraphClass::NotPartial2Tree
    } else if single_block && !bc.blocks[0].trivial {
        GraphClass::SpBlock
    } else {
        GraphClass::Partial2Tree
    }
}

/// One biconnected component.
#[derive(Clone, Debug)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// Single-edge block.
    pub trivial: bool,
}

impl Block {
    pub fn is_cycle(&self, g: &Graph) -> bool {
        !self.trivial
            && self.edges.len() == self.vertices.len()
            && self.vertices.iter().all(|&v| {
                g.incident_edges(v)
                    .iter()
                    .filter(|&&e| self.edges.binary_search(&e).is_ok())
                    .count()
                    == 2
            })
    }

    pub fn degree_in(&self, g: &Graph, v: VertexId) -> usize {
        g.incident_edges(v)
            .iter()
            .filter(|&&e| self.edges.binary_search(&e).is_ok())
            .count()
    }
}

/// Block-cutvertex tree: bipartite between blocks and cutvertices.
#[derive(Clone, Debug)]
pub struct BcTree {
    pub blocks: Vec<Block>,
    pub cutvertices: Vec<VertexId>,
    /// For each block (by index), the cutvertices it contains
    /// (indices into `cutvertices`).
    pub block_cuts: Vec<Vec<usize>>,
    /// For each cutvertex (by index), the blocks containing it.
    pub cut_blocks: Vec<Vec<usize>>,
}

impl BcTree {
    pub fn is_cutvertex(&self, v: VertexId) -> bool {
        self.cutvertices.binary_search(&v).is_ok()
    }

    pub fn cut_index(&self, v: VertexId) -> Option<usize> {
        self.cutvertices.binary_search(&v).ok()
    }
}

/// Hopcroft–Tarjan biconnected components, iterative. Blocks come out in a
/// deterministic order (sorted by their lexicographically smallest edge).
pub fn build_bc_tree(g: &Graph) -> BcTree {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut disc = vec![0u32; n]; // 0 = unvisited, otherwise disc+1
    let mut low = vec![0u32; n];
    let mut timer = 1u32;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut raw_blocks: Vec<Vec<EdgeId>> = Vec::new();
    let mut is_cut = vec![false; n];

    if m == 0 {
        return BcTree {
            blocks: Vec::new(),
            cutvertices: Vec::new(),
            block_cuts: Vec::new(),
            cut_blocks: Vec::new(),
        };
    }

    // Explicit DFS stack: (vertex, parent edge, next adjacency index).
    let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = Vec::new();
    disc[0] = timer;
    low[0] = timer;
    timer += 1;
    stack.push((0, None, 0));
    let mut root_children = 0usize;

    while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
        let vi = v as usize;
        if *idx < g.incident_edges(v).len() {
            let e = g.incident_edges(v)[*idx];
            *idx += 1;
            if Some(e) == pe {
                continue;
            }
            let w = g.other_end(e, v);
            let wi = w as usize;
            if disc[wi] == 0 {
                edge_stack.push(e);
                disc[wi] = timer;
                low[wi] = timer;
                timer += 1;
                stack.push((w, Some(e), 0));
            } else if disc[wi] < disc[vi] {
                edge_stack.push(e);
                low[vi] = low[vi].min(disc[wi]);
            }
        } else {
            stack.pop();
            if let Some(&mut (p, _, _)) = stack.last_mut() {
                let pi = p as usize;
                if stack.len() == 1 {
                    root_children += 1;
                }
                low[pi] = low[pi].min(low[vi]);
                if low[vi] >= disc[pi] {
                    // p closes a block; pop edges down to the tree edge (p, v).
                    let mut comp = Vec::new();
                    while let Some(&e) = edge_stack.last() {
                        let (a, b) = g.endpoints(e);
                        if disc[a as usize] >= disc[vi] || disc[b as usize] >= disc[vi] {
                            comp.push(e);
                            edge_stack.pop();
                        } else {
                            break;
                        }
                    }
                    raw_blocks.push(comp);
                    if stack.len() > 1 {
                        is_cut[pi] = true;
                    }
                }
            }
        }
    }
    if root_children >= 2 {
        is_cut[0] = true;
    }

    // Assemble blocks with sorted vertex/edge lists, then order them by
    // their smallest normalized edge for reproducibility.
    let mut blocks: Vec<Block> = raw_blocks
        .into_iter()
        .map(|mut es| {
            es.sort_unstable();
            let mut vs: Vec<VertexId> = es
                .iter()
                .flat_map(|&e| {
                    let (a, b) = g.endpoints(e);
                    [a, b]
                })
                .collect();
            vs.sort_unstable();
            vs.dedup();
            let trivial = es.len() == 1;
            Block {
                vertices: vs,
                edges: es,
                trivial,
            }
        })
        .collect();
    blocks.sort_by_key(|b| {
        let (u, v) = g.endpoints(b.edges[0]);
        let mut best = (u.min(v), u.max(v));
        for &e in &b.edges {
            let (a, c) = g.endpoints(e);
            let k = (a.min(c), a.max(c));
            if k < best {
                best = k;
            }
        }
        best
    });

    let cutvertices: Vec<VertexId> = (0..n as VertexId).filter(|&v| is_cut[v as usize]).collect();
    let mut block_cuts = vec![Vec::new(); blocks.len()];
    let mut cut_blocks = vec![Vec::new(); cutvertices.len()];
    for (bi, b) in blocks.iter().enumerate() {
        for &v in &b.vertices {
            if let Ok(ci) = cutvertices.binary_search(&v) {
                block_cuts[bi].push(ci);
                cut_blocks[ci].push(bi);
            }
        }
    }
    BcTree {
        blocks,
        cutvertices,
        block_cuts,
        cut_blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n)
            .map(|i| (i as u32, ((i + 1) % n) as u32))
            .collect();
        Graph::new(n, &edges).unwrap()
    }

    /// Three internally disjoint chains between 0 and 1, each with `len`
    /// edges.
    pub fn theta(lens: &[usize]) -> Graph {
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
    fn parse_json_c4() {
        let g = parse_graph(r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]]}"#).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(validate_partial2tree(&g), GraphClass::SimpleCycle);
    }

    #[test]
    fn parse_edge_list_c3() {
        // C3 parses fine; its infeasibility is a planarity question, not a
        // parse error.
        let g = parse_graph("0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(validate_partial2tree(&g), GraphClass::SimpleCycle);
    }

    #[test]
    fn parse_duplicate_edge() {
        let err = parse_graph("0 1\n0 1\n").unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge(0, 1));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_graph(r#"{"n":3,"edges":[[0,3]]}"#),
            Err(GraphError::VertexOutOfRange(3, 3))
        ));
        assert!(matches!(
            parse_graph(r#"{"n":2,"edges":[[0,0]]}"#),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            parse_graph(r#"{"n":4,"edges":[[0,1]]}"#),
            Err(GraphError::Disconnected)
        ));
        let star5: Vec<(u32, u32)> = (1..=5).map(|i| (0, i)).collect();
        assert!(matches!(
            Graph::new(6, &star5),
            Err(GraphError::DegreeExceeded(0))
        ));
    }

    #[test]
    fn classify_theta_and_k4() {
        assert_eq!(validate_partial2tree(&theta(&[3, 3, 3])), GraphClass::SpBlock);
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(validate_partial2tree(&k4), GraphClass::NotPartial2Tree);
    }

    #[test]
    fn bc_tree_two_squares() {
        // Two C4 blocks sharing vertex 0.
        let g = Graph::new(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)],
        )
        .unwrap();
        let bc = build_bc_tree(&g);
        assert_eq!(bc.blocks.len(), 2);
        assert_eq!(bc.cutvertices, vec![0]);
        assert_eq!(g.degree(0), 4);
        assert_eq!(validate_partial2tree(&g), GraphClass::Partial2Tree);
    }

    #[test]
    fn bc_tree_biconnected_single_block() {
        let g = cycle(5);
        let bc = build_bc_tree(&g);
        assert_eq!(bc.blocks.len(), 1);
        assert!(bc.cutvertices.is_empty());
    }

    #[test]
    fn bc_tree_path() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let bc = build_bc_tree(&g);
        assert_eq!(bc.blocks.len(), 3);
        assert!(bc.blocks.iter().all(|b| b.trivial));
        assert_eq!(bc.cutvertices, vec![1, 2]);
    }

    #[test]
    fn block_edge_partition() {
        let g = Graph::new(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 3),
                (5, 6),
                (6, 7),
            ],
        )
        .unwrap();
        let bc = build_bc_tree(&g);
        let total: usize = bc.blocks.iter().map(|b| b.edges.len()).sum();
        assert_eq!(total, g.edge_count());
        let mut all: Vec<EdgeId> = bc.blocks.iter().flat_map(|b| b.edges.clone()).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), g.edge_count());
    }

    #[test]
    fn json_roundtrip_sorted() {
        let g = Graph::new(4, &[(3, 0), (2, 1), (1, 0), (2, 3)]).unwrap();
        let s = g.to_json();
        assert_eq!(s, r#"{"n":4,"edges":[[0,1],[0,3],[1,2],[2,3]]}"#);
        let g2 = parse_graph(&s).unwrap();
        assert_eq!(g2.vertex_count(), 4);
        assert_eq!(g2.edge_count(), 4);
    }
}
