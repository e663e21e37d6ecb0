//! Rectilinear planarity of non-biconnected partial 2-trees: per-block
//! constrained tests driven by the block-cutvertex tree, reflex-angle
//! gadgets, local/cumulative Boolean labels with three-case root pruning,
//! and merging of per-block representations at the shared cutvertices.

use crate::graph::{build_bc_tree, BcTree, EdgeId, Graph, GraphClass, VertexId};
use crate::rep::{dart, OrthoRep};
use crate::spq::{build_spq_star, extract_block};
use crate::tester::{
    construct, cycle_feasible, test_block, CycleDemand, DpTable, NodeAssignment, RootConstraint,
    TestOptions, Witness,
};
use std::collections::HashMap;

/// Angle demand a block faces at one of its cutvertices, fixed by the
/// degree profile around the cutvertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutDemand {
    /// Some face of the block must offer a 270-degree angle here (the
    /// neighbor block embeds into it).
    ReflexAngle,
    /// The external face must offer the 270-degree angle.
    ExternalReflexAngle,
    /// The unique flat angle must lie on the external face.
    ExternalFlatAngle,
    /// The external angle must not be 90 degrees.
    ExternalNonRightAngle,
}

/// The constraints a block carries for one choice of parent cutvertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockConfig {
    pub block: usize,
    /// Global vertex id of the parent cutvertex; None when the block is the
    /// BC-root.
    pub parent: Option<VertexId>,
    /// External constraint at the parent cutvertex, if any.
    pub external: Option<CutDemand>,
    /// Cutvertices (other than the parent) demanding a reflex angle.
    pub reflex_at: Vec<VertexId>,
}

/// The deterministic constraint table of the composition theorem, driven by
/// deg(c), deg(c | parent side) and deg(c | block).
pub fn derive_constraints(
    g: &Graph,
    bc: &BcTree,
    block: usize,
    parent: Option<VertexId>,
) -> BlockConfig {
    let b = &bc.blocks[block];
    let mut external = None;
    if let Some(c) = parent {
        let deg = g.degree(c);
        let dj = b.degree_in(g, c);
        if dj >= 2 {
            let others: Vec<usize> = bc.cut_blocks[bc.cut_index(c).unwrap()]
                .iter()
                .copied()
                .filter(|&k| k != block)
                .collect();
            let other_degs: Vec<usize> =
                others.iter().map(|&k| bc.blocks[k].degree_in(g, c)).collect();
            external = match (deg, dj) {
                (4, 2) if other_degs == [2] => Some(CutDemand::ExternalReflexAngle),
                (4, 2) => Some(CutDemand::ExternalNonRightAngle),
                (4, 3) => Some(CutDemand::ExternalFlatAngle),
                (3, 2) => Some(CutDemand::ExternalNonRightAngle),
                _ => None,
            };
        }
    }
    let mut reflex_at = Vec::new();
    for &ci in &bc.block_cuts[block] {
        let c = bc.cutvertices[ci];
        if Some(c) == parent {
            continue;
        }
        if b.degree_in(g, c) != 2 {
            continue;
        }
        let others: Vec<usize> = bc.cut_blocks[ci]
            .iter()
            .copied()
            .filter(|&k| k != block)
            .collect();
        if others.len() == 1 && bc.blocks[others[0]].degree_in(g, c) == 2 {
            reflex_at.push(c);
        }
    }
    BlockConfig {
        block,
        parent,
        external,
        reflex_at,
    }
}

/// Bookkeeping for one reflex-angle gadget added to a block.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub c: VertexId,
    pub u: VertexId,
    pub v: VertexId,
    /// Middle vertex of the length-2 path.
    pub p: VertexId,
    /// An edge on the length-4 path, usable as a forced root.
    pub four_path_edge: EdgeId,
    /// Original edge ids (in the pre-gadget graph) that got subdivided,
    /// with their far endpoints.
    pub orig_cx: (EdgeId, VertexId),
    pub orig_cy: (EdgeId, VertexId),
}

/// Subdivide the two edges at a degree-2 vertex and add edge-disjoint paths
/// of length two and four between the subdivision points. The result stays
/// series-parallel and forces a reflex angle at `c` in every drawing.
pub fn apply_reflex_gadget(g: &Graph, c: VertexId) -> (Graph, Gadget) {
    assert_eq!(g.degree(c), 2, "reflex gadget needs a degree-2 vertex");
    let inc = g.incident_edges(c);
    let (e_cx, e_cy) = (inc[0], inc[1]);
    let x = g.other_end(e_cx, c);
    let y = g.other_end(e_cy, c);
    let n0 = g.vertex_count() as VertexId;
    let (u, v, p, a, b, d) = (n0, n0 + 1, n0 + 2, n0 + 3, n0 + 4, n0 + 5);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(g.edge_count() + 8);
    for (ei, &(s, t)) in g.edges().iter().enumerate() {
        if ei as EdgeId == e_cx {
            edges.push((u, x));
        } else if ei as EdgeId == e_cy {
            edges.push((v, y));
        } else {
            edges.push((s, t));
        }
    }
    edges.push((c, u));
    edges.push((c, v));
    edges.push((u, p));
    edges.push((p, v));
    let four_start = edges.len() as EdgeId;
    edges.push((u, a));
    edges.push((a, b));
    edges.push((b, d));
    edges.push((d, v));
    let gg = Graph::new(g.vertex_count() + 6, &edges).expect("gadget keeps the graph valid");
    (
        gg,
        Gadget {
            c,
            u,
            v,
            p,
            four_path_edge: four_start,
            orig_cx: (e_cx, x),
            orig_cy: (e_cy, y),
        },
    )
}

/// Remove one gadget from a realized representation, producing per-dart
/// directions for the graph the gadget was applied to. Keeps whichever
/// length-2 chain lines up with the block edges and relabels its middle
/// vertex as the cutvertex.
fn strip_one_gadget(orig: &Graph, rep: &OrthoRep, gadgets: &[Gadget]) -> Vec<u8> {
    let dir_between = |from: VertexId, to: VertexId| -> u8 {
        rep.dart_between(from, to)
            .map(|dd| rep.dir[dd as usize])
            .expect("gadget edge must exist in the realized representation")
    };
    let mut dirs = vec![u8::MAX; 2 * orig.edge_count()];
    let mut handled = vec![false; orig.edge_count()];
    for gd in gadgets {
        let dux = dir_between(gd.u, gd.orig_cx.1);
        let dvy = dir_between(gd.v, gd.orig_cy.1);
        // Keep the middle vertex (original c or the 2-path's p) whose darts
        // run collinear with the block edges at both subdivision points.
        let collinear = |mid: VertexId| {
            (dir_between(mid, gd.u) == dux) && (dir_between(mid, gd.v) == dvy)
        };
        let kept = if collinear(gd.c) {
            gd.c
        } else {
            debug_assert!(collinear(gd.p), "one middle vertex must line up");
            gd.p
        };
        let (e_cx, x) = gd.orig_cx;
        let (e_cy, y) = gd.orig_cy;
        let _ = (x, y);
        let set = |dirs: &mut Vec<u8>, e: EdgeId, from: VertexId, ddir: u8| {
            let (a, _) = orig.endpoints(e);
            let dt = dart(e, if a == from { 0 } else { 1 });
            dirs[dt as usize] = ddir;
            dirs[(dt ^ 1) as usize] = (ddir + 2) % 4;
        };
        set(&mut dirs, e_cx, gd.c, dir_between(kept, gd.u));
        set(&mut dirs, e_cy, gd.c, dir_between(kept, gd.v));
        handled[e_cx as usize] = true;
        handled[e_cy as usize] = true;
    }
    for e in 0..orig.edge_count() as EdgeId {
        if handled[e as usize] {
            continue;
        }
        let dt = dart(e, 0);
        dirs[dt as usize] = rep.dir[dt as usize];
        dirs[(dt ^ 1) as usize] = rep.dir[(dt ^ 1) as usize];
    }
    dirs
}

/// How a single block gets drawn once its configuration is fixed.
pub enum BlockPlan {
    /// Single edge.
    Trivial,
    /// Simple cycle: vertices in cycle order with interior angles.
    Cycle(Vec<VertexId>, Vec<i32>),
    /// SP block (possibly gadgeted): everything needed to synthesize.
    /// `stages` records, innermost first, the graph each gadget was applied
    /// to, so stripping can unwind them in reverse.
    Sp {
        gadgeted: Graph,
        stages: Vec<(Graph, Gadget)>,
        assignment: Box<NodeAssignment>,
        witness: Witness,
    },
}

fn cycle_order(g: &Graph) -> Vec<VertexId> {
    let mut order = vec![0 as VertexId];
    let mut prev = 0;
    let mut cur = g.other_end(g.incident_edges(0)[0], 0);
    while cur != 0 {
        order.push(cur);
        let nxt = g
            .incident_edges(cur)
            .iter()
            .map(|&e| g.other_end(e, cur))
            .find(|&w| w != prev)
            .expect("cycle continues");
        prev = cur;
        cur = nxt;
    }
    order
}

/// Feasibility (and a plan) for one block under one configuration. The
/// graph is the standalone block with local vertex ids; constraint
/// vertices are local too.
pub fn solve_block(
    local: &Graph,
    external: Option<(CutDemand, VertexId)>,
    reflex_at: &[VertexId],
    opts: TestOptions,
) -> Option<BlockPlan> {
    if local.edge_count() == 1 {
        return Some(BlockPlan::Trivial);
    }
    let class = crate::graph::validate_partial2tree(local);
    let is_cycle = class == GraphClass::SimpleCycle;

    // Cycles without a gadget-demanding constraint use the closed form.
    let needs_gadget_for_external =
        matches!(external, Some((CutDemand::ExternalReflexAngle, _)));
    if is_cycle && !needs_gadget_for_external {
        let order = cycle_order(local);
        let mut demands: Vec<CycleDemand> =
            reflex_at.iter().map(|&c| CycleDemand::ChildReflex(c)).collect();
        match external {
            Some((CutDemand::ExternalFlatAngle, c)) => demands.push(CycleDemand::ExternalFlat(c)),
            Some((CutDemand::ExternalNonRightAngle, c)) => {
                demands.push(CycleDemand::ExternalNonRight(c))
            }
            Some((CutDemand::ReflexAngle, c)) => demands.push(CycleDemand::ChildReflex(c)),
            _ => {}
        }
        let angles = cycle_feasible(&order, &demands)?;
        return Some(BlockPlan::Cycle(order, angles));
    }

    // Gadget every reflex demand, then run the constrained block test.
    let mut gg = local.clone();
    let mut stages: Vec<(Graph, Gadget)> = Vec::new();
    let mut forced_root = None;
    if let Some((CutDemand::ExternalReflexAngle, c)) = external {
        let (next, gd) = apply_reflex_gadget(&gg, c);
        forced_root = Some(gd.four_path_edge);
        stages.push((gg, gd));
        gg = next;
    }
    for &c in reflex_at {
        let (next, gd) = apply_reflex_gadget(&gg, c);
        stages.push((gg, gd));
        gg = next;
    }
    let constraint = match external {
        Some((CutDemand::ExternalReflexAngle, _)) => {
            RootConstraint::ForcedRootChain(forced_root.unwrap())
        }
        Some((CutDemand::ExternalFlatAngle, c)) => RootConstraint::ExternalFlatAngle(c),
        Some((CutDemand::ExternalNonRightAngle, c)) => RootConstraint::ExternalNonRightAngle(c),
        _ => RootConstraint::None,
    };
    let witness = test_block(&gg, constraint, opts).ok()??;
    let tree = build_spq_star(&gg).ok()?;
    let mut table = DpTable::new(&gg, tree, opts);
    let assignment = construct(&mut table, &witness).ok()?;
    Some(BlockPlan::Sp {
        gadgeted: gg,
        stages,
        assignment: Box::new(assignment),
        witness,
    })
}

/// Realize a solved block as directions over the original local graph.
fn realize_block(local: &Graph, plan: &BlockPlan) -> Vec<u8> {
    match plan {
        BlockPlan::Trivial => vec![0, 2],
        BlockPlan::Cycle(order, angles) => {
            let rep = crate::realize::synthesize_cycle(local, order, angles)
                .expect("cycle plan realizes");
            rep.dir
        }
        BlockPlan::Sp {
            gadgeted,
            stages,
            assignment,
            ..
        } => {
            let tree = build_spq_star(gadgeted).expect("gadgeted block is SP");
            let mut rep = crate::realize::synthesize(gadgeted, &tree, assignment)
                .expect("assignment realizes");
            debug_assert!(rep.validate().ok());
            // Unwind gadgets innermost last.
            for (before, gd) in stages.iter().rev() {
                let dirs = strip_one_gadget(before, &rep, std::slice::from_ref(gd));
                rep = OrthoRep::from_directions(before, dirs)
                    .expect("stripped representation stays valid");
                debug_assert!(rep.validate().ok());
            }
            let _ = local;
            rep.dir
        }
    }
}

/// Outcome of the composition test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum P2tOutcome {
    No,
    Yes { root_block: usize },
}

/// Instrumentation: how much label work the test performed.
#[derive(Clone, Copy, Debug, Default)]
pub struct LabelStats {
    pub local_tests: usize,
    pub cumulative_updates: usize,
}

struct Composer<'g> {
    g: &'g Graph,
    bc: BcTree,
    opts: TestOptions,
    lazy: bool,
    /// Local label per (block, parent-choice); parent = cut index + 1, 0
    /// for the root configuration.
    labels: HashMap<(usize, usize), bool>,
    stats: LabelStats,
}

impl<'g> Composer<'g> {
    fn parent_key(&self, block: usize, parent: Option<VertexId>) -> (usize, usize) {
        let k = match parent {
            None => 0,
            Some(c) => self.bc.cut_index(c).unwrap() + 1,
        };
        (block, k)
    }

    fn local_label(&mut self, block: usize, parent: Option<VertexId>) -> bool {
        let key = self.parent_key(block, parent);
        if let Some(&v) = self.labels.get(&key) {
            return v;
        }
        let v = self.compute_label(block, parent);
        self.labels.insert(key, v);
        v
    }

    fn compute_label(&mut self, block: usize, parent: Option<VertexId>) -> bool {
        self.stats.local_tests += 1;
        let cfg = derive_constraints(self.g, &self.bc, block, parent);
        if self.bc.blocks[block].trivial {
            return true;
        }
        let (local, map) = extract_block(self.g, &self.bc.blocks[block]);
        let to_local = |v: VertexId| map.iter().position(|&x| x == v).unwrap() as VertexId;
        let external = cfg.external.map(|d| (d, to_local(cfg.parent.unwrap())));
        let reflex: Vec<VertexId> = cfg.reflex_at.iter().map(|&c| to_local(c)).collect();
        solve_block(&local, external, &reflex, self.opts).is_some()
    }

    fn precompute_all_labels(&mut self) {
        for block in 0..self.bc.blocks.len() {
            self.local_label(block, None);
            for &ci in &self.bc.block_cuts[block].clone() {
                let c = self.bc.cutvertices[ci];
                self.local_label(block, Some(c));
            }
        }
    }
}

/// BC-tree node: blocks then cutvertices.
fn bc_nodes(bc: &BcTree) -> (usize, Vec<Vec<usize>>) {
    let nb = bc.blocks.len();
    let total = nb + bc.cutvertices.len();
    let mut adj = vec![Vec::new(); total];
    for (b, cuts) in bc.block_cuts.iter().enumerate() {
        for &ci in cuts {
            adj[b].push(nb + ci);
            adj[nb + ci].push(b);
        }
    }
    (total, adj)
}

/// Test a connected partial 2-tree for rectilinear planarity; biconnected
/// inputs delegate to the single-block machinery.
pub fn test_partial2tree(g: &Graph, opts: TestOptions) -> P2tOutcome {
    test_partial2tree_with_stats(g, opts, false).0
}

pub fn test_partial2tree_with_stats(
    g: &Graph,
    opts: TestOptions,
    lazy: bool,
) -> (P2tOutcome, LabelStats) {
    let bc = build_bc_tree(g);
    if bc.blocks.len() <= 1 {
        let ok = if g.edge_count() == 0 {
            true
        } else {
            let mut comp = Composer {
                g,
                bc,
                opts,
                lazy,
                labels: HashMap::new(),
                stats: LabelStats::default(),
            };
            comp.local_label(0, None)
        };
        return (
            if ok {
                P2tOutcome::Yes { root_block: 0 }
            } else {
                P2tOutcome::No
            },
            LabelStats::default(),
        );
    }
    let mut comp = Composer {
        g,
        bc,
        opts,
        lazy,
        labels: HashMap::new(),
        stats: LabelStats::default(),
    };
    if !comp.lazy {
        comp.precompute_all_labels();
    }
    let (total, adj) = bc_nodes(&comp.bc);
    let nb = comp.bc.blocks.len();

    // First visit: root the BC-tree at block 0 and compute cumulative
    // labels bottom-up.
    let root0 = 0usize;
    let mut parent = vec![usize::MAX; total];
    let mut order = Vec::with_capacity(total);
    let mut stack = vec![root0];
    let mut seen = vec![false; total];
    seen[root0] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut cum = vec![true; total];
    let mut false_children = vec![0usize; total];
    for &x in order.iter().rev() {
        let mut ok = true;
        for &y in &adj[x] {
            if y != parent[x] && !cum[y] {
                ok = false;
            }
        }
        false_children[x] = adj[x]
            .iter()
            .filter(|&&y| y != parent[x] && !cum[y])
            .count();
        if x < nb {
            let pc = if parent[x] == usize::MAX {
                None
            } else {
                Some(comp.bc.cutvertices[parent[x] - nb])
            };
            ok = ok && comp.local_label(x, pc);
        }
        cum[x] = ok;
        comp.stats.cumulative_updates += 1;
    }

    if cum[root0] {
        let stats = comp.stats;
        return (P2tOutcome::Yes { root_block: root0 }, stats);
    }

    // Sources of falseness: false block-nodes whose children are all true.
    let sources: Vec<usize> = (0..total)
        .filter(|&x| x < nb && !cum[x] && false_children[x] == 0)
        .collect();
    debug_assert!(!sources.is_empty());
    if sources.len() >= 2 {
        let stats = comp.stats;
        return (P2tOutcome::No, stats);
    }
    let pivot = sources[0];

    // Retry every leaf block in the subtree under the pivot, reusing
    // unchanged subtrees; `down` carries the cumulative label of everything
    // hanging above the current node once the root moves below it.
    let mut result = P2tOutcome::No;
    // DFS from pivot into its subtree (away from parent[pivot]).
    let mut dfs: Vec<(usize, bool)> = vec![(pivot, true)];
    let mut down_stack: Vec<bool> = Vec::new();
    // down value entering the pivot: conjunction over everything outside
    // the pivot's subtree. All of it was true (single source), except that
    // the pivot's own label changes with its new parent later.
    let mut entered = vec![false; total];
    while let Some((x, first)) = dfs.pop() {
        if !first {
            down_stack.pop();
            continue;
        }
        entered[x] = true;
        let down_above = down_stack.last().copied().unwrap_or(true);
        comp.stats.cumulative_updates += 1;

        // Children of x in the original orientation.
        let kids: Vec<usize> = adj[x].iter().copied().filter(|&y| y != parent[x]).collect();
        if x < nb {
            // Candidate root: all neighbors' subtrees must be true.
            let kids_ok = kids.iter().all(|&y| cum[y]);
            if kids_ok && down_above && comp.local_label(x, None) {
                result = P2tOutcome::Yes { root_block: x };
                break;
            }
        }
        // Descend only while a single false child exists (other branches
        // cannot improve) or through true children? Moving the root into a
        // true subtree leaves the false source outside: hopeless. Descend
        // into false children only.
        dfs.push((x, false));
        let down_here = |comp: &mut Composer, toward: usize| -> bool {
            // Everything except the subtree of `toward`: other children's
            // cumulatives, the down value from above, and x's own local
            // label with its new parent (the cutvertex toward `toward`).
            let others_ok = kids
                .iter()
                .all(|&y| y == toward || cum[y]);
            if x < nb {
                let new_parent = comp.bc.cutvertices[toward - nb];
                others_ok && down_above && comp.local_label(x, Some(new_parent))
            } else {
                others_ok && down_above
            }
        };
        for &y in kids.iter() {
            if !cum[y] {
                let d = down_here(&mut comp, y);
                down_stack.push(d);
                dfs.push((y, true));
            }
        }
    }
    let _ = entered;
    let stats = comp.stats;
    (result, stats)
}

/// Realize a positive composition outcome as one representation of the
/// whole graph; blocks embed into the faces their constraints reserved.
pub fn realize_partial2tree(g: &Graph, opts: TestOptions) -> Option<OrthoRep> {
    if g.edge_count() == 0 {
        return OrthoRep::from_directions(g, Vec::new()).ok();
    }
    let outcome = test_partial2tree(g, opts);
    let root_block = match outcome {
        P2tOutcome::No => return None,
        P2tOutcome::Yes { root_block } => root_block,
    };
    let bc = build_bc_tree(g);
    if bc.blocks.len() == 1 {
        let (local, map) = extract_block(g, &bc.blocks[0]);
        let plan = solve_block(&local, None, &[], opts)?;
        let dirs_local = realize_block(&local, &plan);
        let mut dirs: Vec<Option<u8>> = vec![None; 2 * g.edge_count()];
        translate_dirs(
            g,
            &bc.blocks[0].edges,
            &local,
            &map,
            &dirs_local,
            0,
            &mut dirs,
        );
        let dirs: Vec<u8> = dirs.into_iter().map(|d| d.expect("all darts placed")).collect();
        return OrthoRep::from_directions(g, dirs).ok();
    }

    // Root the BC-tree, then merge blocks outward; at each cutvertex the
    // blocks with more incident edges go first so pendants fill the gaps.
    let (total, adj) = bc_nodes(&bc);
    let nb = bc.blocks.len();
    let mut parent = vec![usize::MAX; total];
    let mut bfs = std::collections::VecDeque::from([root_block]);
    let mut seen = vec![false; total];
    seen[root_block] = true;
    let mut block_order = Vec::new();
    while let Some(x) = bfs.pop_front() {
        if x < nb {
            block_order.push(x);
        }
        let mut kids: Vec<usize> = adj[x].iter().copied().filter(|&y| !seen[y]).collect();
        if x >= nb {
            let c = bc.cutvertices[x - nb];
            kids.sort_by_key(|&y| std::cmp::Reverse(bc.blocks[y].degree_in(g, c)));
        }
        for y in kids {
            seen[y] = true;
            parent[y] = x;
            bfs.push_back(y);
        }
    }

    let mut dirs: Vec<Option<u8>> = vec![None; 2 * g.edge_count()];
    let mut placed_at: HashMap<VertexId, Vec<Vec<u8>>> = HashMap::new();
    for &b in &block_order {
        let pc = if parent[b] == usize::MAX {
            None
        } else {
            Some(bc.cutvertices[parent[b] - nb])
        };
        let cfg = derive_constraints(g, &bc, b, pc);
        let (local, map) = extract_block(g, &bc.blocks[b]);
        let to_local = |v: VertexId| map.iter().position(|&x| x == v).unwrap() as VertexId;
        let external = cfg.external.map(|d| (d, to_local(cfg.parent.unwrap())));
        let reflex: Vec<VertexId> = cfg.reflex_at.iter().map(|&c| to_local(c)).collect();
        let plan = match solve_block(&local, external, &reflex, opts) {
            Some(p) => p,
            None => {
                debug_assert!(false, "labeled-true block {b} failed to solve");
                return None;
            }
        };
        let dirs_local = realize_block(&local, &plan);
        let slots_of = |c: VertexId, rot: u8| -> Vec<u8> {
            let lc = to_local(c);
            let mut out = Vec::new();
            for k in 0..local.edge_count() as EdgeId {
                let (la, lb) = local.endpoints(k);
                if la == lc {
                    out.push((dirs_local[dart(k, 0) as usize] + rot) % 4);
                } else if lb == lc {
                    out.push((dirs_local[dart(k, 1) as usize] + rot) % 4);
                }
            }
            out.sort_unstable();
            out
        };
        let rot = match pc {
            None => 0,
            Some(c) => {
                let child = slots_of(c, 0);
                let placed = placed_at.get(&c).cloned().unwrap_or_default();
                match fit_rotation(&child, &placed) {
                    Some(r) => r,
                    None => {
                        debug_assert!(false, "block {b} does not fit at cutvertex {c}");
                        return None;
                    }
                }
            }
        };
        translate_dirs(
            g,
            &bc.blocks[b].edges,
            &local,
            &map,
            &dirs_local,
            rot,
            &mut dirs,
        );
        // Record this block's slots at every cutvertex it meets.
        for &ci in &bc.block_cuts[b] {
            let c = bc.cutvertices[ci];
            placed_at.entry(c).or_default().push(slots_of(c, rot));
        }
    }
    let dirs: Vec<u8> = dirs.into_iter().map(|d| d.expect("all darts placed")).collect();
    let rep = OrthoRep::from_directions(g, dirs).ok()?;
    debug_assert!(rep.validate().ok(), "merged representation must validate");
    Some(rep)
}

fn translate_dirs(
    g: &Graph,
    block_edges: &[EdgeId],
    local: &Graph,
    map: &[VertexId],
    dirs_local: &[u8],
    rot: u8,
    out: &mut [Option<u8>],
) {
    for (k, &ge) in block_edges.iter().enumerate() {
        let (la, _) = local.endpoints(k as EdgeId);
        let global_from = map[la as usize];
        let (ga, _) = g.endpoints(ge);
        let d_local = dart(k as EdgeId, 0);
        let d_global = dart(ge, if ga == global_from { 0 } else { 1 });
        out[d_global as usize] = Some((dirs_local[d_local as usize] + rot) % 4);
        out[(d_global ^ 1) as usize] = Some((dirs_local[(d_local ^ 1) as usize] + rot) % 4);
    }
}

/// Choose a rotation placing the child's darts at the shared cutvertex
/// onto free direction slots without crossing any already-placed block's
/// slot set. On four slots the only crossing pattern is two interleaved
/// opposite pairs. Smallest feasible rotation wins.
fn fit_rotation(child_slots: &[u8], placed: &[Vec<u8>]) -> Option<u8> {
    let taken: Vec<u8> = placed.iter().flatten().copied().collect();
    'rot: for r in 0..4u8 {
        let rotated: Vec<u8> = child_slots.iter().map(|&d| (d + r) % 4).collect();
        for &s in &rotated {
            if taken.contains(&s) {
                continue 'rot;
            }
        }
        let opposite =
            |set: &[u8]| set.len() == 2 && (set[0] + 2) % 4 == set[1] % 4;
        if opposite(&rotated) {
            for p in placed {
                if opposite(p) {
                    continue 'rot;
                }
            }
        }
        return Some(r);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn opts() -> TestOptions {
        TestOptions::default()
    }

    #[test]
    fn star_of_pendants() {
        let g = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(matches!(
            test_partial2tree(&g, opts()),
            P2tOutcome::Yes { .. }
        ));
        let rep = realize_partial2tree(&g, opts()).unwrap();
        assert!(rep.validate().ok());
    }

    #[test]
    fn two_squares_share_corner() {
        let g = parse_graph(
            r#"{"n":7,"edges":[[0,1],[1,2],[2,3],[3,0],[0,4],[4,5],[5,6],[6,0]]}"#,
        )
        .unwrap();
        // Drawable: the two squares sit in opposite quadrants around the
        // shared corner.
        assert!(matches!(
            test_partial2tree(&g, opts()),
            P2tOutcome::Yes { .. }
        ));
        let rep = realize_partial2tree(&g, opts()).unwrap();
        let report = rep.validate();
        assert!(report.ok(), "{:?}", report.violations);
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n)
            .map(|i| (i as u32, ((i + 1) % n) as u32))
            .collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn gadget_structure() {
        let g = cycle(4);
        let (gg, gd) = apply_reflex_gadget(&g, 0);
        assert_eq!(gg.vertex_count(), g.vertex_count() + 6);
        assert_eq!(gg.degree(gd.u), 4);
        assert_eq!(gg.degree(gd.v), 4);
        assert_eq!(gg.degree(gd.c), 2);
        assert!(matches!(
            crate::graph::validate_partial2tree(&gg),
            GraphClass::SpBlock
        ));
        // Gadgeted C4 rooted at the 4-path tests positive.
        let w = test_block(&gg, RootConstraint::ForcedRootChain(gd.four_path_edge), opts())
            .unwrap();
        assert!(w.is_some());
    }
}
