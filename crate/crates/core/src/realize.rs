//! Turn a node assignment into a concrete zero-bend orthogonal
//! representation, validate it, compact it onto the integer grid, and emit
//! SVG/JSON.
//!
//! Synthesis assigns one absolute direction per dart by walking the rooted
//! SPQ*-tree: chains propagate their turn sequences, P-nodes place their
//! children's dart blocks around the poles (all corners are 90 degrees at a
//! degree-4 pole; at a degree-3 pole the join's angle variables place the
//! single flat corner), and S-nodes stitch children along the path.

use crate::graph::{Graph, VertexId};
use crate::rep::{dart, Dart, OrthoRep, RepError};
use crate::spirality::ParallelJoin;
use crate::spq::{NodeKind, SpqTree};
use crate::tester::NodeAssignment;

struct Synth<'a> {
    g: &'a Graph,
    tree: &'a SpqTree,
    asg: &'a NodeAssignment,
    dir: Vec<Option<u8>>,
}

/// Where a placed component leaves off at its exit pole.
#[derive(Clone, Copy, Debug)]
enum Exit {
    /// Chain-like exit: the direction of travel arriving at the pole.
    Heading(u8),
    /// Parallel-structure exit: where the outside continuation sits.
    ExtSlot(u8),
}

impl<'a> Synth<'a> {
    fn set_dart(&mut self, d: Dart, dir: u8) {
        debug_assert!(
            self.dir[d as usize].is_none() || self.dir[d as usize] == Some(dir % 4),
            "dart {d} assigned twice with different directions"
        );
        self.dir[d as usize] = Some(dir % 4);
        self.dir[(d ^ 1) as usize] = Some((dir + 2) % 4);
    }

    fn dart_from(&self, from: VertexId, to: VertexId) -> Dart {
        for &e in self.g.incident_edges(from) {
            if self.g.other_end(e, from) == to {
                let (a, _) = self.g.endpoints(e);
                return dart(e, if a == from { 0 } else { 1 });
            }
        }
        panic!("no edge {from}-{to}");
    }

    /// Width in quarter turns of a child's dart block at one of its poles;
    /// all intra-block corners are 90 degrees.
    fn block_width(&self, node: usize, at_u: bool) -> u8 {
        let indeg = if at_u {
            self.asg.view.indeg[node].0
        } else {
            self.asg.view.indeg[node].1
        };
        indeg - 1
    }

    /// The gap between the outside anchor dart and a component's first dart
    /// at its entry pole: 2 - alpha_u^r for a two-child parallel head, one
    /// quarter turn for a three-child head (degree-4 pole).
    fn entry_gap(&self, node: usize) -> u8 {
        match self.tree.kind(node) {
            NodeKind::P => {
                if self.asg.view.children[node].len() == 3 {
                    1
                } else {
                    let join = self.asg.p2_join[node].expect("join fixed for 2-child P");
                    2 - join.alpha_u_r()
                }
            }
            NodeKind::S => {
                let head = self.asg.view.children[node][0];
                self.entry_gap(head)
            }
            NodeKind::QStar => panic!("chains have no entry gap"),
        }
    }

    /// The parallel node realizing a component's exit block (the component
    /// itself, or the tail of a series).
    fn exit_join(&self, node: usize) -> Option<ParallelJoin> {
        match self.tree.kind(node) {
            NodeKind::P => self.asg.p2_join[node],
            NodeKind::S => {
                let tail = *self.asg.view.children[node].last().unwrap();
                self.exit_join(tail)
            }
            NodeKind::QStar => unreachable!("chain exits use headings"),
        }
    }

    /// Place a component whose dart block at its entry pole starts at
    /// direction `start` (counterclockwise-first slot).
    fn place(&mut self, node: usize, start: u8) -> Exit {
        match self.tree.kind(node) {
            NodeKind::QStar => self.place_chain(node, start),
            NodeKind::S => self.place_series(node, start),
            NodeKind::P => self.place_parallel(node, start),
        }
    }

    fn place_chain(&mut self, node: usize, start: u8) -> Exit {
        let chain = self.tree.chain(node);
        let (u, _) = self.asg.view.poles[node];
        let mut verts = chain.vertices.clone();
        let mut turns: Vec<i8> = self.asg.turns[node].clone();
        if verts[0] != u {
            verts.reverse();
            turns.reverse();
            for t in turns.iter_mut() {
                *t = -*t;
            }
        }
        let mut heading = start;
        for (i, w) in verts.windows(2).enumerate() {
            if i > 0 {
                let t = turns[i - 1] as i32;
                heading = ((heading as i32 - t).rem_euclid(4)) as u8;
            }
            let d = self.dart_from(w[0], w[1]);
            self.set_dart(d, heading);
        }
        Exit::Heading(heading)
    }

    fn place_series(&mut self, node: usize, start: u8) -> Exit {
        let children = self.asg.view.children[node].clone();
        let mut cur_start = start;
        let mut exit = Exit::Heading(start);
        for (i, &c) in children.iter().enumerate() {
            if i > 0 {
                cur_start = self.junction_start(exit, c);
            }
            exit = self.place(c, cur_start);
        }
        exit
    }

    /// Block start of the next component at a series junction, given the
    /// previous component's exit.
    fn junction_start(&mut self, prev: Exit, next: usize) -> u8 {
        match prev {
            Exit::ExtSlot(s) => s,
            Exit::Heading(h) => {
                // Previous side is a single dart; the next side owns the
                // corner via its entry structure.
                let anchor = (h + 2) % 4;
                (anchor + self.entry_gap(next)) % 4
            }
        }
    }

    fn place_parallel(&mut self, node: usize, start: u8) -> Exit {
        let order = self.asg.p_order[node].clone();
        debug_assert!(!order.is_empty(), "P-node order must be fixed");
        let (_, v) = self.asg.view.poles[node];
        if order.len() == 3 {
            // Degree-4 poles on both ends: slots 90 degrees apart, children
            // in right-to-left counterclockwise order at the bottom pole.
            let [l, c, r] = [order[0], order[1], order[2]];
            let exits = [
                self.place(r, start),
                self.place(c, (start + 1) % 4),
                self.place(l, (start + 2) % 4),
            ];
            // At the top pole the counterclockwise order is ext, l, c, r.
            let ext_v = self.exit_block_first(&exits[2], l) + 4 - 1;
            for (k, (&exit, &ch)) in exits.iter().zip([r, c, l].iter()).enumerate() {
                let first = self.exit_block_first(&exit, ch);
                let expect = (ext_v + 3 - k as u8) % 4;
                debug_assert_eq!(first % 4, expect % 4, "p3 child arrival slot");
            }
            Exit::ExtSlot(ext_v % 4)
        } else {
            let join = self.asg.p2_join[node].expect("join fixed for 2-child P");
            let (l, r) = (order[0], order[1]);
            let wid_r = self.block_width(r, true);
            let wid_l = self.block_width(l, true);
            let wid_ext = if self.asg.view.outdeg[node].0 == 2 { 1 } else { 0 };
            let m = (join.alpha_u_l() + join.alpha_u_r())
                .checked_sub(wid_ext + wid_r + wid_l)
                .expect("middle corner must be positive");
            debug_assert!(m >= 1, "blocks would overlap at the entry pole");
            let exit_r = self.place(r, start);
            let exit_l = self.place(l, (start + wid_r + m) % 4);
            // Exit pole: counterclockwise order is ext, l-block, r-block.
            let lf = self.exit_block_first(&exit_l, l);
            let ext_from_l = (lf + 4 - (2 - join.alpha_v_l())) % 4;
            let rl = self.exit_block_last(&exit_r, r);
            let ext_from_r = (rl + (2 - join.alpha_v_r())) % 4;
            debug_assert_eq!(
                ext_from_l, ext_from_r,
                "two-child parallel exit corners disagree at pole {v}"
            );
            Exit::ExtSlot(ext_from_r)
        }
    }

    /// First (counterclockwise-lowest) dart direction of a child's block at
    /// its exit pole.
    fn exit_block_first(&self, exit: &Exit, child: usize) -> u8 {
        match *exit {
            Exit::Heading(h) => (h + 2) % 4,
            Exit::ExtSlot(s) => {
                // The child's block at its exit pole spans ccw [l..r] and
                // its ext slot sits one corner beyond r; walk back over the
                // exit corner and the block width. A series child exits
                // through its tail parallel node.
                let width = self.block_width(child, false);
                match self.exit_join(child) {
                    Some(j) => (s + 8 - (2 - j.alpha_v_r()) - width) % 4,
                    None => (s + 8 - 1 - width) % 4,
                }
            }
        }
    }

    fn exit_block_last(&self, exit: &Exit, child: usize) -> u8 {
        match *exit {
            Exit::Heading(h) => (h + 2) % 4,
            Exit::ExtSlot(s) => {
                let join = self.asg.p2_join[child];
                match join {
                    Some(j) => (s + 4 - (2 - j.alpha_v_r())) % 4,
                    None => (s + 4 - 1) % 4,
                }
            }
        }
    }
}

impl ParallelJoin {
    fn alpha_u_l(&self) -> u8 {
        self.alpha.0
    }
    fn alpha_v_l(&self) -> u8 {
        self.alpha.1
    }
    fn alpha_u_r(&self) -> u8 {
        self.alpha.2
    }
    fn alpha_v_r(&self) -> u8 {
        self.alpha.3
    }
}

/// Realize a block assignment as a representation with the reference chain
/// on the external face.
pub fn synthesize(g: &Graph, tree: &SpqTree, asg: &NodeAssignment) -> Result<OrthoRep, RepError> {
    let mut synth = Synth {
        g,
        tree,
        asg,
        dir: vec![None; 2 * g.edge_count()],
    };
    let root = asg.view.root;
    // Reference chain from s, seeded east.
    let exit = synth.place_chain(root, 0);
    let child = asg.view.root_child();
    // Junction at s: the chain's dart at s is the anchor for the child's
    // entry block.
    let (s, t) = asg.view.poles[root];
    let s_anchor = synth.dir[synth.dart_from(s, next_on_chain(tree, root, s)) as usize]
        .expect("reference chain placed");
    let child_start = (s_anchor + synth.entry_gap(child)) % 4;
    let child_exit = synth.place(child, child_start);
    // Closure at t: the child's exit slot must point back along the chain.
    let t_dart = synth.dart_from(t, next_on_chain(tree, root, t));
    let t_dir = synth.dir[t_dart as usize].expect("reference chain placed");
    match child_exit {
        Exit::ExtSlot(slot) => debug_assert_eq!(
            slot, t_dir,
            "root closure failed: child exit {slot} vs chain dart {t_dir}"
        ),
        Exit::Heading(_) => unreachable!("root child exits through a parallel structure"),
    }
    let _ = exit;
    let dirs: Vec<u8> = synth
        .dir
        .iter()
        .map(|d| d.expect("every dart must be placed"))
        .collect();
    OrthoRep::from_directions(g, dirs)
}

fn next_on_chain(tree: &SpqTree, q: usize, from: VertexId) -> VertexId {
    let ch = tree.chain(q);
    if ch.vertices[0] == from {
        ch.vertices[1]
    } else {
        debug_assert_eq!(*ch.vertices.last().unwrap(), from);
        ch.vertices[ch.vertices.len() - 2]
    }
}

/// Realize a simple cycle given interior angles in cycle order: the cycle
/// is walked with its interior on the right.
pub fn synthesize_cycle(
    g: &Graph,
    order: &[VertexId],
    interior_angles: &[i32],
) -> Result<OrthoRep, RepError> {
    let n = order.len();
    let mut dirs = vec![0u8; 2 * g.edge_count()];
    let mut heading = 0u8;
    for i in 0..n {
        if i > 0 {
            let t = 2 - interior_angles[i];
            heading = ((heading as i32 - t).rem_euclid(4)) as u8;
        }
        let from = order[i];
        let to = order[(i + 1) % n];
        let e = g
            .incident_edges(from)
            .iter()
            .copied()
            .find(|&e| g.other_end(e, from) == to)
            .expect("cycle edge");
        let (a, _) = g.endpoints(e);
        let d = dart(e, if a == from { 0 } else { 1 });
        dirs[d as usize] = heading;
        dirs[(d ^ 1) as usize] = (heading + 2) % 4;
    }
    OrthoRep::from_directions(g, dirs)
}

/// Byte-deterministic SVG: one line per edge, one circle per vertex, ids
/// in order. Requires coordinates.
pub fn to_svg(rep: &OrthoRep) -> Result<String, RepError> {
    let coords = rep
        .coords
        .as_ref()
        .ok_or_else(|| RepError::Inconsistent("no coordinates for svg output".into()))?;
    const SCALE: i64 = 40;
    const PAD: i64 = 30;
    let min_x = coords.iter().map(|c| c.0).min().unwrap_or(0);
    let max_x = coords.iter().map(|c| c.0).max().unwrap_or(0);
    let min_y = coords.iter().map(|c| c.1).min().unwrap_or(0);
    let max_y = coords.iter().map(|c| c.1).max().unwrap_or(0);
    let width = (max_x - min_x) * SCALE + 2 * PAD;
    let height = (max_y - min_y) * SCALE + 2 * PAD;
    let px = |x: i64| PAD + (x - min_x) * SCALE;
    // Flip y so larger grid y points up on screen.
    let py = |y: i64| PAD + (max_y - y) * SCALE;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    for (e, &(a, b)) in rep.edges.iter().enumerate() {
        let (xa, ya) = coords[a as usize];
        let (xb, yb) = coords[b as usize];
        out.push_str(&format!(
            "  <line id=\"e{e}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"2\"/>\n",
            px(xa),
            py(ya),
            px(xb),
            py(yb)
        ));
    }
    for (v, &(x, y)) in coords.iter().enumerate() {
        out.push_str(&format!(
            "  <circle id=\"v{v}\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
            px(x),
            py(y)
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{v}</text>\n",
            px(x),
            py(y) - 8
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(serde::Serialize, serde::Deserialize)]
struct RepDoc {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    dirs: Vec<u8>,
    external: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<(i64, i64)>>,
}

/// Full representation as JSON; parses back with `rep_from_json`.
pub fn to_json(rep: &OrthoRep) -> String {
    let doc = RepDoc {
        n: rep.n,
        edges: rep.edges.clone(),
        dirs: rep.dir.clone(),
        external: rep.external,
        coords: rep.coords.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn rep_from_json(text: &str) -> Result<OrthoRep, RepError> {
    let doc: RepDoc =
        serde_json::from_str(text).map_err(|e| RepError::Inconsistent(e.to_string()))?;
    let g = Graph::new(doc.n, &doc.edges).map_err(|e| RepError::Inconsistent(e.to_string()))?;
    let mut rep = OrthoRep::from_directions(&g, doc.dirs)?;
    rep.coords = doc.coords;
    if rep.external != doc.external {
        return Err(RepError::Inconsistent("external face mismatch".into()));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spirality::{measure_spirality, ComponentCtx};
    use crate::spq::build_spq_star;
    use crate::tester::{construct, test_block, DpTable, RootConstraint, TestOptions};

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

    fn realize_and_check(g: &Graph) {
        let w = test_block(g, RootConstraint::None, TestOptions::default())
            .unwrap()
            .expect("drawable");
        let tree = build_spq_star(g).unwrap();
        let mut table = DpTable::new(g, tree.clone(), TestOptions::default());
        let asg = construct(&mut table, &w).unwrap();
        let rep = synthesize(g, &tree, &asg).unwrap();
        let report = rep.validate();
        assert!(report.ok(), "validation: {:?}", report.violations);
        // Every node measures its assigned spirality, including the root.
        for node in 0..tree.node_count() {
            if node != w.root && asg.view.parent[node] == crate::spq::NO_PARENT {
                continue;
            }
            let ctx = ComponentCtx::from_view(g, &tree, &asg.view, node);
            let measured = measure_spirality(&rep, g, &ctx);
            assert_eq!(
                measured, asg.sigma[node],
                "node {node} measured {measured} assigned {}",
                asg.sigma[node]
            );
        }
    }

    #[test]
    fn theta333_realizes() {
        realize_and_check(&theta(&[3, 3, 3]));
    }

    #[test]
    fn theta_variants_realize() {
        realize_and_check(&theta(&[3, 3, 4]));
        realize_and_check(&theta(&[4, 4, 4]));
        realize_and_check(&theta(&[3, 5, 2]));
        // A four-chain bundle needs length-5 legs so the forced +-2 span
        // still pairs with the reference chain at the root.
        realize_and_check(&theta(&[5, 5, 5, 3]));
        // All-short four-chain bundles contain K_{2,3} and stay undrawable.
        let w = test_block(
            &theta(&[2, 2, 2, 2]),
            RootConstraint::None,
            TestOptions::default(),
        )
        .unwrap();
        assert!(w.is_none());
    }

    #[test]
    fn cycle_square() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let order: Vec<VertexId> = vec![0, 1, 2, 3];
        let rep = synthesize_cycle(&g, &order, &[1, 1, 1, 1]).unwrap();
        assert!(rep.validate().ok());
    }

    #[test]
    fn svg_and_json_emission() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let order: Vec<VertexId> = vec![0, 1, 2, 3];
        let mut rep = synthesize_cycle(&g, &order, &[1, 1, 1, 1]).unwrap();
        assert!(matches!(to_svg(&rep), Err(_)), "svg needs coordinates");
        rep.coords = Some(crate::compact::compact(&rep));
        let svg1 = to_svg(&rep).unwrap();
        let svg2 = to_svg(&rep).unwrap();
        assert_eq!(svg1, svg2);
        assert_eq!(svg1.matches("<line").count(), 4);
        assert_eq!(svg1.matches("<circle").count(), 4);
        let json = to_json(&rep);
        let back = rep_from_json(&json).unwrap();
        assert_eq!(back.dir, rep.dir);
        assert_eq!(back.coords, rep.coords);
        assert_eq!(to_json(&back), json);
    }
}
