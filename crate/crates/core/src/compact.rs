//! Grid compaction: refine the representation until every internal face is
//! a rectangle (modulo collinear subdivision vertices), wrap the drawing in
//! a bounding box, and assign integer coordinates with two independent
//! longest-path passes over the vertical and horizontal chain classes.

use crate::graph::{Graph, VertexId};
use crate::rep::{dart, OrthoRep};

struct Work {
    n: usize,
    /// (a, b, direction of the a->b dart)
    edges: Vec<(VertexId, VertexId, u8)>,
}

impl Work {
    fn from_rep(rep: &OrthoRep) -> Work {
        Work {
            n: rep.n,
            edges: rep
                .edges
                .iter()
                .enumerate()
                .map(|(e, &(a, b))| (a, b, rep.dir[dart(e as u32, 0) as usize]))
                .collect(),
        }
    }

    fn rep(&self) -> OrthoRep {
        let pairs: Vec<(VertexId, VertexId)> =
            self.edges.iter().map(|&(a, b, _)| (a, b)).collect();
        let g = Graph::new(self.n, &pairs).expect("working graph stays valid");
        let mut dirs = Vec::with_capacity(2 * self.edges.len());
        for &(_, _, d) in &self.edges {
            dirs.push(d);
            dirs.push((d + 2) % 4);
        }
        OrthoRep::from_directions(&g, dirs).expect("working rep stays valid")
    }

    fn fresh_vertex(&mut self) -> VertexId {
        let v = self.n as VertexId;
        self.n += 1;
        v
    }

    /// Split edge `e` by a fresh vertex; both halves keep the direction.
    fn split_edge(&mut self, e: usize) -> VertexId {
        let (a, b, d) = self.edges[e];
        let z = self.fresh_vertex();
        self.edges[e] = (a, z, d);
        self.edges.push((z, b, d));
        z
    }
}

/// Wrap the drawing with a bounding rectangle bridged to one corner of the
/// external face, making the old external region an internal face.
fn wrap_external(w: &mut Work) {
    let rep = w.rep();
    let ext = &rep.faces[rep.external];
    let k = ext.len();
    // Anchor at the first boundary corner with negative turn.
    let mut anchor = None;
    for i in 0..k {
        let d1 = ext[i];
        let d2 = ext[(i + 1) % k];
        if rep.turn(d1, d2) < 0 {
            anchor = Some((rep.head(d1), rep.dir[d1 as usize]));
            break;
        }
    }
    let (wv, h) = anchor.expect("external face has a negative corner");
    let b4 = w.fresh_vertex();
    let c1 = w.fresh_vertex();
    let c2 = w.fresh_vertex();
    let c3 = w.fresh_vertex();
    let c4 = w.fresh_vertex();
    w.edges.push((wv, b4, h));
    w.edges.push((b4, c1, (h + 1) % 4));
    w.edges.push((c1, c2, (h + 2) % 4));
    w.edges.push((c2, c3, (h + 3) % 4));
    w.edges.push((c3, c4, h));
    w.edges.push((c4, b4, (h + 1) % 4));
}

/// One refinement round: find an internal face corner with negative turn
/// and shoot the combinatorial ray that cuts a rectangle corner off.
/// Returns false once every internal face is clean.
fn refine_step(w: &mut Work) -> bool {
    let rep = w.rep();
    for (fid, walk) in rep.faces.iter().enumerate() {
        if fid == rep.external {
            continue;
        }
        let k = walk.len();
        for i in 0..k {
            let d1 = walk[i];
            let d2 = walk[(i + 1) % k];
            let t = rep.turn(d1, d2);
            if t >= 0 {
                continue;
            }
            // Cut: walk forward accumulating turns; split the dart reached
            // when the running sum hits 1 - t, which runs perpendicular to
            // the ray and faces it.
            let target = 1 - t;
            let mut acc = 0;
            let mut j = (i + 1) % k;
            loop {
                let nxt = (j + 1) % k;
                acc += rep.turn(walk[j], walk[nxt]);
                if acc == target {
                    let cut = walk[nxt];
                    let wv = rep.head(d1);
                    let h = rep.dir[d1 as usize];
                    let z = w.split_edge((cut / 2) as usize);
                    // Keep z on the tail side of the cut dart: split_edge
                    // splits a->b; if the cut dart runs b->a the fresh
                    // vertex is still on the segment, only the combinatorial
                    // edge ids shift, which the next rep() absorbs.
                    w.edges.push((wv, z, h));
                    return true;
                }
                j = nxt;
                debug_assert_ne!(j, i, "cut target must exist on the face");
            }
        }
    }
    false
}

/// Longest-path coordinates for one axis. `alo`ng = direction of positive
/// steps (0 = x east, 1 = y north).
fn axis_coords(rep: &OrthoRep, axis: u8) -> Vec<i64> {
    let n = rep.n;
    // Chain classes: vertices connected by edges perpendicular to the axis
    // share a coordinate.
    let mut class = vec![usize::MAX; n];
    let mut classes = 0;
    for v in 0..n {
        if class[v] != usize::MAX {
            continue;
        }
        let cid = classes;
        classes += 1;
        let mut stack = vec![v as VertexId];
        class[v] = cid;
        while let Some(x) = stack.pop() {
            for &d in &rep.rot[x as usize] {
                let dd = rep.dir[d as usize];
                if dd % 2 == axis % 2 {
                    // Edge advances along the axis; not a class edge.
                    continue;
                }
                let y = rep.head(d);
                if class[y as usize] == usize::MAX {
                    class[y as usize] = cid;
                    stack.push(y);
                }
            }
        }
    }
    // Constraint edges: positive-direction darts order the classes.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); classes];
    let mut indeg = vec![0usize; classes];
    for v in 0..n {
        for &d in &rep.rot[v] {
            if rep.dir[d as usize] == axis {
                let a = class[v];
                let b = class[rep.head(d) as usize];
                adj[a].push(b);
                indeg[b] += 1;
            }
        }
    }
    let mut coord = vec![0i64; classes];
    let mut queue: std::collections::VecDeque<usize> = (0..classes)
        .filter(|&c| indeg[c] == 0)
        .collect();
    let mut seen = 0;
    while let Some(c) = queue.pop_front() {
        seen += 1;
        for &b in &adj[c] {
            coord[b] = coord[b].max(coord[c] + 1);
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push_back(b);
            }
        }
    }
    assert_eq!(seen, classes, "constraint graph must be acyclic");
    (0..n).map(|v| coord[class[v]]).collect()
}

/// Integer grid coordinates for a valid representation; deterministic, and
/// independent of any coordinates already present.
pub fn compact(rep: &OrthoRep) -> Vec<(i64, i64)> {
    if rep.edges.is_empty() {
        return vec![(0, 0); rep.n];
    }
    let mut w = Work::from_rep(rep);
    wrap_external(&mut w);
    let mut rounds = 0usize;
    while refine_step(&mut w) {
        rounds += 1;
        assert!(
            rounds <= 40 * (w.edges.len() + 4),
            "refinement failed to converge"
        );
    }
    let refined = w.rep();
    debug_assert!(refined.validate().ok());
    let xs = axis_coords(&refined, 0);
    let ys = axis_coords(&refined, 1);
    (0..rep.n).map(|v| (xs[v], ys[v])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn square_rep() -> OrthoRep {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        OrthoRep::from_directions(&g, vec![0, 2, 1, 3, 2, 0, 3, 1]).unwrap()
    }

    #[test]
    fn square_compacts_to_unit_corners() {
        let mut rep = square_rep();
        let coords = compact(&rep);
        rep.coords = Some(coords.clone());
        let report = rep.validate();
        assert!(report.ok(), "{:?}", report.violations);
        // Four distinct lattice corners.
        let mut uniq = coords.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 4);
    }

    #[test]
    fn compaction_idempotent() {
        let rep = square_rep();
        let a = compact(&rep);
        let mut rep2 = rep.clone();
        rep2.coords = Some(a.clone());
        let b = compact(&rep2);
        assert_eq!(a, b);
    }

    #[test]
    fn staircase_chain() {
        // Chain with all right turns: a spiral staircase of segments.
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        // East, south, west: two right turns.
        let mut rep = OrthoRep::from_directions(&g, vec![0, 2, 3, 1, 2, 0]).unwrap();
        let coords = compact(&rep);
        rep.coords = Some(coords);
        assert!(rep.validate().ok());
    }

    #[test]
    fn pendant_and_cycle() {
        // Square with a pendant edge outside.
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).unwrap();
        let mut rep =
            OrthoRep::from_directions(&g, vec![0, 2, 1, 3, 2, 0, 3, 1, 3, 1]).unwrap();
        let coords = compact(&rep);
        rep.coords = Some(coords);
        let report = rep.validate();
        assert!(report.ok(), "{:?}", report.violations);
    }
}
