//! Zero-bend orthogonal representations.
//!
//! The primary datum is one absolute direction per dart (0 = east, 1 =
//! north, 2 = west, 3 = south, counterclockwise). Rotations, angles, faces,
//! and turns are all derived from directions, which keeps every consumer on
//! one sign convention:
//!
//! - dart `2e` points from `endpoints(e).0` to `.1`; dart `2e+1` is its
//!   reverse and differs in direction by 2 (mod 4);
//! - walking dart `d` then dart `d2`, the turn is `+1` for a right turn,
//!   `-1` for a left turn, `0` straight, `-2` for the U-turn at a pendant;
//! - faces are traced with the region on the right of each dart, so every
//!   internal face has turn sum `+4` and the external face has `-4`;
//! - the corner angle in quarter turns is `2 - turn`.

use crate::graph::{EdgeId, Graph, VertexId};
use std::fmt;

pub type Dart = u32;

pub fn dart(e: EdgeId, o: u8) -> Dart {
    2 * e + o as Dart
}

pub fn edge_of(d: Dart) -> EdgeId {
    d / 2
}

pub fn reverse(d: Dart) -> Dart {
    d ^ 1
}

pub fn turn_between(dir_in: u8, dir_out: u8) -> i32 {
    match (dir_in + 4 - dir_out) % 4 {
        0 => 0,
        1 => 1,
        2 => -2,
        _ => -1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepViolation {
    BadReversePair(EdgeId),
    DirectionClash(VertexId),
    FaceTurnSum { face: usize, sum: i32 },
    ExternalCount(usize),
    EulerMismatch { v: usize, e: usize, f: usize },
    EdgeGeometry(EdgeId),
    SegmentCross(EdgeId, EdgeId),
}

impl fmt::Display for RepViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepViolation::BadReversePair(e) => write!(f, "edge {e}: darts not opposite"),
            RepViolation::DirectionClash(v) => {
                write!(f, "vertex {v}: two darts share a direction")
            }
            RepViolation::FaceTurnSum { face, sum } => {
                write!(f, "face {face}: turn sum {sum}")
            }
            RepViolation::ExternalCount(k) => {
                write!(f, "{k} faces with turn sum -4 (expected exactly 1)")
            }
            RepViolation::EulerMismatch { v, e, f: fc } => {
                write!(f, "euler check failed: V={v} E={e} F={fc}")
            }
            RepViolation::EdgeGeometry(e) => {
                write!(f, "edge {e}: coordinates disagree with direction")
            }
            RepViolation::SegmentCross(a, b) => write!(f, "edges {a} and {b} cross"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<RepViolation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A zero-bend orthogonal representation, optionally with grid coordinates.
#[derive(Clone, Debug)]
pub struct OrthoRep {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub dir: Vec<u8>,
    /// Darts leaving each vertex in counterclockwise (ascending direction)
    /// order.
    pub rot: Vec<Vec<Dart>>,
    /// Face boundaries as dart sequences (region on the right of each dart).
    pub faces: Vec<Vec<Dart>>,
    pub face_of_dart: Vec<usize>,
    pub external: usize,
    pub coords: Option<Vec<(i64, i64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepError {
    DirectionClash(VertexId),
    NoExternalFace,
    Inconsistent(String),
}

impl fmt::Display for RepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepError::DirectionClash(v) => write!(f, "direction clash at vertex {v}"),
            RepError::NoExternalFace => write!(f, "no face with turn sum -4"),
            RepError::Inconsistent(m) => write!(f, "inconsistent representation: {m}"),
        }
    }
}

impl std::error::Error for RepError {}

impl OrthoRep {
    pub fn tail(&self, d: Dart) -> VertexId {
        let (a, b) = self.edges[edge_of(d) as usize];
        if d % 2 == 0 {
            a
        } else {
            b
        }
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.tail(reverse(d))
    }

    /// Turn taken when arriving along `d_in` and leaving along `d_out`.
    pub fn turn(&self, d_in: Dart, d_out: Dart) -> i32 {
        turn_between(self.dir[d_in as usize], self.dir[d_out as usize])
    }

    pub fn dart_between(&self, from: VertexId, to: VertexId) -> Option<Dart> {
        self.rot[from as usize]
            .iter()
            .copied()
            .find(|&d| self.head(d) == to)
    }

    /// Build the representation from per-dart directions. Fails when two
    /// darts at a vertex share a direction or no external face emerges.
    pub fn from_directions(g: &Graph, dir: Vec<u8>) -> Result<OrthoRep, RepError> {
        let n = g.vertex_count();
        let m = g.edge_count();
        assert_eq!(dir.len(), 2 * m);
        let edges = g.edges().to_vec();
        if m == 0 {
            return Ok(OrthoRep {
                n,
                edges,
                dir,
                rot: vec![Vec::new(); n],
                faces: vec![Vec::new()],
                face_of_dart: Vec::new(),
                external: 0,
                coords: None,
            });
        }
        let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); n];
        for e in 0..m as EdgeId {
            let (a, b) = edges[e as usize];
            rot[a as usize].push(dart(e, 0));
            rot[b as usize].push(dart(e, 1));
        }
        for (v, darts) in rot.iter_mut().enumerate() {
            darts.sort_by_key(|&d| dir[d as usize]);
            for w in darts.windows(2) {
                if dir[w[0] as usize] == dir[w[1] as usize] {
                    return Err(RepError::DirectionClash(v as VertexId));
                }
            }
        }

        // Trace faces: next dart is the ccw-successor of the reverse dart
        // in the rotation at the head; the region stays on the right.
        let mut rep = OrthoRep {
            n,
            edges,
            dir,
            rot,
            faces: Vec::new(),
            face_of_dart: vec![usize::MAX; 2 * m],
            external: usize::MAX,
            coords: None,
        };
        let mut seen = vec![false; 2 * m];
        for d0 in 0..2 * m as Dart {
            if seen[d0 as usize] {
                continue;
            }
            let fid = rep.faces.len();
            let mut walk = Vec::new();
            let mut d = d0;
            loop {
                seen[d as usize] = true;
                rep.face_of_dart[d as usize] = fid;
                walk.push(d);
                d = rep.next_on_face(d);
                if d == d0 {
                    break;
                }
            }
            rep.faces.push(walk);
        }
        let mut ext = None;
        for (fid, _) in rep.faces.iter().enumerate() {
            if rep.face_turn_sum(fid) == -4 {
                if ext.is_some() {
                    return Err(RepError::Inconsistent(
                        "multiple faces with turn sum -4".into(),
                    ));
                }
                ext = Some(fid);
            }
        }
        rep.external = ext.ok_or(RepError::NoExternalFace)?;
        Ok(rep)
    }

    /// Build from an abstract rotation system plus corner angles. `gap[d]`
    /// is the angle (quarter turns) swept counterclockwise from dart `d` to
    /// the next dart in the rotation at its tail.
    pub fn from_rotation_gaps(
        g: &Graph,
        rot: &[Vec<Dart>],
        gap: &[u8],
    ) -> Result<OrthoRep, RepError> {
        let m = g.edge_count();
        let mut dir = vec![u8::MAX; 2 * m];
        // Propagate directions from dart 0.
        let mut stack = vec![(0 as Dart, 0u8)];
        while let Some((d, dd)) = stack.pop() {
            if dir[d as usize] != u8::MAX {
                if dir[d as usize] != dd {
                    return Err(RepError::Inconsistent(format!(
                        "direction propagation clash at dart {d}"
                    )));
                }
                continue;
            }
            dir[d as usize] = dd;
            stack.push((reverse(d), (dd + 2) % 4));
            let v = {
                let (a, b) = g.endpoints(edge_of(d));
                if d % 2 == 0 {
                    a
                } else {
                    b
                }
            };
            let darts = &rot[v as usize];
            let pos = darts
                .iter()
                .position(|&x| x == d)
                .expect("dart missing from rotation");
            let nxt = darts[(pos + 1) % darts.len()];
            stack.push((nxt, (dd + gap[d as usize]) % 4));
        }
        let rep = OrthoRep::from_directions(g, dir)?;
        Ok(rep)
    }

    pub fn next_on_face(&self, d: Dart) -> Dart {
        let w = self.head(d);
        let darts = &self.rot[w as usize];
        let pos = darts
            .iter()
            .position(|&x| x == reverse(d))
            .expect("reverse dart missing from rotation");
        darts[(pos + 1) % darts.len()]
    }

    pub fn face_turn_sum(&self, fid: usize) -> i32 {
        let walk = &self.faces[fid];
        let k = walk.len();
        (0..k)
            .map(|i| self.turn(walk[i], walk[(i + 1) % k]))
            .sum()
    }

    /// Angle, in quarter turns, of the corner between consecutive boundary
    /// darts `d_in`, `d_out` of a face.
    pub fn corner_angle(&self, d_in: Dart, d_out: Dart) -> i32 {
        2 - self.turn(d_in, d_out)
    }

    /// Angles around `v` as (face, angle) pairs, one per incident corner.
    pub fn vertex_angles(&self, v: VertexId) -> Vec<(usize, i32)> {
        let darts = &self.rot[v as usize];
        if darts.is_empty() {
            return Vec::new();
        }
        if darts.len() == 1 {
            let d = darts[0];
            return vec![(self.face_of_dart[d as usize], 4)];
        }
        // The empty sector between ccw-consecutive darts x and next(x) is a
        // corner of the face lying right of next(x), i.e. of next(x)'s face.
        darts
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let nxt = darts[(i + 1) % darts.len()];
                let a = (self.dir[nxt as usize] + 4 - self.dir[x as usize]) % 4;
                let a = if a == 0 { 4i32 } else { a as i32 };
                (self.face_of_dart[nxt as usize], a)
            })
            .collect()
    }

    /// The angle at `v` inside face `fid`, when `v` meets that face in
    /// exactly one corner.
    pub fn angle_in_face(&self, v: VertexId, fid: usize) -> Option<i32> {
        let mut found = None;
        for (f, a) in self.vertex_angles(v) {
            if f == fid {
                if found.is_some() {
                    return None;
                }
                found = Some(a);
            }
        }
        found
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let m = self.edges.len();
        for e in 0..m as EdgeId {
            let d0 = self.dir[dart(e, 0) as usize];
            let d1 = self.dir[dart(e, 1) as usize];
            if (d0 + 2) % 4 != d1 {
                report.violations.push(RepViolation::BadReversePair(e));
            }
        }
        for v in 0..self.n {
            let darts = &self.rot[v];
            for i in 0..darts.len() {
                for j in (i + 1)..darts.len() {
                    if self.dir[darts[i] as usize] == self.dir[darts[j] as usize] {
                        report
                            .violations
                            .push(RepViolation::DirectionClash(v as VertexId));
                    }
                }
            }
        }
        if m > 0 {
            let mut neg = 0;
            for fid in 0..self.faces.len() {
                let sum = self.face_turn_sum(fid);
                if sum == -4 {
                    neg += 1;
                    continue;
                }
                if sum != 4 {
                    report
                        .violations
                        .push(RepViolation::FaceTurnSum { face: fid, sum });
                }
            }
            if neg != 1 {
                report.violations.push(RepViolation::ExternalCount(neg));
            }
            let (v, e, f) = (self.n, m, self.faces.len());
            if v + f != e + 2 {
                report
                    .violations
                    .push(RepViolation::EulerMismatch { v, e, f });
            }
        }
        if let Some(coords) = &self.coords {
            self.validate_coords(coords, &mut report);
        }
        report
    }

    fn validate_coords(&self, coords: &[(i64, i64)], report: &mut ValidationReport) {
        const STEP: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
        for e in 0..self.edges.len() as EdgeId {
            let (a, b) = self.edges[e as usize];
            let (xa, ya) = coords[a as usize];
            let (xb, yb) = coords[b as usize];
            let d = self.dir[dart(e, 0) as usize] as usize;
            let (sx, sy) = STEP[d];
            let (dx, dy) = (xb - xa, yb - ya);
            let ok = (dx == 0 || dy == 0)
                && (dx != 0 || dy != 0)
                && dx.signum() == sx
                && dy.signum() == sy;
            if !ok {
                report.violations.push(RepViolation::EdgeGeometry(e));
            }
        }
        // Pairwise segment intersection; endpoints may touch only when the
        // edges share that vertex.
        let seg = |e: EdgeId| {
            let (a, b) = self.edges[e as usize];
            (coords[a as usize], coords[b as usize])
        };
        for e1 in 0..self.edges.len() as EdgeId {
            for e2 in (e1 + 1)..self.edges.len() as EdgeId {
                let (p1, q1) = seg(e1);
                let (p2, q2) = seg(e2);
                if segments_conflict(p1, q1, p2, q2, self.edges[e1 as usize], self.edges[e2 as usize]) {
                    report.violations.push(RepViolation::SegmentCross(e1, e2));
                }
            }
        }
    }
}

fn segments_conflict(
    p1: (i64, i64),
    q1: (i64, i64),
    p2: (i64, i64),
    q2: (i64, i64),
    e1: (VertexId, VertexId),
    e2: (VertexId, VertexId),
) -> bool {
    // Axis-parallel segments: compute overlap of their point sets.
    let norm = |p: (i64, i64), q: (i64, i64)| {
        (
            (p.0.min(q.0), p.1.min(q.1)),
            (p.0.max(q.0), p.1.max(q.1)),
        )
    };
    let (lo1, hi1) = norm(p1, q1);
    let (lo2, hi2) = norm(p2, q2);
    let xlo = lo1.0.max(lo2.0);
    let xhi = hi1.0.min(hi2.0);
    let ylo = lo1.1.max(lo2.1);
    let yhi = hi1.1.min(hi2.1);
    if xlo > xhi || ylo > yhi {
        return false;
    }
    // Overlap region is a point or a segment. A shared graph vertex makes a
    // single shared endpoint legal.
    let shares_vertex = e1.0 == e2.0 || e1.0 == e2.1 || e1.1 == e2.0 || e1.1 == e2.1;
    if xlo == xhi && ylo == yhi {
        let pt = (xlo, ylo);
        let is_endpoint_of_both = (pt == p1 || pt == q1) && (pt == p2 || pt == q2);
        !(shares_vertex && is_endpoint_of_both)
    } else {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn square() -> (Graph, OrthoRep) {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        // 0 -> 1 east, 1 -> 2 north, 2 -> 3 west, 3 -> 0 south.
        let dir = vec![0, 2, 1, 3, 2, 0, 3, 1];
        let rep = OrthoRep::from_directions(&g, dir).unwrap();
        (g, rep)
    }

    #[test]
    fn square_faces_and_angles() {
        let (_, rep) = square();
        assert_eq!(rep.faces.len(), 2);
        let internal = 1 - rep.external;
        assert_eq!(rep.face_turn_sum(internal), 4);
        assert_eq!(rep.face_turn_sum(rep.external), -4);
        for v in 0..4 {
            let angles = rep.vertex_angles(v);
            let total: i32 = angles.iter().map(|&(_, a)| a).sum();
            assert_eq!(total, 4);
            assert_eq!(rep.angle_in_face(v, internal), Some(1));
            assert_eq!(rep.angle_in_face(v, rep.external), Some(3));
        }
        assert!(rep.validate().ok());
    }

    #[test]
    fn square_with_coords_validates() {
        let (_, mut rep) = square();
        rep.coords = Some(vec![(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert!(rep.validate().ok());
        // Skewed coordinate breaks the geometry check.
        rep.coords = Some(vec![(0, 0), (2, 0), (1, 1), (0, 1)]);
        assert!(!rep.validate().ok());
    }

    #[test]
    fn pendant_edge_face() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let rep = OrthoRep::from_directions(&g, vec![0, 2]).unwrap();
        assert_eq!(rep.faces.len(), 1);
        assert_eq!(rep.face_turn_sum(0), -4);
        assert_eq!(rep.vertex_angles(0), vec![(0, 4)]);
        assert!(rep.validate().ok());
    }

    #[test]
    fn rotation_gap_roundtrip() {
        let (g, rep) = square();
        // Rebuild gaps from directions and re-derive.
        let mut gap = vec![0u8; 8];
        for v in 0..4usize {
            let darts = &rep.rot[v];
            for (i, &d) in darts.iter().enumerate() {
                let nxt = darts[(i + 1) % darts.len()];
                let a = (rep.dir[nxt as usize] + 4 - rep.dir[d as usize]) % 4;
                gap[d as usize] = if a == 0 { 4 } else { a };
            }
        }
        let rep2 = OrthoRep::from_rotation_gaps(&g, &rep.rot, &gap).unwrap();
        assert!(rep2.validate().ok());
        assert_eq!(rep2.faces.len(), 2);
    }

    #[test]
    fn l_shaped_hexagon() {
        let g = Graph::new(
            6,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)],
        )
        .unwrap();
        // L-shape: E, N, E, N, W(x2 length is a coord matter), S back.
        // Directions: 0->1 E, 1->2 N, 2->3 E, 3->4 N, 4->5 W, 5->0 S.
        let dir = vec![0, 2, 1, 3, 0, 2, 1, 3, 2, 0, 3, 1];
        let rep = OrthoRep::from_directions(&g, dir).unwrap();
        let report = rep.validate();
        assert!(report.ok(), "{:?}", report.violations);
        let internal = 1 - rep.external;
        // Vertex 2 is the notch of the staircase; its internal angle is 270.
        assert_eq!(rep.angle_in_face(2, internal), Some(3));
        assert_eq!(rep.angle_in_face(1, internal), Some(1));
    }
}
