//! Spirality values, value sets over half-integers, Cartesian sums, the
//! series/parallel composition rules, and the support tree that makes
//! all-but-one-child sums cheap when the tree gets rerooted.
//!
//! Values are stored doubled so that semi-integers stay exact integers.

use std::fmt;

/// A spirality value, stored as twice its mathematical value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spirality(pub i32);

impl Spirality {
    pub fn from_int(k: i32) -> Spirality {
        Spirality(2 * k)
    }

    pub fn doubled(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Debug for Spirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Spirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Which Cartesian-sum backend to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumEngine {
    /// Word-shifted OR over the bitset; exact, cache-friendly.
    ShiftOr,
    /// FFT boolean convolution for large sets.
    Fft,
}

impl Default for SumEngine {
    fn default() -> Self {
        SumEngine::ShiftOr
    }
}

/// Set of spirality values: a bitset over doubled values starting at
/// `offset`. Empty means "component not drawable".
#[derive(Clone, PartialEq, Eq)]
pub struct SpiralitySet {
    offset: i32,
    bits: Vec<u64>,
    len_bits: usize,
}

impl fmt::Debug for SpiralitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", vals.join(","))
    }
}

impl SpiralitySet {
    pub fn empty() -> SpiralitySet {
        SpiralitySet {
            offset: 0,
            bits: Vec::new(),
            len_bits: 0,
        }
    }

    pub fn singleton(v: Spirality) -> SpiralitySet {
        let mut s = SpiralitySet {
            offset: v.0,
            bits: vec![1],
            len_bits: 1,
        };
        s.normalize();
        s
    }

    pub fn zero() -> SpiralitySet {
        SpiralitySet::singleton(Spirality(0))
    }

    pub fn from_doubled<I: IntoIterator<Item = i32>>(vals: I) -> SpiralitySet {
        let vals: Vec<i32> = vals.into_iter().collect();
        if vals.is_empty() {
            return SpiralitySet::empty();
        }
        let lo = *vals.iter().min().unwrap();
        let hi = *vals.iter().max().unwrap();
        let width = (hi - lo + 1) as usize;
        let mut s = SpiralitySet {
            offset: lo,
            bits: vec![0; width.div_ceil(64)],
            len_bits: width,
        };
        for v in vals {
            let i = (v - lo) as usize;
            s.bits[i / 64] |= 1 << (i % 64);
        }
        s
    }

    /// All integers in [-(len-1), len-1]; the set of a chain with `len` edges.
    pub fn q_star_set(len: usize) -> SpiralitySet {
        assert!(len >= 1, "chain length must be positive");
        let k = len as i32 - 1;
        SpiralitySet::from_doubled((-k..=k).map(|x| 2 * x))
    }

    pub fn is_empty(&self) -> bool {
        self.len_bits == 0
    }

    pub fn contains(&self, v: Spirality) -> bool {
        let i = v.0 - self.offset;
        if i < 0 || i as usize >= self.len_bits {
            return false;
        }
        let i = i as usize;
        self.bits[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn min(&self) -> Option<Spirality> {
        if self.is_empty() {
            None
        } else {
            Some(Spirality(self.offset))
        }
    }

    pub fn max(&self) -> Option<Spirality> {
        if self.is_empty() {
            None
        } else {
            Some(Spirality(self.offset + self.len_bits as i32 - 1))
        }
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = Spirality> + '_ {
        let off = self.offset;
        (0..self.len_bits).filter_map(move |i| {
            if self.bits[i / 64] & (1 << (i % 64)) != 0 {
                Some(Spirality(off + i as i32))
            } else {
                None
            }
        })
    }

    pub fn values_doubled(&self) -> Vec<i32> {
        self.iter().map(|s| s.0).collect()
    }

    /// Non-negative part, values halved only conceptually (kept doubled).
    pub fn non_negative(&self) -> Vec<i32> {
        self.iter().map(|s| s.0).filter(|&d| d >= 0).collect()
    }

    /// True iff v in S <=> -v in S.
    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|v| self.contains(Spirality(-v.0)))
    }

    fn normalize(&mut self) {
        // Trim leading and trailing zero range so offset/min/max stay honest.
        if self.bits.iter().all(|&w| w == 0) {
            *self = SpiralitySet::empty();
            return;
        }
        let first = (0..self.len_bits)
            .find(|&i| self.bits[i / 64] & (1 << (i % 64)) != 0)
            .unwrap();
        let last = (0..self.len_bits)
            .rev()
            .find(|&i| self.bits[i / 64] & (1 << (i % 64)) != 0)
            .unwrap();
        if first == 0 && last == self.len_bits - 1 {
            return;
        }
        let width = last - first + 1;
        let mut nb = vec![0u64; width.div_ceil(64)];
        for i in 0..width {
            let src = first + i;
            if self.bits[src / 64] & (1 << (src % 64)) != 0 {
                nb[i / 64] |= 1 << (i % 64);
            }
        }
        self.offset += first as i32;
        self.bits = nb;
        self.len_bits = width;
    }
}

/// Cartesian sum {a + b : a in A, b in B}. Empty if either side is empty.
pub fn cartesian_sum(a: &SpiralitySet, b: &SpiralitySet, engine: SumEngine) -> SpiralitySet {
    if a.is_empty() || b.is_empty() {
        return SpiralitySet::empty();
    }
    match engine {
        SumEngine::ShiftOr => cartesian_shift_or(a, b),
        SumEngine::Fft => {
            if a.len_bits.max(b.len_bits) < 256 {
                cartesian_shift_or(a, b)
            } else {
                cartesian_fft(a, b)
            }
        }
    }
}

fn cartesian_shift_or(a: &SpiralitySet, b: &SpiralitySet) -> SpiralitySet {
    // Iterate over the sparser side, shifting the denser side's words.
    let (s, d) = if a.count() <= b.count() { (a, b) } else { (b, a) };
    let width = s.len_bits + d.len_bits - 1;
    let words = width.div_ceil(64);
    let mut out = vec![0u64; words];
    for i in 0..s.len_bits {
        if s.bits[i / 64] & (1 << (i % 64)) == 0 {
            continue;
        }
        let (wsh, bsh) = (i / 64, i % 64);
        for (j, &w) in d.bits.iter().enumerate() {
            if w == 0 {
                continue;
            }
            out[j + wsh] |= w << bsh;
            if bsh > 0 && j + wsh + 1 < words {
                out[j + wsh + 1] |= w >> (64 - bsh);
            }
        }
    }
    let mut r = SpiralitySet {
        offset: a.offset + b.offset,
        bits: out,
        len_bits: width,
    };
    r.normalize();
    r
}

fn cartesian_fft(a: &SpiralitySet, b: &SpiralitySet) -> SpiralitySet {
    use rustfft::num_complex::Complex;
    use rustfft::FftPlanner;
    let width = a.len_bits + b.len_bits - 1;
    let size = width.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);
    let to_signal = |s: &SpiralitySet| {
        let mut buf = vec![Complex::new(0.0, 0.0); size];
        for i in 0..s.len_bits {
            if s.bits[i / 64] & (1 << (i % 64)) != 0 {
                buf[i].re = 1.0;
            }
        }
        buf
    };
    let mut fa = to_signal(a);
    let mut fb = to_signal(b);
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x *= *y;
    }
    ifft.process(&mut fa);
    let scale = 1.0 / size as f64;
    let mut r = SpiralitySet {
        offset: a.offset + b.offset,
        bits: vec![0u64; width.div_ceil(64)],
        len_bits: width,
    };
    for i in 0..width {
        if fa[i].re * scale > 0.5 {
            r.bits[i / 64] |= 1 << (i % 64);
        }
    }
    r.normalize();
    r
}

/// Series composition: iterated Cartesian sum of the children's sets.
pub fn compose_series(sets: &[SpiralitySet], engine: SumEngine) -> SpiralitySet {
    let mut acc = SpiralitySet::zero();
    for s in sets {
        acc = cartesian_sum(&acc, s, engine);
        if acc.is_empty() {
            return acc;
        }
    }
    acc
}

/// Three-child parallel composition: sigma admitted iff for one of the six
/// child orders the left/center/right sets contain sigma+2 / sigma / sigma-2.
pub fn parallel3_admits(sets: &[&SpiralitySet; 3], sigma: Spirality) -> bool {
    !parallel3_orders(sets, sigma).is_empty()
}

/// The feasible (left, center, right) index orders for a target spirality.
pub fn parallel3_orders(sets: &[&SpiralitySet; 3], sigma: Spirality) -> Vec<[usize; 3]> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::new();
    for perm in PERMS {
        let [l, c, r] = perm;
        if sets[l].contains(Spirality(sigma.0 + 4))
            && sets[c].contains(sigma)
            && sets[r].contains(Spirality(sigma.0 - 4))
        {
            out.push(perm);
        }
    }
    out
}

/// Full spirality set of a 3-child P-node.
pub fn compose_parallel3(sets: &[&SpiralitySet; 3]) -> SpiralitySet {
    if sets.iter().any(|s| s.is_empty()) {
        return SpiralitySet::empty();
    }
    // Scan the smallest child's values; every feasible target has that child
    // in one of the three roles, displacing the target by -4, 0 or +4.
    let smallest = (0..3).min_by_key(|&i| sets[i].count()).unwrap();
    let mut cands: Vec<i32> = Vec::new();
    for v in sets[smallest].iter() {
        cands.extend_from_slice(&[v.0 - 4, v.0, v.0 + 4]);
    }
    cands.sort_unstable();
    cands.dedup();
    SpiralitySet::from_doubled(
        cands
            .into_iter()
            .filter(|&d| parallel3_admits(sets, Spirality(d))),
    )
}

/// Per-child join coefficients for a two-child P-node. `dk[pole]` is the
/// doubled k coefficient (2 when k = 1, 1 when k = 1/2) of this child at
/// pole u (index 0) and pole v (index 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinCoeffs {
    pub dk: [i32; 2],
}

impl JoinCoeffs {
    /// k_w = 1 iff the child's degree at w inside its own pertinent graph
    /// and the P-node's outside degree at w are both 1.
    pub fn from_degrees(child_indeg: (u8, u8), node_outdeg: (u8, u8)) -> JoinCoeffs {
        let k = |ind: u8, out: u8| if ind == 1 && out == 1 { 2 } else { 1 };
        JoinCoeffs {
            dk: [
                k(child_indeg.0, node_outdeg.0),
                k(child_indeg.1, node_outdeg.1),
            ],
        }
    }
}

/// How the angle variables of a two-child P-node are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaMode {
    /// Any combination with 1 <= alpha_w^l + alpha_w^r <= 2 per pole.
    Literal,
    /// Additionally force alpha = 1 on both sides of a degree-4 pole, where
    /// every angle is 90 degrees.
    Realizable,
}

/// One satisfying assignment of a two-child parallel join.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParallelJoin {
    /// Index (0/1) of the child placed leftmost.
    pub left: usize,
    /// (alpha_u^l, alpha_v^l, alpha_u^r, alpha_v^r).
    pub alpha: (u8, u8, u8, u8),
    pub sigma_left: Spirality,
    pub sigma_right: Spirality,
}

pub struct Parallel2Ctx<'a> {
    pub sets: [&'a SpiralitySet; 2],
    pub coeffs: [JoinCoeffs; 2],
    /// (indeg at u, indeg at v) per child, plus the node's outside degrees;
    /// used by the realizable filter.
    pub child_indeg: [(u8, u8); 2],
    pub node_outdeg: (u8, u8),
    pub mode: AlphaMode,
    /// Pole index (0 = u, 1 = v) whose left angle variable is pinned to 0
    /// by an external flat-angle constraint.
    pub pin_zero: Option<usize>,
}

impl<'a> Parallel2Ctx<'a> {
    fn alpha_ok(&self, pole: usize, left: usize, al: u8, ar: u8) -> bool {
        if al + ar == 0 {
            return false;
        }
        if self.mode == AlphaMode::Realizable {
            let deg = match pole {
                0 => self.child_indeg[0].0 + self.child_indeg[1].0 + self.node_outdeg.0,
                _ => self.child_indeg[0].1 + self.child_indeg[1].1 + self.node_outdeg.1,
            };
            let _ = left;
            if deg >= 4 && (al == 0 || ar == 0) {
                return false;
            }
        }
        true
    }

    /// All satisfying (order, alpha) tuples for a target spirality.
    pub fn joins(&self, sigma: Spirality) -> Vec<ParallelJoin> {
        let mut out = Vec::new();
        for left in 0..2 {
            let right = 1 - left;
            let (lu, lv) = (self.coeffs[left].dk[0], self.coeffs[left].dk[1]);
            let (ru, rv) = (self.coeffs[right].dk[0], self.coeffs[right].dk[1]);
            for au_l in 0..2u8 {
                if self.pin_zero == Some(0) && au_l != 0 {
                    continue;
                }
                for av_l in 0..2u8 {
                    if self.pin_zero == Some(1) && av_l != 0 {
                        continue;
                    }
                    let sl = Spirality(sigma.0 + lu * au_l as i32 + lv * av_l as i32);
                    if !self.sets[left].contains(sl) {
                        continue;
                    }
                    for au_r in 0..2u8 {
                        if !self.alpha_ok(0, left, au_l, au_r) {
                            continue;
                        }
                        for av_r in 0..2u8 {
                            if !self.alpha_ok(1, left, av_l, av_r) {
                                continue;
                            }
                            let sr =
                                Spirality(sigma.0 - ru * au_r as i32 - rv * av_r as i32);
                            if self.sets[right].contains(sr) {
                                out.push(ParallelJoin {
                                    left,
                                    alpha: (au_l, av_l, au_r, av_r),
                                    sigma_left: sl,
                                    sigma_right: sr,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn admits(&self, sigma: Spirality) -> bool {
        !self.joins(sigma).is_empty()
    }

    /// Full spirality set of the two-child P-node.
    pub fn compose(&self) -> SpiralitySet {
        if self.sets[0].is_empty() || self.sets[1].is_empty() {
            return SpiralitySet::empty();
        }
        let scan = if self.sets[0].count() <= self.sets[1].count() {
            0
        } else {
            1
        };
        let mut cands: Vec<i32> = Vec::new();
        // With the scanned child on the left: sigma = a - (terms in 0..=4);
        // on the right: sigma = a + (terms in 0..=4). Doubled terms <= 4.
        for v in self.sets[scan].iter() {
            for t in 0..=4 {
                cands.push(v.0 - t);
                cands.push(v.0 + t);
            }
        }
        cands.sort_unstable();
        cands.dedup();
        SpiralitySet::from_doubled(
            cands
                .into_iter()
                .filter(|&d| self.admits(Spirality(d))),
        )
    }
}

/// Complete binary tree of partial Cartesian sums over an S-node's child
/// sets, padded with {0} leaves to a power of two. `delta_without(j)` is the
/// Cartesian sum of every child set except the j-th, assembled from the
/// sibling sets along the leaf-to-root path.
pub struct SupportTree {
    leaves: usize,
    real: usize,
    sets: Vec<SpiralitySet>,
}

impl SupportTree {
    pub fn build(child_sets: &[SpiralitySet], engine: SumEngine) -> SupportTree {
        let real = child_sets.len();
        assert!(real >= 1);
        let leaves = real.next_power_of_two().max(2);
        let mut sets = vec![SpiralitySet::empty(); 2 * leaves];
        for i in 0..leaves {
            sets[leaves + i] = if i < real {
                child_sets[i].clone()
            } else {
                SpiralitySet::zero()
            };
        }
        for i in (1..leaves).rev() {
            sets[i] = cartesian_sum(&sets[2 * i], &sets[2 * i + 1], engine);
        }
        SupportTree { leaves, real, sets }
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn real_count(&self) -> usize {
        self.real
    }

    pub fn root_set(&self) -> &SpiralitySet {
        &self.sets[1]
    }

    /// Cartesian sum of all child sets except child `j`.
    pub fn delta_without(&self, j: usize, engine: SumEngine) -> SpiralitySet {
        assert!(j < self.real);
        let mut acc = SpiralitySet::zero();
        let mut node = self.leaves + j;
        while node > 1 {
            let sib = node ^ 1;
            acc = cartesian_sum(&acc, &self.sets[sib], engine);
            node /= 2;
        }
        acc
    }
}

/// Everything `measure_spirality` needs to know about a component: its edge
/// set within the host graph, its ordered poles, and the pole degrees
/// inside/outside the component.
#[derive(Clone, Debug)]
pub struct ComponentCtx {
    pub pert_edge: Vec<bool>,
    pub poles: (crate::graph::VertexId, crate::graph::VertexId),
    pub indeg: (u8, u8),
    pub outdeg: (u8, u8),
}

impl ComponentCtx {
    pub fn from_view(
        g: &crate::graph::Graph,
        tree: &crate::spq::SpqTree,
        view: &crate::spq::RootedView,
        node: usize,
    ) -> ComponentCtx {
        let mut pert_edge = vec![false; g.edge_count()];
        for e in view.pertinent_edges(tree, node) {
            pert_edge[e as usize] = true;
        }
        ComponentCtx {
            pert_edge,
            poles: view.poles[node],
            indeg: view.indeg[node],
            outdeg: view.outdeg[node],
        }
    }
}

/// Spirality of a realized component: right minus left turns along a
/// pole-to-pole spine, with alias-vertex handling at the poles. When a pole
/// has two alias vertices the two spine counts are averaged, which is why
/// the result is a (doubled) half-integer.
pub fn measure_spirality(
    rep: &crate::rep::OrthoRep,
    g: &crate::graph::Graph,
    ctx: &ComponentCtx,
) -> Spirality {
    let (u, v) = ctx.poles;
    let path = pert_path(g, ctx, u, v).expect("poles must be connected inside the component");
    measure_along(rep, g, ctx, &path)
}

/// Measure along every simple pole-to-pole path and assert agreement; used
/// by tests to exercise path independence.
pub fn measure_spirality_all_paths(
    rep: &crate::rep::OrthoRep,
    g: &crate::graph::Graph,
    ctx: &ComponentCtx,
) -> Vec<Spirality> {
    let (u, v) = ctx.poles;
    let mut out = Vec::new();
    let mut path = vec![u];
    let mut on_path = vec![false; g.vertex_count()];
    on_path[u as usize] = true;
    enumerate_paths(g, ctx, v, &mut path, &mut on_path, &mut |p| {
        out.push(measure_along(rep, g, ctx, p));
    });
    out
}

fn enumerate_paths(
    g: &crate::graph::Graph,
    ctx: &ComponentCtx,
    target: crate::graph::VertexId,
    path: &mut Vec<crate::graph::VertexId>,
    on_path: &mut Vec<bool>,
    f: &mut impl FnMut(&[crate::graph::VertexId]),
) {
    let cur = *path.last().unwrap();
    if cur == target {
        f(path);
        return;
    }
    for &e in g.incident_edges(cur) {
        if !ctx.pert_edge[e as usize] {
            continue;
        }
        let nxt = g.other_end(e, cur);
        if on_path[nxt as usize] {
            continue;
        }
        on_path[nxt as usize] = true;
        path.push(nxt);
        enumerate_paths(g, ctx, target, path, on_path, f);
        path.pop();
        on_path[nxt as usize] = false;
    }
}

fn pert_path(
    g: &crate::graph::Graph,
    ctx: &ComponentCtx,
    from: crate::graph::VertexId,
    to: crate::graph::VertexId,
) -> Option<Vec<crate::graph::VertexId>> {
    let n = g.vertex_count();
    let mut prev = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(from);
    prev[from as usize] = from;
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &e in g.incident_edges(x) {
            if !ctx.pert_edge[e as usize] {
                continue;
            }
            let y = g.other_end(e, x);
            if prev[y as usize] == u32::MAX {
                prev[y as usize] = x;
                queue.push_back(y);
            }
        }
    }
    if prev[to as usize] == u32::MAX {
        return None;
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur as usize];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

fn measure_along(
    rep: &crate::rep::OrthoRep,
    g: &crate::graph::Graph,
    ctx: &ComponentCtx,
    path: &[crate::graph::VertexId],
) -> Spirality {
    use crate::rep::reverse;
    let (u, v) = ctx.poles;
    debug_assert_eq!(path[0], u);
    debug_assert_eq!(*path.last().unwrap(), v);

    // Darts along the path.
    let darts: Vec<crate::rep::Dart> = path
        .windows(2)
        .map(|w| {
            rep.dart_between(w[0], w[1])
                .expect("path edge missing from representation")
        })
        .collect();
    let mut interior = 0i32;
    for w in darts.windows(2) {
        interior += rep.turn(w[0], w[1]);
    }

    let outside_arrivals = |w: crate::graph::VertexId| -> Vec<crate::rep::Dart> {
        g.incident_edges(w)
            .iter()
            .filter(|&&e| !ctx.pert_edge[e as usize])
            .map(|&e| {
                let d0 = crate::rep::dart(e, 0);
                if rep.tail(d0) == w {
                    reverse(d0)
                } else {
                    d0
                }
            })
            .collect()
    };

    // Doubled end contribution: 0 when the pole itself is the alias; twice
    // the single dummy turn for one alias; the sum of both dummy turns for
    // two aliases (their average enters the final halved value).
    let end_contribution = |w, indeg: u8, outdeg: u8, spine_dart, entering: bool| -> i32 {
        if indeg <= 1 {
            return 0;
        }
        let arrivals = outside_arrivals(w);
        debug_assert_eq!(arrivals.len(), outdeg as usize);
        let turn_via = |out_d: crate::rep::Dart| {
            if entering {
                rep.turn(out_d, spine_dart)
            } else {
                rep.turn(spine_dart, reverse(out_d))
            }
        };
        if indeg >= 2 && outdeg == 1 {
            2 * turn_via(arrivals[0])
        } else {
            debug_assert_eq!((indeg, outdeg), (2, 2));
            turn_via(arrivals[0]) + turn_via(arrivals[1])
        }
    };

    let start = end_contribution(u, ctx.indeg.0, ctx.outdeg.0, darts[0], true);
    let end = end_contribution(
        v,
        ctx.indeg.1,
        ctx.outdeg.1,
        *darts.last().unwrap(),
        false,
    );
    Spirality(2 * interior + start + end)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vals: &[i32]) -> SpiralitySet {
        SpiralitySet::from_doubled(vals.iter().map(|&v| 2 * v))
    }

    #[test]
    fn cartesian_basics() {
        let a = set(&[-1, 0, 1]);
        let b = set(&[-1, 0, 1]);
        let c = cartesian_sum(&a, &b, SumEngine::ShiftOr);
        assert_eq!(c, set(&[-2, -1, 0, 1, 2]));
        // Neutral element.
        assert_eq!(cartesian_sum(&a, &SpiralitySet::zero(), SumEngine::ShiftOr), a);
        // Gapped sets.
        let d = cartesian_sum(&set(&[-2, 2]), &set(&[-1, 1]), SumEngine::ShiftOr);
        assert_eq!(d, set(&[-3, -1, 1, 3]));
    }

    #[test]
    fn cartesian_empty_propagates() {
        let a = set(&[0, 1]);
        assert!(cartesian_sum(&a, &SpiralitySet::empty(), SumEngine::ShiftOr).is_empty());
    }

    #[test]
    fn fft_matches_shift_or() {
        let a = SpiralitySet::from_doubled((-300..300).filter(|v| v % 3 == 0));
        let b = SpiralitySet::from_doubled((-130..450).filter(|v| v % 7 == 1));
        let x = cartesian_shift_or(&a, &b);
        let y = cartesian_fft(&a, &b);
        assert_eq!(x, y);
    }

    #[test]
    fn q_star_sets() {
        assert_eq!(SpiralitySet::q_star_set(1), set(&[0]));
        assert_eq!(SpiralitySet::q_star_set(3), set(&[-2, -1, 0, 1, 2]));
        assert_eq!(SpiralitySet::q_star_set(5), set(&[-4, -3, -2, -1, 0, 1, 2, 3, 4]));
    }

    #[test]
    fn series_examples() {
        let r = compose_series(&[set(&[-1, 1]), set(&[-1, 1])], SumEngine::ShiftOr);
        assert_eq!(r, set(&[-2, 0, 2]));
        let a = set(&[-2, 0, 1]);
        assert_eq!(
            compose_series(&[SpiralitySet::zero(), a.clone()], SumEngine::ShiftOr),
            a
        );
        // Brute-force cross-check of pairwise sums.
        let x = SpiralitySet::q_star_set(3);
        let got = compose_series(&[x.clone(), x.clone()], SumEngine::ShiftOr);
        let mut expect: Vec<i32> = Vec::new();
        for p in x.iter() {
            for q in x.iter() {
                expect.push(p.0 + q.0);
            }
        }
        assert_eq!(got, SpiralitySet::from_doubled(expect));
    }

    #[test]
    fn parallel3_examples() {
        let s22 = set(&[-2, -1, 0, 1, 2]);
        assert!(parallel3_admits(&[&s22, &s22, &s22], Spirality::from_int(0)));
        let s11 = set(&[-1, 0, 1]);
        assert!(!parallel3_admits(&[&s11, &s11, &s11], Spirality::from_int(0)));
        let s44 = SpiralitySet::q_star_set(5);
        assert!(parallel3_admits(&[&s44, &s44, &s44], Spirality::from_int(2)));
    }

    #[test]
    fn parallel2_theta() {
        // theta(3,3,3) rooted at one chain: both children are 3-chains,
        // k = 1 everywhere.
        let ch = SpiralitySet::q_star_set(3);
        let ctx = Parallel2Ctx {
            sets: [&ch, &ch],
            coeffs: [JoinCoeffs { dk: [2, 2] }; 2],
            child_indeg: [(1, 1), (1, 1)],
            node_outdeg: (1, 1),
            mode: AlphaMode::Literal,
            pin_zero: None,
        };
        let joins = ctx.joins(Spirality::from_int(2));
        assert!(joins
            .iter()
            .any(|j| j.sigma_left == Spirality::from_int(2)
                && j.sigma_right == Spirality::from_int(0)
                && j.alpha == (0, 0, 1, 1)));
        assert!(!ctx.admits(Spirality::from_int(3)));
        // Symmetric target is admitted.
        assert!(ctx.admits(Spirality::from_int(0)));
        let full = ctx.compose();
        assert_eq!(full, set(&[-2, -1, 0, 1, 2]));
    }

    #[test]
    fn support_tree_matches_series() {
        let sets = vec![
            SpiralitySet::zero(),
            set(&[-1, 1]),
            set(&[-2, 2]),
            SpiralitySet::zero(),
        ];
        let st = SupportTree::build(&sets, SumEngine::ShiftOr);
        assert_eq!(st.root_set(), &set(&[-3, -1, 1, 3]));
        assert_eq!(st.delta_without(2, SumEngine::ShiftOr), set(&[-1, 1]));
        // Identity: delta(-j) + set_j = root set, for every j.
        for j in 0..sets.len() {
            let d = st.delta_without(j, SumEngine::ShiftOr);
            assert_eq!(
                cartesian_sum(&d, &sets[j], SumEngine::ShiftOr),
                *st.root_set()
            );
        }
    }

    #[test]
    fn support_tree_pads_to_power_of_two() {
        let sets = vec![set(&[0]), set(&[-1, 1]), set(&[1])];
        let st = SupportTree::build(&sets, SumEngine::ShiftOr);
        assert_eq!(st.leaf_count(), 4);
        assert_eq!(st.real_count(), 3);
        let expect = compose_series(&sets, SumEngine::ShiftOr);
        assert_eq!(st.root_set(), &expect);
    }

    #[test]
    fn symmetric_check() {
        assert!(set(&[-2, 0, 2]).is_symmetric());
        assert!(!set(&[-1, 0, 2]).is_symmetric());
    }
}
