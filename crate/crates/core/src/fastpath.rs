//! Linear-time testing and construction for independent-parallel SP-graphs.
//!
//! In this family every non-negative spirality set takes one of six
//! interval structures, so each node's set fits in O(1) space and every
//! composition and reroot update is constant-time. Full sets are symmetric,
//! so a signed value v is admitted iff |v| is in the non-negative interval.

use crate::graph::Graph;
use crate::spirality::{Spirality, SpiralitySet};
use crate::spq::{
    build_spq_star, is_independent_parallel, rooted_view, NodeKind, SpqError, SpqTree,
};
use crate::tester::NodeAssignment;

/// One of the six non-negative set structures: [0], [1], [1,2]^1, [0,M]^1,
/// [0,M]^2, [1,M]^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interval {
    Single(u8),
    Jump1 { m: u8, max: i32 },
    Jump2 { m: u8, max: i32 },
}

impl Interval {
    pub fn admits(&self, s: i32) -> bool {
        if s < 0 {
            return false;
        }
        match *self {
            Interval::Single(m) => s == m as i32,
            Interval::Jump1 { m, max } => s >= m as i32 && s <= max,
            Interval::Jump2 { m, max } => s >= m as i32 && s <= max && (s - m as i32) % 2 == 0,
        }
    }

    /// Signed membership in the full (symmetric) set.
    pub fn admits_signed(&self, v: i32) -> bool {
        self.admits(v.abs())
    }

    pub fn max(&self) -> i32 {
        match *self {
            Interval::Single(m) => m as i32,
            Interval::Jump1 { max, .. } | Interval::Jump2 { max, .. } => max,
        }
    }

    pub fn is_jump1(&self) -> bool {
        matches!(self, Interval::Jump1 { .. })
    }

    pub fn is_jump2(&self) -> bool {
        matches!(self, Interval::Jump2 { .. })
    }

    /// The structure matching a dynamic-program set, if any; `Ok(None)` for
    /// the empty set, `Err` when the set fits none of the six shapes.
    pub fn from_set(set: &SpiralitySet) -> Result<Option<Interval>, String> {
        let vals: Vec<i32> = set
            .values_doubled()
            .into_iter()
            .filter(|&d| d >= 0)
            .collect();
        if vals.iter().any(|&d| d % 2 != 0) {
            return Err(format!("half-integer values in {:?}", set));
        }
        let vals: Vec<i32> = vals.into_iter().map(|d| d / 2).collect();
        if vals.is_empty() {
            if set.is_empty() {
                return Ok(None);
            }
            return Err(format!("negative-only set {:?}", set));
        }
        let m = vals[0];
        let max = *vals.last().unwrap();
        let candidates: &[Interval] = &[
            Interval::Single(m as u8),
            Interval::Jump1 {
                m: m as u8,
                max,
            },
            Interval::Jump2 {
                m: m as u8,
                max,
            },
        ];
        'cand: for c in candidates {
            match *c {
                Interval::Single(x) if x > 1 => continue,
                Interval::Jump1 { m, max } if !(m <= 1 && (m == 0 || max == 2)) => continue,
                Interval::Jump2 { m, max } if m > 1 || (max - m as i32) % 2 != 0 => continue,
                _ => {}
            }
            for s in 0..=max {
                if c.admits(s) != vals.contains(&s) {
                    continue 'cand;
                }
            }
            return Ok(Some(*c));
        }
        Err(format!("set {:?} matches no interval structure", set))
    }

    /// Expand into the doubled-value set form, full (symmetric) range.
    pub fn to_full_set(&self) -> SpiralitySet {
        let mut vals = Vec::new();
        for s in 0..=self.max() {
            if self.admits(s) {
                vals.push(2 * s);
                vals.push(-2 * s);
            }
        }
        SpiralitySet::from_doubled(vals)
    }
}

/// Chain interval: all integers in [0, len-1].
pub fn interval_q(len: usize) -> Interval {
    if len == 1 {
        Interval::Single(0)
    } else {
        Interval::Jump1 {
            m: 0,
            max: len as i32 - 1,
        }
    }
}

/// Aggregated child statistics of an S-node, for O(1) set computation and
/// O(1) reroot deltas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SeriesCounters {
    /// Children with set [0].
    pub x: u32,
    /// Children with set [1,2]^1.
    pub y: u32,
    /// Jump-1 children.
    pub z: u32,
    /// Sum of children maxima.
    pub max_sum: i64,
    pub children: u32,
    pub empty: u32,
}

impl SeriesCounters {
    pub fn add(&mut self, iv: Option<Interval>) {
        self.children += 1;
        match iv {
            None => self.empty += 1,
            Some(iv) => {
                if iv == Interval::Single(0) {
                    self.x += 1;
                }
                if iv == (Interval::Jump1 { m: 1, max: 2 }) {
                    self.y += 1;
                }
                if iv.is_jump1() {
                    self.z += 1;
                }
                self.max_sum += iv.max() as i64;
            }
        }
    }

    pub fn remove(&mut self, iv: Option<Interval>) {
        self.children -= 1;
        match iv {
            None => self.empty -= 1,
            Some(iv) => {
                if iv == Interval::Single(0) {
                    self.x -= 1;
                }
                if iv == (Interval::Jump1 { m: 1, max: 2 }) {
                    self.y -= 1;
                }
                if iv.is_jump1() {
                    self.z -= 1;
                }
                self.max_sum -= iv.max() as i64;
            }
        }
    }
}

/// S-node composition from counters (decision tree of the series lemma).
pub fn interval_series(c: &SeriesCounters) -> Option<Interval> {
    if c.empty > 0 {
        return None;
    }
    let max = c.max_sum;
    debug_assert!(max <= i32::MAX as i64);
    let max = max as i32;
    if c.z > 0 {
        if max != 2 {
            return Some(Interval::Jump1 { m: 0, max });
        }
        if c.x + c.y == c.children && c.y == 1 {
            return Some(Interval::Jump1 { m: 1, max: 2 });
        }
        return Some(Interval::Jump1 { m: 0, max: 2 });
    }
    if max <= 1 {
        return Some(Interval::Single(max as u8));
    }
    Some(Interval::Jump2 {
        m: (max % 2) as u8,
        max,
    })
}

fn admits_p3(ivs: &[Interval; 3], s: i32) -> bool {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS.iter().any(|&[l, c, r]| {
        ivs[l].admits_signed(s + 2) && ivs[c].admits_signed(s) && ivs[r].admits_signed(s - 2)
    })
}

fn admits_p2(ivs: &[Interval; 2], s: i32) -> bool {
    p2_choice(ivs, s).is_some()
}

/// One satisfying (left-child index, alphas, child values) for a two-child
/// P-node; independent-parallel implies every k coefficient is 1.
pub fn p2_choice(ivs: &[Interval; 2], s: i32) -> Option<(usize, (u8, u8, u8, u8), i32, i32)> {
    for left in 0..2usize {
        for au_l in 0..2u8 {
            for av_l in 0..2u8 {
                let sl = s + au_l as i32 + av_l as i32;
                if !ivs[left].admits_signed(sl) {
                    continue;
                }
                for au_r in 0..2u8 {
                    if au_l + au_r == 0 {
                        continue;
                    }
                    for av_r in 0..2u8 {
                        if av_l + av_r == 0 {
                            continue;
                        }
                        let sr = s - au_r as i32 - av_r as i32;
                        if ivs[1 - left].admits_signed(sr) {
                            return Some((left, (au_l, av_l, au_r, av_r), sl, sr));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Largest admitted value: constant-case probing for M <= 4 (sound because
/// no structure has a gap longer than 2), falling back to the closed form
/// for M > 4.
fn find_max(admits: &dyn Fn(i32) -> bool, beyond4: i32) -> i32 {
    for i in (0..=4).rev() {
        if admits(i) && !admits(i + 1) && !admits(i + 2) {
            return i;
        }
    }
    beyond4
}

/// Three-child parallel composition.
pub fn interval_p3(a: Option<Interval>, b: Option<Interval>, c: Option<Interval>) -> Option<Interval> {
    let ivs = [a?, b?, c?];
    let admits = |s: i32| admits_p3(&ivs, s);
    if !admits(0) && !admits(1) {
        return None;
    }
    let jump1 = (admits(0) && admits(1)) || (admits(1) && admits(2));
    let beyond = || {
        let mut maxes = [ivs[0].max(), ivs[1].max(), ivs[2].max()];
        maxes.sort_unstable();
        let bar = (maxes[2] - 2).min(maxes[1]).min(maxes[0] + 2);
        if jump1 || admits(bar) {
            bar
        } else {
            bar - 1
        }
    };
    let max = find_max(&admits, beyond());
    Some(classify(&admits, jump1, max))
}

/// Two-child parallel composition.
pub fn interval_p2(a: Option<Interval>, b: Option<Interval>) -> Option<Interval> {
    let ivs = [a?, b?];
    let admits = |s: i32| admits_p2(&ivs, s);
    if !admits(0) && !admits(1) {
        return None;
    }
    let beyond = || {
        let (mmax, mmin) = if ivs[0].max() >= ivs[1].max() {
            (ivs[0], ivs[1])
        } else {
            (ivs[1], ivs[0])
        };
        if mmax.max() >= mmin.max() + 2 {
            mmin.max() + 2
        } else if mmin.admits_signed(mmax.max() - 2) {
            mmax.max()
        } else {
            mmax.max() - 1
        }
    };
    let max = find_max(&admits, beyond());
    // A two-child parallel node is always jump-1.
    if max == 2 && !admits(0) {
        return Some(Interval::Jump1 { m: 1, max: 2 });
    }
    if max <= 0 {
        return Some(Interval::Single(0));
    }
    Some(Interval::Jump1 { m: 0, max })
}

fn classify(admits: &dyn Fn(i32) -> bool, jump1: bool, max: i32) -> Interval {
    if jump1 {
        if admits(0) {
            return Interval::Jump1 { m: 0, max };
        }
        debug_assert_eq!(max, 2);
        return Interval::Jump1 { m: 1, max: 2 };
    }
    if max <= 1 {
        return Interval::Single(max as u8);
    }
    Interval::Jump2 {
        m: (max % 2) as u8,
        max,
    }
}

/// Root feasibility: some admitted value in [0,4] pairs with a chain value
/// in [0, min(4, len-1)] to sum to 4.
pub fn root_check(child: Option<Interval>, len: usize) -> Option<(i32, i32)> {
    let child = child?;
    let cap = (len as i32 - 1).min(4);
    for s in (0..=4).rev() {
        if child.admits(s) && 4 - s <= cap {
            return Some((s, 4 - s));
        }
    }
    None
}

/// All directed spirality intervals of an independent-parallel SP block:
/// `val[x][i]` is the non-negative set of node x when its parent is
/// `tree.adj[x][i].0`. Computed with two passes and O(1) reroot updates.
pub struct IpDp {
    pub val: Vec<Vec<Option<Interval>>>,
    /// Aggregate counters per S-node over all tree neighbors.
    pub totals: Vec<SeriesCounters>,
}

pub fn ip_intervals(tree: &SpqTree) -> IpDp {
    let n = tree.node_count();
    let mut val: Vec<Vec<Option<Interval>>> = (0..n)
        .map(|x| vec![None; tree.degree(x)])
        .collect();
    let mut have: Vec<Vec<bool>> = (0..n).map(|x| vec![false; tree.degree(x)]).collect();

    // Root anywhere; a Q* leaf keeps the conventions simple.
    let root = tree
        .q_star_nodes()
        .next()
        .expect("spq tree has a leaf");
    // Downward pass: post-order on the tree rooted at `root`.
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        order.push(x);
        for &(nb, _) in &tree.adj[x] {
            if nb != parent[x] {
                parent[nb] = x;
                stack.push(nb);
            }
        }
    }
    for &x in order.iter().rev() {
        if x == root {
            continue;
        }
        let p = parent[x];
        let pos = tree.adj[x].iter().position(|&(nb, _)| nb == p).unwrap();
        let children: Vec<Option<Interval>> = tree.adj[x]
            .iter()
            .filter(|&&(nb, _)| nb != p)
            .map(|&(nb, _)| {
                let cpos = tree.adj[nb].iter().position(|&(m, _)| m == x).unwrap();
                debug_assert!(have[nb][cpos]);
                val[nb][cpos]
            })
            .collect();
        val[x][pos] = combine(tree, x, &children);
        have[x][pos] = true;
    }
    // Upward pass: pre-order; fill the remaining directions.
    for &x in order.iter() {
        for i in 0..tree.degree(x) {
            if have[x][i] {
                continue;
            }
            let (target, _) = tree.adj[x][i];
            let children: Vec<Option<Interval>> = tree.adj[x]
                .iter()
                .filter(|&&(nb, _)| nb != target)
                .map(|&(nb, _)| {
                    let cpos = tree.adj[nb].iter().position(|&(m, _)| m == x).unwrap();
                    debug_assert!(have[nb][cpos], "dependency order broken");
                    val[nb][cpos]
                })
                .collect();
            val[x][i] = combine(tree, x, &children);
            have[x][i] = true;
        }
    }

    // Aggregate S-node counters over all neighbors for the instrumented
    // reroot-delta checks.
    let mut totals = vec![SeriesCounters::default(); n];
    for x in 0..n {
        if tree.kind(x) == NodeKind::S {
            for &(nb, _) in &tree.adj[x] {
                let cpos = tree.adj[nb].iter().position(|&(m, _)| m == x).unwrap();
                totals[x].add(val[nb][cpos]);
            }
        }
    }
    IpDp { val, totals }
}

fn combine(tree: &SpqTree, x: usize, children: &[Option<Interval>]) -> Option<Interval> {
    match tree.kind(x) {
        NodeKind::QStar => Some(interval_q(tree.chain(x).len())),
        NodeKind::P => {
            if children.len() == 3 {
                interval_p3(children[0], children[1], children[2])
            } else {
                interval_p2(children[0], children[1])
            }
        }
        NodeKind::S => {
            let mut c = SeriesCounters::default();
            for &iv in children {
                c.add(iv);
            }
            interval_series(&c)
        }
    }
}

impl IpDp {
    /// Interval of `node` when `parent` is its tree parent.
    pub fn get(&self, tree: &SpqTree, node: usize, parent: usize) -> Option<Interval> {
        let pos = tree.adj[node]
            .iter()
            .position(|&(nb, _)| nb == parent)
            .expect("parent must be adjacent");
        self.val[node][pos]
    }

    /// Counters of an S-node with one neighbor excluded, via O(1) deltas
    /// from the totals.
    pub fn series_counters_excluding(
        &self,
        tree: &SpqTree,
        node: usize,
        excluded: usize,
    ) -> SeriesCounters {
        let mut c = self.totals[node];
        let cpos = tree.adj[excluded]
            .iter()
            .position(|&(m, _)| m == node)
            .unwrap();
        c.remove(self.val[excluded][cpos]);
        c
    }
}

#[derive(Clone, Debug)]
pub struct IpWitness {
    pub root: usize,
    pub child_sigma: Spirality,
    pub root_sigma: Spirality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpError {
    NotIndependentParallel,
    Spq(SpqError),
}

impl std::fmt::Display for IpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IpError::NotIndependentParallel => write!(f, "block is not independent-parallel"),
            IpError::Spq(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IpError {}

impl From<SpqError> for IpError {
    fn from(e: SpqError) -> Self {
        IpError::Spq(e)
    }
}

/// Linear-time verdict for an independent-parallel SP block.
pub fn test_ip(g: &Graph) -> Result<Option<IpWitness>, IpError> {
    let tree = build_spq_star(g)?;
    if !is_independent_parallel(&tree) {
        return Err(IpError::NotIndependentParallel);
    }
    let dp = ip_intervals(&tree);
    let mut roots: Vec<usize> = tree.q_star_nodes().collect();
    roots.sort_by_key(|&x| (std::cmp::Reverse(tree.chain(x).len()), x));
    for root in roots {
        let child = tree.adj[root][0].0;
        let iv = dp.get(&tree, child, root);
        if let Some((sc, sr)) = root_check(iv, tree.chain(root).len()) {
            // The chain takes the mirror of its non-negative value:
            // child_sigma - root_sigma = 4 with root_sigma = -sr.
            debug_assert_eq!(sc + sr, 4);
            return Ok(Some(IpWitness {
                root,
                child_sigma: Spirality::from_int(sc),
                root_sigma: Spirality::from_int(-sr),
            }));
        }
    }
    Ok(None)
}

/// Expand an independent-parallel witness into a full assignment using the
/// delta-reduction ladder for S-nodes.
pub fn construct_ip(g: &Graph, witness: &IpWitness) -> Result<NodeAssignment, IpError> {
    let tree = build_spq_star(g)?;
    if !is_independent_parallel(&tree) {
        return Err(IpError::NotIndependentParallel);
    }
    let dp = ip_intervals(&tree);
    let view = rooted_view(&tree, g, witness.root)?;
    let n = tree.node_count();
    let mut asg = NodeAssignment {
        view: view.clone(),
        sigma: vec![Spirality(0); n],
        p_order: vec![Vec::new(); n],
        p2_join: vec![None; n],
        turns: vec![Vec::new(); n],
    };
    asg.sigma[witness.root] = witness.root_sigma;
    let rc = view.root_child();
    asg.sigma[rc] = witness.child_sigma;
    let mut stack = vec![rc];
    while let Some(node) = stack.pop() {
        let sigma = asg.sigma[node].0 / 2;
        let ch = view.children[node].clone();
        let ivs: Vec<Interval> = ch
            .iter()
            .map(|&c| dp.get(&tree, c, node).expect("witness children are drawable"))
            .collect();
        match tree.kind(node) {
            NodeKind::QStar => {}
            NodeKind::P => {
                if ch.len() == 3 {
                    let refs = [ivs[0], ivs[1], ivs[2]];
                    let perm = p3_order(&refs, sigma).expect("three-child target admitted");
                    asg.p_order[node] = perm.iter().map(|&i| ch[i]).collect();
                    asg.sigma[ch[perm[0]]] = Spirality::from_int(sigma + 2);
                    asg.sigma[ch[perm[1]]] = Spirality::from_int(sigma);
                    asg.sigma[ch[perm[2]]] = Spirality::from_int(sigma - 2);
                } else {
                    let refs = [ivs[0], ivs[1]];
                    let (left, alpha, sl, sr) =
                        p2_choice(&refs, sigma).expect("two-child target admitted");
                    asg.p_order[node] = vec![ch[left], ch[1 - left]];
                    asg.sigma[ch[left]] = Spirality::from_int(sl);
                    asg.sigma[ch[1 - left]] = Spirality::from_int(sr);
                    asg.p2_join[node] = Some(crate::spirality::ParallelJoin {
                        left,
                        alpha,
                        sigma_left: Spirality::from_int(sl),
                        sigma_right: Spirality::from_int(sr),
                    });
                }
            }
            NodeKind::S => {
                let shape =
                    combine(&tree, node, &ivs.iter().map(|&i| Some(i)).collect::<Vec<_>>())
                        .expect("witness node is drawable");
                let values = series_split(&ivs, shape, sigma);
                for (&c, &v) in ch.iter().zip(values.iter()) {
                    asg.sigma[c] = Spirality::from_int(v);
                }
            }
        }
        stack.extend_from_slice(&view.children[node]);
    }
    // Chain turn sequences: greedy from the chain start.
    for q in tree.q_star_nodes() {
        if view.parent[q] == crate::spq::NO_PARENT && q != witness.root {
            continue;
        }
        let chain = tree.chain(q);
        // Stored in chain-vertex order; flip the target when the chain's
        // vertex list starts at the far pole.
        let (u, _) = view.poles[q];
        let sigma = if chain.vertices[0] == u {
            asg.sigma[q].0 / 2
        } else {
            -asg.sigma[q].0 / 2
        };
        let interior = chain.vertices.len() - 2;
        let mut turns = vec![0i8; interior];
        let sign = if sigma >= 0 { 1i8 } else { -1i8 };
        for t in turns.iter_mut().take(sigma.unsigned_abs() as usize) {
            *t = sign;
        }
        asg.turns[q] = turns;
    }
    Ok(asg)
}

fn p3_order(ivs: &[Interval; 3], s: i32) -> Option<[usize; 3]> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS.into_iter().find(|&[l, c, r]| {
        ivs[l].admits_signed(s + 2) && ivs[c].admits_signed(s) && ivs[r].admits_signed(s - 2)
    })
}

/// Theorem-4 style assignment of child spiralities summing to the target:
/// start every child at its maximum and walk the excess down through the
/// jump-1/jump-2 case ladder.
fn series_split(ivs: &[Interval], shape: Interval, target: i32) -> Vec<i32> {
    let negate = target < 0;
    let target_abs = target.abs();
    let mut sig: Vec<i32> = ivs.iter().map(|iv| iv.max()).collect();
    let mut delta: i64 = sig.iter().map(|&v| v as i64).sum::<i64>() - target_abs as i64;
    debug_assert!(delta >= 0);

    let is12 = |iv: &Interval| *iv == Interval::Jump1 { m: 1, max: 2 };
    match shape {
        Interval::Single(_) => {
            debug_assert_eq!(delta, 0);
        }
        Interval::Jump1 { m: 1, .. } => {
            // [1,2]^1: exactly one [1,2]^1 child, everything else [0].
            debug_assert!(delta <= 1);
            if delta == 1 {
                let j = ivs.iter().position(is12).expect("a [1,2] child exists");
                sig[j] -= 1;
                delta = 0;
            }
        }
        Interval::Jump2 { .. } => {
            debug_assert_eq!(delta % 2, 0);
            for (j, iv) in ivs.iter().enumerate() {
                if delta == 0 {
                    break;
                }
                // Children here are jump-2 or trivial; rooms stay even.
                let room = 2 * iv.max() as i64;
                let take = delta.min(room);
                sig[j] -= take as i32;
                delta -= take;
            }
        }
        Interval::Jump1 { m: 0, .. } => {
            let mut processed: Vec<usize> = Vec::new();
            let idxs: Vec<usize> = (0..ivs.len()).filter(|&j| ivs[j].is_jump1()).collect();
            let mut pos = 0;
            while pos < idxs.len() && delta > 0 {
                let j = idxs[pos];
                let room = (sig[j] + ivs[j].max()) as i64;
                let mut take = delta.min(room);
                if is12(&ivs[j]) && sig[j] as i64 - take == 0 {
                    // A [1,2]^1 child cannot land on 0; apply one of the
                    // escape strategies.
                    if let Some(k) = (0..ivs.len())
                        .find(|&k| (ivs[k].is_jump2() || ivs[k] == Interval::Single(1)) && ivs[k].admits_signed(sig[k] - 2))
                    {
                        sig[k] -= 2;
                        delta -= 2;
                        continue;
                    }
                    if let Some(&k) = processed
                        .iter()
                        .rev()
                        .find(|&&k| ivs[k].admits_signed(sig[k] + 1) && ivs[j].admits_signed(sig[j] - 3))
                    {
                        sig[j] -= 3;
                        sig[k] += 1;
                        delta -= 2;
                        processed.push(j);
                        pos += 1;
                        continue;
                    }
                    if let Some(&k) = idxs[pos + 1..]
                        .iter()
                        .find(|&&k| ivs[k].admits_signed(sig[k] - 1))
                    {
                        sig[j] -= 1;
                        sig[k] -= 1;
                        delta -= 2;
                        processed.push(j);
                        pos += 1;
                        continue;
                    }
                    // Lone escape: stop one short of the hole.
                    take -= 1;
                }
                sig[j] -= take as i32;
                delta -= take;
                processed.push(j);
                pos += 1;
            }
            if delta > 0 {
                if delta % 2 == 1 {
                    // Re-balance parity by one unit on any child that has a
                    // legal one-step move; prefer moving down.
                    if let Some(k) =
                        (0..ivs.len()).find(|&k| ivs[k].admits_signed(sig[k] - 1))
                    {
                        sig[k] -= 1;
                        delta -= 1;
                    } else {
                        let k = (0..ivs.len())
                            .find(|&k| ivs[k].admits_signed(sig[k] + 1))
                            .expect("a one-step move must exist");
                        sig[k] += 1;
                        delta += 1;
                    }
                }
                for (j, iv) in ivs.iter().enumerate() {
                    if delta == 0 {
                        break;
                    }
                    let mut room = (sig[j] + iv.max()) as i64;
                    room -= room % 2;
                    let mut take = delta.min(room);
                    if is12(iv) && sig[j] as i64 - take == 0 {
                        take = (take - 2).max(0);
                    }
                    sig[j] -= take as i32;
                    delta -= take;
                }
            }
        }
        Interval::Jump1 { m, .. } => {
            unreachable!("jump-1 lower bound {m} out of range");
        }
    }
    debug_assert_eq!(delta, 0, "delta ladder must consume the excess");
    debug_assert!(
        ivs.iter()
            .zip(&sig)
            .all(|(iv, &v)| iv.admits_signed(v)),
        "ladder assigned a value outside a child set"
    );
    debug_assert_eq!(sig.iter().sum::<i32>(), target_abs);
    if negate {
        for v in sig.iter_mut() {
            *v = -*v;
        }
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_intervals() {
        assert_eq!(interval_q(1), Interval::Single(0));
        assert_eq!(interval_q(2), Interval::Jump1 { m: 0, max: 1 });
        assert_eq!(interval_q(3), Interval::Jump1 { m: 0, max: 2 });
    }

    #[test]
    fn series_cases() {
        // {[1,2]^1, [0]} -> [1,2]^1.
        let mut c = SeriesCounters::default();
        c.add(Some(Interval::Jump1 { m: 1, max: 2 }));
        c.add(Some(Interval::Single(0)));
        assert_eq!(interval_series(&c), Some(Interval::Jump1 { m: 1, max: 2 }));
        // {[0,1]^1, [0,1]^1} -> [0,2]^1.
        let mut c = SeriesCounters::default();
        c.add(Some(Interval::Jump1 { m: 0, max: 1 }));
        c.add(Some(Interval::Jump1 { m: 0, max: 1 }));
        assert_eq!(interval_series(&c), Some(Interval::Jump1 { m: 0, max: 2 }));
        // {[1], [1]} -> [0,2]^2.
        let mut c = SeriesCounters::default();
        c.add(Some(Interval::Single(1)));
        c.add(Some(Interval::Single(1)));
        assert_eq!(interval_series(&c), Some(Interval::Jump2 { m: 0, max: 2 }));
    }

    #[test]
    fn p3_cases() {
        let l5 = Some(interval_q(5));
        assert_eq!(
            interval_p3(l5, l5, l5),
            Some(Interval::Jump1 { m: 0, max: 2 })
        );
        let l3 = Some(interval_q(3));
        assert_eq!(interval_p3(l3, l3, l3), Some(Interval::Single(0)));
        let l2 = Some(interval_q(2));
        assert_eq!(interval_p3(l2, l2, l2), None);
    }

    #[test]
    fn p2_cases() {
        let l3 = Some(interval_q(3));
        assert_eq!(interval_p2(l3, l3), Some(Interval::Jump1 { m: 0, max: 2 }));
        // Two 2-chains in parallel admit {0,1}; the K_{2,3} rejection
        // happens at the root check, not here.
        let l2 = Some(interval_q(2));
        let p = interval_p2(l2, l2);
        assert_eq!(p, Some(Interval::Jump1 { m: 0, max: 1 }));
        assert!(root_check(p, 2).is_none());
        let l5 = Some(interval_q(5));
        assert_eq!(interval_p2(l5, l2), Some(Interval::Jump1 { m: 0, max: 3 }));
    }

    #[test]
    fn root_checks() {
        let c = Some(Interval::Jump1 { m: 0, max: 2 });
        assert!(root_check(c, 3).is_some());
        assert!(root_check(c, 2).is_none());
        let full = Some(Interval::Jump1 { m: 0, max: 4 });
        assert!(root_check(full, 1).is_some());
    }

    #[test]
    fn delta_ladder_example() {
        // Children maxima (2,2,1) with shapes ([0,2]^2, [0,2]^2, [1]),
        // target 3: delta 2, reduce one jump-2 child by 2.
        let ivs = [
            Interval::Jump2 { m: 0, max: 2 },
            Interval::Jump2 { m: 0, max: 2 },
            Interval::Single(1),
        ];
        let mut c = SeriesCounters::default();
        for iv in ivs {
            c.add(Some(iv));
        }
        let shape = interval_series(&c).unwrap();
        let got = series_split(&ivs, shape, 3);
        assert_eq!(got.iter().sum::<i32>(), 3);
        assert!(ivs.iter().zip(&got).all(|(iv, &v)| iv.admits_signed(v)));
        assert_eq!(got, vec![0, 2, 1]);
    }

    #[test]
    fn interval_from_set_roundtrip() {
        for iv in [
            Interval::Single(0),
            Interval::Single(1),
            Interval::Jump1 { m: 1, max: 2 },
            Interval::Jump1 { m: 0, max: 5 },
            Interval::Jump2 { m: 0, max: 6 },
            Interval::Jump2 { m: 1, max: 7 },
        ] {
            let set = iv.to_full_set();
            assert_eq!(Interval::from_set(&set), Ok(Some(iv)));
        }
        // A gapped irregular set conforms to no structure.
        let bad = SpiralitySet::from_doubled([-8, -6, -2, 0, 2, 6, 8]);
        assert!(Interval::from_set(&bad).is_err());
    }
}
