//! Depth-first local-cover search.
//!
//! Nodes are visited in breadth-first order. At each visited node `o` whose
//! residual (target minus the edges of blocks placed so far) is not zero, the
//! search chooses every remaining block that contains `o` at once, so that
//! the residual around `o` vanishes. Once a node is settled no later block may
//! touch it, since a third block at a node breaks the gluing rules and a second
//! one would leave an uncancellable edge at it.

use std::collections::HashSet;

use super::tables::{normalize, table, tables};
use crate::assembly::Footprint;
use crate::catalog::BlockKind;
use crate::error::{Error, Result};
use crate::model::{Color, Diagram, NodeId};

/// Capacity a node starts with.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Slot {
    Free,
    /// Already in one block, white there.
    OneWhite,
    Sealed,
}

impl Slot {
    pub fn from_color(c: Color) -> Slot {
        match c {
            Color::Uncolored => Slot::Free,
            Color::White => Slot::OneWhite,
            Color::Black => Slot::Sealed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Placement {
    pub kind: BlockKind,
    pub nodes: Vec<u32>,
}

pub(crate) type FootprintElem = (Vec<NodeId>, Vec<(NodeId, NodeId, i64)>);

pub(crate) fn footprint_elem(p: &Placement) -> FootprintElem {
    let t = table(p.kind);
    let mut nodes: Vec<NodeId> = p.nodes.iter().map(|&v| v as NodeId).collect();
    nodes.sort_unstable();
    let mut edges = Vec::new();
    for a in 0..t.size {
        for b in a + 1..t.size {
            let w = t.w[a][b];
            if w != 0 {
                let (x, y) = (p.nodes[a] as NodeId, p.nodes[b] as NodeId);
                edges.push(if x < y { (x, y, w) } else { (y, x, -w) });
            }
        }
    }
    edges.sort_unstable();
    (nodes, edges)
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Config {
    pub allow_new: bool,
    pub allow_elementary: bool,
    /// New blocks must reproduce one of these footprint elements.
    pub whitelist: Option<HashSet<FootprintElem>>,
    /// Nodes that must be doubled (and no others).
    pub long: Option<Vec<bool>>,
    pub budget: u64,
}

/// Signed square-root units of a weight-1 or weight-4 edge.
fn units(w: i64) -> i64 {
    match w {
        0 => 0,
        1 => 1,
        -1 => -1,
        4 => 2,
        -4 => -2,
        _ => i64::MIN,
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Commit {
    pub node: NodeId,
    pub blocks: Vec<Placement>,
    pub options: usize,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Stats {
    pub steps: u64,
    pub examinations: Vec<u32>,
    pub first_dead_end: Option<NodeId>,
}

pub(crate) struct Engine {
    n: usize,
    target: Vec<Vec<(u32, i64)>>,
    init: Vec<Slot>,
    cfg: Config,
    blocks: Vec<Placement>,
    node_blocks: Vec<Vec<(u32, u8)>>,
    /// `(partner, signed weight from this node, block)` for every placed edge.
    contrib: Vec<Vec<(u32, i64, u32)>>,
    pub stats: Stats,
    pub commits: Vec<Commit>,
}

struct Frame {
    pivot: NodeId,
    options: Vec<Vec<Placement>>,
    next: usize,
    blocks_len: usize,
    commits_len: usize,
    ptr: usize,
}

impl Engine {
    pub fn new(d: &Diagram, init: Vec<Slot>, cfg: Config) -> Engine {
        let n = d.node_count();
        let target = d
            .adjacency()
            .into_iter()
            .map(|l| l.into_iter().map(|(u, w)| (u as u32, w)).collect())
            .collect();
        Engine {
            n,
            target,
            init,
            cfg,
            blocks: Vec::new(),
            node_blocks: vec![Vec::new(); n],
            contrib: vec![Vec::new(); n],
            stats: Stats {
                examinations: vec![0; n],
                ..Stats::default()
            },
            commits: Vec::new(),
        }
    }

    pub fn blocks(&self) -> &[Placement] {
        &self.blocks
    }

    fn target_w(&self, x: u32, y: u32) -> i64 {
        self.target[x as usize]
            .iter()
            .find(|&&(u, _)| u == y)
            .map_or(0, |&(_, w)| w)
    }

    fn used(&self, v: u32) -> usize {
        let base = match self.init[v as usize] {
            Slot::Free => 0,
            Slot::OneWhite => 1,
            Slot::Sealed => 2,
        };
        base + self.node_blocks[v as usize].len()
    }

    /// Whether the one block already holding `v` has it white.
    fn prior_white(&self, v: u32) -> bool {
        match self.init[v as usize] {
            Slot::OneWhite => true,
            Slot::Sealed => false,
            Slot::Free => {
                let (b, p) = self.node_blocks[v as usize][0];
                table(self.blocks[b as usize].kind).white[p as usize]
            }
        }
    }

    fn residual_zero(&self, x: u32, y: u32) -> bool {
        let t = self.target_w(x, y);
        let mut u = 0;
        let mut heavy = None;
        let mut count = 0;
        for &(p, w, _) in &self.contrib[x as usize] {
            if p == y {
                count += 1;
                if w.abs() == 2 {
                    heavy = Some(w);
                } else {
                    u += units(w);
                }
            }
        }
        if t.abs() == 2 {
            return count == 1 && heavy == Some(t);
        }
        heavy.is_none() && u == units(t)
    }

    pub fn node_settled(&self, x: NodeId) -> bool {
        let x32 = x as u32;
        self.target[x]
            .iter()
            .all(|&(y, _)| self.residual_zero(x32, y))
            && self.contrib[x]
                .iter()
                .all(|&(y, _, _)| self.residual_zero(x32, y))
    }

    fn residual_neighbors(&self, x: u32, out: &mut Vec<u32>) {
        out.clear();
        for &(y, _) in &self.target[x as usize] {
            if !self.residual_zero(x, y) {
                out.push(y);
            }
        }
        for &(y, _, _) in &self.contrib[x as usize] {
            if !out.contains(&y) && !self.residual_zero(x, y) {
                out.push(y);
            }
        }
    }

    /// Can `v` take template position `pos` of `kind`?
    fn capacity_ok(&self, v: u32, kind: BlockKind, pos: usize) -> bool {
        let t = table(kind);
        if let Some(long) = &self.cfg.long {
            if long[v as usize] != t.doubled[pos] {
                return false;
            }
        }
        match self.used(v) {
            0 => true,
            1 => t.white[pos] && self.prior_white(v),
            _ => false,
        }
    }

    /// Can a block add signed weight `c` from `x` to `y`, given the blocks placed so far?
    fn pair_ok(&self, x: u32, y: u32, c: i64, white_x: bool, white_y: bool) -> bool {
        let t = self.target_w(x, y);
        let mut prior = self.contrib[x as usize]
            .iter()
            .filter(|e| e.0 == y)
            .map(|e| e.1);
        let p0 = prior.next();
        if prior.next().is_some() {
            return false;
        }
        if c.abs() != 1 || t.abs() == 2 {
            return p0.is_none() && c == t;
        }
        match p0 {
            Some(p) => p.abs() == 1 && p + c == units(t),
            None => {
                let rem = units(t) - c;
                rem == 0
                    || (rem.abs() == 1
                        && white_x
                        && white_y
                        && self.used(x) == 0
                        && self.used(y) == 0)
            }
        }
    }

    fn apply(&mut self, p: Placement) {
        let t = table(p.kind);
        let id = self.blocks.len() as u32;
        for a in 0..t.size {
            let x = p.nodes[a];
            self.node_blocks[x as usize].push((id, a as u8));
            for b in 0..t.size {
                if t.w[a][b] != 0 {
                    self.contrib[x as usize].push((p.nodes[b], t.w[a][b], id));
                }
            }
        }
        self.blocks.push(p);
    }

    fn undo(&mut self) {
        let p = self.blocks.pop().expect("undo without block");
        let id = self.blocks.len() as u32;
        let t = table(p.kind);
        for a in 0..t.size {
            let x = p.nodes[a] as usize;
            self.node_blocks[x].pop();
            self.contrib[x].retain(|e| e.2 != id);
        }
    }

    fn kind_allowed(&self, kind: BlockKind) -> bool {
        if kind.is_new() {
            self.cfg.allow_new
        } else {
            self.cfg.allow_elementary
        }
    }

    /// All placements containing `o`, found by extending along residual edges.
    fn placements_at(&self, o: u32) -> Vec<Placement> {
        let mut found: HashSet<Placement> = HashSet::new();
        let mut scratch = Vec::new();
        for t in tables() {
            if !self.kind_allowed(t.kind) {
                continue;
            }
            for anchor in 0..t.size {
                if !self.capacity_ok(o, t.kind, anchor) {
                    continue;
                }
                for order in &t.orders[anchor] {
                    let mut phi = vec![u32::MAX; t.size];
                    phi[anchor] = o;
                    self.extend(t.kind, order, 0, &mut phi, &mut found, &mut scratch);
                }
            }
        }
        let mut v: Vec<Placement> = found.into_iter().collect();
        v.sort();
        v
    }

    fn extend(
        &self,
        kind: BlockKind,
        order: &[(usize, usize)],
        i: usize,
        phi: &mut Vec<u32>,
        found: &mut HashSet<Placement>,
        scratch: &mut Vec<u32>,
    ) {
        let t = table(kind);
        if i == order.len() {
            let p = Placement {
                kind,
                nodes: normalize(kind, phi),
            };
            if kind.is_new() {
                if let Some(wl) = &self.cfg.whitelist {
                    if !wl.contains(&footprint_elem(&p)) {
                        return;
                    }
                }
            }
            found.insert(p);
            return;
        }
        let (y, parent) = order[i];
        self.residual_neighbors(phi[parent], scratch);
        let cands = scratch.clone();
        for z in cands {
            if phi.contains(&z) || !self.capacity_ok(z, kind, y) {
                continue;
            }
            let ok = (0..t.size).all(|m| {
                phi[m] == u32::MAX
                    || t.w[m][y] == 0
                    || self.pair_ok(phi[m], z, t.w[m][y], t.white[m], t.white[y])
            });
            if !ok {
                continue;
            }
            phi[y] = z;
            self.extend(kind, order, i + 1, phi, found, scratch);
            phi[y] = u32::MAX;
        }
    }

    /// Every way of adding the remaining blocks at `o` that settles it.
    fn options(&mut self, o: NodeId) -> Vec<Vec<Placement>> {
        let o32 = o as u32;
        let k = self.used(o32);
        let mut res: Vec<Vec<Placement>> = Vec::new();
        if k >= 2 {
            return res;
        }
        for p1 in self.placements_at(o32) {
            let white = {
                let t = table(p1.kind);
                let pos = p1.nodes.iter().position(|&v| v == o32).unwrap();
                t.white[pos]
            };
            self.apply(p1.clone());
            if self.node_settled(o) {
                res.push(vec![p1.clone()]);
            } else if k == 0 && white {
                for p2 in self.placements_at(o32) {
                    self.apply(p2.clone());
                    if self.node_settled(o) {
                        let mut pair = vec![p1.clone(), p2];
                        pair.sort();
                        if !res.contains(&pair) {
                            res.push(pair);
                        }
                    }
                    self.undo();
                }
            }
            self.undo();
        }
        res
    }

    fn commit(&mut self, o: NodeId, opts: &[Placement], count: usize) -> Result<()> {
        self.stats.steps += 1;
        if self.cfg.budget > 0 && self.stats.steps > self.cfg.budget {
            return Err(Error::Budget(self.cfg.budget));
        }
        self.stats.examinations[o] += 1;
        for p in opts {
            self.apply(p.clone());
        }
        self.commits.push(Commit {
            node: o,
            blocks: opts.to_vec(),
            options: count,
        });
        Ok(())
    }

    /// Settles every node of `order`, or reports that no decomposition exists.
    pub fn solve(&mut self, order: &[NodeId]) -> Result<bool> {
        let mut stack: Vec<Frame> = Vec::new();
        let mut ptr = 0;
        loop {
            while ptr < order.len() && self.node_settled(order[ptr]) {
                ptr += 1;
            }
            if ptr == order.len() {
                if self.final_check() {
                    return Ok(true);
                }
            } else {
                let o = order[ptr];
                let opts = self.options(o);
                if !opts.is_empty() {
                    let count = opts.len();
                    let first = opts[0].clone();
                    stack.push(Frame {
                        pivot: o,
                        options: opts,
                        next: 0,
                        blocks_len: self.blocks.len(),
                        commits_len: self.commits.len(),
                        ptr,
                    });
                    self.commit(o, &first, count)?;
                    continue;
                }
                if self.stats.first_dead_end.is_none() {
                    self.stats.first_dead_end = Some(o);
                }
            }
            // backtrack
            loop {
                let Some(f) = stack.last_mut() else {
                    return Ok(false);
                };
                while self.blocks.len() > f.blocks_len {
                    self.undo();
                }
                self.commits.truncate(f.commits_len);
                f.next += 1;
                if f.next < f.options.len() {
                    let (o, opt, count) = (f.pivot, f.options[f.next].clone(), f.options.len());
                    ptr = f.ptr;
                    self.commit(o, &opt, count)?;
                    break;
                }
                stack.pop();
            }
        }
    }

    /// Doubling pattern, when requested, must be matched exactly.
    fn final_check(&self) -> bool {
        let Some(long) = &self.cfg.long else {
            return true;
        };
        (0..self.n).all(|v| {
            let doubled = self.node_blocks[v]
                .iter()
                .any(|&(b, p)| table(self.blocks[b as usize].kind).doubled[p as usize]);
            doubled == long[v]
        })
    }
}

/// Breadth-first order over `d` from `start`.
pub(crate) fn bfs_order(d: &Diagram, start: NodeId) -> Vec<NodeId> {
    let adj = d.adjacency();
    let mut seen = vec![false; d.node_count()];
    let mut order = vec![start];
    seen[start] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        let mut nb: Vec<NodeId> = adj[v].iter().map(|&(u, _)| u).collect();
        nb.sort_unstable();
        for u in nb {
            if !seen[u] {
                seen[u] = true;
                order.push(u);
            }
        }
    }
    order
}

/// Footprints of all ways to cover the weight-2 edges of `d` by new blocks,
/// checking only heavy edges and node multiplicities.
pub(crate) fn heavy_covers(d: &Diagram, order: &[NodeId], limit: usize) -> Result<Vec<Footprint>> {
    let n = d.node_count();
    let adj: Vec<Vec<(NodeId, i64)>> = d.adjacency();
    let tw = |x: NodeId, y: NodeId| adj[x].iter().find(|e| e.0 == y).map_or(0, |e| e.1);
    let mut covered: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut uses = vec![0u8; n];
    let mut chosen: Vec<FootprintElem> = Vec::new();
    let mut out: Vec<Footprint> = Vec::new();
    let uncovered_at = |v: NodeId, covered: &HashSet<(NodeId, NodeId)>| -> Vec<(NodeId, NodeId)> {
        adj[v]
            .iter()
            .filter(|e| e.1.abs() == 2)
            .map(|e| (v.min(e.0), v.max(e.0)))
            .filter(|k| !covered.contains(k))
            .collect()
    };

    // candidate new placements at o along heavy edges
    let cands =
        |o: NodeId, covered: &HashSet<(NodeId, NodeId)>, uses: &[u8]| -> Vec<FootprintElem> {
            let mut found: Vec<FootprintElem> = Vec::new();
            for t in tables() {
                if !t.kind.is_new() {
                    continue;
                }
                for anchor in 0..t.size {
                    let order = &t.heavy_orders[anchor];
                    let mut phi = vec![usize::MAX; t.size];
                    phi[anchor] = o;
                    let mut stack = vec![(0usize, phi)];
                    while let Some((i, phi)) = stack.pop() {
                        if i == order.len() {
                            let ok = (0..t.size).all(|a| {
                                uses[phi[a]] < 2
                                    && (0..t.size).all(|b| {
                                        let w = t.w[a][b];
                                        w.abs() < 2
                                            || (tw(phi[a], phi[b]) == w
                                                && !covered.contains(&(
                                                    phi[a].min(phi[b]),
                                                    phi[a].max(phi[b]),
                                                )))
                                    })
                            });
                            if ok {
                                let p = Placement {
                                    kind: t.kind,
                                    nodes: phi.iter().map(|&v| v as u32).collect(),
                                };
                                let fe = footprint_elem(&p);
                                if !found.contains(&fe) {
                                    found.push(fe);
                                }
                            }
                            continue;
                        }
                        let (y, parent) = order[i];
                        let w = t.w[parent][y];
                        for &(z, tzw) in &adj[phi[parent]] {
                            if tzw == w && !phi.contains(&z) {
                                let mut next = phi.clone();
                                next[y] = z;
                                stack.push((i + 1, next));
                            }
                        }
                    }
                }
            }
            found.sort();
            found
        };

    struct F {
        options: Vec<Vec<FootprintElem>>,
        next: usize,
        chosen_len: usize,
        ptr: usize,
    }
    let apply =
        |fe: &FootprintElem, covered: &mut HashSet<(NodeId, NodeId)>, uses: &mut Vec<u8>| {
            for &v in &fe.0 {
                uses[v] += 1;
            }
            for &(a, b, w) in &fe.1 {
                if w.abs() >= 2 {
                    covered.insert((a, b));
                }
            }
        };
    let unapply =
        |fe: &FootprintElem, covered: &mut HashSet<(NodeId, NodeId)>, uses: &mut Vec<u8>| {
            for &v in &fe.0 {
                uses[v] -= 1;
            }
            for &(a, b, w) in &fe.1 {
                if w.abs() >= 2 {
                    covered.remove(&(a, b));
                }
            }
        };
    let mut stack: Vec<F> = Vec::new();
    let mut ptr = 0;
    loop {
        while ptr < order.len() && uncovered_at(order[ptr], &covered).is_empty() {
            ptr += 1;
        }
        let mut dead = true;
        if ptr == order.len() {
            let mut fp = chosen.clone();
            fp.sort();
            if !out.contains(&fp) {
                out.push(fp);
                if out.len() >= limit {
                    return Ok(out);
                }
            }
        } else {
            let o = order[ptr];
            let need = uncovered_at(o, &covered);
            let single = cands(o, &covered, &uses);
            let mut options: Vec<Vec<FootprintElem>> = Vec::new();
            let heavy_of = |fe: &FootprintElem| -> Vec<(NodeId, NodeId)> {
                fe.1.iter()
                    .filter(|e| e.2.abs() == 2 && (e.0 == o || e.1 == o))
                    .map(|e| (e.0, e.1))
                    .collect()
            };
            for (i, a) in single.iter().enumerate() {
                let ha = heavy_of(a);
                if ha.len() == need.len() {
                    options.push(vec![a.clone()]);
                    continue;
                }
                for b in &single[i + 1..] {
                    let hb = heavy_of(b);
                    if ha.len() + hb.len() == need.len() && ha.iter().all(|e| !hb.contains(e)) {
                        let shared_ok = a.0.iter().all(|v| !b.0.contains(v) || uses[*v] == 0);
                        if shared_ok {
                            options.push(vec![a.clone(), b.clone()]);
                        }
                    }
                }
            }
            if !options.is_empty() {
                for fe in &options[0] {
                    apply(fe, &mut covered, &mut uses);
                    chosen.push(fe.clone());
                }
                stack.push(F {
                    chosen_len: chosen.len() - options[0].len(),
                    options,
                    next: 0,
                    ptr,
                });
                dead = false;
            }
        }
        if !dead {
            continue;
        }
        loop {
            let Some(f) = stack.last_mut() else {
                return Ok(out);
            };
            while chosen.len() > f.chosen_len {
                let fe = chosen.pop().unwrap();
                unapply(&fe, &mut covered, &mut uses);
            }
            f.next += 1;
            if f.next < f.options.len() {
                for fe in &f.options[f.next] {
                    apply(fe, &mut covered, &mut uses);
                    chosen.push(fe.clone());
                }
                ptr = f.ptr;
                break;
            }
            stack.pop();
        }
    }
}
