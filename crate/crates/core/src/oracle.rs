//! Brute-force reference implementations used to cross-check the fast paths.
//!
//! [`oracle_decompose`] shares nothing with the local-cover search beyond the
//! block catalog and [`validate_decomposition`]. It walks the nodes in id
//! order and, at node `v`, chooses every block whose smallest ambient node is
//! `v`. Once that choice is made, every pair of nodes `<= v` has all of its
//! contributing blocks fixed, so those pairs are checked exactly.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::assembly::{validate_decomposition, Decomposition, Footprint, PlacedBlock};
use crate::catalog::{template, BlockKind};
use crate::error::Result;
use crate::model::{Diagram, ExchangeMatrix, NodeId};
use crate::mutation::{scan_mutation_class, ScanLimits, ScanOutcome};

#[derive(Clone, Debug)]
pub struct OracleDecompositions {
    /// One representative per footprint.
    pub decompositions: Vec<Decomposition>,
    /// False when `max_blocks` was below the a-priori bound and was reached.
    pub complete: bool,
}

#[derive(Clone, Debug)]
struct Candidate {
    kind: BlockKind,
    nodes: Vec<NodeId>,
    low: NodeId,
    /// `(ambient node, white)`
    roles: Vec<(NodeId, bool)>,
    /// `(lo, hi, signed weight lo -> hi)`
    pairs: Vec<(NodeId, NodeId, i64)>,
}

fn candidates(g: &Diagram) -> Vec<Candidate> {
    let n = g.node_count();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &kind in BlockKind::ALL.iter() {
        let t = template(kind);
        let k = t.size();
        if k > n {
            continue;
        }
        let mut phi = vec![0usize; k];
        let mut used = vec![false; n];
        place(0, &mut phi, &mut used, &mut |phi| {
            let mut pairs: Vec<(NodeId, NodeId, i64)> = t
                .edges
                .iter()
                .map(|&(a, b, w)| {
                    let (x, y) = (phi[a], phi[b]);
                    if x < y {
                        (x, y, w as i64)
                    } else {
                        (y, x, -(w as i64))
                    }
                })
                .collect();
            pairs.sort_unstable();
            let mut roles: Vec<(NodeId, bool, usize)> = (0..k)
                .map(|i| (phi[i], t.is_white(i), t.nodes[i].copies))
                .collect();
            roles.sort_unstable();
            if !seen.insert((kind, roles.clone(), pairs.clone())) {
                return;
            }
            // a black node belongs to this block only, so its edges are exactly the block's
            for &(v, white, _) in &roles {
                if white {
                    continue;
                }
                let mut mine: Vec<(NodeId, i64)> = pairs
                    .iter()
                    .filter_map(|&(a, b, w)| {
                        if a == v {
                            Some((b, w))
                        } else if b == v {
                            Some((a, -w))
                        } else {
                            None
                        }
                    })
                    .collect();
                let theirs: Vec<(NodeId, i64)> = (0..n)
                    .filter(|&u| u != v && g.signed(v, u) != 0)
                    .map(|u| (u, g.signed(v, u)))
                    .collect();
                mine.sort_unstable();
                if mine != theirs {
                    return;
                }
            }
            // weight-2 edges are never glued to anything
            if pairs
                .iter()
                .any(|&(a, b, w)| w.abs() == 2 && g.signed(a, b) != w)
            {
                return;
            }
            out.push(Candidate {
                kind,
                nodes: phi.to_vec(),
                low: *phi.iter().min().unwrap(),
                roles: roles.iter().map(|&(v, w, _)| (v, w)).collect(),
                pairs,
            });
        });
    }
    out
}

fn place(i: usize, phi: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
    if i == phi.len() {
        f(phi);
        return;
    }
    for v in 0..used.len() {
        if !used[v] {
            used[v] = true;
            phi[i] = v;
            place(i + 1, phi, used, f);
            used[v] = false;
        }
    }
}

#[derive(Clone, Copy, Default)]
struct PairAcc {
    units: i64,
    count: u32,
    heavy: i64,
}

struct Search<'a> {
    g: &'a Diagram,
    by_low: Vec<Vec<usize>>,
    cands: Vec<Candidate>,
    /// blocks using each node; 2 once a black node is placed
    load: Vec<u8>,
    black: Vec<bool>,
    acc: BTreeMap<(NodeId, NodeId), PairAcc>,
    chosen: Vec<usize>,
    max_blocks: usize,
    hit_bound: bool,
    found: BTreeMap<Footprint, Decomposition>,
}

impl Search<'_> {
    fn fits(&self, c: &Candidate) -> bool {
        c.roles.iter().all(|&(v, white)| {
            if self.black[v] {
                return false;
            }
            if white {
                self.load[v] < 2
            } else {
                self.load[v] == 0
            }
        })
    }

    fn apply(&mut self, ci: usize, sign: i64) {
        let c = &self.cands[ci];
        for &(v, white) in &c.roles {
            if sign > 0 {
                self.load[v] += 1;
                self.black[v] = !white;
            } else {
                self.load[v] -= 1;
                self.black[v] = false;
            }
        }
        for &(a, b, w) in &c.pairs {
            let e = self.acc.entry((a, b)).or_default();
            e.count = (e.count as i64 + sign) as u32;
            match w.abs() {
                2 => e.heavy += sign * w,
                4 => e.units += sign * 2 * w.signum(),
                _ => e.units += sign * w,
            }
        }
        if sign > 0 {
            self.chosen.push(ci);
        } else {
            self.chosen.pop();
        }
    }

    fn pair_ok(&self, a: NodeId, b: NodeId) -> bool {
        let want = self.g.signed(a, b);
        let got = match self.acc.get(&(a, b)) {
            None => 0,
            Some(e) if e.heavy != 0 => {
                if e.count != 1 {
                    return false;
                }
                e.heavy
            }
            Some(e) => e.units * e.units.abs(),
        };
        got == want
    }

    fn settled(&self, v: NodeId) -> bool {
        (0..v).all(|u| self.pair_ok(u, v))
    }

    fn run(&mut self, v: NodeId) {
        let n = self.g.node_count();
        if v == n {
            let mut dec = Decomposition {
                node_count: n,
                blocks: self
                    .chosen
                    .iter()
                    .map(|&ci| PlacedBlock {
                        kind: self.cands[ci].kind,
                        nodes: self.cands[ci].nodes.clone(),
                    })
                    .collect(),
            };
            dec.normalize();
            debug_assert!(validate_decomposition(&dec, self.g).0);
            self.found.entry(dec.footprint()).or_insert(dec);
            return;
        }
        let here = self.by_low[v].clone();
        // no block starting here
        if self.settled(v) {
            self.run(v + 1);
        }
        for (x, &i) in here.iter().enumerate() {
            if !self.fits(&self.cands[i]) {
                continue;
            }
            if self.chosen.len() >= self.max_blocks {
                self.hit_bound = true;
                continue;
            }
            self.apply(i, 1);
            if self.settled(v) {
                self.run(v + 1);
            }
            for &j in &here[x..] {
                if !self.fits(&self.cands[j]) {
                    continue;
                }
                if self.chosen.len() >= self.max_blocks {
                    self.hit_bound = true;
                    continue;
                }
                self.apply(j, 1);
                if self.settled(v) {
                    self.run(v + 1);
                }
                self.apply(j, -1);
            }
            self.apply(i, -1);
        }
    }
}

/// A-priori bound on the number of blocks: every block has at least two
/// nodes and every node lies in at most two blocks.
pub fn block_bound(n: usize) -> usize {
    n
}

/// Every decomposition of `g` (colors ignored) with at most `max_blocks`
/// blocks, one per footprint.
pub fn oracle_decompose(g: &Diagram, max_blocks: usize) -> OracleDecompositions {
    let g = g.uncolored();
    let n = g.node_count();
    if g.edges().any(|e| ![1, 2, 4].contains(&e.weight)) {
        // sums of square-root units only ever give weights 1 and 4
        return OracleDecompositions {
            decompositions: Vec::new(),
            complete: true,
        };
    }
    let cands = candidates(&g);
    let mut by_low = vec![Vec::new(); n];
    for (i, c) in cands.iter().enumerate() {
        by_low[c.low].push(i);
    }
    let mut s = Search {
        g: &g,
        by_low,
        cands,
        load: vec![0; n],
        black: vec![false; n],
        acc: BTreeMap::new(),
        chosen: Vec::new(),
        max_blocks,
        hit_bound: false,
        found: BTreeMap::new(),
    };
    s.run(0);
    let complete = !s.hit_bound || max_blocks >= block_bound(n);
    OracleDecompositions {
        decompositions: s.found.into_values().collect(),
        complete,
    }
}

/// Result of an exhaustive mutation-class scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Finiteness {
    Finite {
        size: usize,
    },
    /// An edge heavier than 4 appeared. That such classes are infinite is a
    /// known result from the literature on mutation-finite matrices, not
    /// something this crate proves.
    InfiniteByCriterion {
        weight: u64,
    },
    Undecided {
        visited: usize,
    },
}

/// Scans each connected component's mutation class on its own; mutation never
/// joins components. The weight criterion only holds for connected diagrams
/// on at least three nodes, so smaller components are scanned without a
/// cutoff (mutation just negates them, and the scan ends). `size` is the
/// product of the component class sizes; `budget` applies per component.
pub fn oracle_is_finite(b: &ExchangeMatrix, cutoff: u64, budget: usize) -> Result<Finiteness> {
    let d = crate::model::matrix_to_diagram(b);
    let mut size = 1usize;
    let mut undecided = None;
    for comp in d.components() {
        let limits = ScanLimits {
            weight_cutoff: if comp.len() < 3 { u64::MAX } else { cutoff },
            max_diagrams: budget,
        };
        match scan_mutation_class(&d.induced(&comp), limits)? {
            ScanOutcome::Exhausted { size: s } => size = size.saturating_mul(s),
            ScanOutcome::HeavyEdge { weight, .. } => {
                return Ok(Finiteness::InfiniteByCriterion { weight })
            }
            ScanOutcome::Budget { visited } => undecided = Some(visited),
        }
    }
    Ok(match undecided {
        Some(visited) => Finiteness::Undecided { visited },
        None => Finiteness::Finite { size },
    })
}
