//! Canonical labelling of diagrams by partition refinement and individualization.
//!
//! Up to [`CERTIFIED_BOUND`] nodes per component the lexicographically least
//! code over the whole search tree is returned, which is a true isomorphism
//! invariant. Larger components fall back to refinement plus smallest-id
//! tie-breaking, and the result is flagged as not certified.

use serde::{Deserialize, Serialize};

use crate::model::{Color, Diagram, NodeId};

pub const CERTIFIED_BOUND: usize = 12;

/// Leaves visited per component before giving up on certification.
const LEAF_BUDGET: usize = 200_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub nodes: usize,
    /// Colors followed by the upper triangle of signed weights, in canonical order.
    pub code: Vec<i64>,
    pub certified: bool,
}

impl CanonicalForm {
    /// Rebuilds a representative diagram.
    pub fn to_diagram(&self) -> Diagram {
        let n = self.nodes;
        let mut d = Diagram::new(n);
        for v in 0..n {
            d.set_color(
                v,
                match self.code[v] {
                    1 => Color::White,
                    2 => Color::Black,
                    _ => Color::Uncolored,
                },
            );
        }
        let mut k = n;
        for i in 0..n {
            for j in i + 1..n {
                if self.code[k] != 0 {
                    d.set_signed(i, j, self.code[k]);
                }
                k += 1;
            }
        }
        d
    }
}

fn color_code(c: Color) -> i64 {
    match c {
        Color::Uncolored => 0,
        Color::White => 1,
        Color::Black => 2,
    }
}

struct Ctx<'a> {
    d: &'a Diagram,
    adj: Vec<Vec<(NodeId, i64)>>,
}

impl Ctx<'_> {
    /// Refines `cell` (cell index per node, dense from 0) to an equitable partition.
    fn refine(&self, cell: &mut [usize]) {
        let n = cell.len();
        let mut cells = count(cell);
        loop {
            let mut keys: Vec<(usize, Vec<(usize, i64)>, usize)> = (0..n)
                .map(|v| {
                    let mut sig: Vec<(usize, i64)> =
                        self.adj[v].iter().map(|&(u, w)| (cell[u], w)).collect();
                    sig.sort_unstable();
                    (cell[v], sig, v)
                })
                .collect();
            keys.sort_unstable();
            let mut next = 0;
            for i in 0..n {
                if i > 0 && (keys[i].0 != keys[i - 1].0 || keys[i].1 != keys[i - 1].1) {
                    next += 1;
                }
                cell[keys[i].2] = next;
            }
            let c = next + 1;
            if c == cells {
                return;
            }
            cells = c;
        }
    }

    fn code(&self, cell: &[usize]) -> Vec<i64> {
        let n = cell.len();
        let mut order = vec![0; n];
        for v in 0..n {
            order[cell[v]] = v;
        }
        let mut code = Vec::with_capacity(n + n * (n.saturating_sub(1)) / 2);
        for &v in &order {
            code.push(color_code(self.d.color(v)));
        }
        for i in 0..n {
            for j in i + 1..n {
                code.push(self.d.signed(order[i], order[j]));
            }
        }
        code
    }

    fn twins(&self, u: NodeId, v: NodeId) -> bool {
        if self.d.color(u) != self.d.color(v) || self.d.signed(u, v) != 0 {
            return false;
        }
        let mut a: Vec<(NodeId, i64)> = self.adj[u].clone();
        let mut b: Vec<(NodeId, i64)> = self.adj[v].clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

fn count(cell: &[usize]) -> usize {
    cell.iter().max().map_or(0, |m| m + 1)
}

/// Splits `v` off the front of its cell.
fn individualize(cell: &[usize], v: NodeId) -> Vec<usize> {
    let c = cell[v];
    cell.iter()
        .enumerate()
        .map(|(u, &x)| {
            if x > c || (x == c && u != v) {
                x + 1
            } else {
                x
            }
        })
        .collect()
}

fn target_cell(cell: &[usize]) -> Option<Vec<NodeId>> {
    let cells = count(cell);
    let mut size = vec![0usize; cells];
    for &c in cell {
        size[c] += 1;
    }
    let t = (0..cells).find(|&c| size[c] > 1)?;
    Some((0..cell.len()).filter(|&v| cell[v] == t).collect())
}

/// Returns the code and node order (position → node) of a connected diagram.
fn canon_connected(d: &Diagram, certify: bool) -> (Vec<i64>, Vec<NodeId>, bool) {
    let n = d.node_count();
    let ctx = Ctx {
        d,
        adj: d.adjacency(),
    };
    let mut start: Vec<usize> = d.colors().iter().map(|&c| color_code(c) as usize).collect();
    // make the color classes dense
    let mut present: Vec<usize> = start.clone();
    present.sort_unstable();
    present.dedup();
    for c in start.iter_mut() {
        *c = present.binary_search(c).unwrap();
    }
    ctx.refine(&mut start);

    if certify {
        let mut best: Option<(Vec<i64>, Vec<usize>)> = None;
        let mut leaves = 0usize;
        let mut stack = vec![start.clone()];
        let mut exhausted = true;
        while let Some(cell) = stack.pop() {
            match target_cell(&cell) {
                None => {
                    leaves += 1;
                    let code = ctx.code(&cell);
                    if best.as_ref().map_or(true, |(b, _)| code < *b) {
                        best = Some((code, cell));
                    }
                    if leaves > LEAF_BUDGET {
                        exhausted = false;
                        break;
                    }
                }
                Some(members) => {
                    let mut tried: Vec<NodeId> = Vec::new();
                    for &v in members.iter().rev() {
                        if tried.iter().any(|&u| ctx.twins(u, v)) {
                            continue;
                        }
                        tried.push(v);
                        let mut c = individualize(&cell, v);
                        ctx.refine(&mut c);
                        stack.push(c);
                    }
                }
            }
        }
        if exhausted {
            let (code, cell) = best.unwrap();
            let mut order = vec![0; n];
            for v in 0..n {
                order[cell[v]] = v;
            }
            return (code, order, true);
        }
    }

    let mut cell = start;
    while let Some(members) = target_cell(&cell) {
        cell = individualize(&cell, members[0]);
        ctx.refine(&mut cell);
    }
    let code = ctx.code(&cell);
    let mut order = vec![0; n];
    for v in 0..n {
        order[cell[v]] = v;
    }
    (code, order, false)
}

/// Canonical form and a relabelling `perm` with `d.relabel(&perm)` equal to the form's diagram.
pub fn canonical_labelling(d: &Diagram) -> (CanonicalForm, Vec<NodeId>) {
    canonical_labelling_with(d, CERTIFIED_BOUND)
}

pub fn canonical_labelling_with(d: &Diagram, bound: usize) -> (CanonicalForm, Vec<NodeId>) {
    let n = d.node_count();
    let mut parts: Vec<(Vec<i64>, Vec<NodeId>, bool)> = d
        .components()
        .into_iter()
        .map(|comp| {
            let sub = d.induced(&comp);
            let (code, order, cert) = canon_connected(&sub, comp.len() <= bound);
            (code, order.into_iter().map(|i| comp[i]).collect(), cert)
        })
        .collect();
    // larger components first, then by code
    parts.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));
    let certified = parts.iter().all(|p| p.2);
    let mut perm = vec![0; n];
    let mut pos = 0;
    for p in &parts {
        for &v in &p.1 {
            perm[v] = pos;
            pos += 1;
        }
    }
    let r = d.relabel(&perm);
    let mut code: Vec<i64> = r.colors().iter().map(|&c| color_code(c)).collect();
    for i in 0..n {
        for j in i + 1..n {
            code.push(r.signed(i, j));
        }
    }
    (
        CanonicalForm {
            nodes: n,
            code,
            certified,
        },
        perm,
    )
}

pub fn canonical_form(d: &Diagram) -> CanonicalForm {
    canonical_labelling(d).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_diagram(rng: &mut ChaCha8Rng, n: usize) -> Diagram {
        let mut d = Diagram::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.4) {
                    let w = [1, 1, 2, 4][rng.gen_range(0..4)];
                    d.set_signed(i, j, if rng.gen_bool(0.5) { w } else { -w });
                }
            }
        }
        d
    }

    #[test]
    fn invariant_under_relabelling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..9);
            let d = random_diagram(&mut rng, n);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let e = d.relabel(&perm);
            let (cf, p) = canonical_labelling(&d);
            assert!(cf.certified);
            assert_eq!(cf, canonical_form(&e));
            assert_eq!(d.relabel(&p), cf.to_diagram());
        }
    }

    #[test]
    fn distinguishes_orientation() {
        let path = Diagram::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let fork = Diagram::from_edges(3, &[(0, 1, 1), (2, 1, 1)]).unwrap();
        assert_ne!(canonical_form(&path), canonical_form(&fork));
    }

    #[test]
    fn star_with_many_leaves_is_fast() {
        let edges: Vec<_> = (1..12).map(|i| (0, i, 1)).collect();
        let d = Diagram::from_edges(12, &edges).unwrap();
        assert!(canonical_form(&d).certified);
    }
}
