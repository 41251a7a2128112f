//! Placed blocks, gluing, and the invariants of a decomposition.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::catalog::{template, BlockKind};
use crate::error::{Error, Result};
use crate::model::{Color, Diagram, NodeId};

/// A block template together with the ambient node of each template node.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PlacedBlock {
    pub kind: BlockKind,
    pub nodes: Vec<NodeId>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Decomposition {
    pub node_count: usize,
    pub blocks: Vec<PlacedBlock>,
}

/// New-block part of a decomposition: node set and exact signed edge
/// contributions of every block carrying a weight-2 edge.
pub type Footprint = Vec<(Vec<NodeId>, Vec<(NodeId, NodeId, i64)>)>;

impl Decomposition {
    pub fn new(node_count: usize) -> Self {
        Decomposition {
            node_count,
            blocks: Vec::new(),
        }
    }

    /// Sorts blocks so that equal decompositions compare equal.
    pub fn normalize(&mut self) {
        self.blocks.sort();
    }

    /// Decompositions that differ only in elementary blocks, or in which of two
    /// new blocks with identical edges was used, share a footprint.
    pub fn footprint(&self) -> Footprint {
        let mut out: Footprint = self
            .blocks
            .iter()
            .filter(|b| b.kind.is_new())
            .map(|b| {
                let t = template(b.kind);
                let mut nodes = b.nodes.clone();
                nodes.sort_unstable();
                let mut edges: Vec<(NodeId, NodeId, i64)> = t
                    .edges
                    .iter()
                    .map(|&(x, y, w)| {
                        let (a, c) = (b.nodes[x], b.nodes[y]);
                        if a < c {
                            (a, c, w as i64)
                        } else {
                            (c, a, -(w as i64))
                        }
                    })
                    .collect();
                edges.sort_unstable();
                (nodes, edges)
            })
            .collect();
        out.sort();
        out
    }

    /// Ambient nodes whose template copy count is 2 in some new block.
    pub fn doubled_nodes(&self) -> BTreeSet<NodeId> {
        let mut s = BTreeSet::new();
        for b in &self.blocks {
            let t = template(b.kind);
            for (i, &v) in b.nodes.iter().enumerate() {
                if t.nodes[i].copies == 2 {
                    s.insert(v);
                }
            }
        }
        s
    }
}

fn gluing(rule: u8, detail: String) -> Error {
    Error::Gluing { rule, detail }
}

/// Glues the placed blocks into a colored diagram.
///
/// A node shared by two blocks must be white in both and becomes black.
/// Parallel weight-1 edges merge into a weight-4 edge, antiparallel ones cancel.
pub fn assemble(dec: &Decomposition) -> Result<Diagram> {
    let n = dec.node_count;
    let mut uses: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (bi, b) in dec.blocks.iter().enumerate() {
        let t = template(b.kind);
        if b.nodes.len() != t.size() {
            return Err(Error::Malformed(format!(
                "block {} of kind {} places {} nodes, expected {}",
                bi,
                b.kind,
                b.nodes.len(),
                t.size()
            )));
        }
        for (i, &v) in b.nodes.iter().enumerate() {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, order: n });
            }
            if b.nodes[..i].contains(&v) {
                return Err(gluing(
                    1,
                    format!("node {} identified twice within block {}", v + 1, bi),
                ));
            }
            uses[v].push((bi, i));
        }
    }
    let mut d = Diagram::new(n);
    for v in 0..n {
        let color = match uses[v].as_slice() {
            [] => Color::Uncolored,
            [(b, i)] => template(dec.blocks[*b].kind).nodes[*i].color,
            [(b1, i1), (b2, i2)] => {
                for (b, i) in [(*b1, *i1), (*b2, *i2)] {
                    if !template(dec.blocks[b].kind).is_white(i) {
                        return Err(gluing(
                            2,
                            format!("black node of block {} identified at node {}", b, v + 1),
                        ));
                    }
                }
                Color::Black
            }
            _ => {
                return Err(gluing(
                    2,
                    format!("node {} belongs to more than two blocks", v + 1),
                ))
            }
        };
        d.set_color(v, color);
    }

    // per pair: sum of square roots of weight-1 and weight-4 edges, and weight-2 edges apart
    let mut units: BTreeMap<(NodeId, NodeId), (i64, i64, u32)> = BTreeMap::new();
    for b in &dec.blocks {
        let t = template(b.kind);
        for &(x, y, w) in &t.edges {
            let (a, c) = (b.nodes[x], b.nodes[y]);
            let s = if a < c { 1 } else { -1 };
            let e = units.entry((a.min(c), a.max(c))).or_default();
            match w {
                1 => e.0 += s,
                4 => e.0 += 2 * s,
                _ => e.1 += s,
            }
            e.2 += 1;
        }
    }
    for (&(a, c), &(u, two, count)) in &units {
        if count > 1 && two != 0 {
            return Err(gluing(
                3,
                format!(
                    "weight-2 edge between {} and {} glued to a second edge",
                    a + 1,
                    c + 1
                ),
            ));
        }
        let w = if two != 0 { 2 * two } else { u * u.abs() };
        d.set_signed(a, c, w);
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mismatch {
    Edge {
        a: NodeId,
        b: NodeId,
        expected: i64,
        found: i64,
    },
    Color {
        node: NodeId,
        expected: Color,
        found: Color,
    },
    Gluing {
        message: String,
    },
    NodeCount {
        expected: usize,
        found: usize,
    },
}

/// Exact comparison of the assembled decomposition with `target`.
///
/// Uncolored target nodes accept any color.
pub fn validate_decomposition(dec: &Decomposition, target: &Diagram) -> (bool, Vec<Mismatch>) {
    if dec.node_count != target.node_count() {
        return (
            false,
            vec![Mismatch::NodeCount {
                expected: target.node_count(),
                found: dec.node_count,
            }],
        );
    }
    let g = match assemble(dec) {
        Ok(g) => g,
        Err(e) => {
            return (
                false,
                vec![Mismatch::Gluing {
                    message: e.to_string(),
                }],
            )
        }
    };
    let mut diff = Vec::new();
    let mut pairs: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for e in g.edges().chain(target.edges()) {
        pairs.insert((e.tail.min(e.head), e.tail.max(e.head)));
    }
    for (a, b) in pairs {
        let (x, y) = (target.signed(a, b), g.signed(a, b));
        if x != y {
            diff.push(Mismatch::Edge {
                a,
                b,
                expected: x,
                found: y,
            });
        }
    }
    for v in 0..target.node_count() {
        let want = target.color(v);
        if want != Color::Uncolored && want != g.color(v) {
            diff.push(Mismatch::Color {
                node: v,
                expected: want,
                found: g.color(v),
            });
        }
    }
    (diff.is_empty(), diff)
}

/// Counts attached to the surface a decomposition glues together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    /// Oriented block 3-cycles that survive gluing.
    pub triangles: u32,
    /// Doubled nodes, one per folded conjugate pair.
    pub conjugate_pairs: u32,
    pub orbifold_points: u32,
    /// Unglued white nodes.
    pub boundary_arcs: u32,
    pub vertices: u32,
    pub edges: u32,
    /// `vertices − edges + triangles` of the assembled 2-complex.
    pub euler_characteristic: i64,
    /// Some block involved has provisional orbifold data.
    pub provisional: bool,
}

pub fn surface_invariants(dec: &Decomposition) -> Result<SurfaceInvariants> {
    let g = assemble(dec)?;
    let mut triangles = 0;
    let mut conjugate_pairs = 0;
    let mut orbifold_points = 0;
    let mut provisional = false;
    for b in &dec.blocks {
        let t = template(b.kind);
        conjugate_pairs += t.conjugate_pairs();
        orbifold_points += t.orbifold_points;
        provisional |= t.provisional;
        for f in &t.faces {
            let [x, y, z] = f.map(|i| b.nodes[i]);
            if g.signed(x, y) > 0 && g.signed(y, z) > 0 && g.signed(z, x) > 0 {
                triangles += 1;
            }
        }
    }
    let covered: BTreeSet<NodeId> = dec
        .blocks
        .iter()
        .flat_map(|b| b.nodes.iter().copied())
        .collect();
    let boundary_arcs = g.colors().iter().filter(|&&c| c == Color::White).count() as u32;
    let vertices = covered.len() as u32;
    let edges = g.edge_count() as u32;
    Ok(SurfaceInvariants {
        triangles,
        conjugate_pairs,
        orbifold_points,
        boundary_arcs,
        vertices,
        edges,
        euler_characteristic: vertices as i64 - edges as i64 + triangles as i64,
        provisional,
    })
}
