//! Decomposition of diagrams into catalog blocks.
//!
//! Diagrams with an edge of weight other than 1, 2 or 4, with a node carrying
//! more than four weight-2 edges, or with a node of degree above 8 are rejected
//! up front. Every other input goes through the local-cover search in
//! [`engine`], one connected component at a time.
//!
//! Decompositions are reported up to their *footprint*: two decompositions are
//! the same when their blocks with weight-2 edges occupy the same nodes with the
//! same edges. The way the remaining weight-1 and weight-4 part is cut into
//! elementary blocks is not distinguished.

pub mod cases;
pub(crate) mod engine;
pub(crate) mod tables;

use std::collections::HashSet;

use serde::Serialize;

use crate::assembly::{Decomposition, PlacedBlock};
use crate::error::{Error, Result};
use crate::model::{Diagram, NodeId};
use cases::{classify_node_in, CaseLabel};
use engine::{bfs_order, heavy_covers, Config, Engine, Slot};

/// Largest number of blocks a node can belong to times the largest block degree.
pub const MAX_DEGREE: usize = 8;
pub const MAX_WEIGHT2: usize = 4;

#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    /// Enumerate every footprint instead of stopping at the first decomposition.
    pub all: bool,
    /// Cap on the number of decompositions returned in `all` mode.
    pub limit: usize,
    /// Cap on search commits per component; 0 means unlimited.
    pub budget: u64,
    /// Nodes that must be doubled, e.g. from a skew-symmetrizer with `d_i = 2`.
    pub long: Option<Vec<bool>>,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            all: false,
            limit: 100,
            budget: 0,
            long: None,
        }
    }
}

/// Why a diagram is not s-decomposable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Certificate {
    /// Edge weights in a decomposable diagram are 1, 2 or 4.
    Weight {
        tail: NodeId,
        head: NodeId,
        weight: u64,
    },
    /// A node lies on at most four weight-2 edges.
    Weight2Count { node: NodeId, count: usize },
    /// A node lies in at most two blocks of degree at most four.
    Degree { node: NodeId, degree: usize },
    /// No admissible set of blocks covers the edges at this node.
    EmptyCover { node: NodeId },
    /// A component has no decomposition whose doubled nodes match the given pattern.
    Doubling { node: NodeId },
}

impl Certificate {
    pub fn describe(&self) -> String {
        match self {
            Certificate::Weight { tail, head, weight } => format!(
                "edge {} -> {} has weight {}; weights must be 1, 2 or 4",
                tail + 1,
                head + 1,
                weight
            ),
            Certificate::Weight2Count { node, count } => format!(
                "node {} has {} weight-2 edges; at most 4 are possible",
                node + 1,
                count
            ),
            Certificate::Degree { node, degree } => format!(
                "node {} has degree {}; at most {} is possible",
                node + 1,
                degree,
                MAX_DEGREE
            ),
            Certificate::EmptyCover { node } => format!(
                "no admissible set of blocks covers the edges at node {}",
                node + 1
            ),
            Certificate::Doubling { node } => format!(
                "no decomposition doubles exactly the long nodes of the component of node {}",
                node + 1
            ),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub node: NodeId,
    /// Weight-2 edges at the node in the input.
    pub n: usize,
    pub case: Option<CaseLabel>,
    pub blocks: Vec<PlacedBlock>,
    /// Number of admissible block sets at the node when it was settled.
    pub alternatives: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReductionTrace {
    pub entries: Vec<TraceEntry>,
    /// Times each node was chosen as the settling node, including undone attempts.
    pub examinations: Vec<u32>,
}

impl ReductionTrace {
    pub fn total_examinations(&self) -> u64 {
        self.examinations.iter().map(|&x| x as u64).sum()
    }

    pub fn max_examinations(&self) -> u32 {
        self.examinations.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub decomposable: bool,
    pub decompositions: Vec<Decomposition>,
    pub certificate: Option<Certificate>,
    pub truncated: bool,
    #[serde(skip)]
    pub trace: ReductionTrace,
}

impl Outcome {
    fn rejected(n: usize, c: Certificate) -> Outcome {
        Outcome {
            decomposable: false,
            decompositions: Vec::new(),
            certificate: Some(c),
            truncated: false,
            trace: ReductionTrace {
                entries: Vec::new(),
                examinations: vec![0; n],
            },
        }
    }
}

/// Number of weight-2 edges at every node.
pub fn weight2_profile(g: &Diagram) -> Vec<usize> {
    let mut p = vec![0; g.node_count()];
    for e in g.edges() {
        if e.weight == 2 {
            p[e.tail] += 1;
            p[e.head] += 1;
        }
    }
    p
}

/// Rules checked before any search.
pub fn gate(g: &Diagram) -> Option<Certificate> {
    for e in g.edges() {
        if ![1, 2, 4].contains(&e.weight) {
            return Some(Certificate::Weight {
                tail: e.tail,
                head: e.head,
                weight: e.weight,
            });
        }
    }
    for (v, &c) in weight2_profile(g).iter().enumerate() {
        if c > MAX_WEIGHT2 {
            return Some(Certificate::Weight2Count { node: v, count: c });
        }
    }
    for (v, &d) in g.degrees().iter().enumerate() {
        if d > MAX_DEGREE {
            return Some(Certificate::Degree { node: v, degree: d });
        }
    }
    None
}

/// Start node of a component: most weight-2 edges, lowest id on ties.
fn start_node(profile: &[usize]) -> NodeId {
    let mut best = 0;
    for v in 1..profile.len() {
        if profile[v] > profile[best] {
            best = v;
        }
    }
    best
}

struct ComponentResult {
    decomps: Vec<Vec<PlacedBlock>>,
    certificate: Option<Certificate>,
    truncated: bool,
}

fn to_global(comp: &[NodeId], blocks: &[engine::Placement]) -> Vec<PlacedBlock> {
    blocks
        .iter()
        .map(|p| PlacedBlock {
            kind: p.kind,
            nodes: p.nodes.iter().map(|&v| comp[v as usize]).collect(),
        })
        .collect()
}

fn record(
    trace: &mut ReductionTrace,
    comp: &[NodeId],
    eng: &Engine,
    profile: &[usize],
    g: &Diagram,
    adj: &[Vec<(NodeId, i64)>],
) {
    for (i, &c) in eng.stats.examinations.iter().enumerate() {
        trace.examinations[comp[i]] += c;
    }
    for c in &eng.commits {
        let node = comp[c.node];
        trace.entries.push(TraceEntry {
            node,
            n: profile[node],
            case: if profile[node] > 0 {
                classify_node_in(g, adj, node)
            } else {
                None
            },
            blocks: to_global(comp, &c.blocks),
            alternatives: c.options,
        });
    }
}

fn solve_component(
    g: &Diagram,
    comp: &[NodeId],
    init: Vec<Slot>,
    allow_new: bool,
    opts: &DecomposeOptions,
    profile: &[usize],
    adj: &[Vec<(NodeId, i64)>],
    trace: &mut ReductionTrace,
) -> Result<ComponentResult> {
    let sub = g.induced(comp).uncolored();
    let local_profile: Vec<usize> = comp.iter().map(|&v| profile[v]).collect();
    let order = bfs_order(&sub, start_node(&local_profile));
    let long = opts
        .long
        .as_ref()
        .map(|l| comp.iter().map(|&v| l[v]).collect::<Vec<bool>>());
    let base = Config {
        allow_new,
        allow_elementary: true,
        whitelist: None,
        long,
        budget: opts.budget,
    };
    let mut decide = Engine::new(&sub, init.clone(), base.clone());
    let ok = decide.solve(&order)?;
    record(trace, comp, &decide, profile, g, adj);
    if !ok {
        let node = comp[decide.stats.first_dead_end.unwrap_or(order[0])];
        let cert = if base.long.is_some() && decide.stats.first_dead_end.is_none() {
            Certificate::Doubling { node }
        } else {
            Certificate::EmptyCover { node }
        };
        return Ok(ComponentResult {
            decomps: Vec::new(),
            certificate: Some(cert),
            truncated: false,
        });
    }
    if !opts.all || !allow_new {
        return Ok(ComponentResult {
            decomps: vec![to_global(comp, decide.blocks())],
            certificate: None,
            truncated: false,
        });
    }
    let fps = heavy_covers(&sub, &order, usize::MAX)?;
    let mut decomps = Vec::new();
    let mut truncated = false;
    for fp in fps {
        if decomps.len() >= opts.limit {
            truncated = true;
            break;
        }
        let mut cfg = base.clone();
        cfg.whitelist = Some(fp.into_iter().collect::<HashSet<_>>());
        let mut eng = Engine::new(&sub, init.clone(), cfg);
        if eng.solve(&order)? {
            decomps.push(to_global(comp, eng.blocks()));
        }
    }
    Ok(ComponentResult {
        decomps,
        certificate: None,
        truncated,
    })
}

fn run(g: &Diagram, init: &[Slot], allow_new: bool, opts: &DecomposeOptions) -> Result<Outcome> {
    let n = g.node_count();
    if let Some(c) = gate(g) {
        return Ok(Outcome::rejected(n, c));
    }
    let profile = weight2_profile(g);
    let adj = g.adjacency();
    let mut trace = ReductionTrace {
        entries: Vec::new(),
        examinations: vec![0; n],
    };
    let mut combined: Vec<Vec<PlacedBlock>> = vec![Vec::new()];
    let mut truncated = false;
    for comp in g.components() {
        let local_init: Vec<Slot> = comp.iter().map(|&v| init[v]).collect();
        let r = solve_component(
            g, &comp, local_init, allow_new, opts, &profile, &adj, &mut trace,
        )?;
        if let Some(c) = r.certificate {
            return Ok(Outcome {
                decomposable: false,
                decompositions: Vec::new(),
                certificate: Some(c),
                truncated: false,
                trace,
            });
        }
        truncated |= r.truncated;
        let mut next = Vec::new();
        'outer: for a in &combined {
            for b in &r.decomps {
                if next.len() >= opts.limit.max(1) {
                    truncated = true;
                    break 'outer;
                }
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                next.push(c);
            }
        }
        combined = next;
    }
    let decompositions = combined
        .into_iter()
        .map(|blocks| {
            let mut d = Decomposition {
                node_count: n,
                blocks,
            };
            d.normalize();
            d
        })
        .collect();
    Ok(Outcome {
        decomposable: true,
        decompositions,
        certificate: None,
        truncated,
        trace,
    })
}

/// Decides s-decomposability of `g` (colors ignored) and returns decompositions.
pub fn s_decompose(g: &Diagram, opts: &DecomposeOptions) -> Result<Outcome> {
    run(g, &vec![Slot::Free; g.node_count()], true, opts)
}

/// Decides decomposability of a weight-{1,4} diagram into elementary blocks.
///
/// Colors are read as remaining capacity: a white node may join one more
/// block and must be white in it, a black node may join none.
pub fn block_decompose(g: &Diagram, opts: &DecomposeOptions) -> Result<Outcome> {
    if let Some(e) = g.edges().find(|e| e.weight == 2) {
        return Err(Error::Malformed(format!(
            "weight-2 edge {} -> {} in a weight-{{1,4}} diagram",
            e.tail + 1,
            e.head + 1
        )));
    }
    let init: Vec<Slot> = g.colors().iter().map(|&c| Slot::from_color(c)).collect();
    run(g, &init, false, opts)
}

/// Result of removing the blocks with weight-2 edges.
#[derive(Clone, Debug)]
pub enum Reduction {
    Reduced {
        /// Weight-{1,4} residual, colored by remaining capacity.
        residual: Diagram,
        new_blocks: Vec<PlacedBlock>,
        trace: ReductionTrace,
    },
    Rejected {
        certificate: Certificate,
        trace: ReductionTrace,
    },
}

/// Residual of `g` after removing `blocks`, colored by the capacity they leave.
pub fn residual_after(g: &Diagram, blocks: &[PlacedBlock]) -> Result<Diagram> {
    let part = crate::assembly::assemble(&Decomposition {
        node_count: g.node_count(),
        blocks: blocks.to_vec(),
    })?;
    let root = |w: i64| -> i64 {
        match w {
            1 => 1,
            -1 => -1,
            4 => 2,
            -4 => -2,
            _ => 0,
        }
    };
    let mut r = Diagram::new(g.node_count());
    let mut pairs: Vec<(NodeId, NodeId)> = g
        .edges()
        .chain(part.edges())
        .map(|e| (e.tail.min(e.head), e.tail.max(e.head)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    for (a, b) in pairs {
        let (t, c) = (g.signed(a, b), part.signed(a, b));
        if t.abs() == 2 || c.abs() == 2 {
            if t != c {
                return Err(Error::Malformed(format!(
                    "weight-2 edge {}-{} not reproduced by the given blocks",
                    a + 1,
                    b + 1
                )));
            }
            continue;
        }
        let u = root(t) - root(c);
        r.set_signed(a, b, u * u.abs());
    }
    for v in 0..g.node_count() {
        r.set_color(v, part.color(v));
    }
    Ok(r)
}

/// Removes the weight-2 structure of `g`, leaving a weight-{1,4} diagram that is
/// block-decomposable exactly when `g` is s-decomposable.
pub fn reduce(g: &Diagram) -> Result<Reduction> {
    let out = s_decompose(g, &DecomposeOptions::default())?;
    if !out.decomposable {
        return Ok(Reduction::Rejected {
            certificate: out.certificate.expect("rejection carries a certificate"),
            trace: out.trace,
        });
    }
    let new_blocks: Vec<PlacedBlock> = out.decompositions[0]
        .blocks
        .iter()
        .filter(|b| b.kind.is_new())
        .cloned()
        .collect();
    let residual = residual_after(g, &new_blocks)?;
    Ok(Reduction::Reduced {
        residual,
        new_blocks,
        trace: out.trace,
    })
}

#[cfg(test)]
mod tests;
