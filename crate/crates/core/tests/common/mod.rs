#![allow(dead_code)]

use rand::Rng;
use sdecomp::{assemble, BlockKind, Decomposition, Diagram, ExchangeMatrix, Matrix, PlacedBlock};

/// Calls `f` on every connected diagram on `n` labelled nodes with edge weights from `weights`.
pub fn all_connected(n: usize, weights: &[u64], f: &mut dyn FnMut(Diagram)) {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let opts = 1 + 2 * weights.len();
    let total = opts.pow(pairs.len() as u32);
    for mut code in 0..total {
        let mut g = Diagram::new(n);
        for &(a, b) in &pairs {
            let c = code % opts;
            code /= opts;
            if c == 0 {
                continue;
            }
            let w = weights[(c - 1) / 2];
            if c % 2 == 1 {
                g.add_edge(a, b, w).unwrap();
            } else {
                g.add_edge(b, a, w).unwrap();
            }
        }
        if g.is_connected() {
            f(g);
        }
    }
}

/// `B = S·D` with `S` skew-symmetric, which is skew-symmetrizable by `D^-1`.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ExchangeMatrix {
    let d: Vec<i64> = (0..n).map(|_| [1, 1, 2, 3][rng.gen_range(0..4)]).collect();
    let mut s = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                let v = [-2, -1, 1, 2][rng.gen_range(0..4)];
                s[i][j] = v;
                s[j][i] = -v;
            }
        }
    }
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, s[i][j] * d[j]);
        }
    }
    ExchangeMatrix::new(m).unwrap()
}

pub fn random_diagram(rng: &mut impl Rng, n: usize, density: f64, weights: &[u64]) -> Diagram {
    let mut g = Diagram::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                let w = weights[rng.gen_range(0..weights.len())];
                if rng.gen_bool(0.5) {
                    g.add_edge(a, b, w).unwrap();
                } else {
                    g.add_edge(b, a, w).unwrap();
                }
            }
        }
    }
    g
}

/// Random gluing of catalog blocks on `n` nodes; `None` when the attempt breaks a rule.
pub fn random_assembly(rng: &mut impl Rng, n: usize, blocks: usize) -> Option<Diagram> {
    let mut dec = Decomposition::new(n);
    for _ in 0..blocks {
        let kind = BlockKind::ALL[rng.gen_range(0..BlockKind::ALL.len())];
        let size = sdecomp::template(kind).size();
        if size > n {
            continue;
        }
        let mut nodes: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = rng.gen_range(i..n);
            nodes.swap(i, j);
        }
        nodes.truncate(size);
        dec.blocks.push(PlacedBlock { kind, nodes });
    }
    let g = assemble(&dec).ok()?.uncolored();
    g.is_connected().then_some(g)
}

/// Flips or reweights one edge.
pub fn perturb(rng: &mut impl Rng, g: &Diagram) -> Diagram {
    let edges: Vec<_> = g.edges().collect();
    let mut h = g.clone();
    if edges.is_empty() {
        return h;
    }
    let e = edges[rng.gen_range(0..edges.len())];
    match rng.gen_range(0..3) {
        0 => h.set_signed(e.tail, e.head, -(e.weight as i64)),
        1 => {
            let w = [1, 2, 4][rng.gen_range(0..3)];
            h.set_signed(e.tail, e.head, w);
        }
        _ => h.set_signed(e.tail, e.head, 0),
    }
    h
}

/// The two diagrams with more than one decomposition.
pub fn two_way_diagrams() -> [Diagram; 2] {
    [
        Diagram::from_edges(3, &[(0, 1, 2), (1, 2, 2)]).unwrap(),
        Diagram::from_edges(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 4)]).unwrap(),
    ]
}

/// Chain of blocks, each sharing one white node with the next, on exactly `n` nodes.
///
/// Every node ends up in at most two blocks, so the chain is s-decomposable.
pub fn chain(n: usize) -> Diagram {
    use BlockKind::*;
    // (kind, incoming port, outgoing port) as template node indices
    let cycle = [
        (II, 0, 2),
        (Triangle, 0, 1),
        (Diamond, 0, 3),
        (Spike, 0, 1),
        (II, 2, 0),
    ];
    let mut dec = Decomposition::new(n);
    let mut port = 0usize;
    let mut next = 1usize;
    for i in 0.. {
        let (kind, inp, out) = cycle[i % cycle.len()];
        let size = sdecomp::template(kind).size();
        if next + size - 1 > n {
            break;
        }
        let mut nodes = vec![0; size];
        for (t, slot) in nodes.iter_mut().enumerate() {
            if t == inp {
                *slot = port;
            } else {
                *slot = next;
                next += 1;
            }
        }
        port = nodes[out];
        dec.blocks.push(PlacedBlock { kind, nodes });
    }
    while next < n {
        dec.blocks.push(PlacedBlock {
            kind: Spike,
            nodes: vec![port, next],
        });
        port = next;
        next += 1;
    }
    assemble(&dec).unwrap().uncolored()
}
