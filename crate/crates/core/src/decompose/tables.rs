//! Dense per-kind lookup tables derived from the block catalog.

use std::sync::OnceLock;

use crate::catalog::{template, BlockKind};
use crate::model::Color;

pub(crate) struct KindTable {
    pub kind: BlockKind,
    pub size: usize,
    pub white: Vec<bool>,
    pub doubled: Vec<bool>,
    /// `w[a][b]`: signed weight from `a` to `b`.
    pub w: Vec<Vec<i64>>,
    /// Per anchor: extension orders `(node, parent)` covering every other node.
    pub orders: Vec<Vec<Vec<(usize, usize)>>>,
    /// Same, restricted to weight-2 and weight-4 edges (new blocks only).
    pub heavy_orders: Vec<Vec<(usize, usize)>>,
    pub automorphisms: Vec<Vec<usize>>,
}

fn bfs(
    t: &KindTable,
    anchor: usize,
    usable: impl Fn(usize, usize) -> bool,
) -> Option<Vec<(usize, usize)>> {
    let mut seen = vec![false; t.size];
    seen[anchor] = true;
    let mut queue = vec![anchor];
    let mut order = Vec::new();
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for y in 0..t.size {
            if !seen[y] && t.w[x][y] != 0 && usable(x, y) {
                seen[y] = true;
                queue.push(y);
                order.push((y, x));
            }
        }
    }
    (order.len() + 1 == t.size).then_some(order)
}

fn build(kind: BlockKind) -> KindTable {
    let tp = template(kind);
    let n = tp.size();
    let mut w = vec![vec![0i64; n]; n];
    for &(a, b, x) in &tp.edges {
        w[a][b] = x as i64;
        w[b][a] = -(x as i64);
    }
    let mut t = KindTable {
        kind,
        size: n,
        white: tp.nodes.iter().map(|v| v.color == Color::White).collect(),
        doubled: tp.nodes.iter().map(|v| v.copies == 2).collect(),
        w,
        orders: Vec::new(),
        heavy_orders: Vec::new(),
        automorphisms: tp.automorphisms.clone(),
    };
    // an edge between two white nodes can be cancelled by a later block, so
    // also keep orders that avoid each such edge
    let mut cancellable = Vec::new();
    for &(a, b, x) in &tp.edges {
        if x == 1 && t.white[a] && t.white[b] {
            cancellable.push((a, b));
        }
    }
    for anchor in 0..n {
        let mut orders: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut push = |o: Option<Vec<(usize, usize)>>| {
            if let Some(o) = o {
                if !orders.contains(&o) {
                    orders.push(o);
                }
            }
        };
        push(bfs(&t, anchor, |_, _| true));
        for &(a, b) in &cancellable {
            push(bfs(&t, anchor, |x, y| (x, y) != (a, b) && (x, y) != (b, a)));
        }
        t.orders.push(orders);
        let heavy = if kind.is_new() {
            bfs(&t, anchor, |x, y| t.w[x][y].abs() >= 2)
                .expect("new blocks are connected by heavy edges")
        } else {
            Vec::new()
        };
        t.heavy_orders.push(heavy);
    }
    t
}

pub(crate) fn tables() -> &'static [KindTable] {
    static T: OnceLock<Vec<KindTable>> = OnceLock::new();
    T.get_or_init(|| BlockKind::ALL.iter().map(|&k| build(k)).collect())
}

pub(crate) fn table(kind: BlockKind) -> &'static KindTable {
    &tables()[kind as usize]
}

/// Lexicographically least relabelling of a placement under the block's automorphisms.
pub(crate) fn normalize(kind: BlockKind, phi: &[u32]) -> Vec<u32> {
    let t = table(kind);
    let mut best: Option<Vec<u32>> = None;
    for s in &t.automorphisms {
        let cand: Vec<u32> = s.iter().map(|&i| phi[i]).collect();
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_cover_templates() {
        for t in tables() {
            for a in 0..t.size {
                assert!(!t.orders[a].is_empty(), "{:?} anchor {}", t.kind, a);
                for o in &t.orders[a] {
                    assert_eq!(o.len() + 1, t.size);
                }
            }
        }
        // spike has a single order per anchor, triangle avoids each edge in turn
        assert_eq!(table(BlockKind::Spike).orders[0].len(), 1);
        assert!(table(BlockKind::Triangle).orders[0].len() >= 2);
    }
}
