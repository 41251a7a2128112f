//! Value types: integer matrices, exchange matrices with their
//! skew-symmetrizer, and weighted oriented diagrams with node colors.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0; n * n],
        }
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { n, data })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .take(self.n)
            .collect()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn principal(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }
}

/// Positive diagonal `d` with `b[i][j]·d[j] = −b[j][i]·d[i]`.
///
/// Every connected component of the nonzero pattern is scaled to the smallest
/// positive integers, so the witness is unique.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Skewsymmetrizer(pub Vec<i64>);

impl Skewsymmetrizer {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Finds the reduced skew-symmetrizer of `b`.
///
/// Malformed input (nonzero diagonal) is reported as [`Error::Malformed`];
/// a violated sign pair or an inconsistent cycle ratio as
/// [`Error::NotSkewSymmetrizable`].
pub fn is_skew_symmetrizable(b: &Matrix) -> Result<Skewsymmetrizer> {
    let n = b.order();
    for i in 0..n {
        if b.get(i, i) != 0 {
            return Err(Error::Malformed(format!(
                "diagonal entry ({0},{0}) is {1}, expected 0",
                i + 1,
                b.get(i, i)
            )));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (b.get(i, j), b.get(j, i));
            if (x == 0) != (y == 0) || (x != 0 && (x > 0) == (y > 0)) {
                return Err(Error::NotSkewSymmetrizable(format!(
                    "sign pair ({},{}) has entries {} and {}",
                    i + 1,
                    j + 1,
                    x,
                    y
                )));
            }
        }
    }

    // d[i] = num[i] / den[i] relative to the root of its component.
    let mut num = vec![0i128; n];
    let mut den = vec![0i128; n];
    let mut comp = vec![usize::MAX; n];
    let mut d = vec![0i64; n];
    let mut members: Vec<usize> = Vec::new();
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        members.clear();
        comp[root] = root;
        num[root] = 1;
        den[root] = 1;
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                let bij = b.get(i, j);
                if bij == 0 {
                    continue;
                }
                let bji = b.get(j, i);
                // d[j] = d[i] · (−b[j][i]) / b[i][j]
                let nn = num[i]
                    .checked_mul(-(bji as i128))
                    .ok_or(Error::Overflow("skew-symmetrizer"))?;
                let dd = den[i]
                    .checked_mul(bij as i128)
                    .ok_or(Error::Overflow("skew-symmetrizer"))?;
                let (mut nn, mut dd) = if dd < 0 { (-nn, -dd) } else { (nn, dd) };
                let g = gcd(nn, dd);
                nn /= g;
                dd /= g;
                if comp[j] == usize::MAX {
                    comp[j] = root;
                    num[j] = nn;
                    den[j] = dd;
                    stack.push(j);
                } else if num[j] != nn || den[j] != dd {
                    return Err(Error::NotSkewSymmetrizable(format!(
                        "inconsistent ratio around a cycle through ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut l: i128 = 1;
        for &i in &members {
            l = l / gcd(l, den[i]) * den[i];
            if l > i64::MAX as i128 {
                return Err(Error::Overflow("skew-symmetrizer"));
            }
        }
        let mut g: i128 = 0;
        for &i in &members {
            g = gcd(g, num[i] * (l / den[i]));
        }
        for &i in &members {
            let v = num[i] * (l / den[i]) / g;
            d[i] = i64::try_from(v).map_err(|_| Error::Overflow("skew-symmetrizer"))?;
        }
    }
    Ok(Skewsymmetrizer(d))
}

/// Skew-symmetrizable integer matrix together with its reduced witness.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    b: Matrix,
    d: Skewsymmetrizer,
}

impl ExchangeMatrix {
    pub fn new(b: Matrix) -> Result<Self> {
        let d = is_skew_symmetrizable(&b)?;
        Ok(ExchangeMatrix { b, d })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Trusted constructor for results of operations that preserve the witness.
    pub(crate) fn from_parts(b: Matrix, d: Skewsymmetrizer) -> Self {
        debug_assert!(Self::witness_holds(&b, &d));
        ExchangeMatrix { b, d }
    }

    fn witness_holds(b: &Matrix, d: &Skewsymmetrizer) -> bool {
        let n = b.order();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (b.get(i, j) as i128) * (d.0[j] as i128)
                    == -(b.get(j, i) as i128) * (d.0[i] as i128)
            })
        })
    }

    pub fn order(&self) -> usize {
        self.b.order()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b.get(i, j)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.b
    }

    pub fn symmetrizer(&self) -> &Skewsymmetrizer {
        &self.d
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.b.is_skew_symmetric()
    }

    /// `B·D`, which is skew-symmetric by construction.
    pub fn symmetrized(&self) -> Result<Matrix> {
        let n = self.order();
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = self
                    .get(i, j)
                    .checked_mul(self.d.0[j])
                    .ok_or(Error::Overflow("B·D"))?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }
}

/// Node color: gluable (white), sealed (black) or not yet assigned.
#[derive(
    Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    #[default]
    Uncolored,
    White,
    Black,
}

/// Oriented edge with positive weight.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub weight: u64,
}

/// Weighted oriented graph without loops and with at most one edge per node pair.
///
/// Edges are keyed by `(lo, hi)` with a signed weight: positive means
/// `lo → hi`, negative means `hi → lo`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Diagram {
    colors: Vec<Color>,
    edges: BTreeMap<(NodeId, NodeId), i64>,
}

impl Diagram {
    pub fn new(n: usize) -> Self {
        Diagram {
            colors: vec![Color::Uncolored; n],
            edges: BTreeMap::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId, u64)]) -> Result<Self> {
        let mut d = Diagram::new(n);
        for &(t, h, w) in edges {
            d.add_edge(t, h, w)?;
        }
        Ok(d)
    }

    pub fn node_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn color(&self, v: NodeId) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn set_color(&mut self, v: NodeId, c: Color) {
        self.colors[v] = c;
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v >= self.node_count() {
            return Err(Error::IndexOutOfRange {
                index: v,
                order: self.node_count(),
            });
        }
        Ok(())
    }

    /// Adds `tail → head`; a second edge on the same pair is an error.
    pub fn add_edge(&mut self, tail: NodeId, head: NodeId, weight: u64) -> Result<()> {
        self.check_node(tail)?;
        self.check_node(head)?;
        if tail == head {
            return Err(Error::Malformed(format!("loop at node {}", tail + 1)));
        }
        if weight == 0 || weight > i64::MAX as u64 {
            return Err(Error::Malformed(format!(
                "edge weight {} out of range",
                weight
            )));
        }
        let key = (tail.min(head), tail.max(head));
        if self.edges.contains_key(&key) {
            return Err(Error::Malformed(format!(
                "more than one edge between {} and {}",
                tail + 1,
                head + 1
            )));
        }
        let w = weight as i64;
        self.edges.insert(key, if tail < head { w } else { -w });
        Ok(())
    }

    /// Sets the signed weight of `a → b` (negative: `b → a`, zero: remove).
    pub fn set_signed(&mut self, a: NodeId, b: NodeId, w: i64) {
        debug_assert!(a != b);
        let key = (a.min(b), a.max(b));
        let v = if a < b { w } else { -w };
        if v == 0 {
            self.edges.remove(&key);
        } else {
            self.edges.insert(key, v);
        }
    }

    /// Signed weight of the edge between `a` and `b`, positive when it points `a → b`.
    pub fn signed(&self, a: NodeId, b: NodeId) -> i64 {
        if a == b {
            return 0;
        }
        let v = self.edges.get(&(a.min(b), a.max(b))).copied().unwrap_or(0);
        if a < b {
            v
        } else {
            -v
        }
    }

    pub fn weight(&self, a: NodeId, b: NodeId) -> u64 {
        self.signed(a, b).unsigned_abs()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|(&(lo, hi), &w)| {
            if w > 0 {
                Edge {
                    tail: lo,
                    head: hi,
                    weight: w as u64,
                }
            } else {
                Edge {
                    tail: hi,
                    head: lo,
                    weight: w.unsigned_abs(),
                }
            }
        })
    }

    /// Adjacency lists of `(neighbor, signed weight from the node's side)`.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, i64)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for (&(lo, hi), &w) in &self.edges {
            adj[lo].push((hi, w));
            adj[hi].push((lo, -w));
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for &(lo, hi) in self.edges.keys() {
            deg[lo] += 1;
            deg[hi] += 1;
        }
        deg
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let adj = self.adjacency();
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &(u, _) in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() <= 1 || self.components().len() == 1
    }

    /// Induced subdiagram on `nodes`; node `nodes[i]` becomes `i`.
    pub fn induced(&self, nodes: &[NodeId]) -> Diagram {
        let mut pos = vec![usize::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            pos[v] = i;
        }
        let mut d = Diagram::new(nodes.len());
        for (i, &v) in nodes.iter().enumerate() {
            d.colors[i] = self.colors[v];
        }
        for e in self.edges() {
            let (a, b) = (pos[e.tail], pos[e.head]);
            if a != usize::MAX && b != usize::MAX {
                d.set_signed(a, b, e.weight as i64);
            }
        }
        d
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[NodeId]) -> Diagram {
        let mut d = Diagram::new(self.node_count());
        for v in 0..self.node_count() {
            d.colors[perm[v]] = self.colors[v];
        }
        for e in self.edges() {
            d.set_signed(perm[e.tail], perm[e.head], e.weight as i64);
        }
        d
    }

    /// Same diagram with every node uncolored.
    pub fn uncolored(&self) -> Diagram {
        Diagram {
            colors: vec![Color::Uncolored; self.node_count()],
            edges: self.edges.clone(),
        }
    }

    pub fn max_weight(&self) -> u64 {
        self.edges
            .values()
            .map(|w| w.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::write_diagram(self))
    }
}

/// Diagram of an exchange matrix: edge `i → j` of weight `−b[i][j]·b[j][i]` whenever `b[i][j] > 0`.
pub fn matrix_to_diagram(b: &ExchangeMatrix) -> Diagram {
    let n = b.order();
    let mut d = Diagram::new(n);
    for i in 0..n {
        for j in 0..n {
            let bij = b.get(i, j);
            if bij > 0 {
                // |b_ij·b_ji| fits in u64 for any pair of i64 magnitudes below 2^32;
                // larger products saturate, which no mutation-finite input reaches.
                let w = (bij as i128 * -(b.get(j, i) as i128)).min(i64::MAX as i128);
                d.set_signed(i, j, w as i64);
            }
        }
    }
    d
}

/// Oriented multigraph given as a list of arcs (parallel arcs allowed).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Quiver {
    pub nodes: usize,
    pub arcs: Vec<(NodeId, NodeId)>,
}

/// `b[i][j]` = arcs `i → j` minus arcs `j → i`. Loops and 2-cycles are rejected.
pub fn quiver_adjacency_matrix(q: &Quiver) -> Result<Matrix> {
    let n = q.nodes;
    let mut m = Matrix::zeros(n);
    let mut fwd = BTreeMap::<(NodeId, NodeId), i64>::new();
    for &(t, h) in &q.arcs {
        if t >= n || h >= n {
            return Err(Error::IndexOutOfRange {
                index: t.max(h),
                order: n,
            });
        }
        if t == h {
            return Err(Error::Malformed(format!("loop at node {}", t + 1)));
        }
        *fwd.entry((t, h)).or_default() += 1;
    }
    for (&(t, h), &c) in &fwd {
        if fwd.contains_key(&(h, t)) {
            return Err(Error::Malformed(format!(
                "2-cycle between {} and {}",
                t + 1,
                h + 1
            )));
        }
        m.set(t, h, c);
        m.set(h, t, -c);
    }
    Ok(m)
}

/// Expands a skew-symmetric matrix into its quiver (`b[i][j]` parallel arcs `i → j`).
pub fn matrix_to_quiver(m: &Matrix) -> Quiver {
    let mut arcs = Vec::new();
    for i in 0..m.order() {
        for j in 0..m.order() {
            for _ in 0..m.get(i, j).max(0) {
                arcs.push((i, j));
            }
        }
    }
    Quiver {
        nodes: m.order(),
        arcs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizer_examples() {
        let b = Matrix::from_rows(&[[0, 1], [-1, 0]]).unwrap();
        assert_eq!(is_skew_symmetrizable(&b).unwrap().0, vec![1, 1]);
        let b = Matrix::from_rows(&[[0, 1], [-2, 0]]).unwrap();
        assert_eq!(is_skew_symmetrizable(&b).unwrap().0, vec![1, 2]);
        let b = Matrix::from_rows(&[[0, 1], [1, 0]]).unwrap();
        match is_skew_symmetrizable(&b) {
            Err(Error::NotSkewSymmetrizable(msg)) => assert!(msg.contains("(1,2)")),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn symmetrizer_malformed_is_distinct() {
        let b = Matrix::from_rows(&[[1, 1], [-1, 0]]).unwrap();
        assert!(matches!(
            is_skew_symmetrizable(&b),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            Matrix::from_rows(&[vec![0, 1], vec![0]]),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn inconsistent_cycle_is_refused() {
        // ratios 1:2 around 1-2, 1:1 around 2-3, 1:1 around 3-1
        let b = Matrix::from_rows(&[[0, 1, -1], [-2, 0, 1], [1, -1, 0]]).unwrap();
        assert!(matches!(
            is_skew_symmetrizable(&b),
            Err(Error::NotSkewSymmetrizable(_))
        ));
    }

    #[test]
    fn disconnected_components_reduced_separately() {
        let b =
            Matrix::from_rows(&[[0, 2, 0, 0], [-4, 0, 0, 0], [0, 0, 0, 3], [0, 0, -1, 0]]).unwrap();
        assert_eq!(is_skew_symmetrizable(&b).unwrap().0, vec![1, 2, 3, 1]);
    }

    #[test]
    fn diagram_weights() {
        for (rows, w) in [
            ([[0, 1], [-1, 0]], 1),
            ([[0, 1], [-2, 0]], 2),
            ([[0, 2], [-2, 0]], 4),
        ] {
            let b = ExchangeMatrix::from_rows(&rows).unwrap();
            let d = matrix_to_diagram(&b);
            let e: Vec<_> = d.edges().collect();
            assert_eq!(
                e,
                vec![Edge {
                    tail: 0,
                    head: 1,
                    weight: w
                }]
            );
        }
    }

    #[test]
    fn quiver_matrix_examples() {
        let q = Quiver {
            nodes: 2,
            arcs: vec![(0, 1)],
        };
        assert_eq!(
            quiver_adjacency_matrix(&q).unwrap().rows(),
            vec![vec![0, 1], vec![-1, 0]]
        );
        let q = Quiver {
            nodes: 2,
            arcs: vec![(0, 1), (0, 1)],
        };
        assert_eq!(
            quiver_adjacency_matrix(&q).unwrap().rows(),
            vec![vec![0, 2], vec![-2, 0]]
        );
        let q = Quiver {
            nodes: 3,
            arcs: vec![],
        };
        assert_eq!(quiver_adjacency_matrix(&q).unwrap(), Matrix::zeros(3));
        let q = Quiver {
            nodes: 2,
            arcs: vec![(0, 1), (1, 0)],
        };
        assert!(matches!(
            quiver_adjacency_matrix(&q),
            Err(Error::Malformed(_))
        ));
        let q = Quiver {
            nodes: 2,
            arcs: vec![(1, 1)],
        };
        assert!(matches!(
            quiver_adjacency_matrix(&q),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn diagram_rejects_loops_and_double_pairs() {
        let mut d = Diagram::new(3);
        assert!(d.add_edge(0, 0, 1).is_err());
        d.add_edge(0, 1, 1).unwrap();
        assert!(d.add_edge(1, 0, 2).is_err());
        assert!(d.add_edge(0, 5, 1).is_err());
        assert_eq!(d.signed(1, 0), -1);
    }
}
