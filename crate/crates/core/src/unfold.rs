//! Unfoldings of s-decomposable diagrams.
//!
//! Each node `i` gets an index set `E_i` with one element per copy. The
//! skew-symmetric matrix `Bhat` is the sum of the block unfoldings placed on
//! those index sets. Doubled nodes are black in every block that doubles
//! them, so each copy belongs to exactly one block and the placement is
//! unambiguous.

use serde::Serialize;

use crate::assembly::{validate_decomposition, Decomposition};
use crate::catalog::{realize_edge, template, unfold_block};
use crate::error::{Error, Result};
use crate::model::{Diagram, ExchangeMatrix, Matrix, NodeId};
use crate::mutation::{composite_mutate, mutate_matrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unfolding {
    /// `sets[i]` lists the unfolded indices of node `i`.
    pub sets: Vec<Vec<usize>>,
    /// `"3"` for a single copy, `"3.1"`, `"3.2"` for doubled nodes (1-based).
    pub labels: Vec<String>,
    pub folds_to: Vec<NodeId>,
    #[serde(serialize_with = "ser_matrix")]
    pub bhat: Matrix,
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.rows().serialize(s)
}

impl Unfolding {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    fn with_matrix(&self, bhat: Matrix) -> Unfolding {
        Unfolding {
            sets: self.sets.clone(),
            labels: self.labels.clone(),
            folds_to: self.folds_to.clone(),
            bhat,
        }
    }
}

/// Exchange matrix realizing `g` with symmetrizer `d`.
pub fn realize(g: &Diagram, d: &[i64]) -> Result<ExchangeMatrix> {
    let n = g.node_count();
    if d.len() != n {
        return Err(Error::Malformed(format!(
            "{} symmetrizer entries for {} nodes",
            d.len(),
            n
        )));
    }
    let mut m = Matrix::zeros(n);
    for e in g.edges() {
        let (bth, bht) = realize_edge(e.weight, d[e.tail], d[e.head]).ok_or_else(|| {
            Error::NotRealizable(format!(
                "edge {} -> {} of weight {} with d = ({}, {})",
                e.tail + 1,
                e.head + 1,
                e.weight,
                d[e.tail],
                d[e.head]
            ))
        })?;
        m.set(e.tail, e.head, bth);
        m.set(e.head, e.tail, bht);
    }
    ExchangeMatrix::new(m)
}

/// Which nodes the symmetrizer of `b` marks as doubled.
///
/// Every component must use at most two symmetrizer values, in ratio 2.
pub fn long_nodes(b: &ExchangeMatrix) -> Result<Vec<bool>> {
    let d = b.symmetrizer().as_slice();
    let g = crate::model::matrix_to_diagram(b);
    let mut long = vec![false; d.len()];
    for comp in g.components() {
        let lo = comp.iter().map(|&v| d[v]).min().unwrap();
        for &v in &comp {
            if d[v] == 2 * lo {
                long[v] = true;
            } else if d[v] != lo {
                return Err(Error::Unfolding(format!(
                    "symmetrizer value {} at node {} is neither {} nor {}",
                    d[v],
                    v + 1,
                    lo,
                    2 * lo
                )));
            }
        }
    }
    Ok(long)
}

/// First violated condition of the folding definition, if any.
pub fn check_conditions(b: &ExchangeMatrix, u: &Unfolding) -> Option<String> {
    let n = b.order();
    if u.sets.len() != n {
        return Some(format!("{} index sets for {} nodes", u.sets.len(), n));
    }
    for i in 0..n {
        for j in 0..n {
            let bij = b.get(i, j);
            for &c in &u.sets[j] {
                let mut sum = 0i64;
                for &r in &u.sets[i] {
                    let x = u.bhat.get(r, c);
                    if bij >= 0 && x < 0 {
                        return Some(format!(
                            "entry ({}, {}) is negative while b_{}{} = {}",
                            u.labels[r],
                            u.labels[c],
                            i + 1,
                            j + 1,
                            bij
                        ));
                    }
                    sum += x;
                }
                if sum != bij {
                    return Some(format!(
                        "column {} of block ({}, {}) sums to {}, expected {}",
                        u.labels[c],
                        i + 1,
                        j + 1,
                        sum,
                        bij
                    ));
                }
            }
        }
    }
    None
}

/// Glues the block unfoldings of `dec` into an unfolding of `b`.
pub fn build_unfolding(g: &Diagram, dec: &Decomposition, b: &ExchangeMatrix) -> Result<Unfolding> {
    let (ok, bad) = validate_decomposition(dec, g);
    if !ok {
        return Err(Error::Unfolding(format!(
            "decomposition does not assemble to the diagram: {:?}",
            bad
        )));
    }
    if crate::model::matrix_to_diagram(b).uncolored() != g.uncolored() {
        return Err(Error::Unfolding(
            "matrix does not realize the diagram".into(),
        ));
    }
    let n = g.node_count();
    let long = long_nodes(b)?;
    let doubled = dec.doubled_nodes();
    for v in 0..n {
        if long[v] != doubled.contains(&v) {
            return Err(Error::Unfolding(format!(
                "node {} is {} in the matrix but {} in the decomposition",
                v + 1,
                if long[v] { "long" } else { "short" },
                if long[v] { "single" } else { "doubled" }
            )));
        }
    }
    let mut sets = Vec::with_capacity(n);
    let mut labels = Vec::new();
    let mut folds_to = Vec::new();
    for v in 0..n {
        let k = if long[v] { 2 } else { 1 };
        let start = labels.len();
        for c in 0..k {
            labels.push(if k == 1 {
                format!("{}", v + 1)
            } else {
                format!("{}.{}", v + 1, c + 1)
            });
            folds_to.push(v);
        }
        sets.push((start..start + k).collect::<Vec<_>>());
    }
    let m = labels.len();
    let mut bhat = Matrix::zeros(m);
    for pb in &dec.blocks {
        let t = template(pb.kind);
        let local: Vec<usize> = match unfold_block(pb.kind) {
            Some(uf) => {
                // k-th unfolded index of template node x goes to copy k of its ambient node
                let mut seen = vec![0usize; t.size()];
                uf.folds_to
                    .iter()
                    .map(|&x| {
                        let idx = sets[pb.nodes[x]][seen[x]];
                        seen[x] += 1;
                        idx
                    })
                    .collect()
            }
            None => pb.nodes.iter().map(|&v| sets[v][0]).collect(),
        };
        let bm = match unfold_block(pb.kind) {
            Some(uf) => uf.matrix.clone(),
            None => t.matrix().matrix().clone(),
        };
        for (r, &gr) in local.iter().enumerate() {
            for (c, &gc) in local.iter().enumerate() {
                bhat.set(gr, gc, bhat.get(gr, gc) + bm.get(r, c));
            }
        }
    }
    let u = Unfolding {
        sets,
        labels,
        folds_to,
        bhat,
    };
    if let Some(why) = check_conditions(b, &u) {
        return Err(Error::Unfolding(why));
    }
    Ok(u)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Commutation {
    pub holds: bool,
    /// Number of mutations applied before the first failure.
    pub failing_prefix: Option<usize>,
}

/// Follows `seq` on `b` and on the unfolding at once, re-checking the folding
/// conditions after every step.
pub fn check_commutation(b: &ExchangeMatrix, u: &Unfolding, seq: &[usize]) -> Result<Commutation> {
    let fail = |k: usize| Commutation {
        holds: false,
        failing_prefix: Some(k),
    };
    if check_conditions(b, u).is_some() {
        return Ok(fail(0));
    }
    let mut b = b.clone();
    let mut hat = ExchangeMatrix::new(u.bhat.clone())?;
    for (step, &k) in seq.iter().enumerate() {
        if k >= b.order() {
            return Err(Error::IndexOutOfRange {
                index: k,
                order: b.order(),
            });
        }
        b = mutate_matrix(&b, k)?;
        hat = composite_mutate(&hat, &u.sets[k])?;
        if check_conditions(&b, &u.with_matrix(hat.matrix().clone())).is_some() {
            return Ok(fail(step + 1));
        }
    }
    Ok(Commutation {
        holds: true,
        failing_prefix: None,
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// True when every order of the mutations in `E_i` gives the same matrix.
pub fn composite_flip_commutes(u: &Unfolding, i: NodeId) -> Result<bool> {
    let hat = ExchangeMatrix::new(u.bhat.clone())?;
    let mut first: Option<Matrix> = None;
    for p in permutations(&u.sets[i]) {
        let mut m = hat.clone();
        for k in p {
            m = mutate_matrix(&m, k)?;
        }
        match &first {
            None => first = Some(m.matrix().clone()),
            Some(f) if f != m.matrix() => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}
