//! Matrix and diagram mutation, and mutation-class exploration.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::model::{Diagram, ExchangeMatrix, Matrix, NodeId};

fn check_index(k: usize, n: usize) -> Result<()> {
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, order: n });
    }
    Ok(())
}

/// Mutation of an exchange matrix in direction `k`.
pub fn mutate_matrix(b: &ExchangeMatrix, k: usize) -> Result<ExchangeMatrix> {
    let n = b.order();
    check_index(k, n)?;
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let bij = b.get(i, j);
            let v = if i == k || j == k {
                -bij
            } else {
                let (bik, bkj) = (b.get(i, k), b.get(k, j));
                // (|b_ik| b_kj + b_ik |b_kj|) / 2 is b_ik b_kj when both are positive,
                // -b_ik b_kj when both are negative and 0 otherwise
                let add = if bik > 0 && bkj > 0 {
                    bik.checked_mul(bkj)
                } else if bik < 0 && bkj < 0 {
                    bik.checked_mul(bkj).and_then(|p| p.checked_neg())
                } else {
                    Some(0)
                };
                add.and_then(|a| bij.checked_add(a))
                    .ok_or(Error::Overflow("matrix mutation"))?
            };
            m.set(i, j, v);
        }
    }
    Ok(ExchangeMatrix::from_parts(m, b.symmetrizer().clone()))
}

/// Mutates along `seq` from left to right.
pub fn mutate_sequence(b: &ExchangeMatrix, seq: &[usize]) -> Result<ExchangeMatrix> {
    let mut cur = b.clone();
    for &k in seq {
        cur = mutate_matrix(&cur, k)?;
    }
    Ok(cur)
}

/// Mutation at each node of `set` in turn. For pairwise non-adjacent nodes the
/// order does not matter.
pub fn composite_mutate(b: &ExchangeMatrix, set: &[usize]) -> Result<ExchangeMatrix> {
    mutate_sequence(b, set)
}

fn squarefree_split(x: u64) -> (u64, u64) {
    // x = s^2 * f with f squarefree
    let (mut s, mut f, mut r) = (1u64, 1u64, x);
    let mut p = 2u64;
    while p * p <= r {
        let mut e = 0;
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    f *= r;
    (s, f)
}

/// `sign(v)·v²` for `v = √p + σ·√q`, where `σ` is the sign of `sq` and `q = |sq|`.
fn signed_sqrt_sum(p: u64, sq: i64, k: NodeId) -> Result<i64> {
    let q = sq.unsigned_abs();
    let (s1, f1) = squarefree_split(p);
    let (s2, f2) = squarefree_split(q);
    let f = if p == 0 {
        f2
    } else if q == 0 || f1 == f2 {
        f1
    } else {
        return Err(Error::NotRealizable(format!(
            "weights √{} and √{} at node {} are not commensurable",
            p,
            q,
            k + 1
        )));
    };
    let s1 = if p == 0 { 0 } else { s1 as i128 };
    let s2 = if q == 0 { 0 } else { s2 as i128 };
    let v = if sq < 0 { s1 - s2 } else { s1 + s2 };
    let sq = v * v * f as i128;
    let sq = i64::try_from(sq).map_err(|_| Error::Overflow("diagram mutation"))?;
    Ok(if v < 0 { -sq } else { sq })
}

/// Mutation of a diagram at `k`.
///
/// Edges at `k` are reversed. For every path `x → k → y` with weights `a`, `b`
/// and weight `c` between `x` and `y`, the new edge satisfies
/// `±√c ± √c' = √(ab)`, the sign being `+` exactly when `x, k, y` close an
/// oriented cycle. Colors are kept.
pub fn mutate_diagram(d: &Diagram, k: NodeId) -> Result<Diagram> {
    let n = d.node_count();
    check_index(k, n)?;
    let mut out = d.clone();
    let adj = d.adjacency();
    let ins: Vec<(NodeId, u64)> = adj[k]
        .iter()
        .filter(|&&(_, w)| w < 0)
        .map(|&(x, w)| (x, w.unsigned_abs()))
        .collect();
    let outs: Vec<(NodeId, u64)> = adj[k]
        .iter()
        .filter(|&&(_, w)| w > 0)
        .map(|&(y, w)| (y, w as u64))
        .collect();
    for &(x, a) in &ins {
        for &(y, b) in &outs {
            let ab = a
                .checked_mul(b)
                .ok_or(Error::Overflow("diagram mutation"))?;
            // signed square root in the direction x → y gains √(ab)
            let new = signed_sqrt_sum(ab, d.signed(x, y), k)?;
            out.set_signed(x, y, new);
        }
    }
    for &(u, w) in &adj[k] {
        out.set_signed(k, u, -w);
    }
    Ok(out)
}

/// Caps on mutation-class exploration.
#[derive(Clone, Copy, Debug)]
pub struct ScanLimits {
    /// Any edge heavier than this ends the scan.
    pub weight_cutoff: u64,
    /// Maximum number of distinct diagrams to visit.
    pub max_diagrams: usize,
}

impl Default for ScanLimits {
    fn default() -> Self {
        ScanLimits {
            weight_cutoff: 4,
            max_diagrams: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ScanOutcome {
    /// The class was enumerated completely; all its diagrams were visited.
    Exhausted { size: usize },
    /// A diagram with an edge heavier than the cutoff was reached along `path`.
    HeavyEdge { weight: u64, path: Vec<NodeId> },
    /// The diagram budget ran out first.
    Budget { visited: usize },
}

/// Breadth-first walk of the mutation class of `d`, up to isomorphism.
pub fn scan_mutation_class(d: &Diagram, limits: ScanLimits) -> Result<ScanOutcome> {
    let start = d.uncolored();
    if start.max_weight() > limits.weight_cutoff {
        return Ok(ScanOutcome::HeavyEdge {
            weight: start.max_weight(),
            path: vec![],
        });
    }
    let mut seen: HashMap<CanonicalForm, usize> = HashMap::new();
    let mut parents: Vec<(usize, NodeId)> = vec![(usize::MAX, 0)];
    seen.insert(canonical_form(&start), 0);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((cur, id)) = queue.pop_front() {
        for k in 0..cur.node_count() {
            let next = mutate_diagram(&cur, k)?;
            let w = next.max_weight();
            if w > limits.weight_cutoff {
                let mut path = vec![k];
                let mut at = id;
                while parents[at].0 != usize::MAX {
                    path.push(parents[at].1);
                    at = parents[at].0;
                }
                path.reverse();
                return Ok(ScanOutcome::HeavyEdge { weight: w, path });
            }
            let cf = canonical_form(&next);
            if seen.contains_key(&cf) {
                continue;
            }
            if seen.len() >= limits.max_diagrams {
                return Ok(ScanOutcome::Budget {
                    visited: seen.len(),
                });
            }
            let nid = parents.len();
            parents.push((id, k));
            seen.insert(cf, nid);
            queue.push_back((next, nid));
        }
    }
    Ok(ScanOutcome::Exhausted { size: seen.len() })
}

/// All diagrams of the mutation class, when it is exhausted within the limits.
pub fn mutation_class(d: &Diagram, limits: ScanLimits) -> Result<Option<Vec<Diagram>>> {
    let start = d.uncolored();
    let mut seen: HashMap<CanonicalForm, ()> = HashMap::new();
    seen.insert(canonical_form(&start), ());
    let mut all = vec![start.clone()];
    let mut i = 0;
    while i < all.len() {
        let cur = all[i].clone();
        i += 1;
        for k in 0..cur.node_count() {
            let next = mutate_diagram(&cur, k)?;
            if next.max_weight() > limits.weight_cutoff {
                return Ok(None);
            }
            let cf = canonical_form(&next);
            if seen.insert(cf, ()).is_none() {
                if all.len() >= limits.max_diagrams {
                    return Ok(None);
                }
                all.push(next);
            }
        }
    }
    Ok(Some(all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::matrix_to_diagram;

    #[test]
    fn matrix_mutation_small() {
        let b = ExchangeMatrix::from_rows(&[[0, 1, 0], [-1, 0, 1], [0, -1, 0]]).unwrap();
        let m = mutate_matrix(&b, 1).unwrap();
        assert_eq!(
            m.matrix().rows(),
            vec![vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]
        );
        assert_eq!(mutate_matrix(&m, 1).unwrap(), b);
        assert!(matches!(
            mutate_matrix(&b, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let b = ExchangeMatrix::from_rows(&[[0, big, 0], [-big, 0, big], [0, -big, 0]]).unwrap();
        assert!(matches!(mutate_matrix(&b, 1), Err(Error::Overflow(_))));
    }

    #[test]
    fn triangle_apex_gives_path() {
        // oriented triangle with weights 2, 2, 4; mutating at the apex
        // between the two weight-2 edges removes the weight-4 edge
        let b = ExchangeMatrix::from_rows(&[[0, 1, -1], [-2, 0, 2], [2, -2, 0]]).unwrap();
        assert_eq!(b.symmetrizer().0, vec![1, 2, 2]);
        let d = matrix_to_diagram(&b);
        let m = mutate_matrix(&b, 0).unwrap();
        assert_eq!(m.get(2, 1), 0);
        let dm = mutate_diagram(&d, 0).unwrap();
        assert_eq!(dm, matrix_to_diagram(&m));
        assert_eq!(dm.edge_count(), 2);
        assert!(dm.edges().all(|e| e.weight == 2));
    }

    #[test]
    fn diagram_mutation_incommensurable() {
        // x → k → y with ab = 2 against an existing weight-1 edge
        let d = Diagram::from_edges(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 1)]).unwrap();
        assert!(matches!(
            mutate_diagram(&d, 1),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn class_sizes() {
        let a2 = Diagram::from_edges(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(
            scan_mutation_class(&a2, ScanLimits::default()).unwrap(),
            ScanOutcome::Exhausted { size: 1 }
        );
        let a3 = Diagram::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        // linear A3, the oriented 3-cycle and the two-arrow orientations
        assert_eq!(
            scan_mutation_class(&a3, ScanLimits::default()).unwrap(),
            ScanOutcome::Exhausted { size: 4 }
        );
        let markov = Diagram::from_edges(2, &[(0, 1, 9)]).unwrap();
        assert!(matches!(
            scan_mutation_class(&markov, ScanLimits::default()).unwrap(),
            ScanOutcome::HeavyEdge { .. }
        ));
    }
}
