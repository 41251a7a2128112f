//! Local case labels for nodes on weight-2 edges.
//!
//! The label is read off the observable neighbourhood of a node: its number
//! `n` of weight-2 edges (and, for `n = 1`, the number `m` at the other end),
//! its degree, the degrees of its neighbours and the edges among them. The
//! search in [`super::engine`] does not depend on these labels; they are
//! attached to trace entries to explain where each node sits.
//!
//! Numbered variants (`A1`/`A2`, `E1`..`E4`, ...) are told apart by
//! orientation: the first bit is whether the weight-2 edge at the node (or the
//! first of them, by neighbour id) points away from it, the second bit likewise
//! for the next distinguishing edge.

use serde::Serialize;

use crate::model::{Diagram, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseAction {
    Replace,
    /// The neighbourhood is a whole connected component.
    Dcc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CaseLabel {
    pub n: u8,
    pub m: Option<u8>,
    pub tag: &'static str,
    pub action: CaseAction,
}

/// Every `(n, m, tag)` a label can carry.
pub const CASE_TAGS: [(u8, Option<u8>, &str); 49] = [
    (4, None, "A"),
    (4, None, "B"),
    (3, None, "A1"),
    (3, None, "A2"),
    (3, None, "B1"),
    (3, None, "B2"),
    (3, None, "C1"),
    (3, None, "C2"),
    (3, None, "D1"),
    (3, None, "D2"),
    (2, None, "A"),
    (2, None, "B"),
    (2, None, "C"),
    (2, None, "D1"),
    (2, None, "D2"),
    (2, None, "E1"),
    (2, None, "E2"),
    (2, None, "E3"),
    (2, None, "E4"),
    (2, None, "F1"),
    (2, None, "F2"),
    (2, None, "F3"),
    (2, None, "F4"),
    (1, Some(1), "A1"),
    (1, Some(1), "A2"),
    (1, Some(2), "A1"),
    (1, Some(2), "A2"),
    (1, Some(2), "B1"),
    (1, Some(2), "B2"),
    (1, Some(2), "C1"),
    (1, Some(2), "C2"),
    (1, Some(2), "D1"),
    (1, Some(2), "D2"),
    (1, Some(2), "D3"),
    (1, Some(2), "D4"),
    (1, Some(3), "A1"),
    (1, Some(3), "A2"),
    (1, Some(3), "B1"),
    (1, Some(3), "B2"),
    (1, Some(3), "B3"),
    (1, Some(3), "B4"),
    (1, Some(3), "C1"),
    (1, Some(3), "C2"),
    (1, Some(3), "C3"),
    (1, Some(3), "C4"),
    (1, Some(3), "D1"),
    (1, Some(3), "D2"),
    (1, Some(3), "D3"),
    (1, Some(3), "D4"),
];

fn tag(n: u8, m: Option<u8>, letter: char, variant: usize) -> &'static str {
    let want = if variant == 0 {
        letter.to_string()
    } else {
        format!("{}{}", letter, variant)
    };
    CASE_TAGS
        .iter()
        .find(|t| t.0 == n && t.1 == m && t.2 == want)
        .map(|t| t.2)
        .expect("tag listed in CASE_TAGS")
}

fn label(
    n: u8,
    m: Option<u8>,
    letter: char,
    variant: usize,
    action: CaseAction,
) -> Option<CaseLabel> {
    Some(CaseLabel {
        n,
        m,
        tag: tag(n, m, letter, variant),
        action,
    })
}

struct View<'a> {
    g: &'a Diagram,
    adj: &'a [Vec<(NodeId, i64)>],
}

impl View<'_> {
    fn deg(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    fn w(&self, a: NodeId, b: NodeId) -> i64 {
        self.g.signed(a, b)
    }

    fn heavy(&self, v: NodeId) -> Vec<NodeId> {
        let mut h: Vec<NodeId> = self.adj[v]
            .iter()
            .filter(|e| e.1.abs() == 2)
            .map(|e| e.0)
            .collect();
        h.sort_unstable();
        h
    }

    fn light(&self, v: NodeId) -> Vec<NodeId> {
        let mut h: Vec<NodeId> = self.adj[v]
            .iter()
            .filter(|e| e.1.abs() != 2)
            .map(|e| e.0)
            .collect();
        h.sort_unstable();
        h
    }

    fn out(&self, a: NodeId, b: NodeId) -> usize {
        usize::from(self.w(a, b) > 0)
    }
}

/// Case label of `o`, or `None` when no listed case fits.
pub fn classify_node(g: &Diagram, o: NodeId) -> Option<CaseLabel> {
    classify_node_in(g, &g.adjacency(), o)
}

/// As [`classify_node`], with the adjacency of `g` already built.
pub(crate) fn classify_node_in(
    g: &Diagram,
    adj: &[Vec<(NodeId, i64)>],
    o: NodeId,
) -> Option<CaseLabel> {
    let v = View { g, adj };
    let heavy = v.heavy(o);
    let deg = v.deg(o);
    use CaseAction::*;
    match heavy.len() {
        4 => {
            if deg != 4 {
                return None;
            }
            // boundary joined by weight-1 edges, or by weight-4 edges
            let any4 = (0..4).any(|i| (i + 1..4).any(|j| v.w(heavy[i], heavy[j]).abs() == 4));
            label(4, None, if any4 { 'B' } else { 'A' }, 0, Dcc)
        }
        3 => {
            let bit = usize::from(heavy.iter().filter(|&&x| v.w(o, x) > 0).count() >= 2);
            match deg {
                3 => {
                    let b = &heavy;
                    let joined = |x: NodeId, y: NodeId| v.w(x, y) != 0;
                    let hub = (0..3).find(|&i| {
                        let others: Vec<NodeId> =
                            (0..3).filter(|&j| j != i).map(|j| b[j]).collect();
                        others.iter().all(|&y| v.w(b[i], y).abs() == 1)
                    });
                    if hub.is_some() {
                        label(3, None, 'A', 1 + bit, Replace)
                    } else {
                        let pairs = (0..3)
                            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                            .filter(|&(i, j)| joined(b[i], b[j]))
                            .count();
                        (pairs == 1).then_some(())?;
                        label(3, None, 'B', 1 + bit, Dcc)
                    }
                }
                4 => label(3, None, 'C', 1 + bit, Replace),
                5 => label(3, None, 'D', 1 + bit, Dcc),
                _ => None,
            }
        }
        2 => {
            let (x, y) = (heavy[0], heavy[1]);
            let xy = v.w(x, y).abs();
            match deg {
                2 => {
                    if xy == 0 {
                        let same = (v.w(o, x) > 0) == (v.w(o, y) > 0);
                        if v.deg(x) == 1 && v.deg(y) == 1 {
                            if same {
                                label(2, None, 'C', 0, Dcc)
                            } else {
                                label(2, None, 'A', 0, Dcc)
                            }
                        } else if !same && v.deg(x) > 1 && v.deg(y) > 1 {
                            label(2, None, 'A', 0, Replace)
                        } else {
                            None
                        }
                    } else if xy == 4 {
                        if v.deg(x) == 2 && v.deg(y) == 2 {
                            label(2, None, 'B', 0, Dcc)
                        } else if v.deg(x) > 2 && v.deg(y) > 2 {
                            label(2, None, 'A', 0, Replace)
                        } else {
                            None
                        }
                    } else if xy == 1 {
                        label(2, None, 'A', 0, Replace)
                    } else {
                        None
                    }
                }
                3..=5 if xy == 4 => label(2, None, 'B', 0, Replace),
                3 => {
                    let x1 = *v.light(o).first()?;
                    // y is the weight-2 neighbour joined to x by a weight-2 edge
                    let (_, z) = if v.w(x, x1).abs() == 2 {
                        (x, y)
                    } else {
                        (y, x)
                    };
                    label(2, None, 'D', if v.w(o, z) > 0 { 1 } else { 2 }, Dcc)
                }
                4 | 5 => {
                    let letter = if deg == 4 { 'E' } else { 'F' };
                    let light = v.light(o);
                    // the weight-2 neighbour that the light neighbours hang off
                    let hub = if light.iter().filter(|&&l| v.w(x, l).abs() == 2).count() >= 2 {
                        x
                    } else {
                        y
                    };
                    let other = if hub == x { y } else { x };
                    label(
                        2,
                        None,
                        letter,
                        1 + 2 * v.out(o, hub) + v.out(o, other),
                        Replace,
                    )
                }
                _ => None,
            }
        }
        1 => {
            let p = heavy[0];
            let ph = v.heavy(p);
            let m = ph.len() as u8;
            let bit = v.out(o, p);
            match m {
                1 => label(1, Some(1), 'A', 1 + (1 - bit), Replace),
                2 => {
                    let x = *ph.iter().find(|&&u| u != o)?;
                    let ox = v.w(o, x).abs();
                    match v.deg(p) {
                        2 => match ox {
                            4 => label(1, Some(2), 'B', 1 + bit, Dcc),
                            1 => label(1, Some(2), 'A', 1 + bit, Replace),
                            0 => label(1, Some(2), 'C', 1 + bit, Dcc),
                            _ => None,
                        },
                        3 => match ox {
                            4 => label(1, Some(2), 'B', 1 + bit, Replace),
                            0 => label(1, Some(2), 'D', 1 + 2 * bit + v.out(p, x), Dcc),
                            _ => None,
                        },
                        d if d > 3 => label(1, Some(2), 'B', 1 + bit, Replace),
                        _ => None,
                    }
                }
                3 => {
                    if deg > 2 {
                        return label(1, Some(3), 'A', 1 + bit, Replace);
                    }
                    if deg != 2 {
                        return None;
                    }
                    let second = v.adj[o].iter().find(|e| e.0 != p)?.0;
                    let variant = 1 + 2 * bit + v.out(o, second);
                    match v.deg(p) {
                        3 => label(1, Some(3), 'B', variant, Dcc),
                        4 => label(1, Some(3), 'C', variant, Replace),
                        5 => label(1, Some(3), 'D', variant, Dcc),
                        _ => None,
                    }
                }
                _ => None,
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_counts() {
        let count =
            |n: u8, m: Option<u8>| CASE_TAGS.iter().filter(|t| t.0 == n && t.1 == m).count();
        assert_eq!(count(4, None), 2);
        assert_eq!(count(3, None), 8);
        assert_eq!(count(2, None), 13);
        assert_eq!(count(1, Some(1)), 2);
        assert_eq!(count(1, Some(2)), 10);
        assert_eq!(count(1, Some(3)), 14);
    }

    #[test]
    fn heavy_triangle_apex() {
        let g = Diagram::from_edges(3, &[(0, 1, 2), (1, 2, 4), (2, 0, 2)]).unwrap();
        let l = classify_node(&g, 0).unwrap();
        assert_eq!((l.n, l.tag, l.action), (2, "B", CaseAction::Dcc));
    }

    #[test]
    fn single_weight_two_edge() {
        let g = Diagram::from_edges(2, &[(0, 1, 2)]).unwrap();
        let l = classify_node(&g, 0).unwrap();
        assert_eq!((l.n, l.m, l.tag), (1, Some(1), "A1"));
        let l = classify_node(&g, 1).unwrap();
        assert_eq!(l.tag, "A2");
    }

    #[test]
    fn unlisted_degree_is_none() {
        // n = 3 with degree 6 is not a listed case
        let mut edges = vec![(0, 1, 2), (0, 2, 2), (0, 3, 2)];
        edges.extend([(0, 4, 1), (0, 5, 1), (0, 6, 1)]);
        let g = Diagram::from_edges(7, &edges).unwrap();
        assert!(classify_node(&g, 0).is_none());
    }
}
