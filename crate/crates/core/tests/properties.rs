use proptest::prelude::*;

use sdecomp::{
    canonical_form, matrix_to_diagram, mutate_diagram, mutate_matrix, oracle, oracle_decompose,
    s_decompose, validate_decomposition, DecomposeOptions, Diagram, ExchangeMatrix, Footprint,
    Matrix,
};

/// Diagram on `n` nodes; each pair gets no edge or an edge of weight from `weights` in either direction.
fn diagram(max_n: usize, weights: &'static [u64]) -> impl Strategy<Value = Diagram> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(0..=2 * weights.len(), pairs).prop_map(move |codes| {
            let mut g = Diagram::new(n);
            let mut it = codes.into_iter();
            for a in 0..n {
                for b in a + 1..n {
                    let c = it.next().unwrap();
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
            }
            g
        })
    })
}

/// `S·D` with `S` skew-symmetric.
fn matrix(max_n: usize) -> impl Strategy<Value = ExchangeMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(1i64..=3, n),
            prop::collection::vec(-2i64..=2, n * (n - 1) / 2),
        )
            .prop_map(move |(d, upper)| {
                let mut m = Matrix::zeros(n);
                let mut it = upper.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let s = it.next().unwrap();
                        m.set(i, j, s * d[j]);
                        m.set(j, i, -s * d[i]);
                    }
                }
                ExchangeMatrix::new(m).unwrap()
            })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn footprints(g: &Diagram) -> Option<Vec<Footprint>> {
    let out = s_decompose(
        g,
        &DecomposeOptions {
            all: true,
            limit: usize::MAX,
            ..DecomposeOptions::default()
        },
    )
    .ok()?;
    let mut fps: Vec<_> = out.decompositions.iter().map(|d| d.footprint()).collect();
    fps.sort();
    Some(fps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matrix_mutation_is_an_involution(b in matrix(7), k in 0usize..7) {
        let k = k % b.order();
        let once = mutate_matrix(&b, k).unwrap();
        prop_assert_eq!(mutate_matrix(&once, k).unwrap(), b);
    }

    #[test]
    fn diagram_of_mutation_is_mutation_of_diagram(b in matrix(6), k in 0usize..6) {
        let k = k % b.order();
        let lhs = matrix_to_diagram(&mutate_matrix(&b, k).unwrap());
        let rhs = mutate_diagram(&matrix_to_diagram(&b), k).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_form_ignores_labels(
        (g, perm) in diagram(7, &[1, 2, 4]).prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), permutation(n))
        })
    ) {
        let h = g.relabel(&perm);
        prop_assert_eq!(canonical_form(&g).code, canonical_form(&h).code);
    }

    #[test]
    fn verdict_ignores_labels(
        (g, perm) in diagram(6, &[1, 2, 4]).prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), permutation(n))
        })
    ) {
        let h = g.relabel(&perm);
        let a = s_decompose(&g, &DecomposeOptions::default()).unwrap().decomposable;
        let b = s_decompose(&h, &DecomposeOptions::default()).unwrap().decomposable;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn engine_matches_oracle(g in diagram(5, &[1, 2, 3, 4])) {
        let o = oracle_decompose(&g, oracle::block_bound(g.node_count()));
        prop_assert!(o.complete);
        let mut expected: Vec<_> = o.decompositions.iter().map(|d| d.footprint()).collect();
        expected.sort();
        prop_assert_eq!(footprints(&g).unwrap(), expected);
    }

    #[test]
    fn returned_decompositions_validate(g in diagram(6, &[1, 2, 4])) {
        let out = s_decompose(&g, &DecomposeOptions { all: true, ..DecomposeOptions::default() }).unwrap();
        prop_assert_eq!(out.decomposable, !out.decompositions.is_empty());
        prop_assert_eq!(out.decomposable, out.certificate.is_none());
        for d in &out.decompositions {
            let (ok, bad) = validate_decomposition(d, &g);
            prop_assert!(ok, "{:?}", bad);
        }
    }

    #[test]
    fn examinations_stay_within_twice_the_nodes(g in diagram(8, &[1, 2, 4])) {
        let out = s_decompose(&g, &DecomposeOptions::default()).unwrap();
        prop_assert!(out.trace.max_examinations() <= 2);
    }
}
