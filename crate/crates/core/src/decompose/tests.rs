use super::*;
use crate::assembly::validate_decomposition;
use crate::catalog::BlockKind;

fn d(n: usize, edges: &[(NodeId, NodeId, u64)]) -> Diagram {
    Diagram::from_edges(n, edges).unwrap()
}

fn all() -> DecomposeOptions {
    DecomposeOptions {
        all: true,
        ..Default::default()
    }
}

fn check_valid(g: &Diagram, out: &Outcome) {
    for dec in &out.decompositions {
        let (ok, bad) = validate_decomposition(dec, g);
        assert!(ok, "{:?} {:?}", dec, bad);
    }
}

#[test]
fn isolated_node_is_empty_decomposition() {
    let g = Diagram::new(1);
    let out = s_decompose(&g, &all()).unwrap();
    assert!(out.decomposable);
    assert_eq!(out.decompositions.len(), 1);
    assert!(out.decompositions[0].blocks.is_empty());
}

#[test]
fn single_weight_two_edge() {
    let g = d(2, &[(0, 1, 2)]);
    let out = s_decompose(&g, &all()).unwrap();
    assert!(out.decomposable);
    assert_eq!(out.decompositions.len(), 1);
    check_valid(&g, &out);
    let kinds: Vec<BlockKind> = out.decompositions[0]
        .blocks
        .iter()
        .map(|b| b.kind)
        .collect();
    assert_eq!(kinds.len(), 1);
    assert!(matches!(kinds[0], BlockKind::Ia | BlockKind::Ib));
}

#[test]
fn heavy_path_and_triangle_have_two_footprints() {
    let g = d(3, &[(0, 1, 2), (1, 2, 4), (2, 0, 2)]);
    let out = s_decompose(&g, &all()).unwrap();
    assert!(out.decomposable);
    assert_eq!(out.decompositions.len(), 2);
    check_valid(&g, &out);
    let fps: HashSet<_> = out.decompositions.iter().map(|d| d.footprint()).collect();
    assert_eq!(fps.len(), 2);
}

#[test]
fn weight_one_triangle_and_paths() {
    let g = d(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
    let out = s_decompose(&g, &DecomposeOptions::default()).unwrap();
    assert!(out.decomposable);
    check_valid(&g, &out);
    let g = d(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
    assert!(
        s_decompose(&g, &DecomposeOptions::default())
            .unwrap()
            .decomposable
    );
}

#[test]
fn weight_four_edge_alone() {
    let g = d(2, &[(0, 1, 4)]);
    let out = s_decompose(&g, &DecomposeOptions::default()).unwrap();
    assert!(out.decomposable);
    check_valid(&g, &out);
}

#[test]
fn gates() {
    let g = d(2, &[(0, 1, 3)]);
    let out = s_decompose(&g, &DecomposeOptions::default()).unwrap();
    assert!(matches!(
        out.certificate,
        Some(Certificate::Weight { weight: 3, .. })
    ));

    let edges: Vec<_> = (1..6).map(|i| (0, i, 2)).collect();
    let out = s_decompose(&d(6, &edges), &DecomposeOptions::default()).unwrap();
    assert!(matches!(
        out.certificate,
        Some(Certificate::Weight2Count { node: 0, count: 5 })
    ));

    let edges: Vec<_> = (1..10).map(|i| (0, i, 1)).collect();
    let out = s_decompose(&d(10, &edges), &DecomposeOptions::default()).unwrap();
    assert!(matches!(
        out.certificate,
        Some(Certificate::Degree { node: 0, degree: 9 })
    ));
}

#[test]
fn star_of_five_spikes_is_rejected() {
    // within the degree gate but no node can sit in five blocks
    let edges: Vec<_> = (1..6).map(|i| (0, i, 1)).collect();
    let out = s_decompose(&d(6, &edges), &DecomposeOptions::default()).unwrap();
    assert!(!out.decomposable);
    assert!(matches!(
        out.certificate,
        Some(Certificate::EmptyCover { .. })
    ));
}

#[test]
fn oriented_four_cycle_is_a_square_sum() {
    // 0->1->2->3->0 is two triangles glued along a cancelled diagonal
    let g = d(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
    let out = s_decompose(&g, &DecomposeOptions::default()).unwrap();
    assert!(out.decomposable);
    check_valid(&g, &out);
}

#[test]
fn long_pattern_is_enforced() {
    let g = d(2, &[(0, 1, 2)]);
    let mut opts = DecomposeOptions::default();
    opts.long = Some(vec![false, true]);
    let out = s_decompose(&g, &opts).unwrap();
    assert!(out.decomposable);
    assert_eq!(
        out.decompositions[0]
            .doubled_nodes()
            .into_iter()
            .collect::<Vec<_>>(),
        vec![1]
    );
    opts.long = Some(vec![false, false]);
    let out = s_decompose(&g, &opts).unwrap();
    assert!(!out.decomposable);
}

#[test]
fn reduce_leaves_weight_one_four_residual() {
    // weight-2 edge on a white end, with a triangle hanging off that end
    let g = d(4, &[(0, 1, 2), (0, 2, 1), (2, 3, 1), (3, 0, 1)]);
    match reduce(&g).unwrap() {
        Reduction::Reduced {
            residual,
            new_blocks,
            ..
        } => {
            assert!(!new_blocks.is_empty());
            assert!(residual.edges().all(|e| e.weight != 2));
            let out = block_decompose(&residual, &DecomposeOptions::default()).unwrap();
            assert!(out.decomposable);
        }
        Reduction::Rejected { certificate, .. } => panic!("{:?}", certificate),
    }
}

#[test]
fn heavy_triangle_with_pendant_edge_is_rejected() {
    // node 2 is black or already in two blocks in both decompositions of the triangle
    let g = d(4, &[(0, 1, 2), (1, 2, 4), (2, 0, 2), (2, 3, 1)]);
    assert!(matches!(reduce(&g).unwrap(), Reduction::Rejected { .. }));
}

#[test]
fn block_decompose_refuses_weight_two() {
    assert!(block_decompose(&d(2, &[(0, 1, 2)]), &DecomposeOptions::default()).is_err());
}
