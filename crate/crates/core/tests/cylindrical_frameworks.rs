use std::sync::Arc;

use matrigid::constructions::{k6_minus_e_placement, K6E_G1, K6E_G2, K6E_MISSING, K7_G1, K7_G2};
use matrigid::motions::is_completely_full;
use matrigid::product::transport_to_trace_norm;
use matrigid::*;

fn h2r() -> Arc<MatrixSpaceChart> {
    Arc::new(make_chart(Field::Real, 2, Kind::Hermitian).unwrap())
}

/// The six trace-norm matrices for `K_6 - e`, written out directly.
fn matrix_placement(eps: f64, delta: f64) -> Vec<CMatrix> {
    [
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [1.0 + eps, 0.0, 0.0, eps],
        [-eps, 0.0, 0.0, 1.0 - eps],
        [0.0, delta, delta, -1.0],
        [-eps, delta, delta, 1.0 - eps],
    ]
    .iter()
    .map(|r| CMatrix::real_from_rows(2, r))
    .collect()
}

fn k6e() -> Graph {
    Graph::complete(6).without_edge(K6E_MISSING.0, K6E_MISSING.1)
}

#[test]
fn transported_placement_matches_explicit_matrices() {
    for (eps, delta) in [(0.25, 0.25), (0.1, 0.4), (0.45, 0.05)] {
        let c = construct_k6_minus_e(eps, delta).unwrap();
        let t = transport_to_trace_norm(&c.framework).unwrap();
        let chart = t.space().chart().unwrap().clone();
        for (coords, want) in t.placement().iter().zip(matrix_placement(eps, delta)) {
            let got = chart.from_coords(coords).unwrap();
            assert!(got.max_abs_diff(&want) < 1e-15);
        }
    }
}

#[test]
fn trace_norm_k6e_is_minimally_rigid() {
    let fw = Framework::from_matrices(
        k6e(),
        h2r(),
        NormSpec::trace(),
        &matrix_placement(0.25, 0.25),
    )
    .unwrap();
    let rm = rigidity_matrix(&fw).unwrap();
    assert_eq!((rm.rank, rm.nullity), (14, 4));
    let r = analyze(&fw).unwrap();
    assert_eq!(r.verdict, Verdict::MinimallyRigid);
    assert_eq!((r.maxwell.edges, r.maxwell.k_v_minus_l), (14, 14));
    assert!(r.maxwell.applicable && r.maxwell.satisfied);
    assert_eq!(flex_dim(&fw).unwrap(), 4);
}

#[test]
fn trace_norm_k6e_trivial_motions_and_fullness() {
    let fw = Framework::from_matrices(
        k6e(),
        h2r(),
        NormSpec::trace(),
        &matrix_placement(0.25, 0.25),
    )
    .unwrap();
    let b = trivial_flex_basis(fw.space(), fw.placement(), fw.tolerances()).unwrap();
    assert_eq!(b.dim, 4);
    assert!(is_full(fw.space(), fw.placement(), fw.tolerances()).unwrap());
    let cf = is_completely_full(fw.space(), fw.placement(), fw.tolerances(), 0).unwrap();
    assert!(cf.completely_full && cf.exhaustive);
}

#[test]
fn deleting_any_edge_of_k6e_makes_it_flexible() {
    let fw = Framework::from_matrices(
        k6e(),
        h2r(),
        NormSpec::trace(),
        &matrix_placement(0.25, 0.25),
    )
    .unwrap();
    for &(u, v) in fw.graph().edges() {
        let smaller = fw.without_edge(u, v);
        assert!(flex_dim(&smaller).unwrap() >= 5);
        assert_eq!(analyze(&smaller).unwrap().verdict, Verdict::Flexible);
    }
}

#[test]
fn k6e_without_v3v6_is_flexible_through_the_factors() {
    let c = construct_k6_minus_e(0.25, 0.25).unwrap();
    let fw = c.framework.without_edge(2, 5);
    let pa = product_analyze(&fw).unwrap();
    assert_eq!(pa.verdict, Verdict::Flexible);
    assert_eq!(pa.whole.verdict, Verdict::Flexible);
    assert!(pa.nullity_additive && pa.trivial_additive);
}

#[test]
fn adding_v5v6_gives_rigid_k6_with_colour_one() {
    let c = construct_k6_minus_e(0.25, 0.25).unwrap();
    let k6 = c.framework.with_edge(4, 5).unwrap();
    let colours = colour_edges(&k6).unwrap();
    let kappa = colours.kappa.iter().find(|e| e.edge == (4, 5)).unwrap();
    assert_eq!(kappa.colours, vec![0]);
    let pa = product_analyze(&k6).unwrap();
    assert_eq!(pa.verdict, Verdict::InfinitesimallyRigid);
    assert_eq!(pa.whole.verdict, Verdict::InfinitesimallyRigid);
}

#[test]
fn k6e_monochrome_subgraphs() {
    let c = construct_k6_minus_e(0.25, 0.25).unwrap();
    let parts = decompose(&c.framework).unwrap();
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[0].graph().n_edges(), 9);
    assert!(is_laman(parts[0].graph()));
    let mut g2 = K6E_G2.to_vec();
    g2.sort();
    assert_eq!(parts[1].graph().edges(), g2.as_slice());
    assert!(is_spanning_tree(
        parts[1].graph().edges(),
        &[0, 1, 2, 3, 4, 5]
    ));
    assert!(
        pebble_game(&Graph::complete(6).without_edge(4, 5), 3, 4)
            .unwrap()
            .tight
    );
    assert!(euclidean_regularity_check(
        &Graph::new(6, K6E_G1).unwrap(),
        &k6_minus_e_placement(0.25, 0.25)
            .iter()
            .map(|p| p[..2].to_vec())
            .collect::<Vec<_>>(),
        2
    )
    .unwrap());
}

#[test]
fn small_complete_graphs_in_h2r_are_flexible() {
    let chart = h2r();
    let space = Space::matrix(chart, NormSpec::Schatten(3.0)).unwrap();
    let pts = [
        vec![0.3, -1.2, 0.5],
        vec![1.1, 0.4, -0.7],
        vec![-0.6, 0.9, 0.2],
        vec![0.8, 1.3, 1.0],
        vec![-1.0, -0.2, -0.9],
    ];
    for m in 2..=5 {
        let fw = Framework::new(Graph::complete(m), space.clone(), pts[..m].to_vec()).unwrap();
        let r = analyze(&fw).unwrap();
        assert!(r.well_positioned);
        if r.full {
            assert_eq!(r.verdict, Verdict::Flexible, "K_{m}");
        }
    }
}

#[test]
fn k7_hyper_structure() {
    let c = construct_k7_hyper(0.4, 1.1).unwrap();
    let classes = &c.certificate.colours.classes;
    assert_eq!(classes[0], K7_G1.to_vec());
    assert_eq!(classes[1], K7_G2.to_vec());
    assert!(!is_laman(&Graph::new(7, K7_G1).unwrap()));
    assert!(
        pebble_game(&Graph::new(7, K7_G1).unwrap(), 3, 6)
            .unwrap()
            .tight
    );
    assert!(pebble_game(&Graph::complete(7), 4, 7).unwrap().tight);
    assert!(is_spanning_tree(&K7_G2, &[0, 1, 2, 3, 4, 5, 6]));
}

#[test]
fn k7_hyper_is_deterministic_per_seed() {
    let opts = ConstructionOptions {
        seed: 11,
        ..Default::default()
    };
    let a = construct_k7_hyper_with(0.4, 1.1, &opts).unwrap();
    let b = construct_k7_hyper_with(0.4, 1.1, &opts).unwrap();
    assert_eq!(a.framework.placement(), b.framework.placement());
}

#[test]
fn k7_transported_to_h2c_keeps_rank() {
    let c = construct_k7_hyper(0.4, 1.1).unwrap();
    let t = transport_to_trace_norm(&c.framework).unwrap();
    let direct = analyze(&c.framework).unwrap();
    let moved = analyze(&t).unwrap();
    assert_eq!(direct.rank, moved.rank);
    assert_eq!(direct.flex_dim, moved.flex_dim);
    assert_eq!(moved.verdict, Verdict::MinimallyRigid);
}

#[test]
fn km_constructions() {
    let k6 = construct_km(6, CylKind::Cylindrical, 3).unwrap();
    assert_eq!(k6.framework.graph().n_edges(), 15);
    assert_eq!(k6.certificate.verdict, Verdict::InfinitesimallyRigid);
    for seed in [1, 2, 3] {
        let k8 = construct_km(8, CylKind::Cylindrical, seed).unwrap();
        assert!(k8.certificate.verdict.is_rigid());
    }
    assert!(construct_km(5, CylKind::Cylindrical, 0).is_err());
}

#[test]
fn sup_norm_plane_with_spanning_trees() {
    // colour 0 edges are wider than tall, colour 1 taller than wide
    let placement = vec![
        vec![0.0, 0.0],
        vec![2.0, 0.5],
        vec![0.3, 1.8],
        vec![2.2, 2.6],
    ];
    let fw = Framework::new(
        Graph::complete(4),
        Space::vector(NormSpec::SupVec(2)).unwrap(),
        placement,
    )
    .unwrap();
    let col = colour_edges(&fw).unwrap();
    let vs = [0, 1, 2, 3];
    let trees = is_spanning_tree(&col.classes[0], &vs) && is_spanning_tree(&col.classes[1], &vs);
    assert!(trees);
    assert_eq!(
        product_analyze(&fw).unwrap().verdict,
        Verdict::MinimallyRigid
    );
    assert_eq!(analyze(&fw).unwrap().verdict, Verdict::MinimallyRigid);
    let smaller = fw.without_edge(1, 2);
    assert_eq!(analyze(&smaller).unwrap().verdict, Verdict::Flexible);
}
