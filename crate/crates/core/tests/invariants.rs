use std::sync::Arc;

use matrigid::norms::dual_norm;
use matrigid::product::transport_to_trace_norm;
use matrigid::*;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn chart(field: Field, n: usize, kind: Kind) -> Arc<MatrixSpaceChart> {
    Arc::new(make_chart(field, n, kind).unwrap())
}

fn charts() -> Vec<Arc<MatrixSpaceChart>> {
    vec![
        chart(Field::Real, 2, Kind::Hermitian),
        chart(Field::Real, 2, Kind::Full),
        chart(Field::Complex, 2, Kind::Hermitian),
        chart(Field::Complex, 2, Kind::Full),
        chart(Field::Real, 3, Kind::Hermitian),
    ]
}

fn norms() -> Vec<NormSpec> {
    vec![
        NormSpec::Schatten(1.0),
        NormSpec::Schatten(3.0),
        NormSpec::Schatten(f64::INFINITY),
        NormSpec::KyFan(1),
    ]
}

fn coords(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, len)
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

/// A graph on `n` vertices together with `n` points in dimension `d`.
fn framework_data(
    n_range: std::ops::RangeInclusive<usize>,
    d: usize,
) -> impl Strategy<Value = (Graph, Vec<Vec<f64>>)> {
    n_range.prop_flat_map(move |n| {
        let pairs = all_pairs(n);
        let m = pairs.len();
        (
            subsequence(pairs, 0..=m),
            prop::collection::vec(coords(d), n),
        )
            .prop_map(move |(edges, pts)| (Graph::new(n, edges).unwrap(), pts))
    })
}

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = all_pairs(n);
        let m = pairs.len();
        subsequence(pairs, 0..=m).prop_map(move |e| Graph::new(n, e).unwrap())
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn cyl_norm(v: &[f64]) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt().max(v[2].abs())
}

fn hcyl_norm(v: &[f64]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
        .sqrt()
        .max(v[3].abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chart_coordinates_round_trip(ci in 0usize..5, seed in coords(18)) {
        let c = &charts()[ci];
        let x = &seed[..c.realdim()];
        let m = c.from_coords(x).unwrap();
        prop_assert!(c.contains(&m, 1e-12));
        let back = c.to_coords(&m, 1e-12).unwrap();
        for (a, b) in x.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn support_functional_is_norming(ci in 0usize..5, ni in 0usize..4, seed in coords(18)) {
        let c = &charts()[ci];
        let norm = norms()[ni];
        let m = c.from_coords(&seed[..c.realdim()]).unwrap();
        let tol = ToleranceConfig::default();
        prop_assume!(norm_value(&norm, NormArg::Matrix(&m)).unwrap() > 1e-6);
        prop_assume!(is_smooth_at(&norm, NormArg::Matrix(&m), &tol).unwrap().smooth);
        let sf = support_functional(&norm, NormArg::Matrix(&m), &tol).unwrap();
        let unit = m.scale(1.0 / norm_value(&norm, NormArg::Matrix(&m)).unwrap());
        prop_assert!((sf.eval(NormArg::Matrix(&unit)).unwrap() - 1.0).abs() < 1e-9);
        prop_assert!((dual_norm(&norm, &sf).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn support_functional_bounded_on_samples(
        ni in 0usize..4,
        x in coords(3),
        ys in prop::collection::vec(coords(3), 8),
    ) {
        let c = chart(Field::Real, 2, Kind::Hermitian);
        let norm = norms()[ni];
        let tol = ToleranceConfig::default();
        let m = c.from_coords(&x).unwrap();
        prop_assume!(norm_value(&norm, NormArg::Matrix(&m)).unwrap() > 1e-6);
        prop_assume!(is_smooth_at(&norm, NormArg::Matrix(&m), &tol).unwrap().smooth);
        let sf = support_functional(&norm, NormArg::Matrix(&m), &tol).unwrap();
        for y in ys {
            let ym = c.from_coords(&y).unwrap();
            let ny = norm_value(&norm, NormArg::Matrix(&ym)).unwrap();
            prop_assert!(sf.eval(NormArg::Matrix(&ym)).unwrap() <= ny * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn cylindrical_isometry(v in coords(3)) {
        let m = psi_cyl([v[0], v[1], v[2]]).to_matrix();
        let trace = norm_value(&NormSpec::trace(), NormArg::Matrix(&m)).unwrap();
        let n = cyl_norm(&v);
        prop_assert!((trace - n).abs() <= 1e-10 * (1.0 + n));
        let back = psi_cyl_inv(&psi_cyl([v[0], v[1], v[2]])).unwrap();
        for i in 0..3 {
            prop_assert!((back[i] - v[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn hyper_cylindrical_isometry(v in coords(4)) {
        let m = psi_hcyl([v[0], v[1], v[2], v[3]]).to_matrix();
        let trace = norm_value(&NormSpec::trace(), NormArg::Matrix(&m)).unwrap();
        let n = hcyl_norm(&v);
        prop_assert!((trace - n).abs() <= 1e-10 * (1.0 + n));
        let p = norm_value(&NormSpec::HyperCylindrical, NormArg::Vector(&v)).unwrap();
        prop_assert!((p - n).abs() <= 1e-12 * (1.0 + n));
    }

    #[test]
    fn cylindrical_colour_matches_sign_test(v in coords(3)) {
        let tol = ToleranceConfig::default();
        let planar = (v[0] * v[0] + v[1] * v[1]).sqrt();
        prop_assume!((planar - v[2].abs()).abs() > 10.0 * tol.colour_tol);
        prop_assume!(cyl_norm(&v) > 0.0);
        let colours = ProductNormSpace::cylindrical().colours(&v, tol.colour_tol).unwrap();
        let expected = if v[0] * v[0] + v[1] * v[1] - v[2] * v[2] > 0.0 { 0 } else { 1 };
        prop_assert_eq!(colours, vec![expected]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_invariant_under_edge_order_and_relabelling(
        ((g, pts), perm) in framework_data(2..=6, 3).prop_flat_map(|(g, pts)| {
            let n = g.n_vertices();
            (Just((g, pts)), permutation(n))
        }),
        ni in 0usize..3,
    ) {
        let space = Space::matrix(chart(Field::Real, 2, Kind::Hermitian), norms()[ni]).unwrap();
        let Ok(fw) = Framework::new(g.clone(), space.clone(), pts.clone()) else { return Ok(()) };
        let Ok(rm) = rigidity_matrix(&fw) else { return Ok(()) };
        let n = g.n_vertices();
        let g2 = g.relabel(&perm).unwrap();
        let mut pts2 = vec![Vec::new(); n];
        for (v, p) in pts.into_iter().enumerate() {
            pts2[perm[v]] = p;
        }
        let fw2 = Framework::new(g2, space, pts2).unwrap();
        let rm2 = rigidity_matrix(&fw2).unwrap();
        prop_assert_eq!(rm.rank, rm2.rank);
        prop_assert_eq!(rm.nullity, rm2.nullity);
    }

    #[test]
    fn flex_dim_dominates_trivial_dim((g, pts) in framework_data(2..=6, 3), ni in 0usize..3) {
        let space = Space::matrix(chart(Field::Real, 2, Kind::Hermitian), norms()[ni]).unwrap();
        let Ok(fw) = Framework::new(g, space, pts) else { return Ok(()) };
        let r = analyze(&fw).unwrap();
        if let Some(f) = r.flex_dim {
            prop_assert!(f >= r.trivial_dim);
        }
    }

    #[test]
    fn trivial_motions_lie_in_the_kernel((g, pts) in framework_data(2..=6, 3), ni in 0usize..3) {
        let space = Space::matrix(chart(Field::Real, 2, Kind::Hermitian), norms()[ni]).unwrap();
        let Ok(fw) = Framework::new(g, space, pts) else { return Ok(()) };
        let Ok(rm) = rigidity_matrix(&fw) else { return Ok(()) };
        let basis = trivial_flex_basis(fw.space(), fw.placement(), fw.tolerances()).unwrap();
        for z in &basis.vectors {
            let scale = 1.0 + z.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            for row in rm.matrix.row_iter() {
                let dot: f64 = row.iter().zip(z).map(|(a, b)| a * b).sum();
                prop_assert!(dot.abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn minimally_rigid_frameworks_meet_the_count((g, pts) in framework_data(3..=7, 3)) {
        let fw = match Framework::new(g, Space::vector(NormSpec::Cylindrical).unwrap(), pts) {
            Ok(fw) => fw,
            Err(_) => return Ok(()),
        };
        let r = analyze(&fw).unwrap();
        if r.verdict == Verdict::MinimallyRigid && r.full {
            prop_assert_eq!(r.maxwell.edges as i64, r.maxwell.k_v_minus_l);
        }
        if r.verdict.is_rigid() && r.full {
            prop_assert!(r.maxwell.satisfied);
        }
    }

    #[test]
    fn nullity_is_additive_over_colour_classes((g, pts) in framework_data(2..=7, 3)) {
        let Ok(fw) = Framework::new(g, Space::vector(NormSpec::Cylindrical).unwrap(), pts) else {
            return Ok(());
        };
        if let Ok(pa) = product_analyze(&fw) {
            prop_assert!(pa.nullity_additive);
            prop_assert!(pa.trivial_additive);
        }
    }

    #[test]
    fn transport_preserves_rank((g, pts) in framework_data(2..=6, 3)) {
        let Ok(fw) = Framework::new(g, Space::vector(NormSpec::Cylindrical).unwrap(), pts) else {
            return Ok(());
        };
        let Ok(rm) = rigidity_matrix(&fw) else { return Ok(()) };
        let t = transport_to_trace_norm(&fw).unwrap();
        let rt = rigidity_matrix(&t).unwrap();
        prop_assert_eq!(rm.rank, rt.rank);
    }
}

fn fullness_spaces() -> Vec<Space> {
    vec![
        Space::vector(NormSpec::Cylindrical).unwrap(),
        Space::vector(NormSpec::HyperCylindrical).unwrap(),
        Space::matrix(
            chart(Field::Real, 2, Kind::Hermitian),
            NormSpec::Schatten(3.0),
        )
        .unwrap(),
        Space::matrix(chart(Field::Real, 2, Kind::Full), NormSpec::Schatten(3.0)).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fullness_is_stable(
        si in 0usize..4,
        pts in prop::collection::vec(coords(4), 1..6),
        extra in coords(4),
        scale in 0.1..10.0f64,
        dup in any::<prop::sample::Index>(),
    ) {
        let space = &fullness_spaces()[si];
        let d = space.dim();
        let tol = ToleranceConfig::default();
        let p: Vec<Vec<f64>> = pts.iter().map(|x| x[..d].to_vec()).collect();
        let full = is_full(space, &p, &tol).unwrap();

        let scaled: Vec<Vec<f64>> = p.iter().map(|x| x.iter().map(|c| c * scale).collect()).collect();
        prop_assert_eq!(is_full(space, &scaled, &tol).unwrap(), full);

        let mut duplicated = p.clone();
        duplicated.push(p[dup.index(p.len())].clone());
        prop_assert_eq!(is_full(space, &duplicated, &tol).unwrap(), full);

        if full {
            let mut more = p.clone();
            more.push(extra[..d].to_vec());
            prop_assert!(is_full(space, &more, &tol).unwrap());
        }
    }
}

const SPARSITY_PARAMS: [(usize, usize); 5] = [(2, 3), (3, 4), (3, 6), (4, 7), (1, 1)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pebble_game_agrees_with_brute_force(g in small_graph(8), pi in 0usize..5) {
        let (k, l) = SPARSITY_PARAMS[pi];
        let a = pebble_game(&g, k, l).unwrap();
        let b = brute_force_sparsity(&g, k, l).unwrap();
        prop_assert_eq!(a.sparse, b.sparse);
        prop_assert_eq!(a.tight, b.tight);
        if a.tight {
            prop_assert!(a.sparse);
        }
        if let Some(w) = &a.witness {
            let inside = w.edges.len() as i64;
            prop_assert!(inside > (k * w.vertices.len()) as i64 - l as i64);
        }
    }

    #[test]
    fn adding_an_edge_to_a_tight_graph_breaks_sparsity(
        (n, order) in (3usize..=8).prop_flat_map(|n| (Just(n), Just(all_pairs(n)).prop_shuffle())),
        pi in 0usize..5,
    ) {
        let (k, l) = SPARSITY_PARAMS[pi];
        let mut g = Graph::empty(n);
        for &(a, b) in &order {
            let h = g.with_edge(a, b).unwrap();
            if pebble_game(&h, k, l).unwrap().sparse {
                g = h;
            }
        }
        let v = pebble_game(&g, k, l).unwrap();
        prop_assume!(v.tight);
        for &(a, b) in order.iter().filter(|&&(a, b)| !g.has_edge(a, b)) {
            prop_assert!(!pebble_game(&g.with_edge(a, b).unwrap(), k, l).unwrap().sparse);
        }
    }

    #[test]
    fn sparsity_invariant_under_relabelling(
        (g, perm) in small_graph(8).prop_flat_map(|g| {
            let n = g.n_vertices();
            (Just(g), permutation(n))
        }),
        pi in 0usize..5,
    ) {
        let (k, l) = SPARSITY_PARAMS[pi];
        let a = pebble_game(&g, k, l).unwrap();
        let b = pebble_game(&g.relabel(&perm).unwrap(), k, l).unwrap();
        prop_assert_eq!((a.sparse, a.tight), (b.sparse, b.tight));
    }
}
