//! Explicit rigid placements in the cylindrical and hyper-cylindrical spaces.
//!
//! Vertices `v1, v2, ...` are indexed from 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::numerical_rank;
use crate::norms::NormSpec;
use crate::product::{colour_edges, product_analyze, ColourReport, ProductAnalysis};
use crate::rigidity::{classical_rigidity_matrix, Framework, Verdict};
use crate::space::Space;
use crate::tolerance::ToleranceConfig;

/// Colour-0 edges of the `K_6 - e` placement, in the row order of its Euclidean rigidity matrix.
pub const K6E_G1: [(usize, usize); 9] = [
    (0, 4),
    (3, 4),
    (1, 4),
    (0, 1),
    (3, 5),
    (1, 5),
    (1, 3),
    (2, 3),
    (2, 5),
];

/// Colour-1 edges of the `K_6 - e` placement.
pub const K6E_G2: [(usize, usize); 5] = [(0, 3), (0, 2), (2, 4), (0, 5), (1, 2)];

/// The non-edge `v5 v6`.
pub const K6E_MISSING: (usize, usize) = (4, 5);

/// Colour-0 edges of the `K_7` hyper-cylindrical placement.
pub const K7_G1: [(usize, usize); 15] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 5),
    (0, 6),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 6),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 5),
    (4, 6),
    (5, 6),
];

/// Colour-1 edges of the `K_7` hyper-cylindrical placement.
pub const K7_G2: [(usize, usize); 6] = [(0, 4), (1, 5), (2, 6), (3, 4), (3, 6), (4, 5)];

/// Index of `v5`, the vertex new points are cloned from in [`construct_km`].
pub const DESIGNATED_VERTEX: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstructionOptions {
    pub seed: u64,
    /// Perturbation size relative to the framework diameter.
    pub perturb_scale: f64,
    pub retry_cap: usize,
}

impl Default for ConstructionOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            perturb_scale: 1e-3,
            retry_cap: 100,
        }
    }
}

/// A constructed framework with the analysis that certifies it.
#[derive(Debug, Clone)]
pub struct Construction {
    pub framework: Framework,
    pub certificate: ProductAnalysis,
    /// Random draws used by perturbation steps (0 for closed-form placements).
    pub attempts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CylKind {
    Cylindrical,
    HyperCylindrical,
}

fn in_open(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value > lo && value < hi {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            range: format!("({lo}, {hi})"),
        })
    }
}

fn sorted(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut v = edges.to_vec();
    v.sort_unstable();
    v
}

fn classes_match(report: &ColourReport, g1: &[(usize, usize)], g2: &[(usize, usize)]) -> bool {
    report.degenerate.is_empty()
        && report.classes[0] == sorted(g1)
        && report.classes[1] == sorted(g2)
}

pub fn k6_minus_e_placement(eps: f64, delta: f64) -> Vec<Vec<f64>> {
    vec![
        vec![0.0, -1.0, -1.0],
        vec![0.0, 1.0, -1.0],
        vec![0.0, 1.0, 1.0 + 2.0 * eps],
        vec![0.0, -1.0, 1.0 - 2.0 * eps],
        vec![2.0 * delta, 1.0, -1.0],
        vec![2.0 * delta, -1.0, 1.0 - 2.0 * eps],
    ]
}

/// `K_6 - e` in `(R^3, cylindrical)` for `eps, delta` in `(0, 1/2)`.
pub fn construct_k6_minus_e(eps: f64, delta: f64) -> Result<Construction> {
    in_open("epsilon", eps, 0.0, 0.5)?;
    in_open("delta", delta, 0.0, 0.5)?;
    let graph = Graph::complete(6).without_edge(K6E_MISSING.0, K6E_MISSING.1);
    let fw = Framework::new(
        graph,
        Space::vector(NormSpec::Cylindrical)?,
        k6_minus_e_placement(eps, delta),
    )?;
    let certificate = product_analyze(&fw)?;
    if !classes_match(&certificate.colours, &K6E_G1, &K6E_G2) {
        return Err(Error::ConstructionCheck(
            "colour classes differ from G1/G2".into(),
        ));
    }
    if certificate.verdict != Verdict::MinimallyRigid
        || certificate.whole.verdict != Verdict::MinimallyRigid
    {
        return Err(Error::ConstructionCheck(format!(
            "verdict {:?}, expected MinimallyRigid",
            certificate.verdict
        )));
    }
    Ok(Construction {
        framework: fw,
        certificate,
        attempts: 0,
    })
}

pub fn k7_hyper_placement(eps: f64, delta: f64) -> Vec<Vec<f64>> {
    vec![
        vec![0.0, -1.0, -1.0, 0.0],
        vec![0.0, 1.0, -1.0, 0.0],
        vec![0.0, 1.0, 1.0, 2.0 * eps],
        vec![0.0, -1.0, 1.0, -delta],
        vec![0.0, -1.0, 1.0, 2.0 + eps],
        vec![0.0, 1.0, -1.0, -2.0 + 3.0 * eps],
        vec![0.0, 1.0, 1.0, delta],
    ]
}

/// `K_7` in `(R^4, hyper-cylindrical)` with the default seed.
pub fn construct_k7_hyper(eps: f64, delta: f64) -> Result<Construction> {
    construct_k7_hyper_with(eps, delta, &ConstructionOptions::default())
}

fn perturb(rng: &mut ChaCha8Rng, p: &[Vec<f64>], size: f64) -> Vec<Vec<f64>> {
    p.iter()
        .map(|x| {
            x.iter()
                .map(|c| c + size * rng.gen_range(-1.0..1.0))
                .collect()
        })
        .collect()
}

/// Rank of the classical rigidity matrix of `(E_1, P_1 p)` in `R^3` is `3|V| - 6`.
fn euclidean_part_regular(fw: &Framework, edges: &[(usize, usize)], tol: &ToleranceConfig) -> bool {
    let p1: Vec<Vec<f64>> = fw.placement().iter().map(|p| p[..3].to_vec()).collect();
    let m = classical_rigidity_matrix(edges, &p1, 3);
    numerical_rank(&m, tol.rank_rel_tol).rank == 3 * fw.n_vertices() - 6
}

/// `K_7` in `(R^4, hyper-cylindrical)` for `delta` in `(1, 6/5)`, `eps` in `(delta/3, 1 - delta/2)`.
///
/// The closed-form points lie in the hyperplane `w = 0`, so the Euclidean
/// factor is flat. Seeded perturbations are drawn until that factor is
/// regular, the colour classes are unchanged and the framework is minimally rigid.
pub fn construct_k7_hyper_with(
    eps: f64,
    delta: f64,
    opts: &ConstructionOptions,
) -> Result<Construction> {
    in_open("delta", delta, 1.0, 1.2)?;
    in_open("epsilon", eps, delta / 3.0, 1.0 - delta / 2.0)?;
    let base = Framework::new(
        Graph::complete(7),
        Space::vector(NormSpec::HyperCylindrical)?,
        k7_hyper_placement(eps, delta),
    )?;
    let base_colours = colour_edges(&base)?;
    if !classes_match(&base_colours, &K7_G1, &K7_G2) {
        return Err(Error::ConstructionCheck(
            "colour classes differ from G1/G2".into(),
        ));
    }
    let size = opts.perturb_scale * base.diameter();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tol = *base.tolerances();
    for attempt in 1..=opts.retry_cap {
        let Ok(fw) = base.with_placement(perturb(&mut rng, base.placement(), size)) else {
            continue;
        };
        if colour_edges(&fw)? != base_colours || !euclidean_part_regular(&fw, &K7_G1, &tol) {
            continue;
        }
        let certificate = product_analyze(&fw)?;
        if certificate.verdict == Verdict::MinimallyRigid
            && certificate.whole.verdict == Verdict::MinimallyRigid
            && certificate.whole.full
        {
            return Ok(Construction {
                framework: fw,
                certificate,
                attempts: attempt,
            });
        }
    }
    Err(Error::RetryCapExceeded(opts.retry_cap))
}

/// Rigid placement of `K_m`: `m >= 6` (cylindrical) or `m >= 7` (hyper-cylindrical).
///
/// Starts from `K_6` (the `K_6 - e` placement with `v5 v6` added) or `K_7`,
/// then adds each further vertex as a seeded perturbation of `v5`, joined to
/// all earlier vertices, redrawing until its edges to the base vertices
/// inherit the colours of `v5` and the framework stays rigid.
pub fn construct_km(m: usize, kind: CylKind, seed: u64) -> Result<Construction> {
    let opts = ConstructionOptions {
        seed,
        ..ConstructionOptions::default()
    };
    let (base, base_n) = match kind {
        CylKind::Cylindrical => {
            if m < 6 {
                return Err(Error::ParameterOutOfRange {
                    name: "m",
                    value: m as f64,
                    range: "[6, inf)".into(),
                });
            }
            let k6e = construct_k6_minus_e(0.25, 0.25)?;
            (k6e.framework.with_edge(K6E_MISSING.0, K6E_MISSING.1)?, 6)
        }
        CylKind::HyperCylindrical => {
            if m < 7 {
                return Err(Error::ParameterOutOfRange {
                    name: "m",
                    value: m as f64,
                    range: "[7, inf)".into(),
                });
            }
            (construct_k7_hyper_with(0.4, 1.1, &opts)?.framework, 7)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f4b);
    let mut fw = base;
    let mut attempts = 0;
    let mut certificate = product_analyze(&fw)?;
    if !certificate.verdict.is_rigid() {
        return Err(Error::ConstructionCheck(format!(
            "base K_{base_n} is not rigid"
        )));
    }
    let prod = fw
        .space()
        .product()
        .expect("cylindrical spaces are products");
    let colour_tol = fw.tolerances().colour_tol;
    for t in base_n..m {
        let size = opts.perturb_scale * fw.diameter();
        let anchor = fw.placement()[DESIGNATED_VERTEX].clone();
        let mut accepted = None;
        for _ in 0..opts.retry_cap {
            attempts += 1;
            let candidate: Vec<f64> = anchor
                .iter()
                .map(|c| c + size * rng.gen_range(-1.0..1.0))
                .collect();
            let inherits = (0..base_n).filter(|&w| w != DESIGNATED_VERTEX).all(|w| {
                let new: Vec<f64> = candidate
                    .iter()
                    .zip(&fw.placement()[w])
                    .map(|(a, b)| a - b)
                    .collect();
                let old: Vec<f64> = anchor
                    .iter()
                    .zip(&fw.placement()[w])
                    .map(|(a, b)| a - b)
                    .collect();
                matches!(
                    (prod.colours(&new, colour_tol), prod.colours(&old, colour_tol)),
                    (Ok(a), Ok(b)) if a == b && a.len() == 1
                )
            });
            if !inherits {
                continue;
            }
            let mut placement = fw.placement().to_vec();
            placement.push(candidate);
            let graph = Graph::complete(t + 1);
            let Ok(next) =
                Framework::with_tolerances(graph, fw.space().clone(), placement, *fw.tolerances())
            else {
                continue;
            };
            let cert = product_analyze(&next)?;
            if cert.verdict.is_rigid() && cert.whole.verdict.is_rigid() {
                accepted = Some((next, cert));
                break;
            }
        }
        let Some((next, cert)) = accepted else {
            return Err(Error::RetryCapExceeded(opts.retry_cap));
        };
        fw = next;
        certificate = cert;
    }
    Ok(Construction {
        framework: fw,
        certificate,
        attempts,
    })
}

/// Number of random placements compared against in [`euclidean_regularity_check`].
pub const REGULARITY_SAMPLES: usize = 20;

/// The classical rigidity matrix at `placement` attains the largest rank seen over
/// [`REGULARITY_SAMPLES`] random placements of the same graph in `R^d`.
pub fn euclidean_regularity_check(graph: &Graph, placement: &[Vec<f64>], d: usize) -> Result<bool> {
    if !(1..=3).contains(&d) {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d as f64,
            range: "{1, 2, 3}".into(),
        });
    }
    if placement.len() != graph.n_vertices() || placement.iter().any(|p| p.len() != d) {
        return Err(Error::ShapeMismatch {
            expected: format!("{} points in R^{d}", graph.n_vertices()),
            found: "other placement".into(),
        });
    }
    let tol = ToleranceConfig::default().rank_rel_tol;
    let rank_at =
        |p: &[Vec<f64>]| numerical_rank(&classical_rigidity_matrix(graph.edges(), p, d), tol).rank;
    let here = rank_at(placement);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e6u64);
    let best = (0..REGULARITY_SAMPLES)
        .map(|_| {
            let p: Vec<Vec<f64>> = (0..graph.n_vertices())
                .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            rank_at(&p)
        })
        .max()
        .unwrap_or(0);
    Ok(here >= best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k6e_parameters_are_open_interval() {
        assert!(matches!(
            construct_k6_minus_e(0.5, 0.25),
            Err(Error::ParameterOutOfRange {
                name: "epsilon",
                ..
            })
        ));
        assert!(construct_k6_minus_e(0.25, 0.0).is_err());
    }

    #[test]
    fn k6e_quarter_is_minimally_rigid() {
        let c = construct_k6_minus_e(0.25, 0.25).unwrap();
        assert_eq!(c.certificate.verdict, Verdict::MinimallyRigid);
        assert_eq!(c.certificate.whole.flex_dim, Some(4));
    }

    #[test]
    fn k7_parameter_ranges() {
        assert!(construct_k7_hyper(0.4, 1.2).is_err());
        assert!(construct_k7_hyper(0.3, 1.1).is_err());
    }

    #[test]
    fn km_thresholds() {
        assert!(construct_km(5, CylKind::Cylindrical, 1).is_err());
        assert!(construct_km(6, CylKind::HyperCylindrical, 1).is_err());
    }

    #[test]
    fn collinear_triangle_is_not_regular() {
        let p = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]];
        assert!(!euclidean_regularity_check(&Graph::complete(3), &p, 2).unwrap());
    }

    #[test]
    fn k6e_g1_projection_is_regular() {
        let p: Vec<Vec<f64>> = k6_minus_e_placement(0.25, 0.25)
            .iter()
            .map(|x| x[..2].to_vec())
            .collect();
        let g1 = Graph::new(6, K6E_G1).unwrap();
        assert!(euclidean_regularity_check(&g1, &p, 2).unwrap());
    }
}
