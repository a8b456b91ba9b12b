//! Rigidity matrices, flex spaces and rigidity verdicts.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{numerical_rank, CMatrix, RankInfo};
use crate::matspace::MatrixSpaceChart;
use crate::motions;
use crate::norms::NormSpec;
use crate::space::Space;
use crate::tolerance::ToleranceConfig;

/// A bar-joint framework `(G, p)` in a normed space.
///
/// Placements are coordinate vectors; for matrix spaces they are chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Framework {
    graph: Graph,
    space: Space,
    placement: Vec<Vec<f64>>,
    tol: ToleranceConfig,
}

impl Framework {
    pub fn new(graph: Graph, space: Space, placement: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerances(graph, space, placement, ToleranceConfig::default())
    }

    pub fn with_tolerances(
        graph: Graph,
        space: Space,
        placement: Vec<Vec<f64>>,
        tol: ToleranceConfig,
    ) -> Result<Self> {
        if placement.is_empty() {
            return Err(Error::EmptyPlacement);
        }
        if placement.len() != graph.n_vertices() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} placed vertices", graph.n_vertices()),
                found: placement.len().to_string(),
            });
        }
        let d = space.dim();
        for p in &placement {
            if p.len() != d {
                return Err(Error::ShapeMismatch {
                    expected: format!("{d} coordinates per vertex"),
                    found: p.len().to_string(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::ShapeMismatch {
                    expected: "finite coordinates".into(),
                    found: "non-finite value".into(),
                });
            }
        }
        for &(u, v) in graph.edges() {
            let gap = placement[u]
                .iter()
                .zip(&placement[v])
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if gap <= tol.membership_tol {
                return Err(Error::CoincidentEndpoints(u, v));
            }
        }
        Ok(Self {
            graph,
            space,
            placement,
            tol,
        })
    }

    /// Framework in a matrix space from explicit matrices.
    pub fn from_matrices(
        graph: Graph,
        chart: Arc<MatrixSpaceChart>,
        norm: NormSpec,
        points: &[CMatrix],
    ) -> Result<Self> {
        let tol = ToleranceConfig::default();
        let placement = points
            .iter()
            .map(|m| chart.to_coords(m, tol.membership_tol))
            .collect::<Result<Vec<_>>>()?;
        Self::new(graph, Space::matrix(chart, norm)?, placement)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn placement(&self) -> &[Vec<f64>] {
        &self.placement
    }

    pub fn tolerances(&self) -> &ToleranceConfig {
        &self.tol
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn edge_vector(&self, u: usize, v: usize) -> Vec<f64> {
        self.placement[u]
            .iter()
            .zip(&self.placement[v])
            .map(|(a, b)| a - b)
            .collect()
    }

    pub fn set_tolerances(&mut self, tol: ToleranceConfig) {
        self.tol = tol;
    }

    pub fn with_graph(&self, graph: Graph) -> Result<Self> {
        Self::with_tolerances(graph, self.space.clone(), self.placement.clone(), self.tol)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        Self {
            graph: self.graph.without_edge(u, v),
            ..self.clone()
        }
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        self.with_graph(self.graph.with_edge(u, v)?)
    }

    pub fn with_placement(&self, placement: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerances(self.graph.clone(), self.space.clone(), placement, self.tol)
    }

    /// Largest distance between two placed points in the max-coordinate metric.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for (i, p) in self.placement.iter().enumerate() {
            for q in &self.placement[i + 1..] {
                for (a, b) in p.iter().zip(q) {
                    d = d.max((a - b).abs());
                }
            }
        }
        d
    }
}

/// Outcome of the smoothness test on every edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellPositioned {
    pub well_positioned: bool,
    pub offending_edges: Vec<(usize, usize)>,
}

pub fn is_well_positioned(fw: &Framework) -> WellPositioned {
    let offending: Vec<_> = fw
        .graph
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            !fw.space
                .smoothness(&fw.edge_vector(u, v), &fw.tol)
                .map(|s| s.smooth)
                .unwrap_or(false)
        })
        .collect();
    WellPositioned {
        well_positioned: offending.is_empty(),
        offending_edges: offending,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidityMatrixResult {
    pub matrix: DMatrix<f64>,
    pub rank: usize,
    pub nullity: usize,
    /// Relative rank tolerance that was applied.
    pub tolerance_used: f64,
    pub sigma_max: f64,
    pub row_order: Vec<(usize, usize)>,
    /// `(vertex, basis index)` per column.
    pub column_order: Vec<(usize, usize)>,
}

fn column_order(n: usize, d: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|v| (0..d).map(move |i| (v, i))).collect()
}

fn rank_result(
    matrix: DMatrix<f64>,
    rows: Vec<(usize, usize)>,
    n: usize,
    d: usize,
    rel_tol: f64,
) -> RigidityMatrixResult {
    let RankInfo {
        rank, sigma_max, ..
    } = numerical_rank(&matrix, rel_tol);
    RigidityMatrixResult {
        nullity: n * d - rank,
        matrix,
        rank,
        tolerance_used: rel_tol,
        sigma_max,
        row_order: rows,
        column_order: column_order(n, d),
    }
}

/// Rows `phi_vw(basis_i)` in the `v` block and `-phi_vw(basis_i)` in the `w` block.
pub fn rigidity_matrix(fw: &Framework) -> Result<RigidityMatrixResult> {
    let wp = is_well_positioned(fw);
    if !wp.well_positioned {
        return Err(Error::NotWellPositioned(wp.offending_edges));
    }
    let (n, d) = (fw.n_vertices(), fw.dim());
    let edges = fw.graph.edges();
    let mut m = DMatrix::zeros(edges.len(), n * d);
    for (r, &(u, v)) in edges.iter().enumerate() {
        let row = fw.space.functional_row(&fw.edge_vector(u, v), &fw.tol)?;
        for (i, x) in row.iter().enumerate() {
            m[(r, u * d + i)] = *x;
            m[(r, v * d + i)] = -*x;
        }
    }
    Ok(rank_result(m, edges.to_vec(), n, d, fw.tol.rank_rel_tol))
}

/// The classical Euclidean rigidity matrix with rows `(p_u - p_v)` / `(p_v - p_u)`, in the given edge order.
pub fn classical_rigidity_matrix(
    edges: &[(usize, usize)],
    placement: &[Vec<f64>],
    d: usize,
) -> DMatrix<f64> {
    let n = placement.len();
    let mut m = DMatrix::zeros(edges.len(), n * d);
    for (r, &(u, v)) in edges.iter().enumerate() {
        for i in 0..d {
            let diff = placement[u][i] - placement[v][i];
            m[(r, u * d + i)] = diff;
            m[(r, v * d + i)] = -diff;
        }
    }
    m
}

/// Dimension of the space of infinitesimal flexes.
pub fn flex_dim(fw: &Framework) -> Result<usize> {
    Ok(rigidity_matrix(fw)?.nullity)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    InfinitesimallyRigid,
    Flexible,
    MinimallyRigid,
    NotWellPositioned,
}

impl Verdict {
    pub fn is_rigid(self) -> bool {
        matches!(
            self,
            Verdict::InfinitesimallyRigid | Verdict::MinimallyRigid
        )
    }
}

/// Maxwell count `|E| >= k|V| - l`; only meaningful for full frameworks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxwellRecord {
    pub edges: usize,
    pub k_v_minus_l: i64,
    pub satisfied: bool,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub well_positioned: bool,
    pub offending_edges: Vec<(usize, usize)>,
    pub full: bool,
    pub rank: Option<usize>,
    pub flex_dim: Option<usize>,
    pub trivial_dim: usize,
    /// `l(X)`.
    pub motion_dim: usize,
    pub verdict: Verdict,
    pub maxwell: MaxwellRecord,
    pub tolerances: ToleranceConfig,
}

/// Full rigidity analysis.
///
/// Fails only when the trivial motions of the space are not determined
/// (a non-admissible norm on a matrix space).
pub fn analyze(fw: &Framework) -> Result<RigidityReport> {
    let trivial = motions::trivial_flex_basis(fw.space(), fw.placement(), &fw.tol)?;
    let motion_dim = trivial.motion_dim;
    let full = trivial.dim == motion_dim;
    let n_edges = fw.graph.n_edges();
    let k_v_minus_l = (fw.dim() * fw.n_vertices()) as i64 - motion_dim as i64;
    let maxwell = MaxwellRecord {
        edges: n_edges,
        k_v_minus_l,
        satisfied: n_edges as i64 >= k_v_minus_l,
        applicable: full,
    };
    let wp = is_well_positioned(fw);
    let mut report = RigidityReport {
        well_positioned: wp.well_positioned,
        offending_edges: wp.offending_edges,
        full,
        rank: None,
        flex_dim: None,
        trivial_dim: trivial.dim,
        motion_dim,
        verdict: Verdict::NotWellPositioned,
        maxwell,
        tolerances: fw.tol,
    };
    if !report.well_positioned {
        return Ok(report);
    }
    let rm = rigidity_matrix(fw)?;
    report.rank = Some(rm.rank);
    report.flex_dim = Some(rm.nullity);
    report.verdict = if rm.nullity != trivial.dim {
        Verdict::Flexible
    } else if is_minimal(&rm, fw.tol.rank_rel_tol) {
        Verdict::MinimallyRigid
    } else {
        Verdict::InfinitesimallyRigid
    };
    Ok(report)
}

/// Every single-row deletion lowers the rank.
fn is_minimal(rm: &RigidityMatrixResult, rel_tol: f64) -> bool {
    let rows = rm.matrix.nrows();
    (0..rows).all(|r| numerical_rank(&rm.matrix.clone().remove_row(r), rel_tol).rank < rm.rank)
}

/// Edge-length map `f_G(p)`.
pub fn edge_lengths(fw: &Framework, placement: &[Vec<f64>]) -> Result<Vec<f64>> {
    fw.graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let diff: Vec<f64> = placement[u]
                .iter()
                .zip(&placement[v])
                .map(|(a, b)| a - b)
                .collect();
            fw.space.norm_of(&diff)
        })
        .collect()
}

/// Max over edges of `|(f(p + hz) - f(p - hz)) / 2h - (R z)_e|`.
///
/// Fails with [`Error::OracleInvalid`] when `p +- hz` leaves the smooth
/// region of an edge (for product norms, when the edge colour changes).
pub fn finite_difference_check(fw: &Framework, z: &[f64], h: f64) -> Result<f64> {
    let (n, d) = (fw.n_vertices(), fw.dim());
    if z.len() != n * d {
        return Err(Error::ShapeMismatch {
            expected: format!("direction of length {}", n * d),
            found: z.len().to_string(),
        });
    }
    if h.is_nan() || h <= 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "h",
            value: h,
            range: "(0, inf)".into(),
        });
    }
    let rm = rigidity_matrix(fw)?;
    let shifted = |sign: f64| -> Vec<Vec<f64>> {
        (0..n)
            .map(|v| {
                (0..d)
                    .map(|i| fw.placement[v][i] + sign * h * z[v * d + i])
                    .collect()
            })
            .collect()
    };
    let (plus, minus) = (shifted(1.0), shifted(-1.0));
    let product = fw.space.product();
    for &(u, v) in fw.graph.edges() {
        let base = fw.edge_vector(u, v);
        for p in [&plus, &minus] {
            let diff: Vec<f64> = p[u].iter().zip(&p[v]).map(|(a, b)| a - b).collect();
            let smooth = fw
                .space
                .smoothness(&diff, &fw.tol)
                .map(|s| s.smooth)
                .unwrap_or(false);
            let same_colour = match &product {
                Some(prod) => {
                    prod.colours(&diff, fw.tol.colour_tol).ok()
                        == prod.colours(&base, fw.tol.colour_tol).ok()
                }
                None => true,
            };
            if !smooth || !same_colour {
                return Err(Error::OracleInvalid(u, v));
            }
        }
    }
    let fp = edge_lengths(fw, &plus)?;
    let fm = edge_lengths(fw, &minus)?;
    let rz = &rm.matrix * nalgebra::DVector::from_column_slice(z);
    Ok((0..fp.len())
        .map(|e| ((fp[e] - fm[e]) / (2.0 * h) - rz[e]).abs())
        .fold(0.0, f64::max))
}

/// Edge count needed by the Maxwell bound versus the edges of `K_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxwellCount {
    pub needed: i64,
    pub complete_graph_edges: i64,
    pub feasible: bool,
    /// `K_m` meets the bound with equality.
    pub boundary: bool,
}

pub fn maxwell_edge_count_kl(k: usize, l: usize, m: usize) -> MaxwellCount {
    let needed = (k * m) as i64 - l as i64;
    let complete = (m * m.saturating_sub(1) / 2) as i64;
    MaxwellCount {
        needed,
        complete_graph_edges: complete,
        feasible: complete >= needed,
        boundary: complete == needed,
    }
}

/// Maxwell arithmetic for `K_m` in a matrix space with `k = dim X`, `l = l(X)`.
pub fn maxwell_edge_count(chart: &MatrixSpaceChart, m: usize) -> MaxwellCount {
    maxwell_edge_count_kl(chart.realdim(), chart.motion_dim(), m)
}
