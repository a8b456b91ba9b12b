//! Product norms `max_j ||P_j x||_j`, edge colourings and monochrome
//! decompositions, and the isometries of the cylindrical spaces onto
//! `(H_2(R), trace)` and `(H_2(C), trace)`.
//!
//! Colours are factor indices starting at 0.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::euclidean_norm;
use crate::matspace::{make_chart, Field, Kind, MatrixElement, MatrixSpaceChart};
use crate::norms::NormSpec;
use crate::rigidity::{analyze, Framework, RigidityReport, Verdict};
use crate::space::{euclidean_generators, Space};
use crate::sparsity::is_spanning_tree;

#[derive(Debug, Clone, PartialEq)]
pub struct ProductNormSpace {
    factors: Vec<(usize, NormSpec)>,
}

impl ProductNormSpace {
    /// Factors must be `EuclideanVec(d)` with matching `d`, or `AbsVal` with `d = 1`.
    pub fn new(factors: Vec<(usize, NormSpec)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::NotProductSpace);
        }
        for &(d, norm) in &factors {
            let ok = match norm {
                NormSpec::EuclideanVec(e) => e == d && d > 0,
                NormSpec::AbsVal => d == 1,
                _ => false,
            };
            if !ok {
                return Err(Error::UnsupportedNorm {
                    norm: norm.to_string(),
                    space: format!("product factor of dimension {d}"),
                });
            }
        }
        Ok(Self { factors })
    }

    pub fn cylindrical() -> Self {
        Self {
            factors: vec![(2, NormSpec::EuclideanVec(2)), (1, NormSpec::AbsVal)],
        }
    }

    pub fn hyper_cylindrical() -> Self {
        Self {
            factors: vec![(3, NormSpec::EuclideanVec(3)), (1, NormSpec::AbsVal)],
        }
    }

    pub fn sup(d: usize) -> Self {
        Self {
            factors: vec![(1, NormSpec::AbsVal); d],
        }
    }

    pub fn factors(&self) -> &[(usize, NormSpec)] {
        &self.factors
    }

    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.0).sum()
    }

    /// Sum of factor motion dimensions.
    pub fn motion_dim(&self) -> usize {
        self.factors.iter().map(|&(d, _)| d * (d + 1) / 2).sum()
    }

    fn offset(&self, j: usize) -> usize {
        self.factors[..j].iter().map(|f| f.0).sum()
    }

    /// `P_j x`.
    pub fn project<'a>(&self, x: &'a [f64], j: usize) -> &'a [f64] {
        let o = self.offset(j);
        &x[o..o + self.factors[j].0]
    }

    pub fn factor_norms(&self, x: &[f64]) -> Vec<f64> {
        (0..self.factors.len())
            .map(|j| {
                let p = self.project(x, j);
                match self.factors[j].1 {
                    NormSpec::AbsVal => p[0].abs(),
                    _ => euclidean_norm(p),
                }
            })
            .collect()
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.factor_norms(x).into_iter().fold(0.0, f64::max)
    }

    /// `kappa(x)`: factors whose norm is within `colour_tol` of the maximum.
    pub fn colours(&self, x: &[f64], colour_tol: f64) -> Result<Vec<usize>> {
        let f = self.factor_norms(x);
        let max = f.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return Err(Error::UndefinedDirection);
        }
        Ok((0..f.len()).filter(|&j| f[j] >= max - colour_tol).collect())
    }

    /// Representer of the unique support functional at `x / ||x||`.
    pub fn support_functional_rep(&self, x: &[f64], colour_tol: f64) -> Result<Vec<f64>> {
        let kappa = self.colours(x, colour_tol)?;
        if kappa.len() != 1 {
            let f = self.factor_norms(x);
            let mut sorted = f.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            return Err(Error::NonSmooth {
                gap: sorted[0] - sorted[1],
                threshold: colour_tol,
            });
        }
        let j = kappa[0];
        let mut rep = vec![0.0; self.dim()];
        let o = self.offset(j);
        let p = self.project(x, j);
        match self.factors[j].1 {
            NormSpec::AbsVal => rep[o] = p[0].signum(),
            _ => {
                let nrm = euclidean_norm(p);
                for (i, v) in p.iter().enumerate() {
                    rep[o + i] = v / nrm;
                }
            }
        }
        Ok(rep)
    }

    /// Dual norm: sum over factors of the factor dual norms.
    pub fn dual_norm(&self, rep: &[f64]) -> f64 {
        (0..self.factors.len())
            .map(|j| euclidean_norm(self.project(rep, j)))
            .sum()
    }

    /// Direct sum of the factor motions evaluated at `x`.
    pub fn motion_generators_at(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let mut out = Vec::with_capacity(self.motion_dim());
        for j in 0..self.factors.len() {
            let o = self.offset(j);
            let d = self.factors[j].0;
            for g in euclidean_generators(self.project(x, j), d) {
                let mut z = vec![0.0; dim];
                z[o..o + d].copy_from_slice(&g);
                out.push(z);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColour {
    pub edge: (usize, usize),
    pub colours: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourReport {
    pub kappa: Vec<EdgeColour>,
    /// `classes[j]`: edges whose only colour is `j`.
    pub classes: Vec<Vec<(usize, usize)>>,
    /// Edges with two or more colours.
    pub degenerate: Vec<(usize, usize)>,
}

fn product_of(fw: &Framework) -> Result<ProductNormSpace> {
    fw.space().product().ok_or(Error::NotProductSpace)
}

pub fn colour_edges(fw: &Framework) -> Result<ColourReport> {
    let prod = product_of(fw)?;
    let tol = fw.tolerances().colour_tol;
    let mut report = ColourReport {
        kappa: Vec::new(),
        classes: vec![Vec::new(); prod.n_factors()],
        degenerate: Vec::new(),
    };
    for &(u, v) in fw.graph().edges() {
        let colours = prod.colours(&fw.edge_vector(u, v), tol)?;
        if colours.len() == 1 {
            report.classes[colours[0]].push((u, v));
        } else {
            report.degenerate.push((u, v));
        }
        report.kappa.push(EdgeColour {
            edge: (u, v),
            colours,
        });
    }
    Ok(report)
}

/// Projected monochrome subframeworks `(G_j, P_j p)`, one per factor.
pub fn decompose(fw: &Framework) -> Result<Vec<Framework>> {
    let prod = product_of(fw)?;
    let colours = colour_edges(fw)?;
    if !colours.degenerate.is_empty() {
        return Err(Error::DegenerateEdges(colours.degenerate));
    }
    colours
        .classes
        .iter()
        .enumerate()
        .map(|(j, edges)| {
            let graph = Graph::new(fw.n_vertices(), edges.iter().copied())?;
            let placement = fw
                .placement()
                .iter()
                .map(|p| prod.project(p, j).to_vec())
                .collect();
            Framework::with_tolerances(
                graph,
                Space::vector(prod.factors()[j].1)?,
                placement,
                *fw.tolerances(),
            )
        })
        .collect()
}

/// Analysis of one projected monochrome subframework.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorReport {
    pub factor: usize,
    pub dim: usize,
    pub edges: Vec<(usize, usize)>,
    pub report: RigidityReport,
    /// Verdict of the connectivity rule for one-dimensional factors.
    pub connectivity_verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductAnalysis {
    /// Verdict assembled from the factors.
    pub verdict: Verdict,
    /// Direct analysis of the whole framework.
    pub whole: RigidityReport,
    pub factors: Vec<FactorReport>,
    pub colours: ColourReport,
    pub factor_flex_sum: Option<usize>,
    pub factor_trivial_sum: usize,
    pub nullity_additive: bool,
    pub trivial_additive: bool,
}

fn connectivity_verdict(graph: &Graph) -> Verdict {
    let all: Vec<usize> = (0..graph.n_vertices()).collect();
    if is_spanning_tree(graph.edges(), &all) {
        Verdict::MinimallyRigid
    } else if graph.is_connected() {
        Verdict::InfinitesimallyRigid
    } else {
        Verdict::Flexible
    }
}

/// Rigidity through the factors, cross-checked against the whole space.
///
/// A product framework is (minimally) rigid iff each projected monochrome
/// subframework is. Degenerate edges give a `NotWellPositioned` verdict
/// without factor reports.
pub fn product_analyze(fw: &Framework) -> Result<ProductAnalysis> {
    let colours = colour_edges(fw)?;
    let whole = analyze(fw)?;
    if !colours.degenerate.is_empty() {
        return Ok(ProductAnalysis {
            verdict: Verdict::NotWellPositioned,
            whole,
            factors: Vec::new(),
            colours,
            factor_flex_sum: None,
            factor_trivial_sum: 0,
            nullity_additive: false,
            trivial_additive: false,
        });
    }
    let parts = decompose(fw)?;
    let mut factors = Vec::with_capacity(parts.len());
    for (j, part) in parts.iter().enumerate() {
        let report = analyze(part)?;
        let connectivity_verdict = (part.dim() == 1).then(|| connectivity_verdict(part.graph()));
        factors.push(FactorReport {
            factor: j,
            dim: part.dim(),
            edges: part.graph().edges().to_vec(),
            report,
            connectivity_verdict,
        });
    }
    let factor_verdict = |f: &FactorReport| f.connectivity_verdict.unwrap_or(f.report.verdict);
    let verdict = if factors
        .iter()
        .any(|f| factor_verdict(f) == Verdict::NotWellPositioned)
    {
        Verdict::NotWellPositioned
    } else if factors
        .iter()
        .all(|f| factor_verdict(f) == Verdict::MinimallyRigid)
    {
        Verdict::MinimallyRigid
    } else if factors.iter().all(|f| factor_verdict(f).is_rigid()) {
        Verdict::InfinitesimallyRigid
    } else {
        Verdict::Flexible
    };
    let factor_flex_sum = factors
        .iter()
        .map(|f| f.report.flex_dim)
        .sum::<Option<usize>>();
    let factor_trivial_sum = factors.iter().map(|f| f.report.trivial_dim).sum();
    Ok(ProductAnalysis {
        verdict,
        nullity_additive: factor_flex_sum.is_some() && factor_flex_sum == whole.flex_dim,
        trivial_additive: factor_trivial_sum == whole.trivial_dim,
        whole,
        factors,
        colours,
        factor_flex_sum,
        factor_trivial_sum,
    })
}

fn h2(field: Field) -> Arc<MatrixSpaceChart> {
    Arc::new(make_chart(field, 2, Kind::Hermitian).expect("n = 2 is valid"))
}

/// `(x, y, z) -> 1/2 [[z + y, x], [x, z - y]]` in `H_2(R)`.
pub fn psi_cyl(v: [f64; 3]) -> MatrixElement {
    let [x, y, z] = v;
    MatrixElement::new(h2(Field::Real), vec![(z + y) / 2.0, (z - y) / 2.0, x / 2.0])
        .expect("three coordinates")
}

pub fn psi_cyl_inv(m: &MatrixElement) -> Result<[f64; 3]> {
    let c = m.coords();
    if m.chart().field() != Field::Real || m.chart().kind() != Kind::Hermitian || m.chart().n() != 2
    {
        return Err(Error::ShapeMismatch {
            expected: "element of H_2(R)".into(),
            found: m.chart().to_string(),
        });
    }
    Ok([2.0 * c[2], c[0] - c[1], c[0] + c[1]])
}

/// `(w, x, y, z) -> 1/2 [[z + y, x - w i], [x + w i, z - y]]` in `H_2(C)`.
pub fn psi_hcyl(v: [f64; 4]) -> MatrixElement {
    let [w, x, y, z] = v;
    MatrixElement::new(
        h2(Field::Complex),
        vec![(z + y) / 2.0, (z - y) / 2.0, x / 2.0, -w / 2.0],
    )
    .expect("four coordinates")
}

pub fn psi_hcyl_inv(m: &MatrixElement) -> Result<[f64; 4]> {
    let c = m.coords();
    if m.chart().field() != Field::Complex
        || m.chart().kind() != Kind::Hermitian
        || m.chart().n() != 2
    {
        return Err(Error::ShapeMismatch {
            expected: "element of H_2(C)".into(),
            found: m.chart().to_string(),
        });
    }
    Ok([-2.0 * c[3], 2.0 * c[2], c[0] - c[1], c[0] + c[1]])
}

/// Carry a cylindrical or hyper-cylindrical framework to the trace-norm matrix space.
pub fn transport_to_trace_norm(fw: &Framework) -> Result<Framework> {
    let (field, placement): (Field, Vec<Vec<f64>>) = match fw.space().norm() {
        NormSpec::Cylindrical => (
            Field::Real,
            fw.placement()
                .iter()
                .map(|p| psi_cyl([p[0], p[1], p[2]]).into_coords())
                .collect(),
        ),
        NormSpec::HyperCylindrical => (
            Field::Complex,
            fw.placement()
                .iter()
                .map(|p| psi_hcyl([p[0], p[1], p[2], p[3]]).into_coords())
                .collect(),
        ),
        _ => return Err(Error::NotProductSpace),
    };
    Framework::with_tolerances(
        fw.graph().clone(),
        Space::matrix(h2(field), NormSpec::trace())?,
        placement,
        *fw.tolerances(),
    )
}
