//! The normed space a framework lives in: a matrix chart with a unitarily
//! invariant norm, or `R^d` with a vector norm. Points are always handled as
//! real coordinate vectors (chart coordinates for matrix spaces).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::matspace::{motion_param_space, Kind, MatrixSpaceChart};
use crate::norms::{self, NormArg, NormSpec, Representer, Smoothness, SupportFunctional};
use crate::product::ProductNormSpace;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    Matrix {
        chart: Arc<MatrixSpaceChart>,
        norm: NormSpec,
    },
    Vector {
        norm: NormSpec,
    },
}

impl Space {
    pub fn matrix(chart: Arc<MatrixSpaceChart>, norm: NormSpec) -> Result<Self> {
        if !norm.is_matrix_norm() {
            return Err(Error::UnsupportedNorm {
                norm: norm.to_string(),
                space: chart.to_string(),
            });
        }
        norm.validate_for_matrix(chart.n())?;
        Ok(Space::Matrix { chart, norm })
    }

    pub fn vector(norm: NormSpec) -> Result<Self> {
        match norm.vector_dim() {
            Some(d) if d > 0 => Ok(Space::Vector { norm }),
            _ => Err(Error::UnsupportedNorm {
                norm: norm.to_string(),
                space: "R^d".into(),
            }),
        }
    }

    pub fn norm(&self) -> NormSpec {
        match self {
            Space::Matrix { norm, .. } | Space::Vector { norm } => *norm,
        }
    }

    pub fn chart(&self) -> Option<&Arc<MatrixSpaceChart>> {
        match self {
            Space::Matrix { chart, .. } => Some(chart),
            Space::Vector { .. } => None,
        }
    }

    pub fn product(&self) -> Option<ProductNormSpace> {
        match self {
            Space::Vector { norm } => norm.product_space(),
            Space::Matrix { .. } => None,
        }
    }

    /// Real dimension `k(X)`.
    pub fn dim(&self) -> usize {
        match self {
            Space::Matrix { chart, .. } => chart.realdim(),
            Space::Vector { norm } => norm.vector_dim().unwrap_or(0),
        }
    }

    /// Dimension `l(X)` of the space of infinitesimal rigid motions.
    pub fn motion_dim(&self) -> Result<usize> {
        match self {
            Space::Matrix { chart, .. } => {
                self.check_admissible()?;
                Ok(chart.motion_dim())
            }
            Space::Vector { norm } => Ok(match *norm {
                NormSpec::EuclideanVec(d) => d * (d + 1) / 2,
                NormSpec::AbsVal => 1,
                _ => self.product().expect("product norm").motion_dim(),
            }),
        }
    }

    fn check_admissible(&self) -> Result<()> {
        if let Space::Matrix { chart, norm } = self {
            if !norm.admissible_for_motions(chart) {
                return Err(Error::NotAdmissible {
                    norm: norm.to_string(),
                    space: chart.to_string(),
                });
            }
        }
        Ok(())
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} coordinates", self.dim()),
                found: x.len().to_string(),
            });
        }
        Ok(())
    }

    /// Run `f` on the norm argument for the point with coordinates `x`.
    fn with_arg<T>(&self, x: &[f64], f: impl FnOnce(NormArg) -> Result<T>) -> Result<T> {
        self.check_len(x)?;
        match self {
            Space::Matrix { chart, .. } => {
                let m = chart.from_coords(x)?;
                f(NormArg::Matrix(&m))
            }
            Space::Vector { .. } => f(NormArg::Vector(x)),
        }
    }

    pub fn norm_of(&self, x: &[f64]) -> Result<f64> {
        let spec = self.norm();
        self.with_arg(x, |a| norms::norm_value(&spec, a))
    }

    pub fn smoothness(&self, x: &[f64], tol: &ToleranceConfig) -> Result<Smoothness> {
        let spec = self.norm();
        self.with_arg(x, |a| norms::is_smooth_at(&spec, a, tol))
    }

    pub fn support_functional(
        &self,
        x: &[f64],
        tol: &ToleranceConfig,
    ) -> Result<SupportFunctional> {
        let spec = self.norm();
        self.with_arg(x, |a| norms::support_functional(&spec, a, tol))
    }

    /// Values of the support functional at `x` on the coordinate basis.
    pub fn functional_row(&self, x: &[f64], tol: &ToleranceConfig) -> Result<Vec<f64>> {
        let sf = self.support_functional(x, tol)?;
        Ok(self.functional_on_basis(&sf))
    }

    pub fn functional_on_basis(&self, sf: &SupportFunctional) -> Vec<f64> {
        match (&sf.rep, self) {
            (Representer::Matrix(r), Space::Matrix { chart, .. }) => {
                chart.basis().iter().map(|b| r.real_inner(b)).collect()
            }
            (Representer::Vector(r), Space::Vector { .. }) => r.clone(),
            _ => unreachable!("functional built by this space"),
        }
    }

    /// The infinitesimal rigid motions evaluated at one point, one vector per generator.
    ///
    /// The list has `motion_dim()` entries; stacking them over a placement
    /// gives the trivial flexes.
    pub fn motion_generators_at(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_len(x)?;
        match self {
            Space::Matrix { chart, .. } => {
                self.check_admissible()?;
                let p = chart.from_coords(x)?;
                let params = motion_param_space(chart);
                let mut out = Vec::with_capacity(params.total_dim);
                let coords = |m: &CMatrix| {
                    chart
                        .to_coords(m, f64::INFINITY)
                        .expect("square matrix of chart size")
                };
                for a in &params.a_basis {
                    let m = match chart.kind() {
                        Kind::Full => a * &p,
                        Kind::Hermitian => &(a * &p) - &(&p * a),
                    };
                    out.push(coords(&m));
                }
                for b in &params.b_basis {
                    out.push(coords(&(&p * b)));
                }
                for c in &params.c_basis {
                    out.push(coords(c));
                }
                Ok(out)
            }
            Space::Vector { norm } => Ok(match *norm {
                NormSpec::EuclideanVec(d) => euclidean_generators(x, d),
                NormSpec::AbsVal => vec![vec![1.0]],
                _ => self
                    .product()
                    .expect("product norm")
                    .motion_generators_at(x),
            }),
        }
    }
}

/// Rotations `e_ij - e_ji` (`i < j`) applied to `x`, then the `d` translations.
pub(crate) fn euclidean_generators(x: &[f64], d: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            let mut z = vec![0.0; d];
            z[i] = x[j];
            z[j] = -x[i];
            out.push(z);
        }
    }
    for i in 0..d {
        let mut z = vec![0.0; d];
        z[i] = 1.0;
        out.push(z);
    }
    out
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Matrix { chart, norm } => write!(f, "{chart} with {norm}"),
            Space::Vector { norm } => write!(f, "R^{} with {norm}", self.dim()),
        }
    }
}
