//! Unitarily invariant matrix norms, the vector norms used by product spaces,
//! smoothness tests and closed-form support functionals.
//!
//! A support functional is always represented through the real trace pairing:
//! for matrix norms `phi(x) = Re tr(rep* x)`, for vector norms
//! `phi(x) = <rep, x>`. A rigidity-matrix row is then just `phi` applied to
//! the chart basis.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{euclidean_norm, CMatrix, Svd};
use crate::matspace::{Field, Kind, MatrixSpaceChart};
use crate::product::ProductNormSpace;
use crate::tolerance::ToleranceConfig;

pub use crate::linalg::singular_values;

/// Which norm governs distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    /// Schatten `q`-norm, `q` in `[1, inf]` (use `f64::INFINITY` for the spectral norm).
    Schatten(f64),
    /// Ky-Fan `k`-norm: sum of the `k` largest singular values.
    KyFan(usize),
    /// `max(sqrt(x^2 + y^2), |z|)` on `R^3`.
    Cylindrical,
    /// `max(sqrt(w^2 + x^2 + y^2), |z|)` on `R^4`.
    HyperCylindrical,
    EuclideanVec(usize),
    SupVec(usize),
    AbsVal,
}

impl NormSpec {
    pub fn trace() -> Self {
        NormSpec::Schatten(1.0)
    }

    pub fn spectral() -> Self {
        NormSpec::Schatten(f64::INFINITY)
    }

    pub fn is_matrix_norm(&self) -> bool {
        matches!(self, NormSpec::Schatten(_) | NormSpec::KyFan(_))
    }

    /// Dimension of the vector space a vector norm lives on.
    pub fn vector_dim(&self) -> Option<usize> {
        match *self {
            NormSpec::Cylindrical => Some(3),
            NormSpec::HyperCylindrical => Some(4),
            NormSpec::EuclideanVec(d) | NormSpec::SupVec(d) => Some(d),
            NormSpec::AbsVal => Some(1),
            NormSpec::Schatten(_) | NormSpec::KyFan(_) => None,
        }
    }

    /// The product structure behind cylindrical, hyper-cylindrical and sup norms.
    pub fn product_space(&self) -> Option<ProductNormSpace> {
        match *self {
            NormSpec::Cylindrical => Some(ProductNormSpace::cylindrical()),
            NormSpec::HyperCylindrical => Some(ProductNormSpace::hyper_cylindrical()),
            NormSpec::SupVec(d) => Some(ProductNormSpace::sup(d)),
            _ => None,
        }
    }

    /// Check parameters against the matrix size `n`.
    pub fn validate_for_matrix(&self, n: usize) -> Result<()> {
        match *self {
            NormSpec::Schatten(q) if q >= 1.0 && !q.is_nan() => Ok(()),
            NormSpec::KyFan(k) if (1..=n).contains(&k) => Ok(()),
            _ => Err(Error::UnsupportedNorm {
                norm: self.to_string(),
                space: format!("{n}x{n} matrices"),
            }),
        }
    }

    /// Whether the trivial motions of `(chart, self)` are the skew-hermitian family.
    ///
    /// Frobenius is excluded, as is the Ky-Fan 2-norm at `n = 4` on every
    /// space except `M_4(C)`.
    pub fn admissible_for_motions(&self, chart: &MatrixSpaceChart) -> bool {
        match *self {
            NormSpec::Schatten(q) => q != 2.0 && q >= 1.0,
            NormSpec::KyFan(k) => {
                let exception = chart.n() == 4
                    && k == 2
                    && !(chart.field() == Field::Complex && chart.kind() == Kind::Full);
                (1..=chart.n()).contains(&k) && !exception
            }
            _ => false,
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormSpec::Schatten(q) if q.is_infinite() => write!(f, "schatten(inf)"),
            NormSpec::Schatten(q) => write!(f, "schatten({q})"),
            NormSpec::KyFan(k) => write!(f, "kyfan({k})"),
            NormSpec::Cylindrical => write!(f, "cylindrical"),
            NormSpec::HyperCylindrical => write!(f, "hypercylindrical"),
            NormSpec::EuclideanVec(d) => write!(f, "euclidean({d})"),
            NormSpec::SupVec(d) => write!(f, "sup({d})"),
            NormSpec::AbsVal => write!(f, "absval"),
        }
    }
}

/// Argument of a norm: a square matrix or a real vector.
#[derive(Debug, Clone, Copy)]
pub enum NormArg<'a> {
    Matrix(&'a CMatrix),
    Vector(&'a [f64]),
}

fn shape_error(spec: &NormSpec, arg: &NormArg) -> Error {
    let found = match arg {
        NormArg::Matrix(m) => format!("{}x{} matrix", m.re.nrows(), m.re.ncols()),
        NormArg::Vector(v) => format!("vector of length {}", v.len()),
    };
    Error::ShapeMismatch {
        expected: format!("argument for {spec}"),
        found,
    }
}

fn lq(values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        values.iter().fold(0.0, |a, &x| a.max(x.abs()))
    } else if q == 1.0 {
        values.iter().map(|x| x.abs()).sum()
    } else {
        values
            .iter()
            .map(|x| x.abs().powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }
}

/// Value of the norm.
pub fn norm_value(spec: &NormSpec, arg: NormArg) -> Result<f64> {
    match (spec, arg) {
        (NormSpec::Schatten(_) | NormSpec::KyFan(_), NormArg::Matrix(m)) => {
            if !m.is_square() {
                return Err(shape_error(spec, &arg));
            }
            spec.validate_for_matrix(m.dim())?;
            let s = singular_values(m);
            Ok(match *spec {
                NormSpec::Schatten(q) => lq(&s, q),
                NormSpec::KyFan(k) => s[..k].iter().sum(),
                _ => unreachable!(),
            })
        }
        (_, NormArg::Vector(v)) if spec.vector_dim() == Some(v.len()) => Ok(match *spec {
            NormSpec::EuclideanVec(_) => euclidean_norm(v),
            NormSpec::AbsVal => v[0].abs(),
            _ => spec
                .product_space()
                .expect("remaining vector norms are products")
                .norm(v),
        }),
        _ => Err(shape_error(spec, &arg)),
    }
}

/// Smoothness verdict with the gap that was tested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothness {
    pub smooth: bool,
    pub gap: f64,
    pub threshold: f64,
}

/// Decide whether the norm is smooth at a nonzero point.
pub fn is_smooth_at(spec: &NormSpec, arg: NormArg, tol: &ToleranceConfig) -> Result<Smoothness> {
    let value = norm_value(spec, arg)?;
    if value == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    match (spec, arg) {
        (NormSpec::Schatten(q), NormArg::Matrix(m)) => {
            let s = singular_values(m);
            let n = s.len();
            let threshold = tol.gap_tol * s[0];
            let gap = if *q == 1.0 {
                s[n - 1]
            } else if q.is_infinite() {
                s[0] - s[1]
            } else {
                return Ok(Smoothness {
                    smooth: true,
                    gap: s[0],
                    threshold: 0.0,
                });
            };
            Ok(Smoothness {
                smooth: gap > threshold,
                gap,
                threshold,
            })
        }
        (NormSpec::KyFan(k), NormArg::Matrix(m)) => {
            let s = singular_values(m);
            let next = s.get(*k).copied().unwrap_or(0.0);
            let gap = s[k - 1] - next;
            let threshold = tol.gap_tol * s[0];
            Ok(Smoothness {
                smooth: gap > threshold,
                gap,
                threshold,
            })
        }
        (NormSpec::EuclideanVec(_) | NormSpec::AbsVal, NormArg::Vector(_)) => Ok(Smoothness {
            smooth: true,
            gap: value,
            threshold: 0.0,
        }),
        (_, NormArg::Vector(v)) => {
            let prod = spec.product_space().expect("product norm");
            let mut f = prod.factor_norms(v);
            f.sort_by(|a, b| b.total_cmp(a));
            let gap = f[0] - f.get(1).copied().unwrap_or(0.0);
            Ok(Smoothness {
                smooth: gap > tol.colour_tol,
                gap,
                threshold: tol.colour_tol,
            })
        }
        _ => Err(shape_error(spec, &arg)),
    }
}

/// Representing element of a support functional.
#[derive(Debug, Clone, PartialEq)]
pub enum Representer {
    /// `phi(x) = Re tr(rep* x)`.
    Matrix(CMatrix),
    /// `phi(x) = <rep, x>`.
    Vector(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunctional {
    pub rep: Representer,
    pub source_edge: Option<(usize, usize)>,
}

impl SupportFunctional {
    pub fn rep_matrix(&self) -> Option<&CMatrix> {
        match &self.rep {
            Representer::Matrix(m) => Some(m),
            Representer::Vector(_) => None,
        }
    }

    pub fn rep_vector(&self) -> Option<&[f64]> {
        match &self.rep {
            Representer::Vector(v) => Some(v),
            Representer::Matrix(_) => None,
        }
    }

    pub fn eval(&self, arg: NormArg) -> Result<f64> {
        match (&self.rep, arg) {
            (Representer::Matrix(r), NormArg::Matrix(x)) if r.re.shape() == x.re.shape() => {
                Ok(r.real_inner(x))
            }
            (Representer::Vector(r), NormArg::Vector(x)) if r.len() == x.len() => {
                Ok(r.iter().zip(x).map(|(a, b)| a * b).sum())
            }
            _ => Err(Error::ShapeMismatch {
                expected: "argument matching the functional".into(),
                found: "other shape".into(),
            }),
        }
    }

    pub fn with_edge(mut self, v: usize, w: usize) -> Self {
        self.source_edge = Some((v, w));
        self
    }
}

/// The unique support functional at `x / ||x||`; errors at non-smooth points.
pub fn support_functional(
    spec: &NormSpec,
    arg: NormArg,
    tol: &ToleranceConfig,
) -> Result<SupportFunctional> {
    let smooth = is_smooth_at(spec, arg, tol)?;
    if !smooth.smooth {
        return Err(Error::NonSmooth {
            gap: smooth.gap,
            threshold: smooth.threshold,
        });
    }
    let value = norm_value(spec, arg)?;
    let rep = match (spec, arg) {
        (NormSpec::Schatten(q), NormArg::Matrix(m)) => {
            let p0 = m.scale(1.0 / value);
            let svd = Svd::new(&p0);
            if q.is_infinite() {
                Representer::Matrix(svd.recompose_with(|i, _| if i == 0 { 1.0 } else { 0.0 }))
            } else if *q == 1.0 {
                Representer::Matrix(svd.recompose_with(|_, _| 1.0))
            } else {
                Representer::Matrix(svd.recompose_with(|_, s| s.powf(q - 1.0)))
            }
        }
        (NormSpec::KyFan(k), NormArg::Matrix(m)) => {
            let svd = Svd::new(&m.scale(1.0 / value));
            Representer::Matrix(svd.recompose_with(|i, _| if i < *k { 1.0 } else { 0.0 }))
        }
        (NormSpec::EuclideanVec(_), NormArg::Vector(v)) => {
            Representer::Vector(v.iter().map(|x| x / value).collect())
        }
        (NormSpec::AbsVal, NormArg::Vector(v)) => Representer::Vector(vec![v[0].signum()]),
        (_, NormArg::Vector(v)) => {
            let prod = spec.product_space().expect("product norm");
            Representer::Vector(prod.support_functional_rep(v, tol.colour_tol)?)
        }
        _ => return Err(shape_error(spec, &arg)),
    };
    Ok(SupportFunctional {
        rep,
        source_edge: None,
    })
}

/// Operator norm of a functional with respect to `spec` (the dual norm of its representer).
pub fn dual_norm(spec: &NormSpec, sf: &SupportFunctional) -> Result<f64> {
    match (spec, &sf.rep) {
        (NormSpec::Schatten(q), Representer::Matrix(r)) => {
            let s = singular_values(r);
            let dual = if q.is_infinite() {
                1.0
            } else if *q == 1.0 {
                f64::INFINITY
            } else {
                q / (q - 1.0)
            };
            Ok(lq(&s, dual))
        }
        (NormSpec::KyFan(k), Representer::Matrix(r)) => {
            let s = singular_values(r);
            Ok(s[0].max(s.iter().sum::<f64>() / *k as f64))
        }
        (NormSpec::EuclideanVec(_), Representer::Vector(r)) => Ok(euclidean_norm(r)),
        (NormSpec::AbsVal, Representer::Vector(r)) => Ok(r[0].abs()),
        (_, Representer::Vector(r)) => {
            let prod = spec.product_space().ok_or(Error::NotProductSpace)?;
            Ok(prod.dual_norm(r))
        }
        _ => Err(Error::ShapeMismatch {
            expected: format!("functional for {spec}"),
            found: "other representer".into(),
        }),
    }
}
