//! Real-linear charts for the matrix spaces `M_n(F)` and `H_n(F)`.
//!
//! Every chart carries a fixed, ordered real basis. Coordinates and the
//! columns of rigidity matrices follow that order:
//!
//! * `M_n(R)`: `e_ij` in row-major order.
//! * `M_n(C)`: `e_ij` in row-major order, then `i e_ij` in row-major order.
//! * `H_n(R)`: `e_ii`, then `e_ij + e_ji` for `i < j` (lexicographic).
//! * `H_n(C)`: `e_ii`, then `e_ij + e_ji`, then `i (e_ij - e_ji)`, both for `i < j`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// All `n x n` matrices.
    Full,
    /// Hermitian (real symmetric when the field is real) matrices.
    Hermitian,
}

/// A matrix space together with its canonical ordered real basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSpaceChart {
    field: Field,
    n: usize,
    kind: Kind,
    basis: Vec<CMatrix>,
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Build the chart for `(field, n, kind)` with its canonical basis.
pub fn make_chart(field: Field, n: usize, kind: Kind) -> Result<MatrixSpaceChart> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let mut basis = Vec::new();
    match kind {
        Kind::Full => {
            for i in 0..n {
                for j in 0..n {
                    basis.push(CMatrix::unit(n, i, j, false));
                }
            }
            if field == Field::Complex {
                for i in 0..n {
                    for j in 0..n {
                        basis.push(CMatrix::unit(n, i, j, true));
                    }
                }
            }
        }
        Kind::Hermitian => {
            for i in 0..n {
                basis.push(CMatrix::unit(n, i, i, false));
            }
            for (i, j) in upper_pairs(n) {
                let mut m = CMatrix::zeros(n);
                m.re[(i, j)] = 1.0;
                m.re[(j, i)] = 1.0;
                basis.push(m);
            }
            if field == Field::Complex {
                for (i, j) in upper_pairs(n) {
                    let mut m = CMatrix::zeros(n);
                    m.im[(i, j)] = 1.0;
                    m.im[(j, i)] = -1.0;
                    basis.push(m);
                }
            }
        }
    }
    Ok(MatrixSpaceChart {
        field,
        n,
        kind,
        basis,
    })
}

impl MatrixSpaceChart {
    pub fn new(field: Field, n: usize, kind: Kind) -> Result<Self> {
        make_chart(field, n, kind)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// Real dimension `k(X)`.
    pub fn realdim(&self) -> usize {
        self.basis.len()
    }

    /// `l(X)`, the dimension of the infinitesimal rigid motions under an admissible norm.
    pub fn motion_dim(&self) -> usize {
        let n = self.n;
        match (self.field, self.kind) {
            (Field::Real, Kind::Hermitian) => n * n,
            (Field::Real, Kind::Full) => 2 * n * n - n,
            (Field::Complex, Kind::Hermitian) => 2 * n * n - 1,
            (Field::Complex, Kind::Full) => 4 * n * n - 1,
        }
    }

    /// Entrywise distance from the space (0 for members).
    pub fn membership_defect(&self, m: &CMatrix) -> f64 {
        let mut defect = 0.0f64;
        if self.field == Field::Real {
            defect = defect.max(m.im.amax());
        }
        if self.kind == Kind::Hermitian {
            defect = defect.max(m.hermitian_defect());
        }
        defect
    }

    pub fn contains(&self, m: &CMatrix, tol: f64) -> bool {
        m.dim() == self.n && m.is_square() && self.membership_defect(m) <= tol
    }

    /// `sum_i coords[i] * basis[i]`.
    pub fn from_coords(&self, coords: &[f64]) -> Result<CMatrix> {
        if coords.len() != self.realdim() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} coordinates", self.realdim()),
                found: format!("{}", coords.len()),
            });
        }
        let mut m = CMatrix::zeros(self.n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0.0 {
                m.re += &b.re * *c;
                m.im += &b.im * *c;
            }
        }
        Ok(m)
    }

    /// Coordinates of `m` in the canonical basis; fails if `m` is not in the space.
    pub fn to_coords(&self, m: &CMatrix, tol: f64) -> Result<Vec<f64>> {
        if !m.is_square() || m.dim() != self.n {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0} matrix", self.n),
                found: format!("{}x{}", m.re.nrows(), m.re.ncols()),
            });
        }
        let deviation = self.membership_defect(m);
        if deviation > tol {
            return Err(Error::NotInSpace { deviation });
        }
        let n = self.n;
        let mut coords = Vec::with_capacity(self.realdim());
        match self.kind {
            Kind::Full => {
                coords.extend(
                    (0..n)
                        .flat_map(|i| (0..n).map(move |j| (i, j)))
                        .map(|ij| m.re[ij]),
                );
                if self.field == Field::Complex {
                    coords.extend(
                        (0..n)
                            .flat_map(|i| (0..n).map(move |j| (i, j)))
                            .map(|ij| m.im[ij]),
                    );
                }
            }
            Kind::Hermitian => {
                coords.extend((0..n).map(|i| m.re[(i, i)]));
                coords.extend(upper_pairs(n).map(|ij| m.re[ij]));
                if self.field == Field::Complex {
                    coords.extend(upper_pairs(n).map(|ij| m.im[ij]));
                }
            }
        }
        Ok(coords)
    }

    /// Gram matrix of the basis under `Re tr(a* b)`.
    pub fn gram(&self) -> nalgebra::DMatrix<f64> {
        let k = self.realdim();
        nalgebra::DMatrix::from_fn(k, k, |i, j| self.basis[i].real_inner(&self.basis[j]))
    }

    pub fn element(self: &Arc<Self>, coords: Vec<f64>) -> Result<MatrixElement> {
        MatrixElement::new(Arc::clone(self), coords)
    }
}

impl fmt::Display for MatrixSpaceChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::Full => "M",
            Kind::Hermitian => "H",
        };
        let fld = match self.field {
            Field::Real => "R",
            Field::Complex => "C",
        };
        write!(f, "{k}_{}({fld})", self.n)
    }
}

/// A point of a chart, held as coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElement {
    chart: Arc<MatrixSpaceChart>,
    coords: Vec<f64>,
}

impl MatrixElement {
    pub fn new(chart: Arc<MatrixSpaceChart>, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != chart.realdim() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} coordinates", chart.realdim()),
                found: format!("{}", coords.len()),
            });
        }
        Ok(Self { chart, coords })
    }

    pub fn from_matrix(chart: Arc<MatrixSpaceChart>, m: &CMatrix, tol: f64) -> Result<Self> {
        let coords = chart.to_coords(m, tol)?;
        Ok(Self { chart, coords })
    }

    pub fn chart(&self) -> &MatrixSpaceChart {
        &self.chart
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn to_matrix(&self) -> CMatrix {
        self.chart
            .from_coords(&self.coords)
            .expect("coordinate length checked at construction")
    }
}

/// Skew-hermitian basis; with `zero_corner` the `(1,1)` entry is forced to vanish.
pub fn skew_basis(field: Field, n: usize, zero_corner: bool) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for (i, j) in upper_pairs(n) {
        let mut m = CMatrix::zeros(n);
        m.re[(i, j)] = 1.0;
        m.re[(j, i)] = -1.0;
        out.push(m);
    }
    if field == Field::Complex {
        for (i, j) in upper_pairs(n) {
            let mut m = CMatrix::zeros(n);
            m.im[(i, j)] = 1.0;
            m.im[(j, i)] = 1.0;
            out.push(m);
        }
        let start = usize::from(zero_corner);
        for i in start..n {
            out.push(CMatrix::unit(n, i, i, true));
        }
    }
    out
}

/// Parameters `(a, b, c)` of the infinitesimal rigid motions `x -> a x + x b + c`.
///
/// For the hermitian kind the motions are `x -> a x - x a + c` and `b_basis` is empty.
#[derive(Debug, Clone)]
pub struct MotionParamSpace {
    pub a_basis: Vec<CMatrix>,
    pub b_basis: Vec<CMatrix>,
    pub c_basis: Vec<CMatrix>,
    pub total_dim: usize,
}

pub fn motion_param_space(chart: &MatrixSpaceChart) -> MotionParamSpace {
    let (a_basis, b_basis) = match chart.kind {
        Kind::Full => (
            skew_basis(chart.field, chart.n, false),
            skew_basis(chart.field, chart.n, true),
        ),
        Kind::Hermitian => (skew_basis(chart.field, chart.n, true), Vec::new()),
    };
    let c_basis = chart.basis.clone();
    let total_dim = a_basis.len() + b_basis.len() + c_basis.len();
    MotionParamSpace {
        a_basis,
        b_basis,
        c_basis,
        total_dim,
    }
}
