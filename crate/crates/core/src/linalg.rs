//! Dense linear algebra helpers.
//!
//! Complex matrices are stored as a pair of real arrays so that everything
//! downstream of the SVD is real-linear.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix};

pub type Complex64 = Complex<f64>;

/// An `n x n` matrix over R or C stored as (real part, imaginary part).
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            re: DMatrix::zeros(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            re: DMatrix::identity(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    pub fn from_real(re: DMatrix<f64>) -> Self {
        let im = DMatrix::zeros(re.nrows(), re.ncols());
        Self { re, im }
    }

    pub fn from_parts(re: DMatrix<f64>, im: DMatrix<f64>) -> Self {
        assert_eq!(
            re.shape(),
            im.shape(),
            "real and imaginary parts differ in shape"
        );
        Self { re, im }
    }

    /// Build from row-major real entries.
    pub fn real_from_rows(n: usize, rows: &[f64]) -> Self {
        Self::from_real(DMatrix::from_row_slice(n, n, rows))
    }

    /// The matrix unit `e_ij`, optionally multiplied by `i`.
    pub fn unit(n: usize, i: usize, j: usize, imaginary: bool) -> Self {
        let mut m = Self::zeros(n);
        if imaginary {
            m.im[(i, j)] = 1.0;
        } else {
            m.re[(i, j)] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.re.nrows()
    }

    pub fn is_square(&self) -> bool {
        self.re.nrows() == self.re.ncols()
    }

    pub fn is_real(&self) -> bool {
        self.im.iter().all(|&x| x == 0.0)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            re: self.re.transpose(),
            im: -self.im.transpose(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    /// Multiply by the imaginary unit.
    pub fn times_i(&self) -> Self {
        Self {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    /// The real trace pairing `Re tr(self* other)`.
    pub fn real_inner(&self, other: &Self) -> f64 {
        self.re.dot(&other.re) + self.im.dot(&other.im)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.real_inner(self).sqrt()
    }

    /// Largest absolute entrywise difference to `other` (real and imaginary parts separately).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let dr = (&self.re - &other.re).amax();
        let di = (&self.im - &other.im).amax();
        dr.max(di)
    }

    pub fn max_abs(&self) -> f64 {
        self.re.amax().max(self.im.amax())
    }

    /// Largest entrywise deviation from being hermitian.
    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.re.nrows(), self.re.ncols(), |i, j| {
            Complex64::new(self.re[(i, j)], self.im[(i, j)])
        })
    }

    pub fn from_complex(m: &DMatrix<Complex64>) -> Self {
        Self {
            re: m.map(|z| z.re),
            im: m.map(|z| z.im),
        }
    }

    pub fn trace_re(&self) -> f64 {
        self.re.trace()
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(-1.0)
    }
}

/// Singular value decomposition `a = u * diag(s) * v*` with `s` sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn new(a: &CMatrix) -> Self {
        let n = a.dim();
        let svd = a.to_complex().svd(true, true);
        let u = svd.u.expect("u requested");
        let v = svd.v_t.expect("v_t requested").adjoint();
        let sv: Vec<f64> = svd.singular_values.iter().copied().collect();

        let mut order: Vec<usize> = (0..sv.len()).collect();
        order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));

        let u_sorted = DMatrix::from_fn(n, order.len(), |r, c| u[(r, order[c])]);
        let v_sorted = DMatrix::from_fn(n, order.len(), |r, c| v[(r, order[c])]);
        Self {
            u: CMatrix::from_complex(&u_sorted),
            s: order.iter().map(|&i| sv[i]).collect(),
            v: CMatrix::from_complex(&v_sorted),
        }
    }

    /// `u * diag(f(s_i)) * v*`.
    pub fn recompose_with(&self, f: impl Fn(usize, f64) -> f64) -> CMatrix {
        let k = self.s.len();
        let mut d = CMatrix::zeros(k);
        for i in 0..k {
            d.re[(i, i)] = f(i, self.s[i]);
        }
        &(&self.u * &d) * &self.v.adjoint()
    }
}

/// Descending singular values of a square real or complex matrix.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = if a.is_real() {
        a.re.singular_values().iter().copied().collect()
    } else {
        a.to_complex().singular_values().iter().copied().collect()
    };
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Outcome of a thresholded rank computation.
#[derive(Debug, Clone, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    pub sigma_max: f64,
    pub threshold: f64,
    pub singular_values: Vec<f64>,
}

/// Rank of a real matrix: singular values `< rel_tol * sigma_max` count as zero.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> RankInfo {
    if m.nrows() == 0 || m.ncols() == 0 {
        return RankInfo {
            rank: 0,
            sigma_max: 0.0,
            threshold: 0.0,
            singular_values: Vec::new(),
        };
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    let sigma_max = s[0];
    let threshold = rel_tol * sigma_max;
    let rank = if sigma_max == 0.0 {
        0
    } else {
        s.iter().filter(|&&x| x >= threshold).count()
    };
    RankInfo {
        rank,
        sigma_max,
        threshold,
        singular_values: s,
    }
}

/// Stack vectors as the columns of a matrix.
pub fn columns_to_matrix(rows: usize, cols: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
