use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use super::C64;
use crate::error::{Error, Result};

/// Dense complex matrix with finite entries.
///
/// Every operator in the library (`T`, `S`, `T⁺`, `G(λ)`, projectors) is a
/// `CMat`. Matrices with a zero dimension are allowed internally so that
/// subspace bases of `{0}` can be represented; operator inputs reject them.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat(pub(crate) DMatrix<C64>);

impl CMat {
    /// Wraps a matrix after checking that every entry is finite.
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(CMat(m))
    }

    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                context: "row-major entries",
                expected: (rows, cols),
                found: (entries.len(), 1),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Builds a real matrix from nested rows. Panics on ragged or non-finite
    /// input; intended for literals in code and tests.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut out = DMatrix::zeros(m, n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), n, "ragged row {i}");
            for (j, &x) in row.iter().enumerate() {
                out[(i, j)] = C64::new(x, 0.0);
            }
        }
        Self::from_matrix(out).expect("literal matrix must be finite")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        CMat(DMatrix::identity(n, n))
    }

    /// Square diagonal matrix with real entries.
    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut out = DMatrix::zeros(n, n);
        for (i, &x) in d.iter().enumerate() {
            out[(i, i)] = C64::new(x, 0.0);
        }
        Self::from_matrix(out).expect("diagonal must be finite")
    }

    /// Rectangular `rows × cols` matrix with `d` on the main diagonal.
    pub fn rect_diag(rows: usize, cols: usize, d: &[C64]) -> Self {
        assert!(d.len() <= rows.min(cols), "diagonal longer than min(rows, cols)");
        let mut out = DMatrix::zeros(rows, cols);
        for (i, &x) in d.iter().enumerate() {
            out[(i, i)] = x;
        }
        Self::from_matrix(out).expect("diagonal must be finite")
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat(self.0.adjoint())
    }

    pub fn scale(&self, z: C64) -> CMat {
        CMat(&self.0 * z)
    }

    /// Entrywise maximum modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> CMat {
        CMat(self.0.columns(start, end - start).into_owned())
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> CMat {
        CMat(self.0.rows(start, end - start).into_owned())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &CMat) -> CMat {
        assert_eq!(self.rows(), other.rows(), "hstack row mismatch");
        let (m, a, b) = (self.rows(), self.cols(), other.cols());
        let mut out = DMatrix::zeros(m, a + b);
        out.columns_mut(0, a).copy_from(&self.0);
        out.columns_mut(a, b).copy_from(&other.0);
        CMat(out)
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&CMat> for &CMat {
            type Output = CMat;
            fn $method(self, rhs: &CMat) -> CMat {
                CMat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<CMat> for CMat {
            type Output = CMat;
            fn $method(self, rhs: CMat) -> CMat {
                CMat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&CMat> for CMat {
            type Output = CMat;
            fn $method(self, rhs: &CMat) -> CMat {
                CMat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<CMat> for &CMat {
            type Output = CMat;
            fn $method(self, rhs: CMat) -> CMat {
                CMat((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl fmt::Display for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        CMat(-&self.0)
    }
}

impl Neg for CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        CMat(-self.0)
    }
}
