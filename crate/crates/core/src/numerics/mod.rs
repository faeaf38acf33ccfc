//! Dense complex linear algebra used by every other module: factorizations,
//! numerical rank, subspace bases, projectors, norms and subspace
//! comparison.
//!
//! All functions are pure; values may be shared freely across threads.

mod cmat;
mod subspace;
mod svd;

use nalgebra::LU;
use serde::{Deserialize, Serialize};

pub use cmat::CMat;
pub use num_complex::Complex64 as C64;
pub use subspace::{
    direct_sum_check, intersection_trivial, oblique_projectors, subspace_gap, subspaces_equal,
    SubspaceBasis,
};
pub use svd::{
    kernel_and_range, kernel_basis, numerical_rank, op_norm2, range_basis, rank_info,
    singular_values, svd, RankInfo, Svd,
};

use crate::error::{Error, Result};

/// Floor used when normalizing residuals by a norm that may vanish.
pub const NORM_FLOOR: f64 = f64::MIN_POSITIVE;

/// Numerical thresholds shared by every decision the library makes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Relative singular value cutoff factor.
    pub rank_rtol: f64,
    /// Bound on relative matrix-equation residuals.
    pub residual_tol: f64,
    /// Bound on the subspace gap for two subspaces to count as equal.
    pub gap_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rank_rtol: f64::EPSILON,
            residual_tol: 1e-9,
            gap_tol: 1e-8,
        }
    }
}

impl TolerancePolicy {
    /// Singular values at or below this are treated as zero.
    pub fn rank_cutoff(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        self.rank_rtol * sigma_max * rows.max(cols) as f64
    }
}

/// `num / max(den, NORM_FLOOR)`.
pub fn relative(num: f64, den: f64) -> f64 {
    num / den.max(NORM_FLOOR)
}

/// Spectral condition number `σ_max / σ_min` of a square matrix.
pub fn condition_number(a: &CMat) -> Result<f64> {
    let s = singular_values(a)?;
    let smin = *s.last().unwrap_or(&0.0);
    Ok(if smin == 0.0 { f64::INFINITY } else { s[0] / smin })
}

/// Solves `A X = B` for square, numerically invertible `A`.
pub fn solve(a: &CMat, b: &CMat, tol: &TolerancePolicy) -> Result<CMat> {
    let (m, n) = a.shape();
    if m != n {
        return Err(Error::NotSquare { rows: m, cols: n });
    }
    if b.rows() != n {
        return Err(Error::ShapeMismatch {
            context: "right-hand side",
            expected: (n, b.cols()),
            found: b.shape(),
        });
    }
    if n == 0 {
        return Ok(CMat::zeros(0, b.cols()));
    }
    let info = rank_info(a, tol)?;
    if info.rank < n {
        let s = singular_values(a)?;
        let smin = *s.last().unwrap();
        let condition = if smin == 0.0 { f64::INFINITY } else { s[0] / smin };
        return Err(Error::SingularSystem { condition });
    }
    let mut x = b.0.clone();
    if !LU::new(a.0.clone()).solve_mut(&mut x) {
        return Err(Error::SingularSystem { condition: f64::INFINITY });
    }
    CMat::from_matrix(x)
}
