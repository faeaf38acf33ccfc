use nalgebra::DMatrix;

use super::{CMat, SubspaceBasis, TolerancePolicy, C64};
use crate::error::{Error, Result};

/// Full singular value decomposition `A = U · diag(σ) · Vᴴ`.
///
/// `u` is `m × m`, `v` is `n × n` and `sigma` holds the `min(m, n)`
/// singular values in descending order.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above the policy cutoff.
    pub fn rank(&self, tol: &TolerancePolicy) -> usize {
        let cutoff = tol.rank_cutoff(self.sigma_max(), self.u.rows(), self.v.rows());
        self.sigma.iter().take_while(|&&s| s > cutoff).count()
    }
}

fn to_faer(a: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.rows(), a.cols(), |i, j| a.0[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMat {
    CMat(DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]))
}

fn check_nonempty(a: &CMat) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    Ok(())
}

pub fn svd(a: &CMat) -> Result<Svd> {
    check_nonempty(a)?;
    let (m, n) = a.shape();
    let dec = to_faer(a).svd().map_err(|_| Error::Factorization { rows: m, cols: n })?;
    let sigma: Vec<f64> = dec.S().column_vector().iter().map(|s| s.re.max(0.0)).collect();
    debug_assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
    Ok(Svd { u: from_faer(dec.U()), sigma, v: from_faer(dec.V()) })
}

/// Singular values only, descending. Empty input yields an empty list.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let (m, n) = a.shape();
    let mut sigma = to_faer(a)
        .singular_values()
        .map_err(|_| Error::Factorization { rows: m, cols: n })?;
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}

/// Spectral norm (largest singular value); `0` for empty or zero matrices.
pub fn op_norm2(a: &CMat) -> f64 {
    if a.is_empty() || a.max_abs() == 0.0 {
        return 0.0;
    }
    match singular_values(a) {
        Ok(s) => s[0],
        // non-convergence is not expected on finite input; fall back to the
        // Frobenius norm, which bounds the spectral norm from above
        Err(_) => a.frobenius(),
    }
}

/// Rank decision with the data needed to judge how close it was.
#[derive(Clone, Debug, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    pub cutoff: f64,
    pub smallest_retained: Option<f64>,
    pub largest_dropped: Option<f64>,
}

impl RankInfo {
    /// The decision sits within a factor 10 of the cutoff.
    pub fn marginal(&self) -> bool {
        self.smallest_retained.is_some_and(|s| s <= 10.0 * self.cutoff)
    }

    fn from_sigma(sigma: &[f64], rows: usize, cols: usize, tol: &TolerancePolicy) -> Self {
        let smax = sigma.first().copied().unwrap_or(0.0);
        let cutoff = tol.rank_cutoff(smax, rows, cols);
        let rank = sigma.iter().take_while(|&&s| s > cutoff).count();
        RankInfo {
            rank,
            cutoff,
            smallest_retained: rank.checked_sub(1).map(|i| sigma[i]),
            largest_dropped: sigma.get(rank).copied(),
        }
    }
}

pub fn rank_info(a: &CMat, tol: &TolerancePolicy) -> Result<RankInfo> {
    let sigma = singular_values(a)?;
    Ok(RankInfo::from_sigma(&sigma, a.rows(), a.cols(), tol))
}

/// Count of singular values above `rank_rtol · σ_max · max(m, n)`.
pub fn numerical_rank(a: &CMat, tol: &TolerancePolicy) -> Result<usize> {
    Ok(rank_info(a, tol)?.rank)
}

/// Orthonormal basis of `N(A)` from the trailing right singular vectors.
pub fn kernel_basis(a: &CMat, tol: &TolerancePolicy) -> Result<SubspaceBasis> {
    let dec = svd(a)?;
    let r = dec.rank(tol);
    Ok(SubspaceBasis::from_orthonormal(dec.v.columns(r, a.cols())))
}

/// Orthonormal basis of `R(A)` from the leading left singular vectors.
pub fn range_basis(a: &CMat, tol: &TolerancePolicy) -> Result<SubspaceBasis> {
    let dec = svd(a)?;
    let r = dec.rank(tol);
    Ok(SubspaceBasis::from_orthonormal(dec.u.columns(0, r)))
}

/// Kernel and range together from one factorization.
pub fn kernel_and_range(a: &CMat, tol: &TolerancePolicy) -> Result<(SubspaceBasis, SubspaceBasis)> {
    let dec = svd(a)?;
    let r = dec.rank(tol);
    Ok((
        SubspaceBasis::from_orthonormal(dec.v.columns(r, a.cols())),
        SubspaceBasis::from_orthonormal(dec.u.columns(0, r)),
    ))
}
