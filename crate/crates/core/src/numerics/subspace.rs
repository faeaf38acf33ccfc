use super::svd::{numerical_rank, op_norm2, range_basis};
use super::{solve, CMat, TolerancePolicy};
use crate::error::{Error, Result};

/// A subspace of `C^ambient` held as a matrix with orthonormal columns.
///
/// Zero columns represent the trivial subspace `{0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    basis: CMat,
}

impl SubspaceBasis {
    /// Validates orthonormality of the supplied columns.
    pub fn new(basis: CMat, tol: &TolerancePolicy) -> Result<Self> {
        let k = basis.cols();
        if k > basis.rows() {
            return Err(Error::NotOrthonormal { residual: f64::INFINITY });
        }
        if k > 0 {
            let gram = &basis.adjoint() * &basis;
            let residual = op_norm2(&(gram - CMat::identity(k)));
            if residual > tol.residual_tol {
                return Err(Error::NotOrthonormal { residual });
            }
        }
        Ok(SubspaceBasis { basis })
    }

    /// Trusts the caller that the columns are orthonormal.
    pub(crate) fn from_orthonormal(basis: CMat) -> Self {
        SubspaceBasis { basis }
    }

    /// Orthonormalized span of arbitrary columns.
    pub fn span(vectors: &CMat, tol: &TolerancePolicy) -> Result<Self> {
        if vectors.cols() == 0 || vectors.max_abs() == 0.0 {
            return Ok(Self::zero(vectors.rows()));
        }
        range_basis(vectors, tol)
    }

    pub fn zero(ambient: usize) -> Self {
        SubspaceBasis { basis: CMat::zeros(ambient, 0) }
    }

    pub fn whole(ambient: usize) -> Self {
        SubspaceBasis { basis: CMat::identity(ambient) }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let mut b = CMat::zeros(ambient, indices.len());
        for (col, &i) in indices.iter().enumerate() {
            b.0[(i, col)] = super::C64::new(1.0, 0.0);
        }
        SubspaceBasis { basis: b }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Orthogonal projector `B Bᴴ`.
    pub fn projector(&self) -> CMat {
        &self.basis * &self.basis.adjoint()
    }
}

fn same_ambient(m: &SubspaceBasis, n: &SubspaceBasis) -> Result<()> {
    if m.ambient_dim() != n.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: m.ambient_dim(),
            right: n.ambient_dim(),
        });
    }
    Ok(())
}

/// `‖P_M − P_N‖₂`; equals 1 whenever the dimensions differ.
pub fn subspace_gap(m: &SubspaceBasis, n: &SubspaceBasis) -> Result<f64> {
    same_ambient(m, n)?;
    if m.dim() == 0 && n.dim() == 0 {
        return Ok(0.0);
    }
    Ok(op_norm2(&(m.projector() - n.projector())))
}

/// Subspace equality: dimensions match and the gap is within `gap_tol`.
pub fn subspaces_equal(m: &SubspaceBasis, n: &SubspaceBasis, tol: &TolerancePolicy) -> Result<bool> {
    same_ambient(m, n)?;
    if m.dim() != n.dim() {
        return Ok(false);
    }
    Ok(subspace_gap(m, n)? <= tol.gap_tol)
}

/// `M ∩ N = {0}`, decided by the numerical rank of `[M | N]`.
pub fn intersection_trivial(m: &SubspaceBasis, n: &SubspaceBasis, tol: &TolerancePolicy) -> Result<bool> {
    same_ambient(m, n)?;
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(true);
    }
    if m.dim() + n.dim() > m.ambient_dim() {
        return Ok(false);
    }
    let joined = m.basis().hstack(n.basis());
    Ok(numerical_rank(&joined, tol)? == m.dim() + n.dim())
}

/// `ambient = M ⊕ N`.
pub fn direct_sum_check(m: &SubspaceBasis, n: &SubspaceBasis, tol: &TolerancePolicy) -> Result<bool> {
    same_ambient(m, n)?;
    Ok(m.dim() + n.dim() == m.ambient_dim() && intersection_trivial(m, n, tol)?)
}

/// Oblique projectors onto `M` along `N` and onto `N` along `M`.
///
/// Coordinates come from a block solve against `[M | N]`.
pub fn oblique_projectors(m: &SubspaceBasis, n: &SubspaceBasis, tol: &TolerancePolicy) -> Result<(CMat, CMat)> {
    same_ambient(m, n)?;
    if !direct_sum_check(m, n, tol)? {
        return Err(Error::SingularSystem { condition: f64::INFINITY });
    }
    let ambient = m.ambient_dim();
    let k = m.dim();
    let joined = m.basis().hstack(n.basis());
    let coords = solve(&joined, &CMat::identity(ambient), tol)?;
    let onto_m = m.basis() * coords.row_block(0, k);
    let onto_n = n.basis() * coords.row_block(k, ambient);
    Ok((onto_m, onto_n))
}
