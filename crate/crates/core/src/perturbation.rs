//! Stability of generalized inverses under perturbation.
//!
//! For `T̄ = T + ΔT` with `‖T⁺‖‖ΔT‖ < 1` the candidate
//! `B = T⁺(I + ΔT·T⁺)⁻¹ = (I + T⁺ΔT)⁻¹T⁺` is always an outer inverse of
//! `T̄`, and it is a generalized inverse exactly when `R(T̄) ∩ N(T⁺) = {0}`,
//! equivalently when `Y = R(T̄) ⊕ N(T⁺)` or `X = N(T̄) ⊕ R(T⁺)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geninv::{verify_gen_inverse, GenInverse, InverseVerdict};
use crate::numerics::{
    direct_sum_check, intersection_trivial, kernel_and_range, kernel_basis, op_norm2,
    range_basis, relative, solve, CMat, TolerancePolicy,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    Generalized,
    OuterOnly,
}

#[derive(Clone, Debug)]
pub struct PerturbationResult {
    pub b: CMat,
    pub classification: Classification,
    pub inner_residual: f64,
    pub outer_residual: f64,
    /// `‖T⁺‖₂ · ‖T̄ − T‖₂`
    pub smallness: f64,
    /// Relative gap between the left- and right-factored forms of `B`.
    pub formula_gap: f64,
    /// Whether `B T̄ B = B` held numerically on this call.
    pub outer_verified: bool,
}

fn check_same_shape(tbar: &CMat, g: &GenInverse) -> Result<()> {
    if tbar.shape() != g.t().shape() {
        return Err(Error::ShapeMismatch {
            context: "perturbed operator",
            expected: g.t().shape(),
            found: tbar.shape(),
        });
    }
    Ok(())
}

/// `‖T⁺‖₂ · ‖T̄ − T‖₂`
pub fn smallness(g: &GenInverse, tbar: &CMat) -> Result<f64> {
    check_same_shape(tbar, g)?;
    Ok(op_norm2(g.tplus()) * op_norm2(&(tbar - g.t())))
}

fn require_small(g: &GenInverse, tbar: &CMat) -> Result<f64> {
    let s = smallness(g, tbar)?;
    if s >= 1.0 {
        return Err(Error::PerturbationTooLarge { smallness: s });
    }
    Ok(s)
}

/// `R(T̄) ∩ N(T⁺) = {0}`
pub fn transversal(tbar: &CMat, g: &GenInverse, tol: &TolerancePolicy) -> Result<bool> {
    check_same_shape(tbar, g)?;
    intersection_trivial(&range_basis(tbar, tol)?, &kernel_basis(g.tplus(), tol)?, tol)
}

pub fn perturbed_inverse(g: &GenInverse, tbar: &CMat, tol: &TolerancePolicy) -> Result<PerturbationResult> {
    let smallness = require_small(g, tbar)?;
    let (m, n) = g.t().shape();
    let delta = tbar - g.t();
    let tplus = g.tplus();

    // (I + T⁺ΔT) B = T⁺
    let left = CMat::identity(n) + tplus * &delta;
    let b = solve(&left, tplus, tol)?;

    // B (I + ΔT T⁺) = T⁺, solved through the adjoint system
    let right = CMat::identity(m) + &delta * tplus;
    let b_alt = solve(&right.adjoint(), &tplus.adjoint(), tol)?.adjoint();

    let formula_gap = relative(op_norm2(&(&b - &b_alt)), op_norm2(&b));
    if formula_gap > tol.residual_tol {
        return Err(Error::FormulaMismatch { gap: formula_gap });
    }

    let check = verify_gen_inverse(tbar, &b, tol)?;
    let inner = matches!(check.verdict, InverseVerdict::Generalized | InverseVerdict::InnerOnly);
    let outer_verified = matches!(check.verdict, InverseVerdict::Generalized | InverseVerdict::OuterOnly);
    Ok(PerturbationResult {
        b,
        classification: if inner && outer_verified {
            Classification::Generalized
        } else {
            Classification::OuterOnly
        },
        inner_residual: check.inner_residual,
        outer_residual: check.outer_residual,
        smallness,
        formula_gap,
        outer_verified,
    })
}

/// The four statements that are equivalent under `‖T⁺‖‖ΔT‖ < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingChecks {
    /// `B` is a generalized inverse of `T̄`.
    pub generalized_inverse: bool,
    /// `R(T̄) ∩ N(T⁺) = {0}`
    pub transversal: bool,
    /// `Y = R(T̄) ⊕ N(T⁺)`
    pub codomain_split: bool,
    /// `X = N(T̄) ⊕ R(T⁺)`
    pub domain_split: bool,
}

impl SplittingChecks {
    pub fn all_agree(&self) -> bool {
        let v = self.generalized_inverse;
        self.transversal == v && self.codomain_split == v && self.domain_split == v
    }
}

pub fn splitting_checks(tbar: &CMat, g: &GenInverse, tol: &TolerancePolicy) -> Result<SplittingChecks> {
    let result = perturbed_inverse(g, tbar, tol)?;
    let (tbar_kernel, tbar_range) = kernel_and_range(tbar, tol)?;
    let tplus_kernel = kernel_basis(g.tplus(), tol)?;
    let tplus_range = range_basis(g.tplus(), tol)?;
    Ok(SplittingChecks {
        generalized_inverse: result.classification == Classification::Generalized,
        transversal: intersection_trivial(&tbar_range, &tplus_kernel, tol)?,
        codomain_split: direct_sum_check(&tbar_range, &tplus_kernel, tol)?,
        domain_split: direct_sum_check(&tbar_kernel, &tplus_range, tol)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub first: bool,
    pub second: bool,
    pub agree: bool,
}

/// Transversality of `T̄` against the kernels of two generalized inverses of
/// the same `T`. Agreement is only guaranteed for perturbations below an
/// unknown radius, so `bound` is supplied by the caller and disagreement is
/// reported rather than raised.
pub fn equivalence_check(
    tbar: &CMat,
    g1: &GenInverse,
    g2: &GenInverse,
    bound: f64,
    tol: &TolerancePolicy,
) -> Result<EquivalenceReport> {
    if g1.t() != g2.t() {
        return Err(Error::BaseOperatorMismatch);
    }
    check_same_shape(tbar, g1)?;
    let norm = op_norm2(&(tbar - g1.t()));
    if norm >= bound {
        return Err(Error::PerturbationBeyondBound { norm, bound });
    }
    let first = transversal(tbar, g1, tol)?;
    let second = transversal(tbar, g2, tol)?;
    Ok(EquivalenceReport { first, second, agree: first == second })
}
