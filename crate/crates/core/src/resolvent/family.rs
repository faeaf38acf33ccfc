use serde::Serialize;

use super::{DiskGrid, Pencil};
use crate::error::{Error, Result};
use crate::geninv::GenInverse;
use crate::numerics::{
    kernel_and_range, kernel_basis, op_norm2, range_basis, relative, solve, subspace_gap, CMat,
    TolerancePolicy, C64,
};

/// Radius reported when `ST⁺` vanishes and the disk is unbounded.
pub const RADIUS_CAP: f64 = 1e12;
/// `‖ST⁺‖₂` at or below this counts as zero.
pub const RADIUS_EPS: f64 = 1e-14;

/// `G(λ) = T⁺(I − λST⁺)⁻¹` on the disk `|λ| · ‖ST⁺‖₂ < 1`.
#[derive(Clone, Debug)]
pub struct ResolventFamily {
    pencil: Pencil,
    g: GenInverse,
    st_plus: CMat,
    st_plus_norm: f64,
    radius: f64,
    tplus_norm: f64,
    tol: TolerancePolicy,
}

/// `P(λ) = (T − λS)G(λ)` and `Q(λ) = G(λ)(T − λS)`.
#[derive(Clone, Debug)]
pub struct ProjectorPair {
    pub p_lambda: CMat,
    pub q_lambda: CMat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectorReport {
    pub lambda: C64,
    #[serde(skip)]
    pub pair: ProjectorPair,
    /// `‖P² − P‖ / ‖P‖`
    pub p_idempotency: f64,
    /// `‖Q² − Q‖ / ‖Q‖`
    pub q_idempotency: f64,
    /// gap between `R(P(λ))` and `R(T − λS)`
    pub p_range_gap: f64,
    /// gap between `N(P(λ))` and `N(T⁺)`
    pub p_kernel_gap: f64,
    /// gap between `R(Q(λ))` and `R(T⁺)`
    pub q_range_gap: f64,
    /// gap between `N(Q(λ))` and `N(T − λS)`
    pub q_kernel_gap: f64,
}

impl ProjectorReport {
    pub fn idempotent(&self, tol: &TolerancePolicy) -> bool {
        self.p_idempotency <= tol.residual_tol && self.q_idempotency <= tol.residual_tol
    }

    pub fn subspaces_match(&self, tol: &TolerancePolicy) -> bool {
        [self.p_range_gap, self.p_kernel_gap, self.q_range_gap, self.q_kernel_gap]
            .iter()
            .all(|&g| g <= tol.gap_tol)
    }
}

pub fn build_family(p: &Pencil, g: &GenInverse, tol: &TolerancePolicy) -> Result<ResolventFamily> {
    if g.t() != p.t() {
        return Err(Error::BaseOperatorMismatch);
    }
    let st_plus = p.s() * g.tplus();
    let st_plus_norm = op_norm2(&st_plus);
    let radius = if st_plus_norm <= RADIUS_EPS {
        RADIUS_CAP
    } else {
        (1.0 / st_plus_norm).min(RADIUS_CAP)
    };
    Ok(ResolventFamily {
        pencil: p.clone(),
        g: g.clone(),
        st_plus,
        st_plus_norm,
        radius,
        tplus_norm: op_norm2(g.tplus()),
        tol: *tol,
    })
}

impl ResolventFamily {
    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    pub fn inverse(&self) -> &GenInverse {
        &self.g
    }

    pub fn st_plus(&self) -> &CMat {
        &self.st_plus
    }

    pub fn st_plus_norm(&self) -> f64 {
        self.st_plus_norm
    }

    /// `min(RADIUS_CAP, 1/‖ST⁺‖₂)`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn tolerance(&self) -> &TolerancePolicy {
        &self.tol
    }

    /// The default sampling disk: half the family radius, 25 points.
    pub fn default_grid(&self) -> DiskGrid {
        DiskGrid::standard(0.5 * self.radius).expect("family radius is positive")
    }

    /// `|λ| · ‖ST⁺‖₂`
    pub fn contraction(&self, lambda: C64) -> f64 {
        lambda.norm() * self.st_plus_norm
    }

    fn check_radius(&self, lambda: C64) -> Result<()> {
        let product = self.contraction(lambda);
        if product >= 1.0 {
            return Err(Error::OutOfRadius { product });
        }
        Ok(())
    }

    /// `G(λ)` through a direct solve of `G (I − λST⁺) = T⁺`.
    pub fn evaluate(&self, lambda: C64) -> Result<CMat> {
        self.check_radius(lambda)?;
        let tplus = self.g.tplus();
        if lambda == C64::new(0.0, 0.0) {
            return Ok(tplus.clone());
        }
        let m = self.st_plus.rows();
        let shifted = CMat::identity(m) - self.st_plus.scale(lambda);
        Ok(solve(&shifted.adjoint(), &tplus.adjoint(), &self.tol)?.adjoint())
    }

    /// Partial sum `Σ_{k<terms} λᵏ T⁺(ST⁺)ᵏ`. Kept as an independent check
    /// on [`evaluate`](Self::evaluate); the error is bounded by
    /// `‖T⁺‖ rᵗᵉʳᵐˢ / (1 − r)` with `r = |λ|‖ST⁺‖`.
    pub fn evaluate_neumann(&self, lambda: C64, terms: usize) -> Result<CMat> {
        self.check_radius(lambda)?;
        let tplus = self.g.tplus();
        let mut term = tplus.clone();
        let mut sum = CMat::zeros(tplus.rows(), tplus.cols());
        for k in 0..terms {
            sum = sum + &term;
            if k + 1 < terms {
                term = (&term * &self.st_plus).scale(lambda);
            }
        }
        Ok(sum)
    }

    /// Tail bound of the Neumann partial sum with `terms` terms.
    pub fn neumann_tail_bound(&self, lambda: C64, terms: usize) -> f64 {
        let r = self.contraction(lambda);
        self.tplus_norm * r.powi(terms as i32) / (1.0 - r)
    }

    /// `‖G(λ) − G(μ) − (λ − μ)G(λ)SG(μ)‖₂ / ‖T⁺‖₂`
    pub fn resolvent_identity_residual(&self, lambda: C64, mu: C64) -> Result<f64> {
        let gl = self.evaluate(lambda)?;
        let gm = self.evaluate(mu)?;
        Ok(self.identity_residual_of(&gl, &gm, lambda, mu))
    }

    pub(crate) fn identity_residual_of(&self, gl: &CMat, gm: &CMat, lambda: C64, mu: C64) -> f64 {
        if lambda == mu {
            return 0.0;
        }
        let rhs = (gl * self.pencil.s() * gm).scale(lambda - mu);
        relative(op_norm2(&(gl - gm - rhs)), self.tplus_norm)
    }

    pub fn projector_family(&self, lambda: C64) -> Result<ProjectorReport> {
        let g = self.evaluate(lambda)?;
        let a = self.pencil.at(lambda);
        let p_lambda = &a * &g;
        let q_lambda = &g * &a;
        let idem = |x: &CMat| relative(op_norm2(&(x * x - x)), op_norm2(x));
        let tol = &self.tol;
        let (a_kernel, a_range) = kernel_and_range(&a, tol)?;
        let (p_kernel, p_range) = kernel_and_range(&p_lambda, tol)?;
        let (q_kernel, q_range) = kernel_and_range(&q_lambda, tol)?;
        let tplus = self.g.tplus();
        Ok(ProjectorReport {
            lambda,
            p_idempotency: idem(&p_lambda),
            q_idempotency: idem(&q_lambda),
            p_range_gap: subspace_gap(&p_range, &a_range)?,
            p_kernel_gap: subspace_gap(&p_kernel, &kernel_basis(tplus, tol)?)?,
            q_range_gap: subspace_gap(&q_range, &range_basis(tplus, tol)?)?,
            q_kernel_gap: subspace_gap(&q_kernel, &a_kernel)?,
            pair: ProjectorPair { p_lambda, q_lambda },
        })
    }
}
