//! Generalized inverses and their correspondence with direct-sum
//! decompositions `X = N(T) ⊕ R(T⁺)`, `Y = N(T⁺) ⊕ R(T)`.

use serde::Serialize;

use crate::error::{ComplementSide, Error, Result};
use crate::numerics::{
    direct_sum_check, kernel_basis, op_norm2, range_basis, relative, solve, svd, CMat,
    SubspaceBasis, TolerancePolicy,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InverseKind {
    MoorePenrose,
    FromComplements,
    UserSupplied,
}

/// A verified generalized inverse `T⁺` of `T` with its projectors
/// `P = TT⁺` (onto `R(T)`) and `Q = T⁺T` (along `N(T)`).
#[derive(Clone, Debug)]
pub struct GenInverse {
    t: CMat,
    tplus: CMat,
    p: CMat,
    q: CMat,
    kind: InverseKind,
}

impl GenInverse {
    fn assemble(t: CMat, tplus: CMat, kind: InverseKind) -> Self {
        let p = &t * &tplus;
        let q = &tplus * &t;
        GenInverse { t, tplus, p, q, kind }
    }

    /// Accepts a caller-supplied `T⁺` only if both axioms hold.
    pub fn user_supplied(t: CMat, tplus: CMat, tol: &TolerancePolicy) -> Result<Self> {
        let check = verify_gen_inverse(&t, &tplus, tol)?;
        if check.verdict != InverseVerdict::Generalized {
            return Err(Error::NotGeneralizedInverse {
                inner_residual: check.inner_residual,
                outer_residual: check.outer_residual,
            });
        }
        Ok(Self::assemble(t, tplus, InverseKind::UserSupplied))
    }

    pub fn t(&self) -> &CMat {
        &self.t
    }

    pub fn tplus(&self) -> &CMat {
        &self.tplus
    }

    /// `T T⁺`
    pub fn p(&self) -> &CMat {
        &self.p
    }

    /// `T⁺ T`
    pub fn q(&self) -> &CMat {
        &self.q
    }

    pub fn kind(&self) -> InverseKind {
        self.kind
    }
}

/// Complements `E ⊂ X` of `N(T)` and `F ⊂ Y` of `R(T)`.
#[derive(Clone, Debug)]
pub struct ComplementPair {
    pub e: SubspaceBasis,
    pub f: SubspaceBasis,
}

impl ComplementPair {
    pub fn new(e: SubspaceBasis, f: SubspaceBasis) -> Self {
        ComplementPair { e, f }
    }

    /// Checks `X = N(T) ⊕ E` and `Y = R(T) ⊕ F`.
    pub fn validate(&self, t: &CMat, tol: &TolerancePolicy) -> Result<()> {
        if self.e.ambient_dim() != t.cols() {
            return Err(Error::AmbientMismatch { left: t.cols(), right: self.e.ambient_dim() });
        }
        if self.f.ambient_dim() != t.rows() {
            return Err(Error::AmbientMismatch { left: t.rows(), right: self.f.ambient_dim() });
        }
        if !direct_sum_check(&kernel_basis(t, tol)?, &self.e, tol)? {
            return Err(Error::InvalidComplement { side: ComplementSide::Domain });
        }
        if !direct_sum_check(&range_basis(t, tol)?, &self.f, tol)? {
            return Err(Error::InvalidComplement { side: ComplementSide::Codomain });
        }
        Ok(())
    }
}

/// Moore-Penrose inverse from the SVD; singular values at or below the rank
/// cutoff are zeroed rather than inverted.
pub fn mp_inverse(t: &CMat, tol: &TolerancePolicy) -> Result<GenInverse> {
    let dec = svd(t)?;
    let r = dec.rank(tol);
    let (m, n) = t.shape();
    let mut tplus = CMat::zeros(n, m);
    if r > 0 {
        let mut v_scaled = dec.v.columns(0, r);
        for (j, s) in dec.sigma.iter().take(r).enumerate() {
            let mut col = v_scaled.0.column_mut(j);
            col /= crate::numerics::C64::new(*s, 0.0);
        }
        tplus = v_scaled * dec.u.columns(0, r).adjoint();
    }
    Ok(GenInverse::assemble(t.clone(), tplus, InverseKind::MoorePenrose))
}

/// The generalized inverse with `R(T⁺) = E` and `N(T⁺) = F`.
///
/// `T` restricted to `E` is a bijection onto `R(T)`; `T⁺` is its inverse
/// composed with the projector onto `R(T)` along `F`.
pub fn geninv_from_complements(t: &CMat, c: &ComplementPair, tol: &TolerancePolicy) -> Result<GenInverse> {
    c.validate(t, tol)?;
    let (m, n) = t.shape();
    let range = range_basis(t, tol)?;
    let r = range.dim();
    if r == 0 {
        return Ok(GenInverse::assemble(t.clone(), CMat::zeros(n, m), InverseKind::FromComplements));
    }
    // coordinates of y in the basis [R(T) | F]; the first r rows give the
    // component in R(T) along F
    let joined = range.basis().hstack(c.f.basis());
    let coords = solve(&joined, &CMat::identity(m), tol)?;
    let along_f = coords.row_block(0, r);
    // T restricted to E, expressed in R(T) coordinates: r × r
    let restricted = &range.basis().adjoint() * &(t * c.e.basis());
    let tplus = c.e.basis() * solve(&restricted, &along_f, tol)?;
    Ok(GenInverse::assemble(t.clone(), tplus, InverseKind::FromComplements))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InverseVerdict {
    Generalized,
    InnerOnly,
    OuterOnly,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InverseCheck {
    /// `‖TBT − T‖ / ‖T‖`
    pub inner_residual: f64,
    /// `‖BTB − B‖ / ‖B‖`
    pub outer_residual: f64,
    pub verdict: InverseVerdict,
}

fn check_inverse_shape(t: &CMat, b: &CMat) -> Result<()> {
    if b.shape() != (t.cols(), t.rows()) {
        return Err(Error::ShapeMismatch {
            context: "candidate inverse",
            expected: (t.cols(), t.rows()),
            found: b.shape(),
        });
    }
    Ok(())
}

pub fn verify_gen_inverse(t: &CMat, b: &CMat, tol: &TolerancePolicy) -> Result<InverseCheck> {
    check_inverse_shape(t, b)?;
    let tb = t * b;
    let inner_residual = relative(op_norm2(&(&tb * t - t)), op_norm2(t));
    let outer_residual = relative(op_norm2(&(b * &tb - b)), op_norm2(b));
    let inner = inner_residual <= tol.residual_tol;
    let outer = outer_residual <= tol.residual_tol;
    let verdict = match (inner, outer) {
        (true, true) => InverseVerdict::Generalized,
        (true, false) => InverseVerdict::InnerOnly,
        (false, true) => InverseVerdict::OuterOnly,
        (false, false) => InverseVerdict::Neither,
    };
    Ok(InverseCheck { inner_residual, outer_residual, verdict })
}

/// Residuals of the four Moore-Penrose conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MpAxioms {
    pub inner: f64,
    pub outer: f64,
    /// `‖(TB)ᴴ − TB‖ / ‖TB‖`
    pub range_projector_hermitian: f64,
    /// `‖(BT)ᴴ − BT‖ / ‖BT‖`
    pub domain_projector_hermitian: f64,
    pub holds: bool,
}

impl MpAxioms {
    pub fn max_residual(&self) -> f64 {
        self.inner
            .max(self.outer)
            .max(self.range_projector_hermitian)
            .max(self.domain_projector_hermitian)
    }
}

pub fn verify_mp_axioms(t: &CMat, b: &CMat, tol: &TolerancePolicy) -> Result<MpAxioms> {
    let g = verify_gen_inverse(t, b, tol)?;
    let tb = t * b;
    let bt = b * t;
    let range_projector_hermitian = relative(op_norm2(&(tb.adjoint() - &tb)), op_norm2(&tb));
    let domain_projector_hermitian = relative(op_norm2(&(bt.adjoint() - &bt)), op_norm2(&bt));
    let mut axioms = MpAxioms {
        inner: g.inner_residual,
        outer: g.outer_residual,
        range_projector_hermitian,
        domain_projector_hermitian,
        holds: false,
    };
    axioms.holds = axioms.max_residual() <= tol.residual_tol;
    Ok(axioms)
}

/// `(E, F) = (R(T⁺), N(T⁺))`.
pub fn complements_of(g: &GenInverse, tol: &TolerancePolicy) -> Result<ComplementPair> {
    Ok(ComplementPair {
        e: range_basis(g.tplus(), tol)?,
        f: kernel_basis(g.tplus(), tol)?,
    })
}
