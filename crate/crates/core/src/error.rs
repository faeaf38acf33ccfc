use thiserror::Error;

use crate::numerics::C64;

/// Which of the two direct sums a complement pair failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementSide {
    /// `X = N(T) ⊕ E`
    Domain,
    /// `Y = R(T) ⊕ F`
    Codomain,
}

impl std::fmt::Display for ComplementSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComplementSide::Domain => write!(f, "domain splitting X = N(T) + E"),
            ComplementSide::Codomain => write!(f, "codomain splitting Y = R(T) + F"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has no entries")]
    EmptyMatrix,

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("{context}: expected shape {expected:?}, found {found:?}")]
    ShapeMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("subspaces live in different ambient spaces ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("singular value decomposition of a {rows}x{cols} matrix did not converge")]
    Factorization { rows: usize, cols: usize },

    #[error("linear system is singular to working tolerance (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("basis columns are not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("invalid complement: {side} is not a direct sum")]
    InvalidComplement { side: ComplementSide },

    #[error("not a generalized inverse (inner residual {inner_residual:e}, outer residual {outer_residual:e})")]
    NotGeneralizedInverse {
        inner_residual: f64,
        outer_residual: f64,
    },

    #[error("perturbation too large: |T+| |Tbar - T| = {smallness} >= 1")]
    PerturbationTooLarge { smallness: f64 },

    #[error("perturbation norm {norm:e} is not below the supplied bound {bound:e}")]
    PerturbationBeyondBound { norm: f64, bound: f64 },

    #[error("the two factored forms of the perturbed inverse disagree (relative gap {gap:e})")]
    FormulaMismatch { gap: f64 },

    #[error("generalized inverses belong to different base operators")]
    BaseOperatorMismatch,

    #[error("lambda outside the convergence disk: |lambda| |S T+| = {product} >= 1")]
    OutOfRadius { product: f64 },

    #[error("family member at lambda = {lambda} is not a generalized inverse of T - lambda S (inner {inner_residual:e}, outer {outer_residual:e})")]
    InvalidFamily {
        lambda: C64,
        inner_residual: f64,
        outer_residual: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("region grid is empty")]
    EmptyRegion,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
