//! Generalized inverses and generalized resolvents of finite-dimensional
//! linear pencils `λ ↦ T − λS`.
//!
//! The library builds the explicit resolvent `G(λ) = T⁺(I − λST⁺)⁻¹` from
//! any generalized inverse `T⁺`, checks the three resolvent conditions, and
//! decides existence through transversality, direct sums, fixed complements,
//! continuity, and rank or kernel/range constancy.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod geninv;
pub mod perturbation;
pub mod resolvent;
pub mod numerics;

pub use error::{Error, Result};
pub use numerics::{CMat, SubspaceBasis, TolerancePolicy, C64};
