//! Report types emitted by the commands. Every field is computed from the
//! inputs and flags alone, so identical invocations serialize identically.

use serde::Serialize;

use crate::criteria::{FiniteRankVerdict, FredholmVerdict, MpResolventReport};
use crate::geninv::InverseVerdict;
use crate::numerics::{TolerancePolicy, C64};
use crate::perturbation::{Classification, SplittingChecks};
use crate::resolvent::{AxiomReport, ExistenceCertificate, PairResidual};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub role: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridSummary {
    pub radius: f64,
    pub points: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomSummary {
    pub max_inner: f64,
    pub max_outer: f64,
    pub max_identity: f64,
    pub pairs_checked: usize,
    pub worst_pair: Option<PairResidual>,
    pub out_of_radius: Vec<C64>,
    pub holds: bool,
}

impl From<&AxiomReport> for AxiomSummary {
    fn from(r: &AxiomReport) -> Self {
        AxiomSummary {
            max_inner: r.max_inner,
            max_outer: r.max_outer,
            max_identity: r.max_identity,
            pairs_checked: r.pairs.len(),
            worst_pair: r.worst_pair().copied(),
            out_of_radius: r.out_of_radius.clone(),
            holds: r.holds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionVerdicts {
    pub transversality: bool,
    pub finite_rank: bool,
    pub fredholm: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub command: &'static str,
    pub inputs: Vec<InputDigest>,
    pub policy: TolerancePolicy,
    pub grid: GridSummary,
    pub family_radius: f64,
    pub resolvent_exists: bool,
    pub axioms_verified: bool,
    pub verdicts: CriterionVerdicts,
    pub existence: ExistenceCertificate,
    pub axioms: AxiomSummary,
    pub finite_rank: FiniteRankVerdict,
    pub fredholm: FredholmVerdict,
    /// Grid points whose rank decision sits within 10× the cutoff.
    pub marginal_points: Vec<C64>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MpCheckReport {
    pub command: &'static str,
    pub inputs: Vec<InputDigest>,
    pub policy: TolerancePolicy,
    pub grid: GridSummary,
    pub constancy_verdict: bool,
    pub identity_verdict: bool,
    pub verdicts_agree: bool,
    pub max_kernel_gap: f64,
    pub max_range_gap: f64,
    pub marginal_points: Vec<C64>,
    pub detail: MpResolventReport,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbReport {
    pub command: &'static str,
    pub inputs: Vec<InputDigest>,
    pub policy: TolerancePolicy,
    pub smallness: f64,
    pub classification: Option<Classification>,
    /// Brute-force check of `B` against `T̄`.
    pub verify_verdict: Option<InverseVerdict>,
    pub inner_residual: Option<f64>,
    pub outer_residual: Option<f64>,
    pub formula_gap: Option<f64>,
    /// `B` as row-major `[re, im]` pairs.
    pub b: Option<Vec<Vec<C64>>>,
    pub splitting: Option<SplittingChecks>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}
