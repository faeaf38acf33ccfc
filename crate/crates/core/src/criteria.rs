//! Existence characterizations by rank and subspace constancy, the
//! Moore-Penrose resolvent characterization, and the rank-drop scan.
//!
//! In finite dimensions every matrix has finite rank, is Fredholm, and has
//! closed range. Rank–nullity then makes "rank constant", "nullity
//! constant" and "corank constant" the same statement, so the finite-rank,
//! Fredholm and semi-Fredholm criteria all reduce to rank constancy on a
//! neighborhood of `0`. They are still computed separately and cross-checked.
//! Constancy is always judged against the value at `λ = 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geninv::{mp_inverse, verify_mp_axioms};
use crate::numerics::{
    condition_number, kernel_and_range, op_norm2, rank_info, relative, solve, subspace_gap, CMat,
    TolerancePolicy, C64,
};
use crate::resolvent::{DiskGrid, Pencil, FULL_PAIR_LIMIT, PAIR_SAMPLE_SIZE, DEFAULT_PAIR_SEED};

/// Rank, nullity and corank of `T − λS` along a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankProfile {
    pub rows: usize,
    pub cols: usize,
    pub points: Vec<C64>,
    pub rank: Vec<usize>,
    pub nullity: Vec<usize>,
    pub corank: Vec<usize>,
    /// Smallest retained singular value within 10× the cutoff.
    pub marginal: Vec<bool>,
}

impl RankProfile {
    pub fn anchor_rank(&self) -> usize {
        self.rank[0]
    }

    pub fn any_marginal(&self) -> bool {
        self.marginal.iter().any(|&m| m)
    }

    fn constant(values: &[usize]) -> bool {
        values.iter().all(|&v| v == values[0])
    }
}

pub fn rank_profile(p: &Pencil, grid: &DiskGrid, tol: &TolerancePolicy) -> Result<RankProfile> {
    let (rows, cols) = p.shape();
    let infos = grid
        .points()
        .par_iter()
        .map(|&l| rank_info(&p.at(l), tol))
        .collect::<Result<Vec<_>>>()?;
    let rank: Vec<usize> = infos.iter().map(|i| i.rank).collect();
    Ok(RankProfile {
        rows,
        cols,
        points: grid.points().to_vec(),
        nullity: rank.iter().map(|r| cols - r).collect(),
        corank: rank.iter().map(|r| rows - r).collect(),
        marginal: infos.iter().map(|i| i.marginal()).collect(),
        rank,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteRankVerdict {
    /// `rank(T − λS) = rank T` at every grid point.
    pub verdict: bool,
    pub profile: RankProfile,
}

pub fn finite_rank_criterion(p: &Pencil, grid: &DiskGrid, tol: &TolerancePolicy) -> Result<FiniteRankVerdict> {
    let profile = rank_profile(p, grid, tol)?;
    Ok(FiniteRankVerdict { verdict: RankProfile::constant(&profile.rank), profile })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FredholmKind {
    Fredholm,
    /// The `< ∞` qualifiers are vacuous for matrices.
    SemiFredholm,
}

#[derive(Clone, Debug, Serialize)]
pub struct FredholmVerdict {
    pub kind: FredholmKind,
    /// `dim N(T − λS) = dim N(T)` on the grid.
    pub nullity_constant: bool,
    /// `codim R(T − λS) = codim R(T)` on the grid.
    pub corank_constant: bool,
    pub verdict: bool,
    /// `dim N(T) − codim R(T)`
    pub index: i64,
    pub profile: RankProfile,
}

fn fredholm_like(kind: FredholmKind, p: &Pencil, grid: &DiskGrid, tol: &TolerancePolicy) -> Result<FredholmVerdict> {
    let profile = rank_profile(p, grid, tol)?;
    let nullity_constant = RankProfile::constant(&profile.nullity);
    let corank_constant = RankProfile::constant(&profile.corank);
    // rank–nullity: both constancies coincide with rank constancy
    assert_eq!(nullity_constant, corank_constant);
    assert_eq!(nullity_constant, RankProfile::constant(&profile.rank));
    Ok(FredholmVerdict {
        kind,
        nullity_constant,
        corank_constant,
        verdict: nullity_constant || corank_constant,
        index: profile.nullity[0] as i64 - profile.corank[0] as i64,
        profile,
    })
}

pub fn fredholm_criterion(p: &Pencil, grid: &DiskGrid, tol: &TolerancePolicy) -> Result<FredholmVerdict> {
    fredholm_like(FredholmKind::Fredholm, p, grid, tol)
}

pub fn semi_fredholm_criterion(p: &Pencil, grid: &DiskGrid, tol: &TolerancePolicy) -> Result<FredholmVerdict> {
    fredholm_like(FredholmKind::SemiFredholm, p, grid, tol)
}

/// Whether the pointwise Moore-Penrose inverse `(T − λS)†` is a generalized
/// resolvent, decided two independent ways.
#[derive(Clone, Debug, Serialize)]
pub struct MpResolventReport {
    pub points: Vec<C64>,
    /// `gap(N(T − λS), N(T))`
    pub kernel_gap: Vec<f64>,
    /// `gap(R(T − λS), R(T))`
    pub range_gap: Vec<f64>,
    pub marginal: Vec<bool>,
    pub max_identity_residual: f64,
    pub max_mp_axiom_residual: f64,
    /// `N(T − λS) = N(T)` and `R(T − λS) = R(T)` on the grid.
    pub constancy_verdict: bool,
    /// The resolvent identity and the MP axioms hold for `(T − λS)†`.
    pub identity_verdict: bool,
}

impl MpResolventReport {
    /// The two verdicts must agree.
    pub fn contract_holds(&self) -> bool {
        self.constancy_verdict == self.identity_verdict
    }

    pub fn max_kernel_gap(&self) -> f64 {
        self.kernel_gap.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_range_gap(&self) -> f64 {
        self.range_gap.iter().copied().fold(0.0, f64::max)
    }
}

fn sampled_pairs(n: usize) -> Vec<(usize, usize)> {
    use rand::{Rng, SeedableRng};
    if n <= FULL_PAIR_LIMIT {
        return (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(DEFAULT_PAIR_SEED);
    (0..PAIR_SAMPLE_SIZE)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect()
}

pub fn mp_resolvent_characterization(p: &Pencil, grid: &DiskGrid, tol: &TolerancePolicy) -> Result<MpResolventReport> {
    let (kernel0, range0) = kernel_and_range(p.t(), tol)?;

    struct PointData {
        pinv: CMat,
        kernel_gap: f64,
        range_gap: f64,
        marginal: bool,
        mp_residual: f64,
        dims_match: bool,
    }

    // every (T − λS)† is computed from scratch, never through T†
    let data = grid
        .points()
        .par_iter()
        .map(|&l| {
            let a = p.at(l);
            let pinv = mp_inverse(&a, tol)?;
            let (kernel, range) = kernel_and_range(&a, tol)?;
            let dims_match = kernel.dim() == kernel0.dim() && range.dim() == range0.dim();
            Ok(PointData {
                kernel_gap: subspace_gap(&kernel, &kernel0)?,
                range_gap: subspace_gap(&range, &range0)?,
                marginal: rank_info(&a, tol)?.marginal(),
                mp_residual: verify_mp_axioms(&a, pinv.tplus(), tol)?.max_residual(),
                dims_match,
                pinv: pinv.tplus().clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let points = grid.points();
    let anchor_norm = op_norm2(&data[0].pinv);
    let max_identity_residual = sampled_pairs(points.len())
        .into_par_iter()
        .map(|(i, j)| {
            if i == j {
                return 0.0;
            }
            let (l, m) = (points[i], points[j]);
            let (gl, gm) = (&data[i].pinv, &data[j].pinv);
            let rhs = (gl * p.s() * gm).scale(l - m);
            relative(op_norm2(&(gl - gm - rhs)), anchor_norm)
        })
        .reduce(|| 0.0, f64::max);
    let max_mp_axiom_residual = data.iter().map(|d| d.mp_residual).fold(0.0, f64::max);

    Ok(MpResolventReport {
        points: points.to_vec(),
        constancy_verdict: data
            .iter()
            .all(|d| d.dims_match && d.kernel_gap <= tol.gap_tol && d.range_gap <= tol.gap_tol),
        identity_verdict: max_identity_residual <= tol.residual_tol
            && max_mp_axiom_residual <= tol.residual_tol,
        kernel_gap: data.iter().map(|d| d.kernel_gap).collect(),
        range_gap: data.iter().map(|d| d.range_gap).collect(),
        marginal: data.iter().map(|d| d.marginal).collect(),
        max_identity_residual,
        max_mp_axiom_residual,
    })
}

/// `(T − λI)†` against the classical resolvent `(T − λI)⁻¹` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalComparison {
    pub lambda: C64,
    /// `‖(T − λI)† − (T − λI)⁻¹‖₂`
    pub deviation: f64,
    /// `κ₂(T − λI)`
    pub condition: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvertibilityReport {
    pub mp_resolvent_ok: bool,
    pub t_invertible: bool,
    /// Filled when both verdicts are true.
    pub classical: Vec<ClassicalComparison>,
    /// Every deviation is within `residual_tol · κ · ‖(T − λI)⁻¹‖`.
    pub classical_match: Option<bool>,
    pub mp_report: MpResolventReport,
}

impl InvertibilityReport {
    pub fn agree(&self) -> bool {
        self.mp_resolvent_ok == self.t_invertible
    }
}

/// For `S = I`: the Moore-Penrose family is a generalized resolvent exactly
/// when `T` is invertible, and then it is the classical resolvent.
pub fn invertibility_corollary(t: &CMat, grid: &DiskGrid, tol: &TolerancePolicy) -> Result<InvertibilityReport> {
    let p = Pencil::shifted(t.clone())?;
    let n = t.rows();
    let mp_report = mp_resolvent_characterization(&p, grid, tol)?;
    let mp_resolvent_ok = mp_report.constancy_verdict && mp_report.identity_verdict;
    let t_invertible = rank_info(t, tol)?.rank == n;

    let mut classical = Vec::new();
    let mut classical_match = None;
    if mp_resolvent_ok && t_invertible {
        let mut ok = true;
        for &l in grid.points() {
            let a = p.at(l);
            let inv = solve(&a, &CMat::identity(n), tol)?;
            let pinv = mp_inverse(&a, tol)?;
            let deviation = op_norm2(&(pinv.tplus() - &inv));
            let condition = condition_number(&a)?;
            ok &= deviation <= tol.residual_tol * condition * op_norm2(&inv);
            classical.push(ClassicalComparison { lambda: l, deviation, condition });
        }
        classical_match = Some(ok);
    }
    Ok(InvertibilityReport { mp_resolvent_ok, t_invertible, classical, classical_match, mp_report })
}

/// Rectangular grid `[re_min, re_max] × [im_min, im_max]` with `steps`
/// samples per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub steps: usize,
}

impl RegionGrid {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::EmptyRegion);
        }
        let bounds = [re_min, re_max, im_min, im_max];
        if bounds.iter().any(|b| !b.is_finite()) || re_min > re_max || im_min > im_max {
            return Err(Error::InvalidGrid(format!("bad region bounds {bounds:?}")));
        }
        Ok(RegionGrid { re_min, re_max, im_min, im_max, steps })
    }

    fn axis(lo: f64, hi: f64, steps: usize, k: usize) -> f64 {
        if steps == 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (steps - 1) as f64
        }
    }

    /// Points in row-major order: imaginary part outer, real part inner,
    /// both ascending.
    pub fn points(&self) -> Vec<C64> {
        let n = self.steps;
        (0..n)
            .flat_map(|i| {
                let im = Self::axis(self.im_min, self.im_max, n, i);
                (0..n).map(move |j| C64::new(Self::axis(self.re_min, self.re_max, n, j), im))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub lambda: C64,
    pub rank: usize,
    /// Rank is below the maximum rank over the region.
    pub is_drop_point: bool,
    pub marginal: bool,
}

/// The rank-drop locus of `T − λS` over a region.
pub fn generalized_spectrum_scan(p: &Pencil, region: &RegionGrid, tol: &TolerancePolicy) -> Result<Vec<SpectrumPoint>> {
    let points = region.points();
    if points.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let infos = points
        .par_iter()
        .map(|&l| rank_info(&p.at(l), tol))
        .collect::<Result<Vec<_>>>()?;
    let max_rank = infos.iter().map(|i| i.rank).max().unwrap_or(0);
    Ok(points
        .into_iter()
        .zip(infos)
        .map(|(lambda, info)| SpectrumPoint {
            lambda,
            rank: info.rank,
            is_drop_point: info.rank < max_rank,
            marginal: info.marginal(),
        })
        .collect())
}
