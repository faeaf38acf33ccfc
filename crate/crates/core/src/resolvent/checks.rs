use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{DiskGrid, Pencil, ResolventFamily};
use crate::error::{Error, Result};
use crate::geninv::{verify_gen_inverse, ComplementPair, GenInverse, InverseVerdict};
use crate::numerics::{
    direct_sum_check, intersection_trivial, kernel_and_range, kernel_basis, op_norm2,
    range_basis, relative, CMat, SubspaceBasis, TolerancePolicy, C64,
};

/// Grids up to this size have condition (3) checked on every ordered pair.
pub const FULL_PAIR_LIMIT: usize = 40;
/// Number of pairs sampled on larger grids.
pub const PAIR_SAMPLE_SIZE: usize = 1600;
pub const DEFAULT_PAIR_SEED: u64 = 0x5_eed0_f9e5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Criterion {
    Transversality,
    FixedComplements,
    DomainSplitting,
    CodomainSplitting,
    Continuity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointVerdict {
    pub lambda: C64,
    pub holds: bool,
}

/// Per-point transversality `R(T − λS) ∩ N(T⁺) = {0}` over a sampled disk.
#[derive(Clone, Debug, Serialize)]
pub struct ExistenceCertificate {
    pub verdict: bool,
    pub per_point: Vec<PointVerdict>,
    pub criterion: Criterion,
    pub grid_radius: f64,
    /// `1/‖ST⁺‖₂` (capped); the grid should stay inside it.
    pub family_radius: f64,
    pub grid_exceeds_radius: bool,
}

fn check_base(p: &Pencil, g: &GenInverse) -> Result<()> {
    if g.t() != p.t() {
        return Err(Error::BaseOperatorMismatch);
    }
    Ok(())
}

pub fn existence_check(
    p: &Pencil,
    g: &GenInverse,
    grid: &DiskGrid,
    tol: &TolerancePolicy,
) -> Result<ExistenceCertificate> {
    check_base(p, g)?;
    let family = super::build_family(p, g, tol)?;
    let kernel = kernel_basis(g.tplus(), tol)?;
    let per_point = grid
        .points()
        .par_iter()
        .map(|&lambda| {
            let range = range_basis(&p.at(lambda), tol)?;
            Ok(PointVerdict { lambda, holds: intersection_trivial(&range, &kernel, tol)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExistenceCertificate {
        verdict: per_point.iter().all(|v| v.holds),
        per_point,
        criterion: Criterion::Transversality,
        grid_radius: grid.radius(),
        family_radius: family.radius(),
        grid_exceeds_radius: grid.radius() > family.radius(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointAxioms {
    pub lambda: C64,
    /// `‖AGA − A‖/‖A‖` with `A = T − λS`
    pub inner_residual: f64,
    /// `‖GAG − G‖/‖G‖`
    pub outer_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairResidual {
    pub lambda: C64,
    pub mu: C64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub points: Vec<PointAxioms>,
    pub pairs: Vec<PairResidual>,
    /// Grid points where `G(λ)` is undefined; skipped, not fatal.
    pub out_of_radius: Vec<C64>,
    pub max_inner: f64,
    pub max_outer: f64,
    pub max_identity: f64,
    /// All evaluated residuals are within `residual_tol`.
    pub holds: bool,
}

impl AxiomReport {
    /// Every grid point could be evaluated.
    pub fn complete(&self) -> bool {
        self.out_of_radius.is_empty()
    }

    pub fn worst_pair(&self) -> Option<&PairResidual> {
        self.pairs.iter().max_by(|a, b| a.residual.total_cmp(&b.residual))
    }
}

pub fn check_resolvent_axioms(f: &ResolventFamily, grid: &DiskGrid) -> Result<AxiomReport> {
    check_resolvent_axioms_seeded(f, grid, DEFAULT_PAIR_SEED)
}

fn pair_indices(n: usize, seed: u64) -> Vec<(usize, usize)> {
    if n <= FULL_PAIR_LIMIT {
        return (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..PAIR_SAMPLE_SIZE)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect()
}

/// Conditions (1) and (2) at every grid point and the resolvent identity on
/// grid pairs (all ordered pairs up to [`FULL_PAIR_LIMIT`] points, otherwise
/// [`PAIR_SAMPLE_SIZE`] pairs drawn with `seed`).
pub fn check_resolvent_axioms_seeded(f: &ResolventFamily, grid: &DiskGrid, seed: u64) -> Result<AxiomReport> {
    let tol = *f.tolerance();
    let mut evaluated = Vec::new();
    let mut out_of_radius = Vec::new();
    for &lambda in grid.points() {
        match f.evaluate(lambda) {
            Ok(g) => evaluated.push((lambda, g)),
            Err(Error::OutOfRadius { .. }) => out_of_radius.push(lambda),
            Err(e) => return Err(e),
        }
    }

    let points: Vec<PointAxioms> = evaluated
        .par_iter()
        .map(|(lambda, g)| {
            let a = f.pencil().at(*lambda);
            let ag = &a * g;
            PointAxioms {
                lambda: *lambda,
                inner_residual: relative(op_norm2(&(&ag * &a - &a)), op_norm2(&a)),
                outer_residual: relative(op_norm2(&(g * &ag - g)), op_norm2(g)),
            }
        })
        .collect();

    let pairs: Vec<PairResidual> = pair_indices(evaluated.len(), seed)
        .into_par_iter()
        .map(|(i, j)| {
            let (l, gl) = &evaluated[i];
            let (m, gm) = &evaluated[j];
            PairResidual { lambda: *l, mu: *m, residual: f.identity_residual_of(gl, gm, *l, *m) }
        })
        .collect();

    let max_inner = points.iter().map(|p| p.inner_residual).fold(0.0, f64::max);
    let max_outer = points.iter().map(|p| p.outer_residual).fold(0.0, f64::max);
    let max_identity = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
    let holds = max_inner <= tol.residual_tol
        && max_outer <= tol.residual_tol
        && max_identity <= tol.residual_tol;
    Ok(AxiomReport { points, pairs, out_of_radius, max_inner, max_outer, max_identity, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitPoint {
    pub lambda: C64,
    /// `X = N(T − λS) ⊕ E`
    pub domain_split: bool,
    /// `Y = R(T − λS) ⊕ F`
    pub codomain_split: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedComplementsReport {
    pub per_point: Vec<SplitPoint>,
    pub verdict: bool,
    pub criterion: Criterion,
}

fn split_points(
    p: &Pencil,
    domain_complement: &SubspaceBasis,
    codomain_complement: &SubspaceBasis,
    grid: &DiskGrid,
    tol: &TolerancePolicy,
) -> Result<Vec<SplitPoint>> {
    let (m, n) = p.shape();
    if domain_complement.ambient_dim() != n {
        return Err(Error::AmbientMismatch { left: n, right: domain_complement.ambient_dim() });
    }
    if codomain_complement.ambient_dim() != m {
        return Err(Error::AmbientMismatch { left: m, right: codomain_complement.ambient_dim() });
    }
    grid.points()
        .par_iter()
        .map(|&lambda| {
            let (kernel, range) = kernel_and_range(&p.at(lambda), tol)?;
            Ok(SplitPoint {
                lambda,
                domain_split: direct_sum_check(&kernel, domain_complement, tol)?,
                codomain_split: direct_sum_check(&range, codomain_complement, tol)?,
            })
        })
        .collect()
}

/// One pair `(E, F)` complementing `N(T − λS)` and `R(T − λS)` at every
/// grid point.
pub fn fixed_complements_check(
    p: &Pencil,
    c: &ComplementPair,
    grid: &DiskGrid,
    tol: &TolerancePolicy,
) -> Result<FixedComplementsReport> {
    let per_point = split_points(p, &c.e, &c.f, grid, tol)?;
    Ok(FixedComplementsReport {
        verdict: per_point.iter().all(|s| s.domain_split && s.codomain_split),
        per_point,
        criterion: Criterion::FixedComplements,
    })
}

/// `X = N(T − λS) ⊕ R(T⁺)` and `Y = R(T − λS) ⊕ N(T⁺)` for one inverse.
#[derive(Clone, Debug, Serialize)]
pub struct DirectSumCriteria {
    pub per_point: Vec<SplitPoint>,
    pub domain_split: bool,
    pub codomain_split: bool,
}

pub fn direct_sum_criteria(
    p: &Pencil,
    g: &GenInverse,
    grid: &DiskGrid,
    tol: &TolerancePolicy,
) -> Result<DirectSumCriteria> {
    check_base(p, g)?;
    let range = range_basis(g.tplus(), tol)?;
    let kernel = kernel_basis(g.tplus(), tol)?;
    let per_point = split_points(p, &range, &kernel, grid, tol)?;
    Ok(DirectSumCriteria {
        domain_split: per_point.iter().all(|s| s.domain_split),
        codomain_split: per_point.iter().all(|s| s.codomain_split),
        per_point,
    })
}

/// The same splittings required for every supplied generalized inverse.
#[derive(Clone, Debug, Serialize)]
pub struct ForAllCriteria {
    pub per_inverse: Vec<DirectSumCriteria>,
    pub domain_split_all: bool,
    pub codomain_split_all: bool,
}

pub fn direct_sum_criteria_for_all(
    p: &Pencil,
    inverses: &[GenInverse],
    grid: &DiskGrid,
    tol: &TolerancePolicy,
) -> Result<ForAllCriteria> {
    let per_inverse = inverses
        .iter()
        .map(|g| direct_sum_criteria(p, g, grid, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(ForAllCriteria {
        domain_split_all: per_inverse.iter().all(|c| c.domain_split),
        codomain_split_all: per_inverse.iter().all(|c| c.codomain_split),
        per_inverse,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuityPoint {
    pub lambda: C64,
    /// `‖(T − λS)⁺ − T⁺‖₂`
    pub deviation: f64,
    /// `‖P_λ − P₀‖₂ · ‖P₀‖₂` with `P_λ = I − (T − λS)⁺(T − λS)`
    pub projector_shift: f64,
    /// `|λ| · ‖T⁺‖₂ · ‖S‖₂`
    pub scaled_lambda: f64,
    /// Smallest singular value of `W = I + (P_λ − P₀)P₀`.
    pub w_min_singular: f64,
    /// `σ_min(W) > residual_tol · σ_max(W)`
    pub w_invertible: bool,
}

impl ContinuityPoint {
    /// Both smallness conditions that make `W` invertible and transfer
    /// continuity into transversality.
    pub fn hypotheses_hold(&self) -> bool {
        self.projector_shift < 1.0 && self.scaled_lambda < 1.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub per_point: Vec<ContinuityPoint>,
    pub max_deviation: f64,
    /// Hypotheses hold at every grid point.
    pub continuity_ok: bool,
    /// Transversality verdict with `T⁺ = family(0)`.
    pub existence_verdict: bool,
    /// `continuity_ok ⇒ existence_verdict`.
    pub consistent_with_existence: bool,
}

/// Continuity of a supplied family of generalized inverses at `0`, and the
/// existence verdict it implies.
///
/// Each `family(λ)` must be a generalized inverse of `T − λS`.
pub fn continuity_check<F>(
    p: &Pencil,
    family: F,
    grid: &DiskGrid,
    tol: &TolerancePolicy,
) -> Result<ContinuityReport>
where
    F: Fn(C64) -> CMat + Sync,
{
    let n = p.shape().1;
    let zero = C64::new(0.0, 0.0);
    let members = grid
        .points()
        .iter()
        .map(|&lambda| {
            let a = p.at(lambda);
            let b = family(lambda);
            let check = verify_gen_inverse(&a, &b, tol)?;
            if check.verdict != InverseVerdict::Generalized {
                return Err(Error::InvalidFamily {
                    lambda,
                    inner_residual: check.inner_residual,
                    outer_residual: check.outer_residual,
                });
            }
            Ok((lambda, a, b))
        })
        .collect::<Result<Vec<_>>>()?;

    let (_, t, tplus) = members.iter().find(|(l, _, _)| *l == zero).expect("grid contains 0");
    let g0 = GenInverse::user_supplied(t.clone(), tplus.clone(), tol)?;
    let p0 = CMat::identity(n) - g0.q();
    let p0_norm = op_norm2(&p0);
    let lambda_scale = op_norm2(g0.tplus()) * op_norm2(p.s());

    let per_point = members
        .par_iter()
        .map(|(lambda, a, b)| {
            let p_lambda = CMat::identity(n) - b * a;
            let shift = &p_lambda - &p0;
            let w = CMat::identity(n) + &shift * &p0;
            let sigma = crate::numerics::singular_values(&w)?;
            let w_min_singular = sigma.last().copied().unwrap_or(0.0);
            Ok(ContinuityPoint {
                lambda: *lambda,
                deviation: op_norm2(&(b - g0.tplus())),
                projector_shift: op_norm2(&shift) * p0_norm,
                scaled_lambda: lambda.norm() * lambda_scale,
                w_min_singular,
                // W is assembled from products of computed projectors, so its
                // null directions carry rounding well above the rank cutoff
                w_invertible: w_min_singular > tol.residual_tol * sigma[0],
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let existence = existence_check(p, &g0, grid, tol)?;
    let continuity_ok = per_point.iter().all(|c| c.hypotheses_hold());
    Ok(ContinuityReport {
        max_deviation: per_point.iter().map(|c| c.deviation).fold(0.0, f64::max),
        continuity_ok,
        existence_verdict: existence.verdict,
        consistent_with_existence: !continuity_ok || existence.verdict,
        per_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geninv::{complements_of, mp_inverse};
    use crate::resolvent::build_family;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn shear() -> Pencil {
        Pencil::new(
            CMat::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]),
            CMat::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]),
        )
        .unwrap()
    }

    fn spike() -> Pencil {
        Pencil::shifted(CMat::diag(&[1.0, 0.0])).unwrap()
    }

    fn mp(p: &Pencil) -> GenInverse {
        mp_inverse(p.t(), &tol()).unwrap()
    }

    #[test]
    fn existence_examples() {
        let p = shear();
        let grid = DiskGrid::standard(3.0).unwrap();
        assert!(existence_check(&p, &mp(&p), &grid, &tol()).unwrap().verdict);

        let p = spike();
        let grid = DiskGrid::new(0.1, [re(0.01)]).unwrap();
        let cert = existence_check(&p, &mp(&p), &grid, &tol()).unwrap();
        assert!(!cert.verdict);
        assert!(cert.per_point[0].holds && !cert.per_point[1].holds);

        let t = CMat::from_real_rows(&[[1.0, 2.0], [2.0, 4.0], [0.0, 1.0]]);
        let p = Pencil::new(t.clone(), CMat::zeros(3, 2)).unwrap();
        let cert = existence_check(&p, &mp(&p), &DiskGrid::standard(10.0).unwrap(), &tol()).unwrap();
        assert!(cert.verdict);
    }

    #[test]
    fn spike_axioms_fail_at_small_lambda() {
        let p = spike();
        let f = build_family(&p, &mp(&p), &tol()).unwrap();
        let grid = DiskGrid::new(0.5, [re(0.01)]).unwrap();
        let report = check_resolvent_axioms(&f, &grid).unwrap();
        assert!(!report.holds);
        let at = report.points.iter().find(|q| q.lambda == re(0.01)).unwrap();
        // ‖diag(0, 0.01)‖ / ‖diag(0.99, −0.01)‖
        assert!((at.inner_residual - 0.01 / 0.99).abs() < 1e-12);
        assert_eq!(report.points[0].inner_residual, 0.0);
        assert!(report.pairs.iter().filter(|q| q.lambda == q.mu).all(|q| q.residual == 0.0));
    }

    #[test]
    fn passing_family_satisfies_all_three_conditions() {
        let p = Pencil::new(CMat::diag(&[1.0, 1.0, 0.0]), CMat::diag(&[1.0, 2.0, 0.0])).unwrap();
        let f = build_family(&p, &mp(&p), &tol()).unwrap();
        let grid = f.default_grid();
        assert!(existence_check(&p, f.inverse(), &grid, &tol()).unwrap().verdict);
        let report = check_resolvent_axioms(&f, &grid).unwrap();
        assert!(report.holds && report.complete());
        assert_eq!(report.pairs.len(), 25 * 25);
    }

    #[test]
    fn out_of_radius_points_are_listed() {
        let p = spike();
        let f = build_family(&p, &mp(&p), &tol()).unwrap();
        let grid = DiskGrid::new(2.0, [re(1.5)]).unwrap();
        let report = check_resolvent_axioms(&f, &grid).unwrap();
        assert_eq!(report.out_of_radius, vec![re(1.5)]);
        assert!(!report.complete());
    }

    #[test]
    fn large_grids_sample_pairs_deterministically() {
        let p = Pencil::new(CMat::diag(&[1.0, 1.0, 0.0]), CMat::diag(&[1.0, 2.0, 0.0])).unwrap();
        let f = build_family(&p, &mp(&p), &tol()).unwrap();
        let grid = DiskGrid::with_point_count(0.2, 57).unwrap();
        let a = check_resolvent_axioms_seeded(&f, &grid, 7).unwrap();
        let b = check_resolvent_axioms_seeded(&f, &grid, 7).unwrap();
        assert_eq!(a.pairs.len(), PAIR_SAMPLE_SIZE);
        assert_eq!(a.pairs, b.pairs);
    }

    #[test]
    fn fixed_complement_examples() {
        let p = shear();
        let c = ComplementPair::new(SubspaceBasis::coordinate(2, &[0]), SubspaceBasis::coordinate(2, &[1]));
        let grid = DiskGrid::standard(5.0).unwrap();
        assert!(fixed_complements_check(&p, &c, &grid, &tol()).unwrap().verdict);

        let p = spike();
        let grid = DiskGrid::new(0.1, [re(0.05)]).unwrap();
        for c in [
            ComplementPair::new(SubspaceBasis::coordinate(2, &[0]), SubspaceBasis::coordinate(2, &[1])),
            ComplementPair::new(SubspaceBasis::whole(2), SubspaceBasis::zero(2)),
            ComplementPair::new(SubspaceBasis::whole(2), SubspaceBasis::coordinate(2, &[1])),
        ] {
            assert!(!fixed_complements_check(&p, &c, &grid, &tol()).unwrap().verdict);
        }

        let t = CMat::from_real_rows(&[[1.0, 1.0], [0.0, 0.0]]);
        let p = Pencil::new(t, CMat::zeros(2, 2)).unwrap();
        let c = complements_of(&mp(&p), &tol()).unwrap();
        assert!(fixed_complements_check(&p, &c, &grid, &tol()).unwrap().verdict);

        let bad = ComplementPair::new(SubspaceBasis::zero(3), SubspaceBasis::zero(2));
        assert!(fixed_complements_check(&p, &bad, &grid, &tol()).is_err());
    }

    #[test]
    fn direct_sum_examples() {
        let grid = DiskGrid::new(0.3, [re(0.1), C64::new(0.0, -0.2)]).unwrap();
        let p = shear();
        let d = direct_sum_criteria(&p, &mp(&p), &grid, &tol()).unwrap();
        assert!(d.domain_split && d.codomain_split);

        let p = spike();
        let d = direct_sum_criteria(&p, &mp(&p), &grid, &tol()).unwrap();
        assert!(!d.domain_split && !d.codomain_split);

        let p = Pencil::new(CMat::diag(&[1.0, 0.0]), CMat::zeros(2, 2)).unwrap();
        let d = direct_sum_criteria(&p, &mp(&p), &grid, &tol()).unwrap();
        assert!(d.domain_split && d.codomain_split);
    }

    #[test]
    fn for_all_flavour_over_two_inverses() {
        let p = shear();
        let g2 = GenInverse::user_supplied(
            p.t().clone(),
            CMat::from_real_rows(&[[1.0, 0.0], [1.0, 0.0]]),
            &tol(),
        )
        .unwrap();
        let grid = DiskGrid::standard(0.2).unwrap();
        let all = direct_sum_criteria_for_all(&p, &[mp(&p), g2], &grid, &tol()).unwrap();
        assert!(all.domain_split_all && all.codomain_split_all);
        assert_eq!(all.per_inverse.len(), 2);
    }

    #[test]
    fn continuity_of_the_explicit_family() {
        let p = shear();
        let f = build_family(&p, &mp(&p), &tol()).unwrap();
        let grid = DiskGrid::standard(0.5).unwrap();
        let r = continuity_check(&p, |l| f.evaluate(l).unwrap(), &grid, &tol()).unwrap();
        assert!(r.continuity_ok && r.existence_verdict && r.consistent_with_existence);
        assert!(r.per_point.iter().all(|c| c.w_invertible));
    }

    #[test]
    fn constant_pencil_gives_identity_w() {
        let t = CMat::from_real_rows(&[[2.0, 0.0, 1.0], [0.0, 0.0, 0.0]]);
        let p = Pencil::new(t.clone(), CMat::zeros(2, 3)).unwrap();
        let tplus = mp(&p).tplus().clone();
        let grid = DiskGrid::standard(1.0).unwrap();
        let r = continuity_check(&p, |_| tplus.clone(), &grid, &tol()).unwrap();
        assert!(r.per_point.iter().all(|c| c.projector_shift == 0.0 && c.w_min_singular > 1.0 - 1e-14));
        assert!(r.continuity_ok && r.existence_verdict);
    }

    #[test]
    fn discontinuous_mp_family_is_reported() {
        let p = spike();
        let grid = DiskGrid::standard(0.25).unwrap();
        let r = continuity_check(
            &p,
            |l| mp_inverse(&p.at(l), &tol()).unwrap().tplus().clone(),
            &grid,
            &tol(),
        )
        .unwrap();
        assert!(!r.continuity_ok && !r.existence_verdict && r.consistent_with_existence);
        // ‖diag(1/(1−λ) − 1, −1/λ)‖ ≥ 1/|λ| on the inner circle
        assert!(r.max_deviation >= 1.0 / (0.25 / 3.0) - 1e-9);
        // W = I − P₀ is singular; its null singular value is pure rounding
        assert!(r.per_point.iter().skip(1).all(|c| c.w_min_singular < 1e-14 && !c.w_invertible));
    }

    #[test]
    fn invalid_family_member_is_named() {
        let p = spike();
        let grid = DiskGrid::new(0.1, [re(0.05)]).unwrap();
        let t = p.t().clone();
        let err = continuity_check(&p, |_| t.clone(), &grid, &tol()).unwrap_err();
        assert!(matches!(err, Error::InvalidFamily { lambda, .. } if lambda == re(0.05)));
    }
}
