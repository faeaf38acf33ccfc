//! Generalized resolvents `G(λ) = T⁺(I − λST⁺)⁻¹` of a linear pencil
//! `λ ↦ T − λS`, the three resolvent conditions, and the existence tests:
//! transversality, direct sums, fixed complements and continuity.
//!
//! Every verdict is a statement about the sampled grid points only. A grid
//! that passes says nothing about points between the samples.

mod checks;
mod family;

use serde::Serialize;

pub use checks::{
    check_resolvent_axioms, check_resolvent_axioms_seeded, continuity_check, direct_sum_criteria,
    direct_sum_criteria_for_all, existence_check, fixed_complements_check, AxiomReport,
    ContinuityPoint, ContinuityReport, Criterion, DirectSumCriteria, ExistenceCertificate,
    FixedComplementsReport, ForAllCriteria, PairResidual, PointAxioms, PointVerdict, SplitPoint,
    DEFAULT_PAIR_SEED, FULL_PAIR_LIMIT, PAIR_SAMPLE_SIZE,
};
pub use family::{build_family, ProjectorPair, ProjectorReport, ResolventFamily, RADIUS_CAP, RADIUS_EPS};

use crate::error::{Error, Result};
use crate::numerics::{CMat, C64};

/// The pair `(T, S)` defining `λ ↦ T − λS`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    t: CMat,
    s: CMat,
}

impl Pencil {
    pub fn new(t: CMat, s: CMat) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if t.shape() != s.shape() {
            return Err(Error::ShapeMismatch {
                context: "pencil S",
                expected: t.shape(),
                found: s.shape(),
            });
        }
        Ok(Pencil { t, s })
    }

    /// `λ ↦ T − λI`.
    pub fn shifted(t: CMat) -> Result<Self> {
        if t.rows() != t.cols() {
            return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
        }
        let n = t.rows();
        Self::new(t, CMat::identity(n))
    }

    pub fn t(&self) -> &CMat {
        &self.t
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }

    pub fn shape(&self) -> (usize, usize) {
        self.t.shape()
    }

    /// `T − λS`
    pub fn at(&self, lambda: C64) -> CMat {
        if lambda == C64::new(0.0, 0.0) {
            return self.t.clone();
        }
        &self.t - self.s.scale(lambda)
    }
}

/// Sample points in the disk `|λ| ≤ radius`; `0` is always the first point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskGrid {
    radius: f64,
    points: Vec<C64>,
}

/// Points per circle in the default layout.
pub const POINTS_PER_CIRCLE: usize = 8;

/// Default total point count: three circles of eight plus the origin.
pub const DEFAULT_GRID_POINTS: usize = 25;

impl DiskGrid {
    pub fn new(radius: f64, points: impl IntoIterator<Item = C64>) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidGrid(format!("radius must be positive and finite, got {radius}")));
        }
        let zero = C64::new(0.0, 0.0);
        let mut pts = vec![zero];
        for p in points {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(Error::InvalidGrid(format!("non-finite point {p}")));
            }
            if p.norm() > radius * (1.0 + 1e-12) {
                return Err(Error::InvalidGrid(format!("point {p} lies outside radius {radius}")));
            }
            if p != zero {
                pts.push(p);
            }
        }
        Ok(DiskGrid { radius, points: pts })
    }

    /// `count` points: the origin, then circles of [`POINTS_PER_CIRCLE`]
    /// points at evenly spaced radii, the outermost at `radius`.
    pub fn with_point_count(radius: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidGrid("grid needs at least one point".into()));
        }
        let rest = count - 1;
        let circles = rest.div_ceil(POINTS_PER_CIRCLE);
        let mut pts = Vec::with_capacity(rest);
        for c in 1..=circles {
            let r = radius * c as f64 / circles as f64;
            let on_circle = POINTS_PER_CIRCLE.min(rest - pts.len());
            for k in 0..on_circle {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / on_circle as f64;
                pts.push(C64::from_polar(r, theta));
            }
        }
        Self::new(radius, pts)
    }

    /// The default layout: 25 points on three circles.
    pub fn standard(radius: f64) -> Result<Self> {
        Self::with_point_count(radius, DEFAULT_GRID_POINTS)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
