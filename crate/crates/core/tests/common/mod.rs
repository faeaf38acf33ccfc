//! Seeded random matrices and pencils shared by the integration tests.

#![allow(dead_code)]

use genres::numerics::op_norm2;
use genres::resolvent::Pencil;
use genres::{CMat, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix(rng: &mut impl Rng, m: usize, n: usize) -> CMat {
    let mut out = DMatrix::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            out[(i, j)] = gaussian(rng);
        }
    }
    CMat::from_matrix(out).unwrap()
}

/// Haar-distributed unitary: QR of a complex Gaussian with the phases of
/// `diag(R)` divided out.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMat {
    let qr = gaussian_matrix(rng, n, n).into_matrix().qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    CMat::from_matrix(q).unwrap()
}

/// Complex scalar with modulus in `[lo, hi]` and uniform phase.
pub fn scalar_in(rng: &mut impl Rng, lo: f64, hi: f64) -> C64 {
    let r = rng.random_range(lo..=hi);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, theta)
}

/// `U·D·Vᴴ` for random unitaries.
pub fn sandwich(u: &CMat, d: &CMat, v: &CMat) -> CMat {
    u * d * v.adjoint()
}

/// Random `m × n` matrix of exact rank `r` with singular values in `[0.5, 2]`.
pub fn random_rank(rng: &mut impl Rng, m: usize, n: usize, r: usize) -> CMat {
    let u = random_unitary(rng, m);
    let v = random_unitary(rng, n);
    let d: Vec<C64> = (0..r).map(|_| scalar_in(rng, 0.5, 2.0)).collect();
    sandwich(&u, &CMat::rect_diag(m, n, &d), &v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `U·(D₀ − λD₁)·Vᴴ` with `D₁` supported inside the support of `D₀`.
    ConstantSupport,
    /// `S` maps into `R(T)` but moves the kernel.
    RotatingKernel,
    /// As `ConstantSupport`, plus one diagonal entry outside the support of
    /// `D₀` switched on by `D₁`.
    SwitchedOn,
    /// Rank-deficient `T` with a Gaussian `S`.
    GenericS,
}

pub struct Case {
    pub pencil: Pencil,
    pub rank: usize,
    pub shape: Shape,
    /// Whether a generalized resolvent exists near `0`.
    pub exists: bool,
    /// Whether kernel and range of `T − λS` stay fixed.
    pub subspaces_fixed: bool,
}

pub fn constant_support(rng: &mut impl Rng, m: usize, n: usize, r: usize) -> Case {
    let u = random_unitary(rng, m);
    let v = random_unitary(rng, n);
    let d0: Vec<C64> = (0..r).map(|_| scalar_in(rng, 0.5, 2.0)).collect();
    let d1: Vec<C64> = (0..r).map(|_| scalar_in(rng, 0.0, 1.0)).collect();
    Case {
        pencil: Pencil::new(
            sandwich(&u, &CMat::rect_diag(m, n, &d0), &v),
            sandwich(&u, &CMat::rect_diag(m, n, &d1), &v),
        )
        .unwrap(),
        rank: r,
        shape: Shape::ConstantSupport,
        exists: true,
        subspaces_fixed: true,
    }
}

pub fn switched_on(rng: &mut impl Rng, m: usize, n: usize, r: usize) -> Case {
    assert!(r < m.min(n));
    let u = random_unitary(rng, m);
    let v = random_unitary(rng, n);
    let d0: Vec<C64> = (0..r).map(|_| scalar_in(rng, 0.5, 2.0)).collect();
    let mut d1: Vec<C64> = (0..r).map(|_| scalar_in(rng, 0.0, 1.0)).collect();
    d1.push(scalar_in(rng, 0.5, 1.0));
    Case {
        pencil: Pencil::new(
            sandwich(&u, &CMat::rect_diag(m, n, &d0), &v),
            sandwich(&u, &CMat::rect_diag(m, n, &d1), &v),
        )
        .unwrap(),
        rank: r,
        shape: Shape::SwitchedOn,
        exists: false,
        subspaces_fixed: false,
    }
}

pub fn rotating_kernel(rng: &mut impl Rng, m: usize, n: usize, r: usize) -> Case {
    assert!(r >= 1 && r < n);
    let u = random_unitary(rng, m);
    let v = random_unitary(rng, n);
    let d0: Vec<C64> = (0..r).map(|_| scalar_in(rng, 0.5, 2.0)).collect();
    // rows of the inner block outside the support stay zero
    let mut inner = DMatrix::zeros(m, n);
    for i in 0..r {
        for j in 0..n {
            inner[(i, j)] = gaussian(rng) * 0.5;
        }
    }
    let s = sandwich(&u, &CMat::from_matrix(inner).unwrap(), &v);
    Case {
        pencil: Pencil::new(sandwich(&u, &CMat::rect_diag(m, n, &d0), &v), s).unwrap(),
        rank: r,
        shape: Shape::RotatingKernel,
        exists: true,
        subspaces_fixed: false,
    }
}

pub fn generic_s(rng: &mut impl Rng, m: usize, n: usize, r: usize) -> Case {
    assert!(r < m.min(n));
    Case {
        pencil: Pencil::new(random_rank(rng, m, n, r), gaussian_matrix(rng, m, n)).unwrap(),
        rank: r,
        shape: Shape::GenericS,
        exists: false,
        subspaces_fixed: false,
    }
}

/// A random pencil of any shape with dimensions in `dims`.
pub fn any_case(rng: &mut impl Rng, dims: std::ops::RangeInclusive<usize>) -> Case {
    let m = rng.random_range(dims.clone());
    let n = rng.random_range(dims);
    let k = m.min(n);
    match rng.random_range(0..4) {
        0 => {
            let r = rng.random_range(0..=k);
            constant_support(rng, m, n, r)
        }
        1 if k >= 2 || (k == 1 && n > 1) => {
            let r = rng.random_range(1..=k.min(n - 1));
            rotating_kernel(rng, m, n, r)
        }
        2 => {
            let r = rng.random_range(0..k);
            switched_on(rng, m, n, r)
        }
        _ => {
            let r = rng.random_range(0..k);
            generic_s(rng, m, n, r)
        }
    }
}

/// Disk radius on which pointwise transversality reduces to rank
/// constancy for every listed inverse: half of `1 / (‖S‖·max ‖T⁺‖)`.
pub fn web_radius(s: &CMat, tplus_norms: &[f64]) -> f64 {
    let scale = op_norm2(s) * tplus_norms.iter().copied().fold(0.0, f64::max);
    if scale > 0.0 {
        (0.5 / scale).min(1.0)
    } else {
        1.0
    }
}

/// A generalized inverse of `t` built from random complements
/// `X = N(T) ⊕ E`, `Y = R(T) ⊕ F`.
pub fn random_complement_inverse(
    rng: &mut impl Rng,
    t: &CMat,
    tol: &genres::TolerancePolicy,
) -> genres::geninv::GenInverse {
    use genres::geninv::{geninv_from_complements, ComplementPair};
    use genres::numerics::numerical_rank;
    use genres::SubspaceBasis;
    let r = numerical_rank(t, tol).unwrap();
    let (m, n) = t.shape();
    let e = match r {
        0 => SubspaceBasis::zero(n),
        _ => SubspaceBasis::span(&gaussian_matrix(rng, n, r), tol).unwrap(),
    };
    let f = if r == m {
        SubspaceBasis::zero(m)
    } else {
        SubspaceBasis::span(&gaussian_matrix(rng, m, m - r), tol).unwrap()
    };
    geninv_from_complements(t, &ComplementPair::new(e, f), tol).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaKind {
    /// Unstructured; generically raises the rank.
    Generic,
    /// Acts only inside the singular support of `T`.
    InsideSupport,
    /// Maps into `R(T)`.
    IntoRange,
}

pub struct PerturbationCase {
    pub t: CMat,
    pub tbar: CMat,
    pub kind: DeltaKind,
    /// Target value of `‖T†‖·‖ΔT‖`.
    pub target: f64,
}

/// `T` of random rank with `‖T†‖‖ΔT‖ = target < max_smallness`.
pub fn perturbation_case(
    rng: &mut impl Rng,
    dims: std::ops::RangeInclusive<usize>,
    max_smallness: f64,
) -> PerturbationCase {
    let m = rng.random_range(dims.clone());
    let n = rng.random_range(dims);
    let r = rng.random_range(1..=m.min(n));
    let u = random_unitary(rng, m);
    let v = random_unitary(rng, n);
    let d: Vec<C64> = (0..r).map(|_| scalar_in(rng, 0.5, 2.0)).collect();
    let sigma_min = d.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let t = sandwich(&u, &CMat::rect_diag(m, n, &d), &v);

    let kind = match rng.random_range(0..3) {
        0 => DeltaKind::Generic,
        1 => DeltaKind::InsideSupport,
        _ => DeltaKind::IntoRange,
    };
    let mut inner = gaussian_matrix(rng, m, n).into_matrix();
    for i in 0..m {
        for j in 0..n {
            let keep = match kind {
                DeltaKind::Generic => true,
                DeltaKind::InsideSupport => i < r && j < r,
                DeltaKind::IntoRange => i < r,
            };
            if !keep {
                inner[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    let x = sandwich(&u, &CMat::from_matrix(inner).unwrap(), &v);
    let target = rng.random_range(0.01..max_smallness);
    // ‖T†‖ = 1/σ_min
    let delta = x.scale(C64::new(target * sigma_min / op_norm2(&x), 0.0));
    PerturbationCase { tbar: &t + &delta, t, kind, target }
}

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Pencils shipped in `fixtures/` as `(T, S)` file names.
pub const EXAMPLE_PENCILS: &[(&str, &str)] = &[
    ("shear_t.json", "shear_s.json"),
    ("diag110.json", "diag120.json"),
    ("spike_t.json", "identity2.json"),
    ("diag12.json", "identity2.json"),
    ("complex_t.json", "complex_s.json"),
];

/// Expected exit code per invocation; file arguments are fixture names.
pub const EXIT_TABLE: &[(&[&str], i32)] = &[
    (&["analyze", "shear_t.json", "shear_s.json"], 0),
    (&["analyze", "diag110.json", "diag120.json"], 0),
    (&["analyze", "spike_t.json", "identity2.json"], 1),
    (&["analyze", "diag12.json", "identity2.json"], 0),
    (&["analyze", "complex_t.json", "complex_s.json"], 0),
    (&["analyze", "spike_t.json", "identity3.json"], 2),
    (&["analyze", "corrupted.json", "identity2.json"], 2),
    (&["mp-check", "diag110.json", "diag120.json"], 0),
    (&["mp-check", "spike_t.json", "identity2.json"], 1),
    (&["mp-check", "shear_t.json", "shear_s.json"], 1),
    (&["mp-check", "diag12.json", "identity2.json"], 0),
    (&["mp-check", "complex_t.json", "complex_s.json"], 0),
    (&["mp-check", "corrupted.json", "identity2.json"], 2),
    (&["spectrum", "diag12.json", "identity2.json", "--re-min", "-3", "--re-max", "3", "--im-min", "-3", "--im-max", "3", "--steps", "61"], 0),
    (&["spectrum", "shear_t.json", "shear_s.json"], 0),
    (&["spectrum", "diag12.json", "identity2.json", "--steps", "0"], 2),
    (&["perturb", "spike_t.json", "tbar_generalized.json"], 0),
    (&["perturb", "spike_t.json", "tbar_outer.json"], 0),
    (&["perturb", "spike_t.json", "tbar_large.json"], 1),
    (&["perturb", "spike_t.json", "identity3.json"], 2),
    (&["version"], 0),
];

/// Replaces fixture names in `args` with full paths.
pub fn resolve_args(args: &[&str]) -> Vec<String> {
    args.iter()
        .map(|a| if a.ends_with(".json") && !a.contains('/') { fixture(a) } else { a.to_string() })
        .collect()
}
