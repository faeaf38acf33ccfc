//! Command-line surface: `analyze`, `mp-check`, `spectrum`, `perturb` and
//! `version`.
//!
//! Exit codes: `0` the checked property holds, `1` it does not, `2` usage or
//! input error, `3` internal contradiction between independent checks.

pub mod matrix_file;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use matrix_file::{load_matrix, parse_matrix, save_matrix, LoadError, LoadedMatrix, MatrixFile};
pub use report::{
    AnalysisReport, AxiomSummary, CriterionVerdicts, GridSummary, InputDigest, MpCheckReport,
    PerturbReport,
};

use crate::criteria::{
    finite_rank_criterion, fredholm_criterion, generalized_spectrum_scan, mp_resolvent_characterization,
    RegionGrid,
};
use crate::error::Error;
use crate::geninv::{mp_inverse, verify_gen_inverse};
use crate::numerics::{CMat, TolerancePolicy};
use crate::perturbation::{perturbed_inverse, smallness, splitting_checks};
use crate::resolvent::{
    build_family, check_resolvent_axioms_seeded, existence_check, DiskGrid, Pencil, DEFAULT_GRID_POINTS,
    DEFAULT_PAIR_SEED,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONTRADICTION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "genres", version, about = "Generalized resolvents of linear pencils T - λS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Existence of a generalized resolvent near 0 and its axioms.
    Analyze(PencilArgs),
    /// Whether the pointwise Moore-Penrose inverse is a generalized resolvent.
    MpCheck(PencilArgs),
    /// Rank of T - λS over a rectangular region, as CSV.
    Spectrum(SpectrumArgs),
    /// The perturbed inverse of T̄ built from the Moore-Penrose inverse of T.
    Perturb(PerturbArgs),
    /// Print the version.
    Version,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Relative singular value cutoff [default: machine epsilon]
    #[arg(long)]
    rank_rtol: Option<f64>,
    /// Relative residual bound [default: 1e-9]
    #[arg(long)]
    residual_tol: Option<f64>,
    /// Subspace gap bound [default: 1e-8]
    #[arg(long)]
    gap_tol: Option<f64>,
}

impl TolArgs {
    fn policy(&self) -> Result<TolerancePolicy, Failure> {
        let d = TolerancePolicy::default();
        let p = TolerancePolicy {
            rank_rtol: self.rank_rtol.unwrap_or(d.rank_rtol),
            residual_tol: self.residual_tol.unwrap_or(d.residual_tol),
            gap_tol: self.gap_tol.unwrap_or(d.gap_tol),
        };
        for (name, v) in [("rank-rtol", p.rank_rtol), ("residual-tol", p.residual_tol), ("gap-tol", p.gap_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::usage(format!("--{name} must be positive and finite, got {v}")));
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct PencilArgs {
    /// Matrix file for T.
    t: PathBuf,
    /// Matrix file for S.
    s: PathBuf,
    /// Disk radius [default: half the family radius]
    #[arg(long)]
    grid_radius: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid_points: usize,
    /// Seed for the pair subsample on large grids.
    #[arg(long, default_value_t = DEFAULT_PAIR_SEED)]
    seed: u64,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SpectrumArgs {
    t: PathBuf,
    s: PathBuf,
    #[arg(long, default_value_t = -1.0)]
    re_min: f64,
    #[arg(long, default_value_t = 1.0)]
    re_max: f64,
    #[arg(long, default_value_t = -1.0)]
    im_min: f64,
    #[arg(long, default_value_t = 1.0)]
    im_max: f64,
    /// Samples per axis.
    #[arg(long, default_value_t = 21)]
    steps: usize,
    #[command(flatten)]
    tol: TolArgs,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PerturbArgs {
    /// Matrix file for T.
    t: PathBuf,
    /// Matrix file for the perturbed operator T̄.
    tbar: PathBuf,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EmptyMatrix
            | Error::NonFinite { .. }
            | Error::ShapeMismatch { .. }
            | Error::AmbientMismatch { .. }
            | Error::NotSquare { .. }
            | Error::InvalidGrid(_)
            | Error::EmptyRegion => EXIT_USAGE,
            _ => EXIT_CONTRADICTION,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, A>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a, stdout),
        Command::MpCheck(a) => mp_check(&a, stdout),
        Command::Spectrum(a) => spectrum(&a, stdout),
        Command::Perturb(a) => perturb(&a, stdout),
        Command::Version => writeln!(stdout, "genres {}", env!("CARGO_PKG_VERSION"))
            .map(|_| EXIT_HOLDS)
            .map_err(|e| Failure::usage(e.to_string())),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path, role: &'static str) -> Result<(CMat, InputDigest), Failure> {
    let m = load_matrix(path)?;
    let (rows, cols) = m.matrix.shape();
    Ok((m.matrix, InputDigest { role, rows, cols, sha256: m.sha256 }))
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure::usage(e.to_string())),
    }
}

fn emit_json<R: Serialize>(report: &R, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    emit(&text, out, stdout)
}

fn elapsed(start: Instant, on: bool) -> Option<f64> {
    on.then(|| start.elapsed().as_secs_f64() * 1e3)
}

/// The analysis grid: inside the Moore-Penrose family radius, half of it by
/// default.
fn pencil_grid(a: &PencilArgs, family_radius: f64) -> Result<DiskGrid, Failure> {
    let radius = match a.grid_radius {
        Some(r) if !(r.is_finite() && r > 0.0) => {
            return Err(Failure::usage(format!("--grid-radius must be positive, got {r}")))
        }
        Some(r) if r >= family_radius => {
            return Err(Failure::usage(format!(
                "--grid-radius {r} reaches the family radius {family_radius}; G(λ) is undefined there"
            )))
        }
        Some(r) => r,
        None => family_radius / 2.0,
    };
    Ok(DiskGrid::with_point_count(radius, a.grid_points)?)
}

fn load_pencil(a: &PencilArgs) -> Result<(Pencil, Vec<InputDigest>), Failure> {
    let (t, dt) = load(&a.t, "T")?;
    let (s, ds) = load(&a.s, "S")?;
    Ok((Pencil::new(t, s)?, vec![dt, ds]))
}

fn analyze(a: &PencilArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let start = Instant::now();
    let tol = a.tol.policy()?;
    let (pencil, inputs) = load_pencil(a)?;
    let g = mp_inverse(pencil.t(), &tol)?;
    let family = build_family(&pencil, &g, &tol)?;
    let grid = pencil_grid(a, family.radius())?;

    let existence = existence_check(&pencil, &g, &grid, &tol)?;
    let axioms = check_resolvent_axioms_seeded(&family, &grid, a.seed)?;
    let finite_rank = finite_rank_criterion(&pencil, &grid, &tol)?;
    let fredholm = fredholm_criterion(&pencil, &grid, &tol)?;

    let exists = existence.verdict;
    let verified = axioms.holds && axioms.complete();
    let exit_code = match (exists, verified) {
        (true, true) => EXIT_HOLDS,
        (true, false) => EXIT_CONTRADICTION,
        (false, _) => EXIT_FAILS,
    };
    let marginal_points = finite_rank
        .profile
        .points
        .iter()
        .zip(&finite_rank.profile.marginal)
        .filter_map(|(&l, &m)| m.then_some(l))
        .collect();
    let verdicts = CriterionVerdicts {
        transversality: exists,
        finite_rank: finite_rank.verdict,
        fredholm: fredholm.verdict,
        agree: exists == finite_rank.verdict && exists == fredholm.verdict,
    };
    let report = AnalysisReport {
        command: "analyze",
        inputs,
        policy: tol,
        grid: GridSummary { radius: grid.radius(), points: grid.len(), seed: a.seed },
        family_radius: family.radius(),
        resolvent_exists: exists,
        axioms_verified: verified,
        verdicts,
        axioms: (&axioms).into(),
        existence,
        finite_rank,
        fredholm,
        marginal_points,
        exit_code,
        elapsed_ms: elapsed(start, a.out.timing),
    };
    emit_json(&report, a.out.out.as_deref(), stdout)?;
    Ok(exit_code)
}

fn mp_check(a: &PencilArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let start = Instant::now();
    let tol = a.tol.policy()?;
    let (pencil, inputs) = load_pencil(a)?;
    let g = mp_inverse(pencil.t(), &tol)?;
    let family = build_family(&pencil, &g, &tol)?;
    let grid = pencil_grid(a, family.radius())?;
    let detail = mp_resolvent_characterization(&pencil, &grid, &tol)?;

    let exit_code = if !detail.contract_holds() {
        EXIT_CONTRADICTION
    } else if detail.constancy_verdict {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    };
    let report = MpCheckReport {
        command: "mp-check",
        inputs,
        policy: tol,
        grid: GridSummary { radius: grid.radius(), points: grid.len(), seed: a.seed },
        constancy_verdict: detail.constancy_verdict,
        identity_verdict: detail.identity_verdict,
        verdicts_agree: detail.contract_holds(),
        max_kernel_gap: detail.max_kernel_gap(),
        max_range_gap: detail.max_range_gap(),
        marginal_points: detail
            .points
            .iter()
            .zip(&detail.marginal)
            .filter_map(|(&l, &m)| m.then_some(l))
            .collect(),
        detail,
        exit_code,
        elapsed_ms: elapsed(start, a.out.timing),
    };
    emit_json(&report, a.out.out.as_deref(), stdout)?;
    Ok(exit_code)
}

fn spectrum(a: &SpectrumArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let tol = a.tol.policy()?;
    let region = RegionGrid::new(a.re_min, a.re_max, a.im_min, a.im_max, a.steps)?;
    let (t, _) = load(&a.t, "T")?;
    let (s, _) = load(&a.s, "S")?;
    let scan = generalized_spectrum_scan(&Pencil::new(t, s)?, &region, &tol)?;
    let mut csv = String::from("re,im,rank,is_drop\n");
    for p in &scan {
        csv.push_str(&format!("{},{},{},{}\n", p.lambda.re, p.lambda.im, p.rank, p.is_drop_point));
    }
    emit(&csv, a.out.as_deref(), stdout)?;
    Ok(EXIT_HOLDS)
}

fn perturb(a: &PerturbArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let start = Instant::now();
    let tol = a.tol.policy()?;
    let (t, dt) = load(&a.t, "T")?;
    let (tbar, db) = load(&a.tbar, "T̄")?;
    // same-shape check before any factorization work
    Pencil::new(t.clone(), tbar.clone())?;
    let g = mp_inverse(&t, &tol)?;
    let small = smallness(&g, &tbar)?;

    let mut report = PerturbReport {
        command: "perturb",
        inputs: vec![dt, db],
        policy: tol,
        smallness: small,
        classification: None,
        verify_verdict: None,
        inner_residual: None,
        outer_residual: None,
        formula_gap: None,
        b: None,
        splitting: None,
        exit_code: EXIT_FAILS,
        elapsed_ms: None,
    };
    if small < 1.0 {
        let r = perturbed_inverse(&g, &tbar, &tol)?;
        let check = verify_gen_inverse(&tbar, &r.b, &tol)?;
        let splitting = splitting_checks(&tbar, &g, &tol)?;
        let (rows, cols) = r.b.shape();
        report.classification = Some(r.classification);
        report.verify_verdict = Some(check.verdict);
        report.inner_residual = Some(r.inner_residual);
        report.outer_residual = Some(r.outer_residual);
        report.formula_gap = Some(r.formula_gap);
        report.b = Some((0..rows).map(|i| (0..cols).map(|j| r.b.get(i, j)).collect()).collect());
        report.exit_code = if splitting.all_agree() { EXIT_HOLDS } else { EXIT_CONTRADICTION };
        report.splitting = Some(splitting);
    }
    report.elapsed_ms = elapsed(start, a.out.timing);
    emit_json(&report, a.out.out.as_deref(), stdout)?;
    Ok(report.exit_code)
}
