//! Whether `λ ↦ (T − λS)†` stays close to T† near 0, with the invertibility
//! of the surrogate `W = I + (P_λ − P₀)P₀`.

use genres::geninv::mp_inverse;
use genres::resolvent::{continuity_check, DiskGrid, Pencil};
use genres::{CMat, TolerancePolicy};

fn main() -> genres::Result<()> {
    let tol = TolerancePolicy::default();
    let grid = DiskGrid::standard(0.1)?;
    let pencils = [
        ("constant rank", Pencil::new(CMat::diag(&[1.0, 0.0]), CMat::diag(&[0.5, 0.0]))?),
        ("rank jumps", Pencil::shifted(CMat::diag(&[1.0, 0.0]))?),
    ];
    for (name, p) in &pencils {
        let family = |l| mp_inverse(&p.at(l), &tol).expect("finite input").tplus().clone();
        let r = continuity_check(p, family, &grid, &tol)?;
        let w_min = r.per_point.iter().map(|c| c.w_min_singular).fold(f64::INFINITY, f64::min);
        println!(
            "{name}: max ‖(T − λS)† − T†‖ = {:.3}, continuous {}, min σ(W) = {:.1e}, consistent with existence test {}",
            r.max_deviation, r.continuity_ok, w_min, r.consistent_with_existence
        );
    }
    Ok(())
}
