//! Builds `G(λ) = T⁺(I − λST⁺)⁻¹` and checks it against its Neumann series
//! and the three resolvent conditions on a disk grid.

use genres::geninv::mp_inverse;
use genres::numerics::op_norm2;
use genres::resolvent::{build_family, check_resolvent_axioms, Pencil};
use genres::{CMat, TolerancePolicy, C64};

fn main() -> genres::Result<()> {
    let tol = TolerancePolicy::default();
    let t = CMat::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
    let s = CMat::from_real_rows(&[[0.5, 0.0, 0.0], [0.0, 0.25, 0.0]]);
    let p = Pencil::new(t, s)?;

    let g = mp_inverse(p.t(), &tol)?;
    let family = build_family(&p, &g, &tol)?;
    println!("family radius 1/‖ST⁺‖ = {:.3}", family.radius());

    let lambda = C64::new(0.4, -0.3);
    let direct = family.evaluate(lambda)?;
    let series = family.evaluate_neumann(lambda, 80)?;
    println!("G({lambda}) =\n{direct}");
    println!("closed form vs series: {:.1e}", op_norm2(&(&direct - &series)));

    let proj = family.projector_family(lambda)?;
    println!("P_λ, Q_λ idempotent: {}", proj.idempotent(&tol));

    let grid = family.default_grid();
    let axioms = check_resolvent_axioms(&family, &grid)?;
    println!(
        "{} points: AGA=A {:.1e}, GAG=G {:.1e}, resolvent identity {:.1e}, holds {}",
        grid.len(),
        axioms.max_inner,
        axioms.max_outer,
        axioms.max_identity,
        axioms.holds
    );
    Ok(())
}
