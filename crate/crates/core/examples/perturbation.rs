//! `B = (I + T⁺(T̄ − T))⁻¹T⁺` for a small perturbation, and the four
//! equivalent tests for whether B is a generalized inverse of T̄.

use genres::geninv::mp_inverse;
use genres::perturbation::{perturbed_inverse, splitting_checks};
use genres::{CMat, TolerancePolicy};

fn main() -> genres::Result<()> {
    let tol = TolerancePolicy::default();
    let t = CMat::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]);
    let g = mp_inverse(&t, &tol)?;

    for (name, tbar) in [
        ("inside the support", CMat::from_real_rows(&[[1.1, 0.0], [0.0, 0.0]])),
        ("switches on a new direction", CMat::from_real_rows(&[[1.0, 0.0], [0.0, 0.1]])),
    ] {
        let r = perturbed_inverse(&g, &tbar, &tol)?;
        let checks = splitting_checks(&tbar, &g, &tol)?;
        println!("T̄ {name}:");
        println!("  smallness {:.2}, classification {:?}", r.smallness, r.classification);
        println!("  B =\n{}", r.b);
        println!(
            "  inner residual {:.1e}, outer residual {:.1e}, splittings agree: {}",
            r.inner_residual,
            r.outer_residual,
            checks.all_agree()
        );
    }
    Ok(())
}
