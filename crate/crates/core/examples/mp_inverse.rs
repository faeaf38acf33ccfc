//! Moore-Penrose inverse of a rank-deficient matrix, and a second
//! generalized inverse built from a different pair of complements.

use genres::geninv::{complements_of, geninv_from_complements, mp_inverse, verify_mp_axioms, ComplementPair};
use genres::numerics::op_norm2;
use genres::{CMat, SubspaceBasis, TolerancePolicy};

fn main() -> genres::Result<()> {
    let tol = TolerancePolicy::default();
    let t = CMat::from_real_rows(&[[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]]);

    let g = mp_inverse(&t, &tol)?;
    let axioms = verify_mp_axioms(&t, g.tplus(), &tol)?;
    println!("T† =\n{}", g.tplus());
    println!("MP axioms hold: {} (worst residual {:.1e})", axioms.holds, axioms.max_residual());

    let mp = complements_of(&g, &tol)?;
    println!("R(T†) has dim {}, N(T†) has dim {}", mp.e.dim(), mp.f.dim());

    // N(T) = span((2,-1,0), e3) and R(T) = span((1,2)), so e1 and e2 complement them
    let e = SubspaceBasis::span(&CMat::from_real_rows(&[[1.0], [0.0], [0.0]]), &tol)?;
    let f = SubspaceBasis::span(&CMat::from_real_rows(&[[0.0], [1.0]]), &tol)?;
    let other = geninv_from_complements(&t, &ComplementPair::new(e, f), &tol)?;
    println!("T⁺ for E = span(e1), F = span(e2):\n{}", other.tplus());
    println!("‖T⁺ − T†‖ = {:.3}", op_norm2(&(other.tplus() - g.tplus())));
    Ok(())
}
