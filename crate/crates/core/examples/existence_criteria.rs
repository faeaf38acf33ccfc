//! Runs every existence test on two pencils: one where a generalized
//! resolvent exists and one where the rank of T − λS jumps.

use genres::criteria::{finite_rank_criterion, fredholm_criterion, semi_fredholm_criterion};
use genres::geninv::{complements_of, mp_inverse};
use genres::resolvent::{direct_sum_criteria, existence_check, fixed_complements_check, DiskGrid, Pencil};
use genres::{CMat, TolerancePolicy};

fn report(name: &str, p: &Pencil, tol: &TolerancePolicy) -> genres::Result<()> {
    let g = mp_inverse(p.t(), tol)?;
    let grid = DiskGrid::standard(0.25)?;
    let sums = direct_sum_criteria(p, &g, &grid, tol)?;
    println!("{name}");
    println!("  transversality      {}", existence_check(p, &g, &grid, tol)?.verdict);
    println!("  direct sums         {} / {}", sums.domain_split, sums.codomain_split);
    println!("  fixed complements   {}", fixed_complements_check(p, &complements_of(&g, tol)?, &grid, tol)?.verdict);
    println!("  rank constancy      {}", finite_rank_criterion(p, &grid, tol)?.verdict);
    println!("  Fredholm            {}", fredholm_criterion(p, &grid, tol)?.verdict);
    println!("  semi-Fredholm       {}", semi_fredholm_criterion(p, &grid, tol)?.verdict);
    Ok(())
}

fn main() -> genres::Result<()> {
    let tol = TolerancePolicy::default();
    let shear = Pencil::new(
        CMat::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]),
        CMat::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]),
    )?;
    report("shear: T = [[0,1],[0,0]], S = e1e1ᴴ", &shear, &tol)?;

    let spike = Pencil::shifted(CMat::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]))?;
    report("spike: T = diag(1,0), S = I", &spike, &tol)
}
