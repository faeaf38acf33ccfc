use genres::criteria::{invertibility_corollary, mp_resolvent_characterization};
use genres::resolvent::{DiskGrid, Pencil};
use genres::{CMat, TolerancePolicy, C64};

fn main() -> genres::Result<()> {
    let tol = TolerancePolicy::default();

    // (T − λS)† is a resolvent exactly when its kernel and range stay put
    let fixed = Pencil::new(CMat::diag(&[1.0, 1.0, 0.0]), CMat::diag(&[1.0, 2.0, 0.0]))?;
    let moving = Pencil::shifted(CMat::diag(&[1.0, 0.0]))?;
    let grid = DiskGrid::new(0.3, vec![C64::new(0.0, 0.0), C64::new(0.01, 0.0), C64::new(0.02, 0.0), C64::new(0.0, 0.1)])?;
    for (name, p) in [("fixed support", &fixed), ("moving kernel", &moving)] {
        let r = mp_resolvent_characterization(p, &grid, &tol)?;
        println!(
            "{name}: subspaces constant {}, identity holds {}, max kernel gap {:.2}, max identity residual {:.1e}",
            r.constancy_verdict,
            r.identity_verdict,
            r.max_kernel_gap(),
            r.max_identity_residual
        );
    }

    let t = CMat::from_real_rows(&[[2.0, 1.0], [0.0, 3.0]]);
    let inv = invertibility_corollary(&t, &DiskGrid::standard(0.2)?, &tol)?;
    println!(
        "invertible T: MP resolvent {}, classical match {:?}, agree {}",
        inv.mp_resolvent_ok,
        inv.classical_match,
        inv.agree()
    );
    Ok(())
}
