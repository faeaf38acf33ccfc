//! Scans a rectangle for points where rank(T − λS) drops.

use genres::criteria::{generalized_spectrum_scan, RegionGrid};
use genres::resolvent::Pencil;
use genres::{CMat, TolerancePolicy, C64};

fn main() -> genres::Result<()> {
    let tol = TolerancePolicy::default();
    let t = CMat::rect_diag(3, 3, &[C64::new(1.0, 0.0), C64::new(-0.5, 0.5), C64::new(0.0, -1.0)]);
    let p = Pencil::shifted(t)?;
    let region = RegionGrid::new(-1.0, 1.0, -1.0, 1.0, 9)?;
    let scan = generalized_spectrum_scan(&p, &region, &tol)?;
    for pt in scan.iter().filter(|pt| pt.is_drop_point) {
        println!("rank drops to {} at {}", pt.rank, pt.lambda);
    }
    println!("{} points scanned, {} marginal", scan.len(), scan.iter().filter(|pt| pt.marginal).count());
    Ok(())
}
