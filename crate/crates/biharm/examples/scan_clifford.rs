//! Root-find the biharmonic members of the product family H¹(r) × H²(s)
//! (r² + s² = 1) in H⁴₁(1): bisection on the CMC objective |B|² - mc finds
//! r = 1/√2 (proper, t = 1) and r = 1/√3 (maximal, t = 2), matching the
//! exact rational roots of the quadratic in t = s²/r².

use biharm::biharmonic::{clifford_quadratic, scan_family, ROOT_TOL};
use biharm::{Family, GridSpec};

fn main() -> biharm::Result<()> {
    for root in clifford_quadratic(1, 2)? {
        println!("quadratic root t = {} -> {:?} (|f| = {:.3e})", root.t, root.label, root.abs_f);
    }
    let result = scan_family(
        |r| Family::clifford(1, 2, r),
        "r",
        (0.3, 0.9),
        65,
        &GridSpec::new(7, -1.0, 1.0),
        ROOT_TOL,
    )?;
    for root in &result.roots {
        println!(
            "scan root r = {:.12} (objective {:.2e}) -> {:?}",
            root.param, root.objective, root.report.classification
        );
    }
    Ok(())
}
