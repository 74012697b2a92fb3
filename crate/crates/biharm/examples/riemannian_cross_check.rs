//! The same engine at ambient index 0: small hyperspheres S²(√(1-s²)) in the
//! unit 3-sphere. The scan rediscovers the classical radius 1/√2 of the
//! proper biharmonic small hypersphere, confirming that the signature
//! handling degenerates correctly to the Riemannian case.

use biharm::biharmonic::{scan_family, ROOT_TOL};
use biharm::{Family, GridSpec};

fn main() -> biharm::Result<()> {
    let result = scan_family(
        |s| Family::sphere_slice(2, s),
        "s",
        (0.1, 0.9),
        33,
        &GridSpec::new(9, -0.4, 0.4),
        ROOT_TOL,
    )?;
    for root in &result.roots {
        println!(
            "root s = {:.12} (target 1/sqrt(2) = {:.12}) -> {:?}, eta sign {:+}",
            root.param,
            std::f64::consts::FRAC_1_SQRT_2,
            root.report.classification,
            root.report.eta_sign
        );
    }
    Ok(())
}
