//! Verify the hyperbolic slice H²(1/√2) inside anti-de Sitter space H³₁(1):
//! the one proper biharmonic space-like surface of the negative-curvature
//! case.

use biharm::biharmonic::{self, verify};
use biharm::{Family, GridSpec, SurfaceGrid};

fn main() -> biharm::Result<()> {
    for s in [0.3, std::f64::consts::FRAC_1_SQRT_2] {
        let family = Family::hyperbolic_slice(2, s)?;
        let grid = SurfaceGrid::sample(&family, &GridSpec::default())?;
        let report = verify(&grid, biharmonic::RESIDUAL_TOL_ANALYTIC, biharmonic::F_TOL)?;
        println!(
            "s = {s:.12}: normal {:.3e}, tangent {:.3e} -> {:?}",
            report.normal_residual, report.tangent_residual, report.classification
        );
    }
    Ok(())
}
