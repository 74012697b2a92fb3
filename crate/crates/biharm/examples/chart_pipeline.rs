//! Run the full pipeline on a chart-language immersion: parse, take exact
//! second-order jets, assemble metric / normal / shape operator on a grid,
//! and evaluate the bitension residuals. The chart below is the warped
//! (non-CMC) hyperbolic slice — on the quadric, but not biharmonic.

use biharm::biharmonic::{self, verify};
use biharm::chartlang::parse_chart;
use biharm::{Family, GridSpec, SurfaceGrid};

const WARPED_SLICE: &str = "\
params m=2 space=H3_1(1)
# slice height varies with position: mean curvature is no longer constant
x1 = sqrt(1 - (0.6 + 0.05*sin(u1)*cos(u2))^2) * u1
x2 = sqrt(1 - (0.6 + 0.05*sin(u1)*cos(u2))^2) * u2
x3 = sqrt(1 - (0.6 + 0.05*sin(u1)*cos(u2))^2) * sqrt(1 + u1^2 + u2^2)
x4 = 0.6 + 0.05*sin(u1)*cos(u2)
";

fn main() -> biharm::Result<()> {
    let family = Family::from_chart(parse_chart(WARPED_SLICE)?);
    let grid = SurfaceGrid::sample(&family, &GridSpec::default())?;
    println!("max quadric residual on grid: {:.3e}", grid.max_quadric_residual());
    let report = verify(&grid, biharmonic::RESIDUAL_TOL_CHART, biharmonic::F_TOL)?;
    println!(
        "f range [{:.4}, {:.4}], normal residual {:.3e}, tangent residual {:.3e}",
        report.min_abs_f, report.max_abs_f, report.normal_residual, report.tangent_residual
    );
    println!("classification: {:?}", report.classification);
    Ok(())
}
