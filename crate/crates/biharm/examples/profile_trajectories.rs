//! Integrate both branches of the non-CMC profile reduction and watch their
//! conserved quantities: the Codazzi constant C stays put on the Codazzi
//! branch, the Gauss relation stays put on the Gauss branch — and each
//! quantity drifts decisively on the other branch's trajectory.

use biharm::profile_ode::{
    codazzi_first_integral_c, gauss_first_integral_residual, integrate_branch, trajectory_drift,
    Branch,
};

fn main() -> biharm::Result<()> {
    let c = -1.0;
    let codazzi = integrate_branch(Branch::Codazzi, c, 0.5, 0.1, 1.0, 1e-4, 1e-6)?;
    let c_drift = trajectory_drift(&codazzi, |f, fp| codazzi_first_integral_c(f, fp, c))?;
    println!("codazzi branch: C drift {c_drift:.3e} over u in [0,1]");

    let f0 = 0.4;
    let fp0 = (-gauss_first_integral_residual(f0, 0.0, c)).sqrt();
    let gauss = integrate_branch(Branch::Gauss, c, f0, fp0, 1.0, 1e-4, 1e-6)?;
    let g_drift =
        trajectory_drift(&gauss, |f, fp| Ok(gauss_first_integral_residual(f, fp, c)))?;
    println!("gauss branch: relation drift {g_drift:.3e} over u in [0,1]");

    let cross = trajectory_drift(&gauss, |f, fp| codazzi_first_integral_c(f, fp, c))?;
    println!("gauss trajectory against Codazzi constant: drift {cross:.3e} (incompatible)");
    Ok(())
}
