//! Enumerate the constant-profile solutions at each curvature sign and the
//! Theorem-1 dichotomy they follow from: for c >= 0 every CMC space-like
//! surface is maximal; at c = -1 the umbilic pair H²(1/√2) survives as the
//! unique proper biharmonic surface.

use biharm::biharmonic::{cmc_dichotomy, Dichotomy};
use biharm::profile_ode::classify_constant_f;

fn main() {
    for c in [1.0, 0.0, -1.0] {
        println!("c = {c}:");
        for sol in classify_constant_f(c) {
            println!(
                "  lambda = ({:+.3}, {:+.3}), f = {:+.3}, proper = {} — {}",
                sol.lambda1, sol.lambda2, sol.mean_f, sol.proper, sol.description
            );
        }
        let verdict = cmc_dichotomy(-2.0, 2, c, 1e-9);
        println!(
            "  dichotomy at |B|^2 = -2: {:?}{}",
            verdict,
            if verdict == Dichotomy::ProperConditionMet {
                " (|B|^2 = 2c attainable)"
            } else {
                ""
            }
        );
    }
}
