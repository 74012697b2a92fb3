//! Rotationally-invariant profile reduction for non-CMC space-like
//! biharmonic surfaces. In an adapted frame with shape operator
//! `diag(-f, 3f)` the structure equations reduce `f(u)` to two scalar ODE
//! constraints:
//!
//! * Codazzi branch: `4 f f'' = 3 f'² - 40 f⁴ - 8 c f²`, which conserves
//!   `C = (f'² + 8 f⁴ + 8 c f²) · f^{-3/2}`.
//! * Gauss branch: `f'² = -14 f⁴ - (10c/3) f²`, integrated through its
//!   `u`-derivative `f'' = -28 f³ - (10c/3) f` so the relation itself is the
//!   conserved quantity.
//!
//! Exact elimination of `f'` and `f''` between the branches leaves
//! `30 f⁴ - (14/3) c f²`, so a common non-constant solution would need
//! `f² = 7c/45 < 0` for `c < 0`: the branches are incompatible and proper
//! biharmonic profiles must have constant `f`. [`incompatibility_certificate`]
//! packages that elimination (in exact rational arithmetic) together with a
//! numeric corroboration: the Codazzi constant drifts along any non-constant
//! Gauss trajectory.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratpoly::RatPoly;

/// Default integrator step.
pub const DEFAULT_STEP: f64 = 1e-4;
/// Profiles are tracked only while `f` stays clear of the `f = 0` degeneracy.
pub const DEFAULT_F_MIN: f64 = 1e-6;
/// Drift below this along a trajectory counts as "conserved".
pub const INTEG_TOL: f64 = 1e-8;
/// Drift above this is decisive evidence of non-conservation.
pub const DRIFT_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Codazzi,
    Gauss,
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "codazzi" => Ok(Branch::Codazzi),
            "gauss" => Ok(Branch::Gauss),
            other => Err(Error::Contract(format!("unknown branch `{other}`"))),
        }
    }
}

/// Residual of the Codazzi-branch ODE: `4 f f'' - 3 f'² + 40 f⁴ + 8 c f²`.
pub fn codazzi_ode_residual(f: f64, fp: f64, fpp: f64, c: f64) -> f64 {
    4.0 * f * fpp - 3.0 * fp * fp + 40.0 * f.powi(4) + 8.0 * c * f * f
}

/// Conserved quantity of the Codazzi branch, `(f'² + 8f⁴ + 8cf²) f^{-3/2}`.
/// Defined for `f > 0`.
pub fn codazzi_first_integral_c(f: f64, fp: f64, c: f64) -> Result<f64> {
    if f <= 0.0 {
        return Err(Error::Domain(format!(
            "Codazzi first integral needs f > 0, got {f}"
        )));
    }
    Ok((fp * fp + 8.0 * f.powi(4) + 8.0 * c * f * f) * f.powf(-1.5))
}

/// Residual of the Gauss-branch ODE in second-order form:
/// `f'' + 28 f³ + (10c/3) f`.
pub fn gauss_ode_residual(f: f64, fpp: f64, c: f64) -> f64 {
    fpp + 28.0 * f.powi(3) + (10.0 * c / 3.0) * f
}

/// Residual of the Gauss first-order relation: `f'² + 14 f⁴ + (10c/3) f²`.
pub fn gauss_first_integral_residual(f: f64, fp: f64, c: f64) -> f64 {
    fp * fp + 14.0 * f.powi(4) + (10.0 * c / 3.0) * f * f
}

/// Right-hand side `f''(f, f')` of a branch. The Codazzi branch degenerates
/// at `f = 0` (division by `4f`).
pub fn branch_fpp(branch: Branch, f: f64, fp: f64, c: f64, f_min: f64) -> Result<f64> {
    match branch {
        Branch::Codazzi => {
            if f.abs() <= f_min {
                return Err(Error::Domain(format!(
                    "Codazzi branch degenerates at f = 0 (|f| = {:e})",
                    f.abs()
                )));
            }
            Ok((3.0 * fp * fp - 40.0 * f.powi(4) - 8.0 * c * f * f) / (4.0 * f))
        }
        Branch::Gauss => Ok(-28.0 * f.powi(3) - (10.0 * c / 3.0) * f),
    }
}

/// A fixed-step trajectory of one branch.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub branch: Branch,
    pub c: f64,
    pub step: f64,
    pub us: Vec<f64>,
    pub fs: Vec<f64>,
    pub fps: Vec<f64>,
    /// True when integration stopped early because `|f|` reached `f_min`.
    pub halted_at_f_min: bool,
}

/// Integrate a branch with classical RK4 from `(f0, f0')` to `u_end`.
/// Integration halts (without error) once `|f|` falls to `f_min`, where the
/// profile reduction itself breaks down.
pub fn integrate_branch(
    branch: Branch,
    c: f64,
    f0: f64,
    fp0: f64,
    u_end: f64,
    step: f64,
    f_min: f64,
) -> Result<Trajectory> {
    if step <= 0.0 || u_end <= 0.0 {
        return Err(Error::ParameterOutOfRange(
            "integration needs step > 0 and u_end > 0".into(),
        ));
    }
    if f0.abs() <= f_min {
        return Err(Error::Domain(format!(
            "initial |f0| = {:e} is below f_min = {f_min:e}",
            f0.abs()
        )));
    }
    let n = (u_end / step).round() as usize;
    let mut us = Vec::with_capacity(n + 1);
    let mut fs = Vec::with_capacity(n + 1);
    let mut fps = Vec::with_capacity(n + 1);
    let (mut f, mut fp) = (f0, fp0);
    us.push(0.0);
    fs.push(f);
    fps.push(fp);
    let mut halted = false;
    let rhs = |f: f64, fp: f64| branch_fpp(branch, f, fp, c, f_min).map(|fpp| (fp, fpp));
    for i in 1..=n {
        let h = step;
        let k1 = rhs(f, fp)?;
        let k2 = rhs(f + 0.5 * h * k1.0, fp + 0.5 * h * k1.1)?;
        let k3 = rhs(f + 0.5 * h * k2.0, fp + 0.5 * h * k2.1)?;
        let k4 = rhs(f + h * k3.0, fp + h * k3.1)?;
        f += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        fp += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        us.push(i as f64 * h);
        fs.push(f);
        fps.push(fp);
        if f.abs() <= f_min {
            halted = true;
            break;
        }
    }
    Ok(Trajectory {
        branch,
        c,
        step,
        us,
        fs,
        fps,
        halted_at_f_min: halted,
    })
}

/// Maximum drift of a conserved quantity along a trajectory relative to its
/// initial value.
pub fn trajectory_drift<G>(traj: &Trajectory, quantity: G) -> Result<f64>
where
    G: Fn(f64, f64) -> Result<f64>,
{
    let q0 = quantity(traj.fs[0], traj.fps[0])?;
    let mut drift: f64 = 0.0;
    for (f, fp) in traj.fs.iter().zip(&traj.fps) {
        drift = drift.max((quantity(*f, *fp)? - q0).abs());
    }
    Ok(drift)
}

/// Shape-operator entries `(b11, b12, b22) = (-f, 0, 3f)` of the non-CMC
/// profile normal form, with `|A|² = 10 f²`.
pub fn sff_profile(f: f64) -> (f64, f64, f64) {
    (-f, 0.0, 3.0 * f)
}

/// `|A|²` of the profile normal form.
pub fn normsq_a_profile(f: f64) -> f64 {
    10.0 * f * f
}

/// Connection and curvature data of the adapted profile frame.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrameData {
    /// Coefficient of the connection form: `ω₁₂ = (-3f'/(4f)) ω₂`.
    pub omega12_over_omega2: f64,
    /// Gauss curvature `K = c + 3 f²` of the surface metric.
    pub gauss_curvature: f64,
}

pub fn frame_data(f: f64, fp: f64, c: f64) -> Result<FrameData> {
    if f.abs() <= DEFAULT_F_MIN {
        return Err(Error::Domain("profile frame needs f != 0".into()));
    }
    Ok(FrameData {
        omega12_over_omega2: -3.0 * fp / (4.0 * f),
        gauss_curvature: c + 3.0 * f * f,
    })
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact residual of the first-integral claim for the Codazzi branch.
/// Writing `f = w²` and `y(w) = f'²`, the ODE becomes `w y'(w) = 3y - 40w⁸
/// - 8cw⁴`, and the candidate `y = -8w⁸ - 8cw⁴ + Cw³` must satisfy it for
/// every `C`. The returned polynomial in `(w, c, C)` is the substitution
/// residual `3y - w y'(w) - 40w⁸ - 8cw⁴`; it is identically zero.
pub fn codazzi_first_integral_identity_residual() -> RatPoly {
    let w = RatPoly::var(3, 0);
    let c = RatPoly::var(3, 1);
    let big_c = RatPoly::var(3, 2);
    let y = w
        .pow(8)
        .scale(&rat(-8, 1))
        .add(&c.mul(&w.pow(4)).scale(&rat(-8, 1)))
        .add(&big_c.mul(&w.pow(3)));
    y.scale(&rat(3, 1))
        .sub(&w.mul(&y.diff(0)))
        .sub(&w.pow(8).scale(&rat(40, 1)))
        .sub(&c.mul(&w.pow(4)).scale(&rat(8, 1)))
}

/// The exact elimination polynomial in variables `(f, c)`: substitute the
/// Gauss relations `f'² = -14f⁴ - (10c/3)f²` and `f'' = -28f³ - (10c/3)f`
/// into the Codazzi residual `3f'² - 4ff'' - 40f⁴ - 8cf²`.
pub fn elimination_polynomial() -> RatPoly {
    let f = RatPoly::var(2, 0);
    let c = RatPoly::var(2, 1);
    let f2 = f.pow(2);
    let f4 = f.pow(4);
    let cf2 = c.mul(&f2);
    // f'² and f·f'' from the Gauss branch
    let fp2 = f4.scale(&rat(-14, 1)).add(&cf2.scale(&rat(-10, 3)));
    let f_fpp = f4.scale(&rat(-28, 1)).add(&cf2.scale(&rat(-10, 3)));
    fp2.scale(&rat(3, 1))
        .sub(&f_fpp.scale(&rat(4, 1)))
        .sub(&f4.scale(&rat(40, 1)))
        .sub(&cf2.scale(&rat(8, 1)))
}

/// Result of the branch-incompatibility check.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    /// `true` when the elimination equals `30f⁴ - (14/3)cf²` identically.
    pub symbolic_ok: bool,
    /// Human-readable elimination polynomial.
    pub elimination: String,
    /// Value of `f²` a common non-constant solution would require (`7c/45`).
    pub forced_f_squared: f64,
    /// Max drift of the Codazzi constant along a non-constant Gauss
    /// trajectory at this `c`.
    pub numeric_drift: f64,
    pub drift_threshold: f64,
    /// `true` when both the symbolic and the numeric halves agree that the
    /// branches are incompatible at this `c`.
    pub incompatible: bool,
    pub c: f64,
}

/// Certify that the Codazzi and Gauss branches admit no common non-constant
/// solution at curvature `c < 0`. The symbolic half is exact; the numeric
/// half integrates a Gauss trajectory and watches the Codazzi constant drift.
pub fn incompatibility_certificate(c: f64) -> Result<Certificate> {
    if c >= 0.0 {
        return Err(Error::ParameterOutOfRange(
            "certificate is stated for c < 0".into(),
        ));
    }
    let elim = elimination_polynomial();
    let f = RatPoly::var(2, 0);
    let cv = RatPoly::var(2, 1);
    let expected = f
        .pow(4)
        .scale(&rat(30, 1))
        .sub(&cv.mul(&f.pow(2)).scale(&rat(14, 3)));
    let symbolic_ok = elim.sub(&expected).is_zero();
    // forced_f_squared = 7c/45 — negative, hence no real profile
    let forced_f_squared = 7.0 * c / 45.0;

    // numeric half: start on the Gauss curve with f' > 0 and integrate
    let f0 = 0.4;
    let fp0 = (-gauss_first_integral_residual(f0, 0.0, c)).max(0.0).sqrt();
    if fp0 <= 0.0 {
        return Err(Error::Domain(
            "no non-constant Gauss trajectory at this c and f0".into(),
        ));
    }
    let traj = integrate_branch(
        Branch::Gauss,
        c,
        f0,
        fp0,
        1.0,
        DEFAULT_STEP,
        DEFAULT_F_MIN,
    )?;
    let numeric_drift = trajectory_drift(&traj, |f, fp| codazzi_first_integral_c(f, fp, c))?;
    Ok(Certificate {
        symbolic_ok,
        elimination: elim.to_string(),
        forced_f_squared,
        numeric_drift,
        drift_threshold: DRIFT_THRESHOLD,
        incompatible: symbolic_ok && forced_f_squared < 0.0 && numeric_drift > DRIFT_THRESHOLD,
        c,
    })
}

/// A constant-profile solution of the biharmonic system.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantSolution {
    pub lambda1: f64,
    pub lambda2: f64,
    pub mean_f: f64,
    pub normsq_a: f64,
    pub proper: bool,
    pub description: String,
}

/// Enumerate the constant-`f` solutions at curvature `c`. The normal
/// equation forces `f = 0` or `|A|² = -2c`; with `λ₁² + λ₂² = -2c` the
/// Codazzi equations leave only the umbilic pair `λ₁ = λ₂ = ±√(-c)` (proper)
/// and the trace-free pair `λ₁ = -λ₂` (maximal). For `c ≥ 0` only `f = 0`
/// survives.
pub fn classify_constant_f(c: f64) -> Vec<ConstantSolution> {
    if c >= 0.0 {
        return vec![ConstantSolution {
            lambda1: 0.0,
            lambda2: 0.0,
            mean_f: 0.0,
            normsq_a: 0.0,
            proper: false,
            description: "maximal only: |A|^2 = -2c has no positive solution".into(),
        }];
    }
    let lam = (-c).sqrt();
    let radius = (-2.0 * c).sqrt().recip(); // 1/√2 at c = -1
    let mut out = Vec::new();
    for sign in [1.0f64, -1.0] {
        out.push(ConstantSolution {
            lambda1: sign * lam,
            lambda2: sign * lam,
            mean_f: sign * lam,
            normsq_a: 2.0 * c.abs(),
            proper: true,
            description: format!(
                "umbilic hyperbolic slice H^2({radius:.6}) — proper biharmonic"
            ),
        });
    }
    for sign in [1.0f64, -1.0] {
        out.push(ConstantSolution {
            lambda1: sign * lam,
            lambda2: -sign * lam,
            mean_f: 0.0,
            normsq_a: 2.0 * c.abs(),
            proper: false,
            description: "trace-free pair — maximal, excluded as proper".into(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn codazzi_constant_is_conserved() {
        let traj = integrate_branch(Branch::Codazzi, -1.0, 0.5, 0.1, 1.0, 1e-4, 1e-6).unwrap();
        assert!(!traj.halted_at_f_min);
        let drift = trajectory_drift(&traj, |f, fp| codazzi_first_integral_c(f, fp, -1.0)).unwrap();
        assert!(drift <= INTEG_TOL, "drift {drift:e}");
    }

    #[test]
    fn gauss_relation_is_conserved_on_its_branch() {
        let c = -1.0;
        let f0 = 0.3;
        let fp0 = (-gauss_first_integral_residual(f0, 0.0, c)).sqrt();
        let traj = integrate_branch(Branch::Gauss, c, f0, fp0, 1.0, 1e-4, 1e-6).unwrap();
        let drift =
            trajectory_drift(&traj, |f, fp| Ok(gauss_first_integral_residual(f, fp, c))).unwrap();
        assert!(drift <= INTEG_TOL, "drift {drift:e}");
    }

    #[test]
    fn rhs_matches_finite_difference_of_fp() {
        for branch in [Branch::Codazzi, Branch::Gauss] {
            let traj = integrate_branch(branch, -1.0, 0.45, 0.05, 0.5, 1e-4, 1e-6).unwrap();
            let h = traj.step;
            for k in 1..traj.us.len() - 1 {
                let fd = (traj.fps[k + 1] - traj.fps[k - 1]) / (2.0 * h);
                let rhs = branch_fpp(branch, traj.fs[k], traj.fps[k], -1.0, 1e-6).unwrap();
                assert_abs_diff_eq!(fd, rhs, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn ode_residual_zero_along_trajectories() {
        let traj = integrate_branch(Branch::Codazzi, -1.0, 0.5, 0.1, 1.0, 1e-4, 1e-6).unwrap();
        for k in 0..traj.fs.len() {
            let fpp = branch_fpp(Branch::Codazzi, traj.fs[k], traj.fps[k], -1.0, 1e-6).unwrap();
            assert_abs_diff_eq!(
                codazzi_ode_residual(traj.fs[k], traj.fps[k], fpp, -1.0),
                0.0,
                epsilon = 1e-12
            );
        }
        let f = 0.37;
        let fpp = branch_fpp(Branch::Gauss, f, 0.0, -1.0, 1e-6).unwrap();
        assert_abs_diff_eq!(gauss_ode_residual(f, fpp, -1.0), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn first_integral_identity_is_exact() {
        let lhs = codazzi_first_integral_identity_residual();
        assert!(lhs.is_zero(), "identity residual: {lhs}");
    }

    #[test]
    fn elimination_polynomial_is_exact() {
        let elim = elimination_polynomial();
        let f = RatPoly::var(2, 0);
        let c = RatPoly::var(2, 1);
        let expected = f
            .pow(4)
            .scale(&rat(30, 1))
            .sub(&c.mul(&f.pow(2)).scale(&rat(14, 3)));
        assert_eq!(elim, expected);

        // spot-check at random rational points as an independent route
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let fv = rat(rng.gen_range(-50i64..=50), rng.gen_range(1i64..=20));
            let cv = rat(rng.gen_range(-50i64..=50), rng.gen_range(1i64..=20));
            assert_eq!(
                elim.eval(&[fv.clone(), cv.clone()]),
                expected.eval(&[fv, cv])
            );
        }
    }

    #[test]
    fn certificate_is_decisive_at_negative_curvature() {
        let cert = incompatibility_certificate(-1.0).unwrap();
        assert!(cert.symbolic_ok);
        assert!(cert.incompatible);
        assert_abs_diff_eq!(cert.forced_f_squared, -7.0 / 45.0, epsilon = 1e-15);
        assert!(cert.numeric_drift > DRIFT_THRESHOLD, "drift {:e}", cert.numeric_drift);
        assert!(incompatibility_certificate(0.5).is_err());
    }

    #[test]
    fn constant_classification() {
        let sols = classify_constant_f(-1.0);
        let proper: Vec<_> = sols.iter().filter(|s| s.proper).collect();
        assert_eq!(proper.len(), 2);
        for s in &proper {
            assert_abs_diff_eq!(s.mean_f.abs(), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(s.normsq_a, 2.0, epsilon = 1e-15);
            assert!(s.description.contains("0.707107"));
        }
        let maximal: Vec<_> = sols.iter().filter(|s| !s.proper).collect();
        assert_eq!(maximal.len(), 2);
        for s in maximal {
            assert_eq!(s.mean_f, 0.0);
        }
        let flat = classify_constant_f(0.0);
        assert_eq!(flat.len(), 1);
        assert!(!flat[0].proper);
        assert_eq!(classify_constant_f(1.0).len(), 1);
    }

    #[test]
    fn profile_frame_quantities() {
        let (b11, b12, b22) = sff_profile(0.25);
        assert_eq!((b11, b12, b22), (-0.25, 0.0, 0.75));
        assert_abs_diff_eq!(normsq_a_profile(0.25), 0.625, epsilon = 1e-15);
        let fr = frame_data(0.5, 0.2, -1.0).unwrap();
        assert_abs_diff_eq!(fr.omega12_over_omega2, -0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(fr.gauss_curvature, -0.25, epsilon = 1e-15);
        assert!(frame_data(0.0, 0.1, -1.0).is_err());
    }

    #[test]
    fn codazzi_branch_halts_near_zero() {
        // start heading toward f = 0: f' < 0 strongly
        let traj = integrate_branch(Branch::Gauss, -1.0, 0.05, -0.2, 5.0, 1e-4, 1e-2).unwrap();
        assert!(traj.halted_at_f_min);
        assert!(integrate_branch(Branch::Codazzi, -1.0, 0.0, 0.1, 1.0, 1e-4, 1e-6).is_err());
    }
}
