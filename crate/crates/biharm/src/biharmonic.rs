//! Bitension residuals for space-like hypersurfaces of constant-curvature
//! space forms, the constant-mean-curvature dichotomy, the product-family
//! quadratic, and parameter scans that locate proper biharmonic members of a
//! family by root-finding.
//!
//! With `H = f η` and `⟨η,η⟩ = ε`, the normal part of the bitension field
//! reduces to the scalar equation `Δf = (mc - ε|A|²) f` and the tangent part
//! to the chart-coordinate vector `2A(∇f) + (m/2)∇(ε f²) = 2A(∇f) + mεf∇f`.
//! For `m = 2`, `ε = -1` the pair coincides with the reduced surface system
//! (`Δf = (|A|²+2c)f`, `A(∇f) - f∇f = 0`) up to the recorded convention
//! factor 2 on the tangent line.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{laplace_beltrami, raised_gradient, GridSpec, SurfaceGrid};
use crate::immersion::Family;

/// Factor relating the general tangent residual to the reduced (m=2) form.
pub const TANGENT_CONVENTION_FACTOR: f64 = 2.0;

/// Default sup-norm residual tolerance for analytic families.
pub const RESIDUAL_TOL_ANALYTIC: f64 = 1e-7;
/// Default sup-norm residual tolerance for chart-language-backed families.
pub const RESIDUAL_TOL_CHART: f64 = 1e-4;
/// Threshold separating maximal (f ≈ 0) from proper mean curvature.
pub const F_TOL: f64 = 1e-6;
/// Bisection target for scan roots.
pub const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ProperBiharmonic,
    Maximal,
    HarmonicOnly,
    NotBiharmonic,
}

impl std::str::FromStr for Classification {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "proper_biharmonic" => Classification::ProperBiharmonic,
            "maximal" => Classification::Maximal,
            "harmonic_only" => Classification::HarmonicOnly,
            "not_biharmonic" => Classification::NotBiharmonic,
            other => {
                return Err(Error::Contract(format!("unknown classification `{other}`")))
            }
        })
    }
}

/// Named residual norms with the tolerances that judged them.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// Sup over the interior grid of `|Δf - (mc - ε|A|²)f|`.
    pub normal_residual: f64,
    /// Sup over the interior grid of `‖2A∇f + mεf∇f‖_g`.
    pub tangent_residual: f64,
    /// Reduced (m = 2, time-like normal) pair: normal line and `‖A∇f - f∇f‖_g`.
    pub reduced_residuals: Option<(f64, f64)>,
    pub classification: Classification,
    pub residual_tol: f64,
    pub f_tol: f64,
    pub min_abs_f: f64,
    pub max_abs_f: f64,
    /// `⟨η,η⟩` of the sampled normal field.
    pub eta_sign: f64,
    /// Factor between the general tangent residual and the reduced form.
    pub tangent_convention_factor: f64,
    pub max_quadric_residual: f64,
    pub grid_per_axis: usize,
}

/// Sup over the interior grid of the scalar normal equation residual
/// `|Δf - (mc - ε|A|²) f|`.
pub fn normal_residual(grid: &SurfaceGrid) -> Result<f64> {
    let c = grid.space_form.curvature();
    let m = grid.geom.dims.len() as f64;
    let f_field = grid.scalar_field(|s| s.mean_f);
    let lap = laplace_beltrami(&f_field)?;
    let mut sup: f64 = 0.0;
    let geom = grid.geom.clone();
    geom.for_each_index(|idx| {
        let k = geom.flat(idx);
        if !lap.valid[k] {
            return;
        }
        let s = &grid.samples[k];
        let rhs = (m * c - s.eta_sign * s.normsq_a) * s.mean_f;
        sup = sup.max((lap.values[k] - rhs).abs());
    });
    Ok(sup)
}

/// Sup over the interior grid of the g-norm of `2A(∇f) + mεf∇f`.
pub fn tangent_residual(grid: &SurfaceGrid) -> Result<f64> {
    let m = grid.geom.dims.len() as f64;
    let f_field = grid.scalar_field(|s| s.mean_f);
    let grads = raised_gradient(&f_field)?;
    let mut sup: f64 = 0.0;
    for (k, grad) in grads.iter().enumerate() {
        let Some(grad) = grad else { continue };
        let s = &grid.samples[k];
        let v = &s.shape * grad * 2.0 + grad * (m * s.eta_sign * s.mean_f);
        let norm2 = (v.transpose() * &s.metric * &v)[(0, 0)];
        sup = sup.max(norm2.max(0.0).sqrt());
    }
    Ok(sup)
}

/// Reduced surface-system residual pair for `m = 2` with a time-like normal:
/// the `Δf = (|A|²+2c)f` line and the g-norm of `A(∇f) - f∇f`.
pub fn reduced_residuals(grid: &SurfaceGrid) -> Result<(f64, f64)> {
    if grid.geom.dims.len() != 2 || grid.eta_sign >= 0.0 {
        return Err(Error::Contract(
            "reduced residuals need m = 2 and a time-like normal".into(),
        ));
    }
    let normal = normal_residual(grid)?;
    let f_field = grid.scalar_field(|s| s.mean_f);
    let grads = raised_gradient(&f_field)?;
    let mut sup: f64 = 0.0;
    for (k, grad) in grads.iter().enumerate() {
        let Some(grad) = grad else { continue };
        let s = &grid.samples[k];
        let v = &s.shape * grad - grad * s.mean_f;
        let norm2 = (v.transpose() * &s.metric * &v)[(0, 0)];
        sup = sup.max(norm2.max(0.0).sqrt());
    }
    Ok((normal, sup))
}

/// Evaluate both residual norms on a grid and classify the surface.
pub fn verify(grid: &SurfaceGrid, residual_tol: f64, f_tol: f64) -> Result<ResidualReport> {
    let normal = normal_residual(grid)?;
    let tangent = tangent_residual(grid)?;
    let reduced = if grid.geom.dims.len() == 2 && grid.eta_sign < 0.0 {
        Some(reduced_residuals(grid)?)
    } else {
        None
    };
    let min_abs_f = grid
        .samples
        .iter()
        .map(|s| s.mean_f.abs())
        .fold(f64::INFINITY, f64::min);
    let max_abs_f = grid
        .samples
        .iter()
        .map(|s| s.mean_f.abs())
        .fold(0.0, f64::max);
    let residuals_ok = normal <= residual_tol && tangent <= residual_tol;
    let classification = if max_abs_f <= f_tol {
        // harmonic: every term of the bitension vanishes with f
        Classification::Maximal
    } else if residuals_ok && min_abs_f > f_tol {
        Classification::ProperBiharmonic
    } else {
        Classification::NotBiharmonic
    };
    Ok(ResidualReport {
        normal_residual: normal,
        tangent_residual: tangent,
        reduced_residuals: reduced,
        classification,
        residual_tol,
        f_tol,
        min_abs_f,
        max_abs_f,
        eta_sign: grid.eta_sign,
        tangent_convention_factor: TANGENT_CONVENTION_FACTOR,
        max_quadric_residual: grid.max_quadric_residual(),
        grid_per_axis: grid.geom.dims[0],
    })
}

/// Default residual tolerance for a family (analytic jets vs chart backend).
pub fn default_residual_tol(family: &Family) -> f64 {
    if family.is_chart_backed() {
        RESIDUAL_TOL_CHART
    } else {
        RESIDUAL_TOL_ANALYTIC
    }
}

/// Outcome of the constant-mean-curvature reduction of the normal equation:
/// `(-|B|² + mc) f = 0` forces either `f = 0` or `|B|² = mc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dichotomy {
    /// `|B|² = mc` holds: a proper (f ≠ 0) CMC solution is admissible.
    ProperConditionMet,
    /// `|B|² ≠ mc`: the surface must be maximal (f = 0).
    MaximalForced,
}

/// Theorem-1-style dichotomy for a CMC space-like hypersurface. `|B|²` is
/// negative for time-like normals, so the proper condition `|B|² = mc` can
/// only hold when `c < 0`.
pub fn cmc_dichotomy(normsq_b: f64, m: usize, c: f64, tol: f64) -> Dichotomy {
    if (normsq_b - m as f64 * c).abs() <= tol {
        Dichotomy::ProperConditionMet
    } else {
        Dichotomy::MaximalForced
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootLabel {
    BiharmonicProper,
    Maximal,
}

/// A root of the product-family biharmonic condition in `t = s²/r²`.
#[derive(Debug, Clone, Serialize)]
pub struct CliffordRoot {
    /// Exact value of `t`.
    pub t: Rational64,
    pub label: RootLabel,
    /// `|f|` of the pipeline at this root, used to assign the label.
    pub abs_f: f64,
}

/// Solve the `H^m(r) × H^n(s)` biharmonic condition `|B|² = (m+n)c` at
/// `c = -1`: with `|B|² = -(mt + n/t)` this is `m t² - (m+n) t + n = 0`,
/// solved in exact rational arithmetic. Roots are `t = 1` and `t = n/m`.
/// The maximal label goes to the root where the pipeline mean curvature
/// vanishes (verified numerically, not assumed).
pub fn clifford_quadratic(m: usize, n: usize) -> Result<Vec<CliffordRoot>> {
    if m < 1 || n < 1 {
        return Err(Error::ParameterOutOfRange("need m, n >= 1".into()));
    }
    let (mi, ni) = (m as i64, n as i64);
    // discriminant (m+n)² - 4mn = (m-n)² is a perfect square
    let mut roots = vec![Rational64::new(1, 1), Rational64::new(ni, mi)];
    roots.dedup();
    roots
        .into_iter()
        .map(|t| {
            let tf = *t.numer() as f64 / *t.denom() as f64;
            let r = (1.0 / (1.0 + tf)).sqrt();
            let fam = Family::clifford(m, n, r)?;
            let u = vec![0.0; fam.m];
            let jet = fam.jet(&u)?;
            let sample = crate::geometry::surface_sample(&u, &jet, &fam.space_form)?;
            let abs_f = sample.mean_f.abs();
            let label = if abs_f <= F_TOL {
                RootLabel::Maximal
            } else {
                RootLabel::BiharmonicProper
            };
            Ok(CliffordRoot { t, label, abs_f })
        })
        .collect()
}

/// A refined root of a parameter scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRoot {
    pub param: f64,
    pub objective: f64,
    pub report: ResidualReport,
}

/// Result of sweeping a family parameter for the CMC biharmonic objective
/// `|B|² - mc`.
#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub param_name: String,
    pub sampled_params: Vec<f64>,
    pub objective_values: Vec<f64>,
    pub roots: Vec<ScanRoot>,
}

/// CMC objective `|B|² - mc` of a family member, evaluated at the center of
/// its chart box.
pub fn cmc_objective(family: &Family) -> Result<f64> {
    let center = vec![(family.default_box.0 + family.default_box.1) / 2.0; family.m];
    let jet = family.jet(&center)?;
    let s = crate::geometry::surface_sample(&center, &jet, &family.space_form)?;
    Ok(s.normsq_b - family.m as f64 * family.space_form.curvature())
}

/// Sweep a family constructor over `range`, bracket sign changes of the CMC
/// objective, refine each bracket by bisection to `|objective| ≤ root_tol`,
/// then verify the full residuals at each root. An empty root list is a
/// result, not an error.
pub fn scan_family<F>(
    ctor: F,
    param_name: &str,
    range: (f64, f64),
    sweep: usize,
    grid: &GridSpec,
    root_tol: f64,
) -> Result<ScanResult>
where
    F: Fn(f64) -> Result<Family> + Sync,
{
    if sweep < 2 || range.1 <= range.0 {
        return Err(Error::Contract("scan needs an increasing range and >= 2 sweep points".into()));
    }
    let params: Vec<f64> = (0..sweep)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (sweep - 1) as f64)
        .collect();
    let objective = |p: f64| -> Result<f64> { cmc_objective(&ctor(p)?) };
    let values: Vec<f64> = params
        .par_iter()
        .map(|&p| objective(p))
        .collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for w in 0..sweep - 1 {
        let (mut lo, mut hi) = (params[w], params[w + 1]);
        let (mut flo, fhi) = (values[w], values[w + 1]);
        if flo == 0.0 {
            // exact hit at a sweep node
        } else if flo.signum() == fhi.signum() {
            continue;
        }
        // bisection: cheap objective, cannot leave the bracket
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..200 {
            mid = 0.5 * (lo + hi);
            let fmid = objective(mid)?;
            if fmid.abs() <= root_tol {
                break;
            }
            if fmid.signum() == flo.signum() {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        let family = ctor(mid)?;
        let surface = SurfaceGrid::sample(&family, grid)?;
        let report = verify(&surface, default_residual_tol(&family), F_TOL)?;
        roots.push(ScanRoot {
            param: mid,
            objective: objective(mid)?,
            report,
        });
    }
    Ok(ScanResult {
        param_name: param_name.to_string(),
        sampled_params: params,
        objective_values: values,
        roots,
    })
}
