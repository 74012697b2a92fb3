//! Command-line front end: residual verification, parameter scans, profile
//! ODE runs, the branch-incompatibility certificate, constant-profile
//! classification, and the canned reproduction bundle.
//!
//! Exit codes: 0 on success (and on `--expect` match), 2 when an explicit
//! expectation fails, 1 on usage or runtime errors. JSON payloads carry a
//! `"schema": 1` field; CSV floats are printed with 17 significant digits.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ambient::SpaceForm;
use crate::biharmonic::{
    self, clifford_quadratic, cmc_dichotomy, scan_family, Classification, Dichotomy,
    ResidualReport, RootLabel, ScanResult,
};
use crate::error::{Error, Result};
use crate::ambient::quadric_residual;
use crate::geometry::{GridSpec, SurfaceGrid};
use crate::immersion::Family;
use crate::profile_ode::{
    classify_constant_f, codazzi_first_integral_c, gauss_first_integral_residual,
    incompatibility_certificate, integrate_branch, Branch, DEFAULT_F_MIN, DEFAULT_STEP,
};

/// Exit code for a failed `--expect` or a failed reproduction claim.
pub const EXIT_EXPECT_MISMATCH: i32 = 2;

const SCHEMA_VERSION: u32 = 1;

/// A fully parsed batch job. Field order in emitted JSON is fixed by the
/// struct definitions, so output is deterministic for a fixed config.
#[derive(Debug, Parser)]
#[command(
    name = "biharm",
    version,
    about = "Verification engine for biharmonic space-like hypersurfaces of space forms",
    after_help = "CSV columns:\n  verify --samples-csv: u1..um, f, normsq_A, normsq_B, quadric_residual\n  ode: u, f, fp, codazzi_C, gauss_residual\nEnvironment: BIHARM_THREADS caps the worker-thread count."
)]
pub struct JobConfig {
    /// Seed for randomized spot checks (chart quadric sampling).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate bitension residuals on a grid and classify the surface.
    Verify(VerifyArgs),
    /// Sweep a family parameter for roots of the CMC objective |B|^2 - mc.
    Scan(ScanArgs),
    /// Integrate one branch of the profile ODE and emit a CSV trajectory.
    Ode(OdeArgs),
    /// Emit the branch-incompatibility certificate (symbolic + numeric).
    Certify(CertifyArgs),
    /// Enumerate constant-profile solutions at a given curvature.
    Classify(ClassifyArgs),
    /// Run the canned reproduction jobs and write a markdown+JSON bundle.
    Repro(ReproArgs),
}

#[derive(Debug, Args, Clone)]
pub struct FamilyArgs {
    /// Built-in family name (hyperbolic_slice, spherical_slice, sphere_slice,
    /// hyperboloid, cylinder, clifford, ds_clifford).
    #[arg(long)]
    pub family: Option<String>,
    /// Chart-language file defining the immersion.
    #[arg(long, conflicts_with = "family")]
    pub chart: Option<PathBuf>,
    /// Surface dimension for single-block families.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Factor dimensions m,n for product families.
    #[arg(long)]
    pub dims: Option<String>,
    /// Family parameter as name=value (repeatable).
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Space form string (e.g. H3_1(1)); checked against the family.
    #[arg(long)]
    pub space: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Grid points per axis (>= 5).
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
    /// Chart box as lo,hi (defaults to the family's box).
    #[arg(long = "box")]
    pub box_spec: Option<String>,
    /// Residual tolerance (defaults per backend).
    #[arg(long)]
    pub tol: Option<f64>,
    /// |f| threshold separating maximal from proper.
    #[arg(long, default_value_t = biharmonic::F_TOL)]
    pub f_tol: f64,
    /// Expected classification; mismatch exits with code 2.
    #[arg(long)]
    pub expect: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also dump the raw grid samples as CSV.
    #[arg(long)]
    pub samples_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Parameter range as a,b.
    #[arg(long)]
    pub range: String,
    /// Number of sweep samples.
    #[arg(long, default_value_t = 65)]
    pub sweep: usize,
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
    #[arg(long = "box")]
    pub box_spec: Option<String>,
    /// Expected classification of at least one root.
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OdeArgs {
    /// codazzi or gauss.
    #[arg(long)]
    pub branch: String,
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub f0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub fp0: f64,
    /// Integration span as 0,u_end.
    #[arg(long)]
    pub span: String,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub c: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub c: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// Job name (example_3_1, example_3_2, theorem_1_dichotomy, theorem_2)
    /// or "all".
    #[arg(long, default_value = "all")]
    pub job: String,
    /// Directory receiving bundle.md and bundle.json.
    #[arg(long, default_value = "repro_out")]
    pub out_dir: PathBuf,
}

/// Cap rayon's worker count from BIHARM_THREADS. Safe to call repeatedly;
/// only the first global-pool initialization takes effect.
pub fn init_threads() {
    if let Some(n) = std::env::var("BIHARM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64)> {
    let mut it = text.split(',');
    let err = || Error::Contract(format!("{what} must be two comma-separated numbers, got `{text}`"));
    let a: f64 = it.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
    let b: f64 = it.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
    if it.next().is_some() {
        return Err(err());
    }
    Ok((a, b))
}

fn parse_params(pairs: &[String]) -> Result<HashMap<String, f64>> {
    let mut out = HashMap::new();
    for p in pairs {
        let (k, v) = p.split_once('=').ok_or_else(|| {
            Error::Contract(format!("--param expects name=value, got `{p}`"))
        })?;
        let value: f64 = v.trim().parse().map_err(|_| {
            Error::Contract(format!("--param {k}: `{v}` is not a number"))
        })?;
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

fn need(params: &HashMap<String, f64>, key: &str, family: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::Contract(format!("family {family} needs --param {key}=<value>")))
}

fn need_dim(dim: Option<usize>, family: &str) -> Result<usize> {
    dim.ok_or_else(|| Error::Contract(format!("family {family} needs --dim <n>")))
}

fn build_family(args: &FamilyArgs) -> Result<Family> {
    let family = if let Some(path) = &args.chart {
        let source = std::fs::read_to_string(path)?;
        Family::from_chart(crate::chartlang::parse_chart(&source)?)
    } else {
        let name = args
            .family
            .as_deref()
            .ok_or_else(|| Error::Contract("need --family or --chart".into()))?;
        let params = parse_params(&args.params)?;
        match name {
            "hyperbolic_slice" => {
                Family::hyperbolic_slice(need_dim(args.dim, name)?, need(&params, "s", name)?)?
            }
            "spherical_slice" => {
                Family::spherical_slice(need_dim(args.dim, name)?, need(&params, "s", name)?)?
            }
            "sphere_slice" => {
                Family::sphere_slice(need_dim(args.dim, name)?, need(&params, "s", name)?)?
            }
            "hyperboloid" => {
                Family::hyperboloid(need_dim(args.dim, name)?, need(&params, "r", name)?)?
            }
            "cylinder" => Family::cylinder(need(&params, "r", name)?)?,
            "ds_clifford" => Family::ds_clifford(need(&params, "a", name)?)?,
            "clifford" => {
                let dims = args
                    .dims
                    .as_deref()
                    .ok_or_else(|| Error::Contract("family clifford needs --dims m,n".into()))?;
                let (m, n) = parse_pair(dims, "--dims")?;
                if m.fract() != 0.0 || n.fract() != 0.0 || m < 1.0 || n < 1.0 {
                    return Err(Error::Contract("--dims must be positive integers".into()));
                }
                Family::clifford(m as usize, n as usize, need(&params, "r", name)?)?
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        }
    };
    if let Some(space) = &args.space {
        let requested = SpaceForm::parse(space)?;
        if requested != family.space_form {
            return Err(Error::Contract(format!(
                "--space {} does not match the family's space form {}",
                space,
                family.space_form.compact_name()
            )));
        }
    }
    Ok(family)
}

fn grid_spec(per_axis: usize, box_spec: Option<&str>, family: &Family) -> Result<GridSpec> {
    if per_axis < 5 {
        return Err(Error::Contract("verify needs --grid >= 5".into()));
    }
    let (lo, hi) = match box_spec {
        Some(text) => parse_pair(text, "--box")?,
        None => family.default_box,
    };
    if hi <= lo {
        return Err(Error::Contract("--box needs lo < hi".into()));
    }
    Ok(GridSpec::new(per_axis, lo, hi))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    schema: u32,
    command: &'static str,
    family: &'a str,
    space_form: String,
    grid_per_axis: usize,
    chart_box: (f64, f64),
    report: &'a ResidualReport,
    /// Max quadric residual at seeded random chart points (chart-backed only).
    spot_quadric_residual: Option<f64>,
}

fn samples_csv(grid: &SurfaceGrid, m: usize) -> String {
    let mut text = String::new();
    for i in 1..=m {
        let _ = write!(text, "u{i},");
    }
    text.push_str("f,normsq_A,normsq_B,quadric_residual\n");
    for s in grid.samples.iter() {
        for v in s.u.iter() {
            let _ = write!(text, "{},", csv_float(*v));
        }
        let _ = writeln!(
            text,
            "{},{},{},{}",
            csv_float(s.mean_f),
            csv_float(s.normsq_a),
            csv_float(s.normsq_b),
            csv_float(s.quadric_residual)
        );
    }
    text
}

fn run_verify(args: &VerifyArgs, seed: u64) -> Result<i32> {
    let family = build_family(&args.family)?;
    let spec = grid_spec(args.grid, args.box_spec.as_deref(), &family)?;
    let tol = args.tol.unwrap_or_else(|| biharmonic::default_residual_tol(&family));
    if tol <= 0.0 || args.f_tol <= 0.0 {
        return Err(Error::Contract("tolerances must be positive".into()));
    }
    let grid = SurfaceGrid::sample(&family, &spec)?;
    let report = biharmonic::verify(&grid, tol, args.f_tol)?;

    let spot = if family.is_chart_backed()
        && family.space_form.kind != crate::ambient::SpaceFormKind::Flat
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..32 {
            let u: Vec<f64> = (0..family.m)
                .map(|_| rng.gen_range(spec.lo..spec.hi))
                .collect();
            let jet = family.jet(&u)?;
            worst = worst.max(quadric_residual(&jet.point, &family.space_form)?);
        }
        Some(worst)
    } else {
        None
    };

    let output = VerifyOutput {
        schema: SCHEMA_VERSION,
        command: "verify",
        family: &family.name,
        space_form: family.space_form.compact_name(),
        grid_per_axis: spec.per_axis,
        chart_box: (spec.lo, spec.hi),
        report: &report,
        spot_quadric_residual: spot,
    };
    emit(&serde_json::to_string_pretty(&output)?, args.out.as_deref())?;
    if let Some(csv_path) = &args.samples_csv {
        std::fs::write(csv_path, samples_csv(&grid, family.m))?;
    }
    expectation_code(args.expect.as_deref(), &[report.classification])
}

fn expectation_code(expect: Option<&str>, found: &[Classification]) -> Result<i32> {
    let Some(expect) = expect else { return Ok(0) };
    let wanted: Classification = expect.parse()?;
    if found.contains(&wanted) {
        Ok(0)
    } else {
        eprintln!(
            "expectation mismatch: wanted {wanted:?}, found {found:?}"
        );
        Ok(EXIT_EXPECT_MISMATCH)
    }
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    schema: u32,
    command: &'static str,
    family: &'a str,
    result: &'a ScanResult,
}

type FamilyCtor<'a> = Box<dyn Fn(f64) -> Result<Family> + Sync + 'a>;

fn scan_ctor<'a>(args: &'a FamilyArgs) -> Result<(FamilyCtor<'a>, &'static str, String)> {
    let name = args
        .family
        .as_deref()
        .ok_or_else(|| Error::Contract("scan needs --family".into()))?;
    let dim = args.dim;
    Ok(match name {
        "hyperbolic_slice" => (
            Box::new(move |s| Family::hyperbolic_slice(need_dim(dim, "hyperbolic_slice")?, s)),
            "s",
            name.to_string(),
        ),
        "spherical_slice" => (
            Box::new(move |s| Family::spherical_slice(need_dim(dim, "spherical_slice")?, s)),
            "s",
            name.to_string(),
        ),
        "sphere_slice" => (
            Box::new(move |s| Family::sphere_slice(need_dim(dim, "sphere_slice")?, s)),
            "s",
            name.to_string(),
        ),
        "hyperboloid" => (
            Box::new(move |r| Family::hyperboloid(need_dim(dim, "hyperboloid")?, r)),
            "r",
            name.to_string(),
        ),
        "cylinder" => (Box::new(Family::cylinder), "r", name.to_string()),
        "ds_clifford" => (Box::new(Family::ds_clifford), "a", name.to_string()),
        "clifford" => {
            let dims = args
                .dims
                .as_deref()
                .ok_or_else(|| Error::Contract("family clifford needs --dims m,n".into()))?;
            let (m, n) = parse_pair(dims, "--dims")?;
            let (m, n) = (m as usize, n as usize);
            (
                Box::new(move |r| Family::clifford(m, n, r)),
                "r",
                name.to_string(),
            )
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    })
}

fn run_scan(args: &ScanArgs) -> Result<i32> {
    let (ctor, param_name, family_name) = scan_ctor(&args.family)?;
    let range = parse_pair(&args.range, "--range")?;
    // probe one member for the box and the space-form check
    let probe = ctor(0.5 * (range.0 + range.1))?;
    if let Some(space) = &args.family.space {
        let requested = SpaceForm::parse(space)?;
        if requested != probe.space_form {
            return Err(Error::Contract(format!(
                "--space {} does not match the family's space form {}",
                space,
                probe.space_form.compact_name()
            )));
        }
    }
    let spec = grid_spec(args.grid, args.box_spec.as_deref(), &probe)?;
    let result = scan_family(
        &ctor,
        param_name,
        range,
        args.sweep,
        &spec,
        biharmonic::ROOT_TOL,
    )?;
    let output = ScanOutput {
        schema: SCHEMA_VERSION,
        command: "scan",
        family: &family_name,
        result: &result,
    };
    emit(&serde_json::to_string_pretty(&output)?, args.out.as_deref())?;
    let found: Vec<Classification> = result
        .roots
        .iter()
        .map(|r| r.report.classification)
        .collect();
    expectation_code(args.expect.as_deref(), &found)
}

fn run_ode(args: &OdeArgs) -> Result<i32> {
    let branch: Branch = args.branch.parse()?;
    let (start, end) = parse_pair(&args.span, "--span")?;
    if start != 0.0 {
        return Err(Error::Contract("--span must start at 0".into()));
    }
    let traj = integrate_branch(branch, args.c, args.f0, args.fp0, end, args.step, DEFAULT_F_MIN)?;
    let mut text = String::from("u,f,fp,codazzi_C,gauss_residual\n");
    for k in 0..traj.us.len() {
        let (f, fp) = (traj.fs[k], traj.fps[k]);
        let c_val = codazzi_first_integral_c(f, fp, args.c).unwrap_or(f64::NAN);
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            csv_float(traj.us[k]),
            csv_float(f),
            csv_float(fp),
            csv_float(c_val),
            csv_float(gauss_first_integral_residual(f, fp, args.c))
        );
    }
    emit(&text, args.out.as_deref())?;
    Ok(0)
}

#[derive(Serialize)]
struct CertifyOutput {
    schema: u32,
    command: &'static str,
    c: f64,
    forced_fsq: f64,
    symbolic_identity_ok: bool,
    numeric_c_drift: f64,
    drift_threshold: f64,
    incompatible: bool,
    elimination: String,
}

fn run_certify(args: &CertifyArgs) -> Result<i32> {
    let cert = incompatibility_certificate(args.c)?;
    let output = CertifyOutput {
        schema: SCHEMA_VERSION,
        command: "certify",
        c: cert.c,
        forced_fsq: cert.forced_f_squared,
        symbolic_identity_ok: cert.symbolic_ok,
        numeric_c_drift: cert.numeric_drift,
        drift_threshold: cert.drift_threshold,
        incompatible: cert.incompatible,
        elimination: cert.elimination,
    };
    emit(&serde_json::to_string_pretty(&output)?, args.out.as_deref())?;
    Ok(0)
}

fn run_classify(args: &ClassifyArgs) -> Result<i32> {
    #[derive(Serialize)]
    struct ClassifyOutput {
        schema: u32,
        command: &'static str,
        c: f64,
        solutions: Vec<crate::profile_ode::ConstantSolution>,
    }
    let output = ClassifyOutput {
        schema: SCHEMA_VERSION,
        command: "classify",
        c: args.c,
        solutions: classify_constant_f(args.c),
    };
    emit(&serde_json::to_string_pretty(&output)?, args.out.as_deref())?;
    Ok(0)
}

/// One reproduction claim: a canned job with a pass/fail verdict.
#[derive(Debug, Serialize)]
pub struct ReproJob {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

fn repro_example_3_1() -> Result<ReproJob> {
    let result = scan_family(
        |s| Family::hyperbolic_slice(2, s),
        "s",
        (0.1, 0.9),
        33,
        &GridSpec::default(),
        biharmonic::ROOT_TOL,
    )?;
    let target = std::f64::consts::FRAC_1_SQRT_2;
    let pass = result.roots.len() == 1
        && (result.roots[0].param - target).abs() <= 1e-10
        && result.roots[0].report.classification == Classification::ProperBiharmonic
        && result.roots[0].report.normal_residual <= 1e-7
        && result.roots[0].report.tangent_residual <= 1e-7;
    let details = match result.roots.first() {
        Some(root) => format!(
            "root s = {:.12} (target 1/sqrt(2)), normal {:.3e}, tangent {:.3e}, {:?}",
            root.param,
            root.report.normal_residual,
            root.report.tangent_residual,
            root.report.classification
        ),
        None => "no root found in (0.1, 0.9)".into(),
    };
    Ok(ReproJob {
        name: "example_3_1".into(),
        pass,
        details,
    })
}

fn repro_example_3_2() -> Result<ReproJob> {
    let mut pass = true;
    let mut notes = Vec::new();
    for m in 1..=6usize {
        for n in 1..=6usize {
            let roots = clifford_quadratic(m, n)?;
            let ok = if m == n {
                roots.len() == 1 && roots[0].label == RootLabel::Maximal
            } else {
                roots.len() == 2
                    && roots.iter().any(|r| {
                        *r.t.numer() == 1 && *r.t.denom() == 1 && r.label == RootLabel::BiharmonicProper
                    })
                    && roots.iter().any(|r| {
                        r.t == num_rational::Rational64::new(n as i64, m as i64)
                            && r.label == RootLabel::Maximal
                    })
            };
            if !ok {
                pass = false;
                notes.push(format!("quadratic labels wrong at (m,n)=({m},{n})"));
            }
        }
    }
    let scan = scan_family(
        |r| Family::clifford(1, 2, r),
        "r",
        (0.3, 0.9),
        65,
        &GridSpec::new(7, -1.0, 1.0),
        biharmonic::ROOT_TOL,
    )?;
    let mut params: Vec<f64> = scan.roots.iter().map(|r| r.param).collect();
    params.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scan_ok = params.len() == 2
        && (params[0] - 1.0 / 3.0f64.sqrt()).abs() <= 1e-9
        && (params[1] - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-9;
    if !scan_ok {
        pass = false;
        notes.push(format!("scan roots {params:?}"));
    }
    let proper = scan
        .roots
        .iter()
        .find(|r| (r.param - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-6);
    match proper {
        Some(root)
            if root.report.normal_residual <= 1e-7
                && root.report.tangent_residual <= 1e-7
                && root.report.classification == Classification::ProperBiharmonic =>
        {
            notes.push(format!(
                "t=1 root residuals: normal {:.3e}, tangent {:.3e}",
                root.report.normal_residual, root.report.tangent_residual
            ));
        }
        _ => {
            pass = false;
            notes.push("t=1 root failed residual verification".into());
        }
    }
    Ok(ReproJob {
        name: "example_3_2".into(),
        pass,
        details: if notes.is_empty() {
            "quadratic exact roots and scan roots confirmed".into()
        } else {
            notes.join("; ")
        },
    })
}

fn repro_theorem_1_dichotomy() -> Result<ReproJob> {
    let mut pass = true;
    let mut notes = Vec::new();
    for c in [0.0, 1.0] {
        for k in 0..1000 {
            let normsq_b = -10.0 + (10.0 - 1e-6) * k as f64 / 999.0;
            if cmc_dichotomy(normsq_b, 2, c, 1e-12) != Dichotomy::MaximalForced {
                pass = false;
                notes.push(format!("dichotomy failed at c={c}, |B|^2={normsq_b}"));
            }
        }
    }
    let scans: Vec<(&str, ScanResult)> = vec![
        (
            "spherical_slice in S3_1(1)",
            scan_family(
                |s| Family::spherical_slice(2, s),
                "s",
                (0.1, 2.0),
                25,
                &GridSpec::new(9, -0.4, 0.4),
                biharmonic::ROOT_TOL,
            )?,
        ),
        (
            "ds_clifford in S3_1(1)",
            scan_family(
                Family::ds_clifford,
                "a",
                (1.05, 3.0),
                25,
                &GridSpec::default(),
                biharmonic::ROOT_TOL,
            )?,
        ),
        (
            "hyperboloid in R3_1",
            scan_family(
                |r| Family::hyperboloid(2, r),
                "r",
                (0.2, 3.0),
                25,
                &GridSpec::default(),
                biharmonic::ROOT_TOL,
            )?,
        ),
        (
            "cylinder in R3_1",
            scan_family(
                Family::cylinder,
                "r",
                (0.2, 3.0),
                25,
                &GridSpec::default(),
                biharmonic::ROOT_TOL,
            )?,
        ),
    ];
    for (label, scan) in &scans {
        let proper = scan
            .roots
            .iter()
            .filter(|r| r.report.classification == Classification::ProperBiharmonic)
            .count();
        if proper != 0 {
            pass = false;
            notes.push(format!("{label}: unexpected proper root"));
        }
    }
    if notes.is_empty() {
        notes.push("2000 dichotomy samples maximal_forced; 4 scans in c >= 0 found no proper roots".into());
    }
    Ok(ReproJob {
        name: "theorem_1_dichotomy".into(),
        pass,
        details: notes.join("; "),
    })
}

fn repro_theorem_2() -> Result<ReproJob> {
    let cert = incompatibility_certificate(-1.0)?;
    let solutions = classify_constant_f(-1.0);
    let proper_labels: Vec<&str> = solutions
        .iter()
        .filter(|s| s.proper)
        .map(|s| s.description.as_str())
        .collect();
    // the two proper entries are the ± orientation of one surface
    let unique_proper = proper_labels
        .iter()
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    // feed the endpoint back through the full pipeline
    let fam = Family::hyperbolic_slice(2, std::f64::consts::FRAC_1_SQRT_2)?;
    let grid = SurfaceGrid::sample(&fam, &GridSpec::default())?;
    let report = biharmonic::verify(&grid, biharmonic::RESIDUAL_TOL_ANALYTIC, biharmonic::F_TOL)?;
    let normsq_a_ok = grid
        .samples
        .iter()
        .all(|s| (s.normsq_a - 2.0).abs() <= 1e-9);
    let pass = cert.incompatible
        && cert.symbolic_ok
        && unique_proper == 1
        && report.classification == Classification::ProperBiharmonic
        && normsq_a_ok;
    Ok(ReproJob {
        name: "theorem_2".into(),
        pass,
        details: format!(
            "certificate incompatible={}, drift {:.3e}; unique proper label count {}; endpoint |A|^2=2 check {}, classification {:?}",
            cert.incompatible, cert.numeric_drift, unique_proper, normsq_a_ok, report.classification
        ),
    })
}

/// Run the canned reproduction jobs. Recognized names: all, example_3_1,
/// example_3_2, theorem_1_dichotomy, theorem_2.
pub fn run_repro_jobs(job: &str) -> Result<Vec<ReproJob>> {
    let all = ["example_3_1", "example_3_2", "theorem_1_dichotomy", "theorem_2"];
    let selected: Vec<&str> = if job == "all" {
        all.to_vec()
    } else if all.contains(&job) {
        vec![job]
    } else {
        return Err(Error::Contract(format!("unknown repro job `{job}`")));
    };
    selected
        .into_iter()
        .map(|name| match name {
            "example_3_1" => repro_example_3_1(),
            "example_3_2" => repro_example_3_2(),
            "theorem_1_dichotomy" => repro_theorem_1_dichotomy(),
            _ => repro_theorem_2(),
        })
        .collect()
}

fn run_repro(args: &ReproArgs) -> Result<i32> {
    let jobs = run_repro_jobs(&args.job)?;
    std::fs::create_dir_all(&args.out_dir)?;

    #[derive(Serialize)]
    struct Bundle<'a> {
        schema: u32,
        command: &'static str,
        jobs: &'a [ReproJob],
        all_pass: bool,
    }
    let all_pass = jobs.iter().all(|j| j.pass);
    let bundle = Bundle {
        schema: SCHEMA_VERSION,
        command: "repro",
        jobs: &jobs,
        all_pass,
    };
    std::fs::write(
        args.out_dir.join("bundle.json"),
        serde_json::to_string_pretty(&bundle)?,
    )?;

    let mut md = String::from("# Reproduction bundle\n\n| claim | verdict | details |\n|---|---|---|\n");
    for j in &jobs {
        let verdict = if j.pass { "pass" } else { "FAIL" };
        let _ = writeln!(md, "| {} | {} | {} |", j.name, verdict, j.details);
    }
    std::fs::write(args.out_dir.join("bundle.md"), &md)?;
    for j in &jobs {
        println!("{}: {}", j.name, if j.pass { "pass" } else { "FAIL" });
    }
    Ok(if all_pass { 0 } else { EXIT_EXPECT_MISMATCH })
}

/// Execute a parsed job. Returns the process exit code; runtime errors are
/// `Err` and map to exit 1 in `main`.
pub fn run(config: &JobConfig) -> Result<i32> {
    init_threads();
    match &config.command {
        Command::Verify(args) => run_verify(args, config.seed),
        Command::Scan(args) => run_scan(args),
        Command::Ode(args) => run_ode(args),
        Command::Certify(args) => run_certify(args),
        Command::Classify(args) => run_classify(args),
        Command::Repro(args) => run_repro(args),
    }
}
