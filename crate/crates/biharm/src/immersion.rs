//! Immersion charts as jet-producing maps: built-in analytic families for
//! products and slices of hyperquadrics, plus an adapter over chart-language
//! programs.
//!
//! Built-in families use graph charts (`x_time = √(r² + |x_space|²)`-type) on
//! a bounded parameter box; their jets are computed with jet arithmetic, so
//! derivatives are exact to machine precision.

use nalgebra::{DMatrix, DVector};

use crate::ambient::{AmbientVector, SpaceForm};
use crate::chartlang::{eval_jet, ChartProgram};
use crate::error::{Error, Result};
use crate::jet::Jet;

/// Value, Jacobian and per-component Hessians of an immersion at one
/// parameter point.
#[derive(Debug, Clone)]
pub struct ChartJet {
    pub point: AmbientVector,
    /// N×m matrix of ∂x/∂u.
    pub jacobian: DMatrix<f64>,
    /// N symmetric m×m matrices of ∂²x/∂u∂u.
    pub hessians: Vec<DMatrix<f64>>,
}

impl ChartJet {
    /// Assemble from one jet per ambient component.
    pub fn from_component_jets(jets: &[Jet]) -> Self {
        let n = jets.len();
        let m = jets[0].nvars();
        let point = DVector::from_iterator(n, jets.iter().map(|j| j.v));
        let mut jacobian = DMatrix::zeros(n, m);
        for (a, j) in jets.iter().enumerate() {
            jacobian.row_mut(a).copy_from(&j.g.transpose());
        }
        let hessians = jets.iter().map(|j| j.h.clone()).collect();
        ChartJet {
            point,
            jacobian,
            hessians,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    pub fn param_dim(&self) -> usize {
        self.jacobian.ncols()
    }
}

#[derive(Debug, Clone)]
enum FamilyKind {
    /// `H^n(√(1-s²))` as the slice `x_{n+2} = s` of `H^{n+1}_1(1) ⊂ R^{n+2}_2`.
    HyperbolicSlice { n: usize, s: f64 },
    /// `S^n(√(1+s²))` as the slice `x_{n+2} = s` of `S^{n+1}_1(1) ⊂ R^{n+2}_1`.
    SphericalSlice { n: usize, s: f64 },
    /// Riemannian cross-check: `S^n(√(1-s²))` inside `S^{n+1}(1) ⊂ R^{n+2}`.
    SphereSlice { n: usize, s: f64 },
    /// `H^n(r)` as a hypersurface of flat `R^{n+1}_1`.
    Hyperboloid { n: usize, r: f64 },
    /// `H^1(r) × R` as a hypersurface of flat `R^3_1`.
    Cylinder { r: f64 },
    /// `H^m(r) × H^n(s)`, `r²+s²=1`, inside `H^{m+n+1}_1(1) ⊂ R^{m+n+2}_2`.
    Clifford { m: usize, n: usize, r: f64 },
    /// `S^1(a) × H^1(b)`, `a²-b²=1`, inside `S^3_1(1) ⊂ R^4_1`.
    DeSitterClifford { a: f64 },
    Chart(Box<ChartProgram>),
}

/// A parametrized immersion with its target space form and family parameters.
#[derive(Debug, Clone)]
pub struct Family {
    pub name: String,
    /// Intrinsic dimension of the chart.
    pub m: usize,
    pub space_form: SpaceForm,
    pub params: Vec<(String, f64)>,
    /// Per-axis default chart box (symmetric).
    pub default_box: (f64, f64),
    kind: FamilyKind,
}

impl Family {
    /// §3.1-type slice family: fixing the last coordinate of the anti-de
    /// Sitter quadric at `s`, `|s| < 1`, gives `H^n(√(1-s²))`.
    pub fn hyperbolic_slice(n: usize, s: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParameterOutOfRange("need n >= 2".into()));
        }
        if s.abs() >= 1.0 {
            return Err(Error::ParameterOutOfRange(format!("need |s| < 1, got {s}")));
        }
        Ok(Family {
            name: "hyperbolic_slice".into(),
            m: n,
            space_form: SpaceForm::pseudo_hyperbolic(n + 1, 1, 1.0)?,
            params: vec![("s".into(), s)],
            default_box: (-1.0, 1.0),
            kind: FamilyKind::HyperbolicSlice { n, s },
        })
    }

    /// De Sitter analogue of the slice family: `S^n(√(1+s²))` in `S^{n+1}_1(1)`.
    pub fn spherical_slice(n: usize, s: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParameterOutOfRange("need n >= 2".into()));
        }
        Ok(Family {
            name: "spherical_slice".into(),
            m: n,
            space_form: SpaceForm::pseudo_sphere(n + 1, 1, 1.0)?,
            params: vec![("s".into(), s)],
            default_box: (-0.4, 0.4),
            kind: FamilyKind::SphericalSlice { n, s },
        })
    }

    /// Riemannian small hypersphere `S^n(√(1-s²))` in the unit sphere
    /// `S^{n+1}(1)`, used as the index-0 cross-check.
    pub fn sphere_slice(n: usize, s: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParameterOutOfRange("need n >= 2".into()));
        }
        if s.abs() >= 1.0 {
            return Err(Error::ParameterOutOfRange(format!("need |s| < 1, got {s}")));
        }
        Ok(Family {
            name: "sphere_slice".into(),
            m: n,
            space_form: SpaceForm::pseudo_sphere(n + 1, 0, 1.0)?,
            params: vec![("s".into(), s)],
            default_box: (-0.4, 0.4),
            kind: FamilyKind::SphereSlice { n, s },
        })
    }

    /// `H^n(r)` as a space-like hypersurface of Minkowski `R^{n+1}_1`.
    pub fn hyperboloid(n: usize, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParameterOutOfRange("need n >= 2".into()));
        }
        if r <= 0.0 {
            return Err(Error::ParameterOutOfRange(format!("need r > 0, got {r}")));
        }
        Ok(Family {
            name: "hyperboloid".into(),
            m: n,
            space_form: SpaceForm::flat(n + 1, 1)?,
            params: vec![("r".into(), r)],
            default_box: (-1.0, 1.0),
            kind: FamilyKind::Hyperboloid { n, r },
        })
    }

    /// Space-like cylinder `H^1(r) × R` in Minkowski `R^3_1`.
    pub fn cylinder(r: f64) -> Result<Self> {
        if r <= 0.0 {
            return Err(Error::ParameterOutOfRange(format!("need r > 0, got {r}")));
        }
        Ok(Family {
            name: "cylinder".into(),
            m: 2,
            space_form: SpaceForm::flat(3, 1)?,
            params: vec![("r".into(), r)],
            default_box: (-1.0, 1.0),
            kind: FamilyKind::Cylinder { r },
        })
    }

    /// §3.2-type product family `H^m(r) × H^n(s)` with `s = √(1-r²)`, a
    /// space-like hypersurface of `H^{m+n+1}_1(1)`.
    pub fn clifford(m: usize, n: usize, r: f64) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::ParameterOutOfRange("need m,n >= 1".into()));
        }
        if r <= 0.0 || r >= 1.0 {
            return Err(Error::ParameterOutOfRange(format!(
                "need r in (0,1), got {r}"
            )));
        }
        Ok(Family {
            name: "clifford".into(),
            m: m + n,
            space_form: SpaceForm::pseudo_hyperbolic(m + n + 1, 1, 1.0)?,
            params: vec![("r".into(), r)],
            default_box: (-1.0, 1.0),
            kind: FamilyKind::Clifford { m, n, r },
        })
    }

    /// De Sitter product `S^1(a) × H^1(b)` with `b = √(a²-1)`, `a > 1`, a
    /// space-like hypersurface of `S^3_1(1)`.
    pub fn ds_clifford(a: f64) -> Result<Self> {
        if a <= 1.0 {
            return Err(Error::ParameterOutOfRange(format!("need a > 1, got {a}")));
        }
        Ok(Family {
            name: "ds_clifford".into(),
            m: 2,
            space_form: SpaceForm::pseudo_sphere(3, 1, 1.0)?,
            params: vec![("a".into(), a)],
            default_box: (-1.0, 1.0),
            kind: FamilyKind::DeSitterClifford { a },
        })
    }

    /// Wrap a parsed chart program. The quadric residual is checked at each
    /// sample by the geometry pipeline, not assumed.
    pub fn from_chart(prog: ChartProgram) -> Self {
        Family {
            name: "chart".into(),
            m: prog.param_count,
            space_form: prog.space_form.clone(),
            params: Vec::new(),
            default_box: (-1.0, 1.0),
            kind: FamilyKind::Chart(Box::new(prog)),
        }
    }

    /// True when jets come from the chart language rather than analytic
    /// formulas (looser default residual tolerances apply).
    pub fn is_chart_backed(&self) -> bool {
        matches!(self.kind, FamilyKind::Chart(_))
    }

    /// Evaluate value, Jacobian and Hessians at a parameter point.
    pub fn jet(&self, u: &[f64]) -> Result<ChartJet> {
        if u.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: u.len(),
            });
        }
        let seeds = Jet::seed(u);
        let jets = match &self.kind {
            FamilyKind::HyperbolicSlice { n, s } => {
                let rho = (1.0 - s * s).sqrt();
                let mut comps = scaled_hyperbolic_graph(&seeds, rho, *n);
                comps.push(Jet::constant(*s, *n));
                comps
            }
            FamilyKind::SphericalSlice { n, s } => {
                let rho = (1.0 + s * s).sqrt();
                let mut comps = scaled_spherical_graph(&seeds, rho, *n)?;
                comps.push(Jet::constant(*s, *n));
                comps
            }
            FamilyKind::SphereSlice { n, s } => {
                let rho = (1.0 - s * s).sqrt();
                let mut comps = scaled_spherical_graph(&seeds, rho, *n)?;
                comps.push(Jet::constant(*s, *n));
                comps
            }
            FamilyKind::Hyperboloid { n, r } => scaled_hyperbolic_graph(&seeds, *r, *n),
            FamilyKind::Cylinder { r } => {
                // flat direction u1, H^1(r) graph chart in (x2, x3)
                vec![
                    seeds[0].clone(),
                    &seeds[1] * *r,
                    &time_component(&seeds[1..2], 2) * *r,
                ]
            }
            FamilyKind::Clifford { m, n, r } => {
                let s = (1.0 - r * r).sqrt();
                let (a, b) = seeds.split_at(*m);
                let mut comps = Vec::with_capacity(m + n + 2);
                for ai in a {
                    comps.push(ai * *r);
                }
                for bj in b {
                    comps.push(bj * s);
                }
                comps.push(&time_component(a, self.m) * *r);
                comps.push(&time_component(b, self.m) * s);
                comps
            }
            FamilyKind::DeSitterClifford { a } => {
                let b = (a * a - 1.0).sqrt();
                vec![
                    &seeds[0].cos() * *a,
                    &seeds[0].sin() * *a,
                    &seeds[1] * b,
                    &time_component(&seeds[1..2], 2) * b,
                ]
            }
            FamilyKind::Chart(prog) => eval_jet(prog, u)?.0,
        };
        Ok(ChartJet::from_component_jets(&jets))
    }
}

/// `√(1 + Σ uᵢ²)` over the given parameter jets (the graph-chart time
/// component of a unit hyperboloid).
fn time_component(u: &[Jet], m: usize) -> Jet {
    let mut acc = Jet::constant(1.0, m);
    for ui in u {
        acc = &acc + &(ui * ui);
    }
    acc.sqrt()
}

/// Graph chart of `H^n(rho)`: `(rho·u, rho·√(1+|u|²))`.
fn scaled_hyperbolic_graph(u: &[Jet], rho: f64, n: usize) -> Vec<Jet> {
    let mut comps: Vec<Jet> = u.iter().map(|ui| ui * rho).collect();
    comps.push(&time_component(u, n) * rho);
    comps
}

/// Graph chart of `S^n(rho)`: `(rho·u, rho·√(1-|u|²))`; needs `|u| < 1`.
fn scaled_spherical_graph(u: &[Jet], rho: f64, n: usize) -> Result<Vec<Jet>> {
    let mut acc = Jet::constant(1.0, n);
    for ui in u {
        acc = &acc - &(ui * ui);
    }
    if acc.v <= 0.0 {
        return Err(Error::Domain(format!(
            "spherical graph chart needs |u| < 1, got |u|² = {}",
            1.0 - acc.v
        )));
    }
    let mut comps: Vec<Jet> = u.iter().map(|ui| ui * rho).collect();
    comps.push(&acc.sqrt() * rho);
    Ok(comps)
}
