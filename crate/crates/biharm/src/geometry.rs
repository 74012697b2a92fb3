//! Pointwise extrinsic geometry of a space-like hypersurface: induced metric,
//! unit normal, second fundamental form, shape operator and mean curvature,
//! plus tensor-product chart grids and the Laplace–Beltrami operator on them.
//!
//! Sign conventions. The unit normal is normalized to `⟨η,η⟩ = ε_η = ±1`
//! (time-like, `ε_η = -1`, for space-like hypersurfaces of index-1 space
//! forms; space-like for the Riemannian cross-check). The second fundamental
//! form is read off as `b_ij = ε_η ⟨∂²x/∂u_i∂u_j, η⟩`, which extracts exactly
//! the η-component of the ambient Hessian because `η` is orthogonal to both
//! the tangent plane and the quadric position vector. The Laplacian follows
//! the minus-trace convention: `Δ(constant) = 0` and `Δ(u²) = -2` on a flat
//! metric.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::ambient::{inner_product_unchecked, quadric_residual, AmbientVector, SpaceForm};
use crate::error::{Error, Result};
use crate::immersion::{ChartJet, Family};

/// Tolerance used for the orientation rule's "component is zero" test.
const ORIENT_TOL: f64 = 1e-13;

/// Per-point geometric bundle of a space-like hypersurface sample.
#[derive(Debug, Clone)]
pub struct SurfaceSample {
    pub u: Vec<f64>,
    /// Induced metric `g_ij = ⟨∂_i x, ∂_j x⟩`, positive definite.
    pub metric: DMatrix<f64>,
    /// Unit normal with `⟨η,η⟩ = eta_sign`.
    pub normal: AmbientVector,
    /// `⟨η,η⟩`, −1 for time-like normals.
    pub eta_sign: f64,
    /// Second fundamental form coefficients against η.
    pub sff: DMatrix<f64>,
    /// Shape operator `A = g⁻¹ b`.
    pub shape: DMatrix<f64>,
    /// Mean curvature scalar, `H = f η`.
    pub mean_f: f64,
    /// `|A|² = Σ λ_i² ≥ 0`.
    pub normsq_a: f64,
    /// `|B|² = ε_η |A|²`, negative for time-like normals.
    pub normsq_b: f64,
    /// `⟨x,x⟩ - ε r²` (0 for flat ambient space forms).
    pub quadric_residual: f64,
}

/// Induced first fundamental form `g_ij = ⟨∂_i x, ∂_j x⟩`.
pub fn first_fundamental_form(jet: &ChartJet, sf: &SpaceForm) -> DMatrix<f64> {
    let sig = &sf.ambient_signature;
    let m = jet.param_dim();
    let mut g = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let ci = jet.jacobian.column(i).into_owned();
            let cj = jet.jacobian.column(j).into_owned();
            let v = inner_product_unchecked(&ci, &cj, sig);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// True iff the induced metric is positive definite, i.e. the sample is
/// space-like.
pub fn is_space_like(g: &DMatrix<f64>) -> bool {
    g.clone().cholesky().is_some()
}

/// Generalized cross product: the metric-orthogonal complement of `rows`
/// (N-1 vectors in dimension N), via cofactor expansion.
fn metric_cross(rows: &[AmbientVector], sf: &SpaceForm) -> AmbientVector {
    let n = rows[0].len();
    debug_assert_eq!(rows.len(), n - 1);
    let mut eta = DVector::zeros(n);
    let mut minor = DMatrix::zeros(n - 1, n - 1);
    for j in 0..n {
        for (r, row) in rows.iter().enumerate() {
            let mut c = 0;
            for k in 0..n {
                if k == j {
                    continue;
                }
                minor[(r, c)] = row[k];
                c += 1;
            }
        }
        let cof = if j % 2 == 0 { 1.0 } else { -1.0 } * minor.determinant();
        // Euclidean cross product composed with the metric sign makes the
        // result orthogonal under the indefinite inner product.
        eta[j] = sf.ambient_signature.eps(j) * cof;
    }
    eta
}

/// Unit normal of a hypersurface sample: orthogonal to all chart tangents and,
/// on a hyperquadric, to the position vector; normalized to `|⟨η,η⟩| = 1` and
/// oriented by the deterministic last-component rule. Returns `(η, ⟨η,η⟩)`.
pub fn unit_normal(jet: &ChartJet, sf: &SpaceForm) -> Result<(AmbientVector, f64)> {
    let n = jet.ambient_dim();
    let m = jet.param_dim();
    let expected_rows = if sf.is_flat() { m } else { m + 1 };
    if expected_rows != n - 1 {
        return Err(Error::Contract(format!(
            "hypersurface condition violated: {m} tangents in ambient dimension {n}"
        )));
    }
    let mut rows: Vec<AmbientVector> = (0..m).map(|i| jet.jacobian.column(i).into_owned()).collect();
    if !sf.is_flat() {
        rows.push(jet.point.clone());
    }
    let mut eta = metric_cross(&rows, sf);
    let nn = inner_product_unchecked(&eta, &eta, &sf.ambient_signature);
    if nn.abs() < 1e-20 {
        return Err(Error::DegenerateMetric { det: nn });
    }
    eta /= nn.abs().sqrt();
    let eta_sign = nn.signum();
    if sf.index == 1 && eta_sign >= 0.0 {
        return Err(Error::NotSpaceLike(
            "normal is not time-like in an index-1 space form".into(),
        ));
    }
    // orientation: last ambient component positive; if (numerically) zero,
    // first nonzero component positive
    let pivot = if eta[n - 1].abs() > ORIENT_TOL {
        n - 1
    } else {
        (0..n)
            .find(|&i| eta[i].abs() > ORIENT_TOL)
            .ok_or(Error::DegenerateMetric { det: 0.0 })?
    };
    if eta[pivot] < 0.0 {
        eta = -eta;
    }
    Ok((eta, eta_sign))
}

/// Second fundamental form `b`, shape operator `A = g⁻¹ b` and mean curvature
/// scalar `f = trace(A)/m` of a sample with normal `η`, `⟨η,η⟩ = eta_sign`.
pub fn second_fundamental_form(
    jet: &ChartJet,
    eta: &AmbientVector,
    eta_sign: f64,
    g: &DMatrix<f64>,
    sf: &SpaceForm,
) -> Result<(DMatrix<f64>, DMatrix<f64>, f64)> {
    let m = jet.param_dim();
    if g.nrows() != m || eta.len() != jet.ambient_dim() {
        return Err(Error::Contract("inconsistent sample dimensions".into()));
    }
    let sig = &sf.ambient_signature;
    let mut b = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let mut acc = 0.0;
            for (a, h) in jet.hessians.iter().enumerate() {
                acc += sig.eps(a) * h[(i, j)] * eta[a];
            }
            let v = eta_sign * acc;
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    let shape = g
        .clone()
        .lu()
        .solve(&b)
        .ok_or(Error::DegenerateMetric { det: g.determinant() })?;
    let f = shape.trace() / m as f64;
    Ok((b, shape, f))
}

/// Full pointwise bundle at one parameter point.
pub fn surface_sample(u: &[f64], jet: &ChartJet, sf: &SpaceForm) -> Result<SurfaceSample> {
    let g = first_fundamental_form(jet, sf);
    if !is_space_like(&g) {
        return Err(Error::NotSpaceLike(format!(
            "induced metric not positive definite at {u:?}"
        )));
    }
    let det = g.determinant();
    if det.abs() < 1e-14 {
        return Err(Error::DegenerateMetric { det });
    }
    let (eta, eta_sign) = unit_normal(jet, sf)?;
    let (b, shape, f) = second_fundamental_form(jet, &eta, eta_sign, &g, sf)?;
    let normsq_a = (&shape * &shape).trace();
    let qres = if sf.is_flat() {
        0.0
    } else {
        quadric_residual(&jet.point, sf)?
    };
    Ok(SurfaceSample {
        u: u.to_vec(),
        metric: g,
        normal: eta,
        eta_sign,
        sff: b,
        shape,
        mean_f: f,
        normsq_a,
        normsq_b: eta_sign * normsq_a,
        quadric_residual: qres,
    })
}

/// Uniform tensor-product grid specification (same box on every axis).
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub per_axis: usize,
    pub lo: f64,
    pub hi: f64,
}

impl GridSpec {
    pub fn new(per_axis: usize, lo: f64, hi: f64) -> Self {
        GridSpec { per_axis, lo, hi }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::new(9, -1.0, 1.0)
    }
}

/// Shared lattice geometry: shape, spacing and per-point induced metrics.
#[derive(Debug, Clone)]
pub struct GridGeom {
    pub dims: Vec<usize>,
    pub spacing: Vec<f64>,
    pub metrics: Arc<Vec<DMatrix<f64>>>,
}

impl GridGeom {
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major flat index of a multi-index.
    pub fn flat(&self, idx: &[usize]) -> usize {
        let mut acc = 0;
        for (k, &i) in idx.iter().enumerate() {
            acc = acc * self.dims[k] + i;
        }
        acc
    }

    /// Visit every multi-index.
    pub fn for_each_index<F: FnMut(&[usize])>(&self, mut f: F) {
        let m = self.dims.len();
        let mut idx = vec![0usize; m];
        loop {
            f(&idx);
            let mut k = m;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < self.dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// True when the multi-index is at least `ring` points away from every
    /// boundary face.
    pub fn is_interior(&self, idx: &[usize], ring: usize) -> bool {
        idx.iter()
            .zip(&self.dims)
            .all(|(&i, &d)| i >= ring && i + ring < d)
    }
}

/// A full grid of surface samples over a chart box.
#[derive(Debug, Clone)]
pub struct SurfaceGrid {
    pub geom: GridGeom,
    pub samples: Vec<SurfaceSample>,
    pub space_form: SpaceForm,
    pub eta_sign: f64,
}

impl SurfaceGrid {
    /// Evaluate a family over the tensor-product lattice.
    pub fn sample(family: &Family, spec: &GridSpec) -> Result<SurfaceGrid> {
        if spec.per_axis < 3 {
            return Err(Error::StencilTooSmall {
                need: 3,
                got: spec.per_axis,
            });
        }
        if spec.hi <= spec.lo {
            return Err(Error::Contract("grid box must have hi > lo".into()));
        }
        let m = family.m;
        let dims = vec![spec.per_axis; m];
        let h = (spec.hi - spec.lo) / (spec.per_axis - 1) as f64;
        let spacing = vec![h; m];
        let geom_probe = GridGeom {
            dims: dims.clone(),
            spacing: spacing.clone(),
            metrics: Arc::new(Vec::new()),
        };
        let mut samples = Vec::with_capacity(geom_probe.len());
        let mut err: Option<Error> = None;
        geom_probe.for_each_index(|idx| {
            if err.is_some() {
                return;
            }
            let u: Vec<f64> = idx.iter().map(|&i| spec.lo + h * i as f64).collect();
            match family.jet(&u).and_then(|jet| surface_sample(&u, &jet, &family.space_form)) {
                Ok(s) => samples.push(s),
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let metrics: Vec<DMatrix<f64>> = samples.iter().map(|s| s.metric.clone()).collect();
        let eta_sign = samples[0].eta_sign;
        Ok(SurfaceGrid {
            geom: GridGeom {
                dims,
                spacing,
                metrics: Arc::new(metrics),
            },
            samples,
            space_form: family.space_form.clone(),
            eta_sign,
        })
    }

    /// Extract a per-point scalar as a field on this grid.
    pub fn scalar_field<F: Fn(&SurfaceSample) -> f64>(&self, f: F) -> ScalarField {
        ScalarField {
            geom: self.geom.clone(),
            values: self.samples.iter().map(f).collect(),
            valid: vec![true; self.samples.len()],
        }
    }

    pub fn max_quadric_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.quadric_residual.abs())
            .fold(0.0, f64::max)
    }
}

/// A real-valued field on a chart grid, with a validity mask (stencil
/// operations shrink the valid region by one ring).
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub geom: GridGeom,
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

impl ScalarField {
    /// Build a field from explicit values and per-point metrics; used by
    /// tests and by callers that synthesize grids directly.
    pub fn from_values(geom: GridGeom, values: Vec<f64>) -> Self {
        let n = geom.len();
        assert_eq!(values.len(), n);
        ScalarField {
            geom,
            values,
            valid: vec![true; n],
        }
    }

    /// Sup of |values| over points that are `ring`-interior and valid.
    pub fn interior_sup(&self, ring: usize) -> f64 {
        let mut acc: f64 = 0.0;
        self.geom.for_each_index(|idx| {
            let k = self.geom.flat(idx);
            if self.valid[k] && self.geom.is_interior(idx, ring) {
                acc = acc.max(self.values[k].abs());
            }
        });
        acc
    }
}

/// Laplace–Beltrami operator in the minus-trace (Beltrami) convention:
/// `Δφ = -(1/√g) ∂_i(√g g^{ij} ∂_j φ)`, discretized with second-order central
/// differences in non-divergence form. Boundary points (and neighbors of
/// invalid points) are marked invalid in the output.
pub fn laplace_beltrami(field: &ScalarField) -> Result<ScalarField> {
    let geom = &field.geom;
    let m = geom.dims.len();
    if geom.dims.iter().any(|&d| d < 3) {
        return Err(Error::StencilTooSmall {
            need: 3,
            got: *geom.dims.iter().min().unwrap(),
        });
    }
    if geom.metrics.len() != geom.len() {
        return Err(Error::Contract("field carries no per-point metrics".into()));
    }

    // precompute g^{-1}, √det g and the flux coefficients a^{ij} = √g g^{ij}
    let npts = geom.len();
    let mut inv = Vec::with_capacity(npts);
    let mut sqrt_det = Vec::with_capacity(npts);
    let mut flux = Vec::with_capacity(npts);
    for g in geom.metrics.iter() {
        let det = g.determinant();
        if det <= 0.0 {
            return Err(Error::DegenerateMetric { det });
        }
        let gi = g
            .clone()
            .try_inverse()
            .ok_or(Error::DegenerateMetric { det })?;
        let sd = det.sqrt();
        flux.push(&gi * sd);
        inv.push(gi);
        sqrt_det.push(sd);
    }

    let mut out = vec![f64::NAN; npts];
    let mut valid = vec![false; npts];
    geom.for_each_index(|idx| {
        if !geom.is_interior(idx, 1) {
            return;
        }
        let k = geom.flat(idx);
        let mut neighbors_ok = field.valid[k];
        let shift = |idx: &[usize], axis: usize, step: isize| -> usize {
            let mut j = idx.to_vec();
            j[axis] = (j[axis] as isize + step) as usize;
            geom.flat(&j)
        };
        for i in 0..m {
            for step in [-1isize, 1] {
                neighbors_ok &= field.valid[shift(idx, i, step)];
            }
            for j in 0..m {
                if i != j {
                    for (si, sj) in [(-1isize, -1isize), (-1, 1), (1, -1), (1, 1)] {
                        let mut q = idx.to_vec();
                        q[i] = (q[i] as isize + si) as usize;
                        q[j] = (q[j] as isize + sj) as usize;
                        neighbors_ok &= field.valid[geom.flat(&q)];
                    }
                }
            }
        }
        if !neighbors_ok {
            return;
        }

        let phi = |k: usize| field.values[k];
        let mut trace_term = 0.0;
        let mut drift_term = 0.0;
        for i in 0..m {
            let hi = geom.spacing[i];
            let kp = shift(idx, i, 1);
            let km = shift(idx, i, -1);
            // second derivatives of φ
            trace_term += inv[k][(i, i)] * (phi(kp) - 2.0 * phi(k) + phi(km)) / (hi * hi);
            for j in (i + 1)..m {
                let hj = geom.spacing[j];
                let mut pp = idx.to_vec();
                pp[i] += 1;
                pp[j] += 1;
                let mut pm = idx.to_vec();
                pm[i] += 1;
                pm[j] -= 1;
                let mut mp = idx.to_vec();
                mp[i] -= 1;
                mp[j] += 1;
                let mut mm = idx.to_vec();
                mm[i] -= 1;
                mm[j] -= 1;
                let mixed = (phi(geom.flat(&pp)) - phi(geom.flat(&pm)) - phi(geom.flat(&mp))
                    + phi(geom.flat(&mm)))
                    / (4.0 * hi * hj);
                trace_term += 2.0 * inv[k][(i, j)] * mixed;
            }
            // first-order drift: (1/√g) Σ_i ∂_i(√g g^{ij}) ∂_j φ
            for j in 0..m {
                let da = (flux[shift(idx, i, 1)][(i, j)] - flux[shift(idx, i, -1)][(i, j)])
                    / (2.0 * hi);
                let hj = geom.spacing[j];
                let dphi = (phi(shift(idx, j, 1)) - phi(shift(idx, j, -1))) / (2.0 * hj);
                drift_term += da / sqrt_det[k] * dphi;
            }
        }
        out[k] = -(trace_term + drift_term);
        valid[k] = true;
    });

    Ok(ScalarField {
        geom: geom.clone(),
        values: out,
        valid,
    })
}

/// Metric-raised gradient `(∇φ)^i = g^{ij} ∂_j φ` by central differences,
/// valid on the one-ring interior. Returns one optional vector per point.
pub fn raised_gradient(field: &ScalarField) -> Result<Vec<Option<DVector<f64>>>> {
    let geom = &field.geom;
    let m = geom.dims.len();
    if geom.dims.iter().any(|&d| d < 3) {
        return Err(Error::StencilTooSmall {
            need: 3,
            got: *geom.dims.iter().min().unwrap(),
        });
    }
    let mut out: Vec<Option<DVector<f64>>> = vec![None; geom.len()];
    geom.for_each_index(|idx| {
        if !geom.is_interior(idx, 1) {
            return;
        }
        let k = geom.flat(idx);
        let mut grad = DVector::zeros(m);
        let mut ok = field.valid[k];
        for j in 0..m {
            let mut p = idx.to_vec();
            p[j] += 1;
            let mut q = idx.to_vec();
            q[j] -= 1;
            let (kp, km) = (geom.flat(&p), geom.flat(&q));
            ok &= field.valid[kp] && field.valid[km];
            grad[j] = (field.values[kp] - field.values[km]) / (2.0 * geom.spacing[j]);
        }
        if !ok {
            return;
        }
        let g = &geom.metrics[k];
        if let Some(raised) = g.clone().lu().solve(&grad) {
            out[k] = Some(raised);
        }
    });
    Ok(out)
}
