//! Flat pseudo-Euclidean spaces of arbitrary signature and the hyperquadric
//! space forms embedded in them.
//!
//! Coordinate convention: the first `positive` components carry `+` in the
//! inner product, the last `negative` components carry `-`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for causal classification of numerically computed vectors.
pub const CAUSAL_TOL: f64 = 1e-9;

/// Metric signature of a flat pseudo-Euclidean space: number of `+` and `-`
/// directions. `negative` is the index of the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize) -> Self {
        Signature { positive, negative }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative
    }

    /// Sign of the i-th basis vector: `+1` for the first `positive`
    /// coordinates, `-1` for the rest.
    pub fn eps(&self, i: usize) -> f64 {
        if i < self.positive {
            1.0
        } else {
            -1.0
        }
    }
}

/// A vector of the flat ambient space, components ordered positive-first.
pub type AmbientVector = DVector<f64>;

/// Causal character of an ambient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalCharacter {
    SpaceLike,
    TimeLike,
    Null,
}

/// Indefinite inner product `Σ_{i<p} v_i w_i − Σ_{i≥p} v_i w_i`.
pub fn inner_product(v: &AmbientVector, w: &AmbientVector, sig: &Signature) -> Result<f64> {
    if v.len() != sig.dim() {
        return Err(Error::DimensionMismatch {
            expected: sig.dim(),
            got: v.len(),
        });
    }
    if w.len() != sig.dim() {
        return Err(Error::DimensionMismatch {
            expected: sig.dim(),
            got: w.len(),
        });
    }
    Ok(inner_product_unchecked(v, w, sig))
}

/// Same as [`inner_product`] but assumes conforming dimensions.
pub fn inner_product_unchecked(v: &AmbientVector, w: &AmbientVector, sig: &Signature) -> f64 {
    let mut acc = 0.0;
    for i in 0..v.len() {
        acc += sig.eps(i) * v[i] * w[i];
    }
    acc
}

/// Classify a vector by the sign of its self inner product, with an absolute
/// tolerance band around zero mapped to `Null`.
pub fn causal_character(v: &AmbientVector, sig: &Signature, tol: f64) -> Result<CausalCharacter> {
    let q = inner_product(v, v, sig)?;
    Ok(if q > tol {
        CausalCharacter::SpaceLike
    } else if q < -tol {
        CausalCharacter::TimeLike
    } else {
        CausalCharacter::Null
    })
}

/// Kind of constant-curvature space form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceFormKind {
    /// `S^d_ν(r)`: `⟨x,x⟩ = +r²`, curvature `+1/r²`.
    PseudoSphere,
    /// `H^d_ν(r)`: `⟨x,x⟩ = -r²`, curvature `-1/r²`.
    PseudoHyperbolic,
    /// `R^d_ν`: the flat space itself.
    Flat,
}

/// A constant-curvature space form, realized as a hyperquadric of a flat
/// pseudo-Euclidean space (or that flat space itself).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    pub kind: SpaceFormKind,
    /// Dimension of the space form (not of the ambient flat space).
    pub dim: usize,
    /// Index of the space form's own metric.
    pub index: usize,
    /// Radius of the hyperquadric; 0 is stored for flat.
    pub radius: f64,
    pub ambient_signature: Signature,
}

impl SpaceForm {
    /// `S^d_ν(r)` in `R^{d+1}_ν`.
    pub fn pseudo_sphere(dim: usize, index: usize, radius: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::ParameterOutOfRange("radius must be positive".into()));
        }
        if index > dim {
            return Err(Error::ParameterOutOfRange("index exceeds dimension".into()));
        }
        Ok(SpaceForm {
            kind: SpaceFormKind::PseudoSphere,
            dim,
            index,
            radius,
            ambient_signature: Signature::new(dim + 1 - index, index),
        })
    }

    /// `H^d_ν(r)` in `R^{d+1}_{ν+1}`.
    pub fn pseudo_hyperbolic(dim: usize, index: usize, radius: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::ParameterOutOfRange("radius must be positive".into()));
        }
        if index > dim {
            return Err(Error::ParameterOutOfRange("index exceeds dimension".into()));
        }
        Ok(SpaceForm {
            kind: SpaceFormKind::PseudoHyperbolic,
            dim,
            index,
            radius,
            ambient_signature: Signature::new(dim - index, index + 1),
        })
    }

    /// `R^d_ν`, its own ambient.
    pub fn flat(dim: usize, index: usize) -> Result<Self> {
        if index > dim {
            return Err(Error::ParameterOutOfRange("index exceeds dimension".into()));
        }
        Ok(SpaceForm {
            kind: SpaceFormKind::Flat,
            dim,
            index,
            radius: 0.0,
            ambient_signature: Signature::new(dim - index, index),
        })
    }

    pub fn is_flat(&self) -> bool {
        self.kind == SpaceFormKind::Flat
    }

    /// Sectional curvature: `+1/r²`, `-1/r²` or `0`.
    pub fn curvature(&self) -> f64 {
        match self.kind {
            SpaceFormKind::PseudoSphere => 1.0 / (self.radius * self.radius),
            SpaceFormKind::PseudoHyperbolic => -1.0 / (self.radius * self.radius),
            SpaceFormKind::Flat => 0.0,
        }
    }

    /// Sign ε with `⟨x,x⟩ = ε r²` on the quadric.
    pub fn quadric_sign(&self) -> Result<f64> {
        match self.kind {
            SpaceFormKind::PseudoSphere => Ok(1.0),
            SpaceFormKind::PseudoHyperbolic => Ok(-1.0),
            SpaceFormKind::Flat => Err(Error::FlatNoQuadric),
        }
    }

    /// Compact name in the `kind dim[_index](radius)` grammar, e.g. `H3_1(1)`.
    pub fn compact_name(&self) -> String {
        let letter = match self.kind {
            SpaceFormKind::PseudoSphere => "S",
            SpaceFormKind::PseudoHyperbolic => "H",
            SpaceFormKind::Flat => "R",
        };
        let idx = if self.index > 0 {
            format!("_{}", self.index)
        } else {
            String::new()
        };
        if self.is_flat() {
            format!("{letter}{}{idx}", self.dim)
        } else {
            format!("{letter}{}{idx}({})", self.dim, self.radius)
        }
    }

    /// Parse a compact space form string: `H3_1(1)`, `S3_1(1)`, `R3_1`,
    /// `S3(1)`, `H3(1)`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::SpaceFormString {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('H') => SpaceFormKind::PseudoHyperbolic,
            Some('S') => SpaceFormKind::PseudoSphere,
            Some('R') => SpaceFormKind::Flat,
            _ => return Err(bad("expected leading H, S or R")),
        };
        let rest: &str = chars.as_str();
        // split off "(radius)" if present
        let (head, radius) = if let Some(open) = rest.find('(') {
            if !rest.ends_with(')') {
                return Err(bad("missing closing parenthesis"));
            }
            let r: f64 = rest[open + 1..rest.len() - 1]
                .parse()
                .map_err(|_| bad("radius is not a number"))?;
            (&rest[..open], Some(r))
        } else {
            (rest, None)
        };
        let (dim_str, index) = if let Some(us) = head.find('_') {
            let idx: usize = head[us + 1..]
                .parse()
                .map_err(|_| bad("index is not an integer"))?;
            (&head[..us], idx)
        } else {
            (head, 0)
        };
        let dim: usize = dim_str
            .parse()
            .map_err(|_| bad("dimension is not an integer"))?;
        match kind {
            SpaceFormKind::Flat => {
                if radius.is_some() {
                    return Err(bad("flat space takes no radius"));
                }
                SpaceForm::flat(dim, index)
            }
            SpaceFormKind::PseudoSphere => {
                SpaceForm::pseudo_sphere(dim, index, radius.ok_or_else(|| bad("missing radius"))?)
            }
            SpaceFormKind::PseudoHyperbolic => SpaceForm::pseudo_hyperbolic(
                dim,
                index,
                radius.ok_or_else(|| bad("missing radius"))?,
            ),
        }
    }
}

/// `⟨x,x⟩ − ε r²`; zero iff `x` lies on the hyperquadric.
pub fn quadric_residual(x: &AmbientVector, sf: &SpaceForm) -> Result<f64> {
    let eps = sf.quadric_sign()?;
    let q = inner_product(x, x, &sf.ambient_signature)?;
    Ok(q - eps * sf.radius * sf.radius)
}
