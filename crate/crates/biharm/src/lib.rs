//! Numerical verification engine for biharmonic space-like hypersurfaces in
//! pseudo-Riemannian space forms.
//!
//! The pipeline runs from first principles: an immersion (built-in family or
//! chart-language file) is differentiated to second order with jet
//! arithmetic, the induced metric / unit normal / second fundamental form /
//! mean curvature are assembled pointwise, and the bitension residuals are
//! evaluated on a grid. Parameter scans rediscover the proper biharmonic
//! members of each family by root-finding, and the profile-ODE module
//! certifies — symbolically in exact rational arithmetic, and numerically by
//! conserved-quantity drift — that non-constant mean-curvature profiles are
//! impossible at negative curvature.

pub mod ambient;
pub mod biharmonic;
pub mod chartlang;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod immersion;
pub mod jet;
pub mod profile_ode;
pub mod ratpoly;

pub use ambient::{Signature, SpaceForm, SpaceFormKind};
pub use biharmonic::{Classification, ResidualReport, ScanResult};
pub use error::{Error, Result};
pub use geometry::{GridSpec, SurfaceGrid, SurfaceSample};
pub use immersion::Family;
pub use jet::Jet;
