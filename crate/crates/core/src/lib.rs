//! Simplicial line arrangements, folding polynomials, and the separable real
//! algebraic surfaces they generate, together with full enumeration and
//! numerical certification of every real node.
//!
//! The pipeline:
//!
//! 1. [`arrangements`] builds the (C)/(D) line systems, their parity
//!    subsystems Σ_C / Σ_D, and enumerates vertices and triangular faces.
//! 2. [`poly`] provides dense bivariate/univariate polynomials, Chebyshev
//!    polynomials, and product expansion of linear factors (optionally with
//!    compensated accumulation).
//! 3. [`construct`] expands the subsystem products, measures the
//!    normalization constant λ, applies the rotate-scale-translate map that
//!    pins all local minima at −1 and maxima at 8, and builds the mirrored
//!    polynomial and the integer-coefficient folding polynomial.
//! 4. [`critical`] predicts critical points combinatorially from chord-line
//!    concurrences, polishes them by damped Newton iteration, classifies them
//!    by Hessian signature, and cross-checks everything against a grid-seeded
//!    brute-force oracle.
//! 5. [`surfaces`] assembles the separable surfaces, enumerates and certifies
//!    their conical nodes, and compares against the closed-form counts.
//! 6. [`render`] reproduces sign plots, sphere-clipped raymarched views, and
//!    triangle meshes of the zero sets.
//!
//! With the default `parallel` feature the batch loops (Newton polishing,
//! grid scans, per-pixel rendering) run on rayon; disabling it yields a
//! fully sequential build with identical results.

pub mod arrangements;
pub mod construct;
pub mod critical;
pub mod error;
pub mod exec;
pub mod export;
pub mod poly;
pub mod render;
pub mod surfaces;
pub mod verify;

pub use arrangements::{Arrangement, LineForm, LineKind, System, VertexReport};
pub use construct::NormalizationData;
pub use critical::{CriticalPoint, CriticalSpectrum, Morse};
pub use error::Error;
pub use poly::{BivarPoly, Precision, UnivarPoly};
pub use surfaces::{Family, Node, NodeCountReport, SurfaceSpec};

/// Shared numeric configuration.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    /// Scale-aware clustering tolerance for vertex/concurrence detection.
    pub tol: f64,
    /// Accumulation mode for polynomial expansion.
    pub precision: Precision,
    /// Seed for randomized spot checks.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-9,
            precision: Precision::Double,
            seed: 0x5EED,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
