//! Crack with strain-gradient elastic faces under mixed-mode far-field load.
//!
//! The crate solves for the jumps `G'` (displacement gradient) and `Q`
//! (traction) across a straight crack `[-1, 1]` whose faces carry membrane,
//! bending and strain-gradient surface stiffness, using
//!
//! * a Chebyshev–Galerkin spectral method ([`spectral`]) built on closed-form
//!   Hilbert transforms and precomputed influence integrals ([`chebyshev`]);
//! * an independent Nyström solver of the regularised Fredholm system
//!   ([`oracle`]) for cross-validation;
//! * field reconstruction along the faces and in the plane ([`fields`]).
//!
//! Every routine is generic over the scalar type through [`Real`]; the
//! aliases below fix it to `f64`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod oracle;
pub mod problem;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use fields::Face;
pub use scalar::Real;
pub use spectral::Mode;

/// Double-precision problem parameters.
pub type Params = problem::ProblemParams<f64>;
/// Double-precision coefficient set.
pub type Coefficients = spectral::CoefficientSet<f64>;
/// Double-precision influence tables.
pub type Tables = chebyshev::InfluenceTables<f64>;
/// Double-precision spectral solution of both modes.
pub type Solution = spectral::SpectralSolution<f64>;
/// Double-precision Nyström solution.
pub type Oracle = oracle::OracleSolution<f64>;
/// Double-precision field sample.
pub type Sample = fields::FieldSample<f64>;
