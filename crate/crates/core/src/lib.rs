//! Numerical algebra of curvature operators on Λ²ℝⁿ.
//!
//! Everything here is pointwise linear algebra in an orthonormal frame:
//! the metric is the identity, so indices raise and lower for free.
//!
//! * [`lie`] builds the orthonormal basis of Λ²ℝⁿ ≅ so(n) and its structure constants.
//! * [`tensor`] and [`curvature`] hold Riemann tensors, symmetric 2-tensors and
//!   curvature operators together with the `#` product, `tri` and the Tachibana gap.
//! * [`decomposition`] splits an operator into its trace, traceless-Ricci and Weyl parts.
//! * [`identities`] evaluates the quadratic curvature identities on both sides.
//! * [`extremal`] solves the constrained cubic extremal problem behind the
//!   soliton pinching inequality and classifies its equality cases.
//! * [`models`] carries the Gaussian, spherical and cylindrical shrinking solitons.
//! * [`random`] draws reproducible test operators.

pub mod curvature;
pub mod decomposition;
pub mod error;
pub mod extremal;
pub mod identities;
pub mod lie;
pub mod models;
pub mod random;
pub mod tensor;

pub use curvature::CurvOp;
pub use decomposition::{decompose, wedge, Decomposition};
pub use error::{Error, Result};
pub use lie::Lambda2Frame;
pub use tensor::{RiemannTensor, SymTensor2};
