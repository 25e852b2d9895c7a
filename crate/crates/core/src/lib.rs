//! Exact symbolic workbench for the Lie point, variational and divergence
//! symmetry algebras of isotropic linear ODE systems in normal form
//! `y^(n) + A[2] y^(n-2) + ... + A[n] y = 0`, with a numerical
//! cross-check through one-parameter group flows.

pub mod cli;
pub mod diffring;
pub mod equations;
pub mod error;
pub mod generators;
pub mod jetfield;
pub mod liealg;
pub mod linalg;
pub mod numflow;
pub mod variational;

pub use diffring::{CoeffPoly, DiffRing, Rational, XPoly};
pub use equations::{normal_form, LinearSystem};
pub use error::{Error, Result};
pub use jetfield::{JetPoly, VectorField};
