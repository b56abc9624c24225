//! Exact computer algebra for Whittaker modules of the free boson orbifold `M(1)^+`.
//!
//! The untwisted module `M(1,λ)` and the twisted module `M(1,λ)(θ)` are
//! realized as polynomial Fock spaces in variables `x[i,n]`. On top of that
//! realization the crate evaluates Heisenberg and vertex-operator modes,
//! computes Virasoro Whittaker types, solves for every `λ` of a given type,
//! and builds replayable certificates that any nonzero vector generates the
//! constant `1` under the even subalgebra `U⁺`.

pub mod certify;
pub mod cli;
pub mod error;
pub mod fock;
pub mod heisenberg;
pub mod json;
pub mod relations;
pub mod sample;
pub mod scalar;
pub mod series;
pub mod vertex;
pub mod whittaker;

pub use certify::ReductionCertificate;
pub use error::{Error, Result};
pub use fock::{FockVector, ModeIndex, Monomial, Sector, Var};
pub use heisenberg::{LambdaSequence, QuadraticElement};
pub use scalar::{Degree, ExactScalar, HalfInt};
pub use whittaker::{FiberPoint, WhittakerType};
