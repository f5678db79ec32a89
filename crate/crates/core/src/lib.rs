//! Pseudo-absolute values on number fields and rational function fields, their
//! extensions, pseudo-norms, global spaces and reduction maps. Arithmetic is
//! exact; the generic layers are written over `num-traits` and instantiated
//! below.

pub mod bounds;
pub mod error;
pub mod factor;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod scalar;
pub mod xreal;
pub mod roots;
pub mod fields;
pub mod pav;
pub mod extension;
pub mod pnorm;
pub mod spaces;
pub mod reduction;
pub mod suites;

pub use error::{Error, Result};
pub use fields::{Element, FieldDescriptor};
pub use pav::Pav;
pub use pnorm::PseudoNorm;
pub use xreal::XReal;

/// Exact scalars of the prime field.
pub type Scalar = scalar::Rational;
/// Polynomials over the scalars.
pub type ScalarPoly = poly::Poly<Scalar>;
/// Coordinate vectors of a free module over a field.
pub type Vector = Vec<fields::Element>;
/// Column lists, e.g. the generators of a submodule.
pub type Vectors = Vec<Vector>;
