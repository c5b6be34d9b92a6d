//! Exact symbolic computation on theta-deformed toric noncommutative
//! spheres: twisted graded algebras, their differential calculi, the
//! basic instanton on `S^4_theta`, self-duality, charge and the moduli
//! index arithmetic.
//!
//! All identities are decided exactly over Gaussian rationals with the
//! deformation phase `mu = exp(i pi theta)` kept as a formal unit.

pub mod algebra;
pub mod coeff;
pub mod error;
pub mod expr;
pub mod hodge;
pub mod integral;
pub mod manifold;
pub mod matrix;
pub mod rewrite;
pub mod spheres;

pub use algebra::{AlgebraSpec, Element, GeneratorSpec, Mono, MultiDegree, PhaseTable};
pub use coeff::{Coefficient, GaussRat, Theta};
pub use error::AlgebraError;
pub use hodge::{AmbientFrame, Certificate, Status};
pub use integral::{ChernData, IntegralValue};
pub use manifold::ManifoldSpec;
pub use matrix::{MatrixForm, Projection};
