//! Exact construction of generalized Laguerre and Jacobi polynomials, the
//! infinite-order differential operators they satisfy, and an exact
//! linear-algebra engine that searches for such operators.

pub mod diffop;
pub mod error;
pub mod families;
pub mod hyper;
pub mod identities;
pub mod poly;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use families::{FamilyKind, FamilyParams, GeneralizedPoly};
pub use poly::{BlockKey, MNPoly, Poly};
pub use scalar::Rational;
