//! Exact computations around Lüroth quartics and Bateman seven-tuples of points.
//!
//! Everything outside [`geiser`] is exact: coefficients live in `Q` or in a
//! quadratic extension `Q(sqrt(d))`, and linear algebra is done by
//! fraction-free elimination.

pub mod error;
pub mod field;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod apolarity;
pub mod scorza;
pub mod bateman;
pub mod instances;
pub mod morley;
pub mod geiser;
pub mod repcheck;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::{pfaffian, ExactMatrix};
pub use poly::{adjugate_conic, Group, Poly, TernaryForm, Var};
