//! Exact construction of the polynomial family `Xi~_n` built from type-B
//! Eulerian polynomials, certified isolation of its real zeros, and
//! numerical comparison of the zero distribution with its limiting law.

pub mod asymptotics;
pub mod error;
pub mod eulerb_poly;
pub mod hp;
pub mod limitlaw;
pub mod poly;
pub mod quadrature;
pub mod verify;
pub mod xi_family;
pub mod zeros;

pub use error::{Error, Result};
pub use poly::{ExactPolynomial, IntPoly};
