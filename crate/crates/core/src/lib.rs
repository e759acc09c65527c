//! Logarithmic potential theory on compact sets of the plane: capacities,
//! Fekete points, Chebyshev polynomials of band sets, Green functions, and
//! the integer-lifting construction of monic polynomials with Gaussian-integer
//! coefficients whose zeros equidistribute on a set.

pub mod arith;
pub mod calibration;
pub mod chebyshev;
pub mod diophantine;
pub mod error;
pub mod integerize;
pub mod jacobi;
pub mod poly;
pub mod potential;
pub mod quadrature;
pub mod measure;
pub mod roots;
pub mod sets;

pub use error::{Error, Result};
