//! Exact computer algebra for the Lie conformal superalgebras `K_n`:
//! the λ-bracket, induced modules over the annihilation algebra, singular
//! vectors, and the contact (Rumin) complex.

pub mod cli;
pub mod contact_forms;
pub mod error;
pub mod grassmann;
pub mod induced;
pub mod kn_algebra;
pub mod linalg;
pub mod scalar;
pub mod singular;
pub mod so_rep;
pub mod sparse;

pub use error::{Error, Result};
pub use scalar::{GaussScalar, Rational};
