//! Analysis of homogeneous quadratic ODE systems through their commutative
//! non-associative algebras, construction and recognition of generalized
//! Darboux-Halphen-Brioschi systems, and numerical verification via the
//! Brioschi-variable construction.

pub mod algebra;
pub mod corpus;
pub mod descriptor;
pub mod dhb;
pub mod error;
pub mod fuchsian;
pub mod linalg;
pub mod numeric;
pub mod quadric;
pub mod ratfunc;
pub mod scalar;
pub mod search;
pub mod system;
pub mod tensor;

pub use error::{Error, Result};
