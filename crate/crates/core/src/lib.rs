#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Joint and spacing distributions of the two largest eigenvalues at the
//! soft edge of the Gaussian unitary ensemble, computed both from Fredholm
//! determinants and from Painlevé transcendents, together with the hard-edge
//! Painlevé III′ theory that degenerates to them.

pub mod error;
pub mod fredholm;
pub mod hardedge;
pub mod linalg;
pub mod ode;
pub mod painleve2;
pub mod parallel;
pub mod quadrature;
pub mod sampler;
pub mod softedge;
pub mod specfun;

pub use error::{Error, Result};
pub use parallel::Parallelism;
