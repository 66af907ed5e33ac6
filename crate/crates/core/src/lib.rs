//! Numerics for outgoing Helmholtz modes outside the unit ball.

pub mod error;
pub mod helmholtz;
pub mod quadrature;
pub mod scaling;
pub mod special_fn;

pub use error::{Error, Result};
