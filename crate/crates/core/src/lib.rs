//! Exact truncated power series with multivariate rational coefficients,
//! Hermite-polynomial series transformations and a registry of
//! generating-function identities that are checked coefficient by
//! coefficient.

pub mod error;
pub mod mpoly;
pub mod numeric;
pub mod rational;
pub mod registry;
pub mod sequences;
pub mod series;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};
pub use mpoly::{MPoly, Symbol};
pub use rational::Rational;
pub use series::TSeries;
