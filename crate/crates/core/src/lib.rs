//! Exact higher limits of module-valued functors on finite filtered posets.
//!
//! A functor `F: P^op -> Vect` on a finite filtered poset is replaced by an
//! objectwise quasi-isomorphic fibrant diagram of cochain complexes, built
//! element by element from (possibly truncated) mapping cocylinders. The
//! higher limits `H^*(P; F)` are then the cohomology of the limit of that
//! diagram. Everything is computed exactly over ℚ or a prime field, and
//! cross-checked against the cochain complex of the order complex.

pub mod bounds;
pub mod complex;
pub mod diagram;
pub mod error;
pub mod exactla;
pub mod instance;
pub mod oracle;
pub mod poset;
pub mod verify;

pub use error::{Error, Result};
