//! Exact analytics for linear extensions of finite posets.

pub mod error;
pub mod generators;
pub mod grid;
pub mod io;
pub mod lattice;
pub mod mc;
pub mod poset;
pub mod ratio;
pub mod stats;
pub mod two_chain;
pub mod verify;

pub use num_bigint::BigUint;
pub use num_rational::BigRational;

pub use error::{Error, Result};
pub use lattice::{DownsetLattice, EventSpec, PositionDistribution};
pub use poset::Poset;
