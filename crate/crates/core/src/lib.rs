//! Enumeration of 2-uniform maps on the torus.
//!
//! The crate evaluates closed-form counts of toroidal quotients of the
//! twenty 2-uniform and seven relevant Archimedean plane tilings, checks
//! them against a brute-force orbit oracle, and lists Hermite normal form
//! representatives for every isomorphism class.

pub mod asymptotics;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod numtheory;
pub mod symmetry;
pub mod tilings;

pub use enumerate::{EnumerationResult, MapTypeId};
pub use error::{Error, Result};
pub use lattice::{HnfMatrix, IntMatrix2};
pub use numtheory::{CongruenceSystem, PrimeFactorization};
pub use symmetry::{IsoClass, IsotropyGroup};
pub use tilings::{AffineSymmetry, Catalog, ExactCoord, QSqrt3, TilingSpec};
