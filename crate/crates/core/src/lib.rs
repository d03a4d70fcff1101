//! Kazhdan-Lusztig combinatorics for Hecke algebras of symmetric groups.

pub mod cells;
pub mod error;
pub mod hecke;
pub mod kahrstrom;
pub mod laurent;
pub mod report;
pub mod rs;
pub mod submod;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElt};
pub use laurent::LaurentPoly;
pub use weyl::{Parabolic, Perm, Side, WeylGroup};
