//! Exact conditional-symmetry checks for linear forms of independent random
//! variables on finite abelian groups.

pub mod error;
pub mod group;

pub use error::{Error, Result};
pub use group::{Endomorphism, FiniteAbelianGroup, GroupElement, Subgroup};
pub mod dist;

pub use dist::{CharFunction, Classification, Distribution};
pub mod predicates;
pub mod search;
pub mod funceq;
pub mod io;
pub mod verify;
pub mod cli;

pub use predicates::FormsInstance;
