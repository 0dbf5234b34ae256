//! Incidence geometries as typed simplicial complexes, their automorphism
//! groups and coset constructions.

pub mod action;
pub mod catalog;
pub mod complex;
pub mod coset;
pub mod covering;
pub mod coxeter;
pub mod error;
pub mod iso;
pub mod perm;
pub mod typed;
pub mod verify;

pub use complex::{Complex, Link, Simplex, VertexId};
pub use coxeter::{enumerate_group, CoxeterGroupTable, CoxeterMatrix, CoxeterWord, DEFAULT_CAP};
pub use error::{GeomError, Result};
pub use perm::{Orbit, PermAction, PermGroup, Permutation, StabChain};
pub use typed::{mask_members, mask_of, Gallery, TypeMask, TypedComplex};
