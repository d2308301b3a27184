//! Exact mod-2 algebra for cochain-level Steenrod theory.
//!
//! Everything in this crate is computed over the field with two elements:
//! bit-packed linear algebra, the minimal free resolution of F2 over F2[S2],
//! an arity-4 tree basis with its boundary cells, the extended Steenrod
//! algebra with integer exponents, finite cup-i algebras (simplicial and
//! tensor models), and a linear solver for the arity-4 boundary constraints
//! that drive secondary cohomology operations.
//!
//! The crate is `no_std` (with `alloc`); file formats and the CLI live in the
//! companion binary crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bar;
pub mod cochain;
pub mod gcell;
pub mod gf2;
pub mod models;
pub mod perm;
pub mod solver;
pub mod steenrod;
pub mod tree;
