//! Exact-rational toolkit for polyhedral and tropical computations:
//! convex polytopes with dual representations, lattice-periodic polytopal
//! decompositions and their quotient complexes, skeleton models with
//! canonical simplices, piecewise-affine tropical maps, polytopal measures
//! with strict supports, and abelian degeneration-rank bookkeeping.

pub mod rat;
pub mod linalg;
pub mod polytope;
pub mod lattice;
pub mod periodic;
pub mod tropical;
pub mod skeleton;
pub mod measure;
pub mod bogomolov;
pub mod rank;
pub mod json;

pub use rat::{Rat, ValueGroup};
