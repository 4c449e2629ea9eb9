//! Exact arithmetic for divisor class groups of normal affine monoid rings
//! and related invariants.
//!
//! The crate is organized in layers:
//!
//! - [`matrix`]: arbitrary-precision integer matrices, Hermite and Smith
//!   normal forms, cokernels and presentations of finitely generated
//!   abelian groups.
//! - [`cone`]: pointed normal affine monoids given by lattice generators,
//!   their facet valuations (dual cone computation), faces and a bounded
//!   saturation oracle.
//! - [`divisor`]: torus-invariant Weil divisors on the spectrum of a
//!   monoid ring; class groups, affine class groups, support realizability
//!   and affine-triviality.
//! - [`rings`]: closed-form decisions for hyperbola rings
//!   `A[X,Y]/(XY - U_1^{d_1}...U_r^{d_r})`, determinantal rings and the
//!   Segre product ring `K[T_i S_j]`.
//! - [`bounds`]: an interval constraint-propagation engine over the
//!   standard inequalities between height, superheight, arithmetical rank,
//!   cohomological dimension and projective height.
//!
//! All computations are exact; no floating point is used anywhere.
//! Everything operates on immutable values and is safe to call
//! concurrently.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod cone;
pub mod divisor;
pub mod matrix;
pub mod rings;

pub use matrix::{AbelianGroup, IntegerMatrix, SmithForm};
