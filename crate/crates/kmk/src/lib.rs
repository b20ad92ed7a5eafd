//! Exact torus-equivariant K-theory of Kac-Moody partial flag varieties.
//!
//! The crate computes the structure constants of the ideal-sheaf basis of
//! the equivariant Grothendieck group of a (possibly infinite) flag variety
//! attached to a symmetrizable generalized Cartan matrix, entirely in exact
//! arithmetic: Laurent polynomials over the root lattice with
//! arbitrary-precision integer coefficients, and a fraction field whose
//! denominators stay factored into binomials. On top of the kernel sit
//! sign-alternation scans for the constants, a finite-type duality oracle
//! that pins every convention, and the cover-coefficient computations for
//! dualizing sheaves of opposite Schubert varieties.
//!
//! The usual entry points:
//!
//! - [`gcm::preset`] / [`gcm::validate_gcm`] and
//!   [`root_datum::build_realization`] set up a root datum;
//! - [`bruhat::enumerate_interval`] freezes a length-bounded piece of the
//!   Weyl group or of a parabolic quotient;
//! - [`engine::PhiTable`] holds the fixed-point restrictions of the basis
//!   and [`engine::product_constants`] solves for structure constants;
//! - [`parabolic`] computes parabolic constants two independent ways and
//!   [`scan::positivity_scan`] runs the sign checks;
//! - [`dualizing`] assembles cover coefficients and descriptors.

pub mod bruhat;
pub mod cache;
pub mod cli;
pub mod dualizing;
pub mod engine;
pub mod error;
pub mod fraction;
pub mod gcm;
pub mod gkm;
pub mod pairing;
pub mod parabolic;
pub mod root_datum;
pub mod rt;
pub mod scan;
pub mod selftest;
pub mod twisted;
pub mod weyl;
pub mod xpoly;

pub use error::{Error, Result};
