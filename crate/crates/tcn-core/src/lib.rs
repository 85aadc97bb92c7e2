//! Exact computations around the Lusternik-Schnirelmann category of powers
//! of a space, driven by finitely presented graded-commutative cohomology
//! rings, together with executable versions of the path-space formulas that
//! relate the based, loop and free flavours of topological complexity.
//!
//! The crate is organized as a pipeline:
//!
//! * [`algebra`] — exact arithmetic in free graded-commutative algebras over
//!   `Z` or `Z/p`, with Koszul-sign normalization and a text grammar for
//!   elements.
//! * [`quotient`] — zero-testing modulo the relation ideal, degree by degree,
//!   by exact integer (Hermite-style) or prime-field row reduction.
//! * [`kunneth`] — tensor powers of a presentation and factor inclusions.
//! * [`cuplength`] — cup-length / nilpotency-index search with a factorized
//!   fast path for powers.
//! * [`catalog`] — the built-in space families with their presentations,
//!   dimension, connectivity and closed-form answers.
//! * [`bounds`] — inequality seeding and fixpoint propagation into best-known
//!   intervals for `cat(X^j)`, `tc_j`, `TC_j`, `ltc_j`, `LTC_j`.
//! * [`paths`] — evaluation fibrations, reparametrizations, the explicit
//!   homotopy-lifting extension and section transport, with numeric checkers.
//!
//! The algebraic side works over arbitrary-precision integers (the
//! coefficient ring is chosen at runtime, so it is data, not a type
//! parameter). The numeric side is generic over the float scalar through
//! `num-traits`; the aliases below fix the `f64` instantiations used by the
//! command-line tool and the check suites.

pub mod algebra;
pub mod bounds;
pub mod catalog;
pub mod cuplength;
pub mod kunneth;
// pub mod paths;
pub mod quotient;

/// Exact coefficient scalar of the algebra side.
pub type Int = num_bigint::BigInt;





