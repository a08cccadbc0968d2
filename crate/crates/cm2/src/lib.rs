//! Exact arithmetic for squares of CM elliptic curves.
//!
//! Let `K = Q(√−d)` be an imaginary quadratic field with fundamental
//! discriminant `−d < −3`, `O = Z[ω]` its maximal order, and `E` an elliptic
//! curve with `End(E) = O`. The abelian surface `A = E²` carries finitely many
//! indecomposable principal polarizations `λ₀P`, one per equivalence class of
//! positive definite hermitian matrices `P = [a,c,b]` of determinant 1 over
//! `O`. For each such pair `(A, P)` this crate computes, with exact integer
//! and rational arithmetic throughout:
//!
//! * the finite set of candidate primes `p ≤ d/4` at which the reduction of
//!   `(A, λ₀P)` can become decomposable (`sieve`),
//! * the arithmetic intersection multiplicity `e_{O,P,p}` of the corresponding
//!   CM point with the product locus at each candidate `p` (`intersection`),
//!   via optimal embeddings of `O` into maximal orders of the definite
//!   quaternion algebra `B_{p,∞}` (`quaternion`), rank-5 endomorphism lattices
//!   of the reduced surface (`supersingular`), and Gross–Keating invariants of
//!   ternary forms (`gk`),
//! * the exponent of each prime in the normalized discriminant of the genus-2
//!   curve with Jacobian `(A, λ₀P)` — `12·e` at inert primes (and at
//!   `p = d/4`), `6·e` at other ramified primes,
//! * a closed logarithmic formula for the same product from the trace-zero
//!   lattice of symmetric endomorphisms (`formula`), applicable for odd `d`.
//!
//! The binary `cm2` exposes every step as a subcommand and ships a bundled
//! set of reference rows (`report::bundled_table_rows`) that the
//! `verify-tables` subcommand recomputes from scratch.

pub mod arith;
pub mod error;
pub mod formula;
pub mod gk;
pub mod gross;
pub mod intersection;
pub mod lattice;
pub mod linalg;
pub mod order;
pub mod parallel;
pub mod polarization;
pub mod quaternion;
pub mod report;
pub mod sieve;
pub mod supersingular;

pub use error::Error;

/// Convenience alias used throughout: exact results with domain errors.
pub type Result<T> = std::result::Result<T, Error>;
