//! Error types shared by every module.
//!
//! The library distinguishes *domain* outcomes that callers are expected to
//! branch on (a non-fundamental discriminant, the closed formula not applying
//! to even discriminants, a Gross–Keating configuration at 2 outside the
//! handled shapes, a local multiplicity that evaluates to a non-integer) from
//! internal consistency failures that indicate a bug or a violated theorem
//! (`UniquenessViolated`, `NonIntegralGram`, `MassNotReached`). Both kinds are
//! carried by the same enum so that pipeline drivers can collect them
//! uniformly into reports.

use thiserror::Error;

/// All errors produced by the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `−d` is not a fundamental discriminant (or `d ≤ 3`, where the extra
    /// automorphisms of the curve put it outside this crate's scope).
    #[error("-{0} is not a fundamental discriminant below -3")]
    NonFundamentalDiscriminant(i64),

    /// The closed logarithmic formula is only defined for odd `d`.
    #[error("closed formula is not applicable for even discriminant -{0}")]
    NotApplicableEvenD(i64),

    /// `−d·Q₁⁻¹` failed the integrality check that the trace-zero-lattice
    /// interpretation of the closed formula predicts.
    #[error("matrix -d*Q1^-1 is not integral for d={0}")]
    NonIntegralQ(i64),

    /// The dyadic Gross–Keating routine met a matrix outside the structural
    /// family it handles (diagonal ≡ 0 mod 4, even off-diagonal entries).
    #[error("Gross-Keating invariants at p=2 unhandled for this shape: {0}")]
    GK2Unhandled(String),

    /// The local multiplicity formula evaluated to a non-integer, so it does
    /// not apply to the given invariants (e.g. `(0,0,2) → 3/2`).
    #[error("local multiplicity formula gives non-integer {num}/{den} for GK ({a1},{a2},{a3}) at p={p}")]
    NonIntegralMultiplicity {
        a1: u32,
        a2: u32,
        a3: u32,
        p: i64,
        num: i64,
        den: i64,
    },

    /// Two non-proportional norm-1 vectors were found in a rank-5 lattice,
    /// contradicting the uniqueness theorem; always an internal failure.
    #[error("norm-1 vector not unique up to sign in rank-5 lattice: {0} and {1}")]
    UniquenessViolated(String, String),

    /// A Gram matrix expected to be integral had a non-integer entry.
    #[error("non-integral Gram entry where integrality is required: {0}")]
    NonIntegralGram(String),

    /// The ideal-class search exhausted its norm bound before the Eichler
    /// mass certificate closed; indicates an implementation bound too small.
    #[error("ideal class enumeration for p={p} stalled at mass {have}/{want} (×12)")]
    MassNotReached { p: i64, have: i64, want: i64 },

    /// Malformed user input (CLI layer).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
