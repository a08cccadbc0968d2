//! Intersection multiplicities, discriminant exponents, and the
//! candidate-versus-actual prime scan.
//!
//! For a polarization and a non-split prime, the multiplicity is assembled
//! by running over the optimal embeddings of the quadratic order into the
//! maximal-order types of the quaternion algebra: each embedding whose
//! rank-5 lattice contains a quarter-norm-1 vector contributes the local
//! multiplicity of its complement Gram matrix, weighted by a factor
//! depending on the splitting type and the principality of the two-sided
//! prime.  Discriminant exponents scale the multiplicity by 12 (inert, or
//! `p = d/4`) or 6 (ramified, `p ≠ d/4`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::gk::{gk_invariants, local_multiplicity};
use crate::gross::gross_lattice;
use crate::order::{is_fundamental_negative, CmOrder, SplittingType};
use crate::parallel::parallel_map;
use crate::polarization::{enumerate_polarizations, HermitianForm};
use crate::quaternion::optimal_embeddings;
use crate::sieve::{candidate_primes, det_supported_primes};
use crate::supersingular::{build_lbar, norm_one_data};
use crate::Result;

/// Weight of one embedding's contribution: 1/2 when the prime is inert and
/// the two-sided prime ideal is principal, 2 when the prime is ramified and
/// the ideal is not principal, 1 otherwise.
pub fn epsilon_weight(split: SplittingType, principal: bool) -> BigRational {
    debug_assert_ne!(split, SplittingType::Split);
    match (split, principal) {
        (SplittingType::Inert, true) => BigRational::new(BigInt::one(), BigInt::from(2)),
        (SplittingType::Ramified, false) => BigRational::from_integer(BigInt::from(2)),
        _ => BigRational::one(),
    }
}

/// One embedding's contribution to the multiplicity sum.
#[derive(Debug, Clone)]
pub struct Contribution {
    /// Position in the deterministic embedding enumeration.
    pub embedding: usize,
    /// Invariants of the complement Gram matrix at `p`.
    pub gk: (u32, u32, u32),
    /// Local multiplicity `e_{ℓ₀}`.
    pub local: BigInt,
    /// Weight `ε` applied to this contribution.
    pub epsilon: BigRational,
}

/// Intersection data for a single prime.
#[derive(Debug, Clone)]
pub struct PdrEntry {
    pub p: i64,
    /// Total multiplicity `Σ ε·e_{ℓ₀}`, always a non-negative integer.
    pub e: BigInt,
    pub contributions: Vec<Contribution>,
}

fn tag_error(err: Error, d: i64, pol: &HermitianForm, p: i64, embedding: usize) -> Error {
    match err {
        Error::GK2Unhandled(msg) => Error::GK2Unhandled(format!(
            "d={d} P={pol} p={p} embedding {embedding}: {msg}"
        )),
        other => other,
    }
}

/// Computes the intersection multiplicity at `p` by summing the weighted
/// local multiplicities over all optimal embeddings carrying a norm-1
/// vector.  The half-integral weights always cancel in conjugate pairs;
/// a non-integral or negative total is a bookkeeping bug and panics.
pub fn intersection_multiplicity(
    order: &CmOrder,
    pol: &HermitianForm,
    p: i64,
) -> Result<PdrEntry> {
    let split = order.splitting_type(p);
    let embs = optimal_embeddings(order, p)?;
    let mut contributions = Vec::new();
    let mut total = BigRational::zero();
    for (k, emb) in embs.iter().enumerate() {
        let lbar = build_lbar(order, pol, emb)?;
        let Some(data) = norm_one_data(&lbar)? else {
            continue;
        };
        let gk =
            gk_invariants(&data.perp, p).map_err(|e| tag_error(e, order.d, pol, p, k))?;
        let local = local_multiplicity(&gk).map_err(|e| tag_error(e, order.d, pol, p, k))?;
        let epsilon = epsilon_weight(split, emb.two_sided_principal);
        total += &epsilon * BigRational::from_integer(local.clone());
        contributions.push(Contribution {
            embedding: k,
            gk: gk.tuple(),
            local,
            epsilon,
        });
    }
    assert!(
        total.is_integer() && !total.is_negative(),
        "multiplicity must finalize to a non-negative integer, got {total}"
    );
    Ok(PdrEntry {
        p,
        e: total.to_integer(),
        contributions,
    })
}

/// Exponent scale for the discriminant: 12 for an inert prime or `p = d/4`,
/// 6 for a ramified prime different from `d/4`.
pub fn discriminant_factor(order: &CmOrder, p: i64) -> i64 {
    if 4 * p == order.d {
        return 12;
    }
    match order.splitting_type(p) {
        SplittingType::Inert => 12,
        SplittingType::Ramified => 6,
        SplittingType::Split => unreachable!("split primes carry no intersection"),
    }
}

/// Positive-multiplicity primes of a polarization with their discriminant
/// exponents.
#[derive(Debug, Clone)]
pub struct PdrReport {
    pub d: i64,
    pub pol: HermitianForm,
    /// Entries with `e > 0`, in increasing prime order.
    pub entries: Vec<PdrEntry>,
    /// `p → 12·e` or `6·e` per the inert/`d/4` versus ramified rule.
    pub exponents: BTreeMap<i64, i64>,
}

/// Runs the multiplicity computation over every sieve-candidate prime and
/// keeps those with positive multiplicity.
pub fn pdr_report(order: &CmOrder, pol: &HermitianForm) -> Result<PdrReport> {
    let gl = gross_lattice(order, pol);
    let mut entries = Vec::new();
    let mut exponents = BTreeMap::new();
    for p in candidate_primes(order, &gl) {
        let entry = intersection_multiplicity(order, pol, p)?;
        if entry.e.is_positive() {
            let e: i64 = (&entry.e).try_into().expect("multiplicity fits in i64");
            exponents.insert(p, discriminant_factor(order, p) * e);
            entries.push(entry);
        }
    }
    Ok(PdrReport {
        d: order.d,
        pol: pol.clone(),
        entries,
        exponents,
    })
}

/// A sieve-candidate prime with zero intersection multiplicity.
#[derive(Debug, Clone)]
pub struct ScanException {
    pub d: i64,
    pub pol: HermitianForm,
    pub p: i64,
    /// Whether `p` divides `d` (observed to hold for every exception).
    pub divides_d: bool,
}

/// Outcome of the candidate-versus-actual scan: exceptions are candidate
/// primes that carry no intersection; errors are collected per triple
/// without aborting the scan.
#[derive(Debug, Default, Clone)]
pub struct ScanOutcome {
    pub exceptions: Vec<ScanException>,
    pub errors: Vec<(i64, String, i64, String)>,
}

/// Compares the determinant-supported sieve primes against the primes of
/// positive multiplicity for every fundamental discriminant `d ≤ d_max`
/// and every indecomposable polarization.  The unconditional `p = d/4`
/// candidate is deliberately left out of the comparison set: it is a
/// safety net for the multiplicity pipeline, not a prime the determinant
/// sieve itself points at.
pub fn conjecture_scan(d_max: i64) -> ScanOutcome {
    let ds: Vec<i64> = (4..=d_max).filter(|&d| is_fundamental_negative(d)).collect();
    let per_d: Vec<ScanOutcome> = parallel_map(&ds, |&d| {
        let mut out = ScanOutcome::default();
        let order = CmOrder::new(d).expect("fundamental discriminant");
        for pol in enumerate_polarizations(&order) {
            let gl = gross_lattice(&order, &pol);
            for p in det_supported_primes(&order, &gl) {
                match intersection_multiplicity(&order, &pol, p) {
                    Ok(entry) => {
                        if entry.e.is_zero() {
                            out.exceptions.push(ScanException {
                                d,
                                pol: pol.clone(),
                                p,
                                divides_d: d % p == 0,
                            });
                        }
                    }
                    Err(err) => out.errors.push((d, pol.to_string(), p, err.to_string())),
                }
            }
        }
        out
    });
    let mut merged = ScanOutcome::default();
    for out in per_d {
        merged.exceptions.extend(out.exceptions);
        merged.errors.extend(out.errors);
    }
    merged
}
