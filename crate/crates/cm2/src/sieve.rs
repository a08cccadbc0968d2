//! Sieve for primes of potentially decomposable reduction.
//!
//! If the reduction of the polarized surface at `p` decomposes, the rank-3
//! norm lattice `L` (determinant `4d`) extends to a rank-4 lattice
//! containing a vector `v` of norm 1. The Gram matrix of `L + Zv` is
//! `T = [[G, m],[mᵀ, 1]]` with `m` the pairing vector `b(v, ℓᵢ)`, and
//! `det T = 4d − Q(m)` where `Q` is the adjugate form of `G`. Necessary
//! conditions: `T` positive definite (`Q(m) < 4d`), `det T ≡ 0 (mod 16)`,
//! the congruences `b(v, ℓ)² ≡ q(ℓ) (mod 4)` — checked for every class of
//! `ℓ` in `L/2L`, which makes the filter independent of the basis chosen
//! for `L` — and finally `p | det T`.
//!
//! [`candidate_primes`] collects the primes `p ≤ d/4` that are inert or
//! ramified and divide some surviving determinant, adding `p = d/4` when
//! `d ≡ 0 (mod 4)` and `d/4` is prime. Split primes never admit such an
//! extension and are excluded.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{is_prime, primes_up_to};
use crate::gross::GrossLattice;
use crate::lattice::enumerate_up_to;
use crate::linalg::{adjugate_int, to_rational, IMat};
use crate::order::{CmOrder, SplittingType};

/// Rank-4 extension `[[G, m],[mᵀ, 1]]` of the norm lattice by a norm-1
/// vector with pairing vector `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionMatrix {
    /// Gram matrix of the rank-3 lattice being extended.
    pub gram: IMat,
    /// Pairings `(x, y, z)` of the new vector against the basis.
    pub offset: Vec<BigInt>,
    /// `det T = 4d − Q_adj(m)`.
    pub det: BigInt,
}

impl ExtensionMatrix {
    /// The full 4×4 Gram matrix.
    pub fn full_matrix(&self) -> IMat {
        let mut t = vec![vec![BigInt::zero(); 4]; 4];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = self.gram[i][j].clone();
            }
            t[i][3] = self.offset[i].clone();
            t[3][i] = self.offset[i].clone();
        }
        t[3][3] = BigInt::from(1);
        t
    }
}

/// Mod-4 congruence `(Σ εᵢmᵢ)² ≡ Σ εᵢεⱼ G[i][j] (mod 4)` for every
/// nonzero `ε ∈ {0,1}³`, i.e. for every class of `L/2L`.
pub fn congruences_hold(gram: &IMat, m: &[BigInt]) -> bool {
    let four = BigInt::from(4);
    for eps in 1u8..8 {
        let bits = [(eps & 1) as i64, ((eps >> 1) & 1) as i64, ((eps >> 2) & 1) as i64];
        let mut pair = BigInt::zero();
        let mut norm = BigInt::zero();
        for i in 0..3 {
            if bits[i] == 0 {
                continue;
            }
            pair += &m[i];
            for j in 0..3 {
                if bits[j] == 1 {
                    norm += &gram[i][j];
                }
            }
        }
        let lhs = (&pair * &pair - norm) % &four;
        if !lhs.is_zero() {
            return false;
        }
    }
    true
}

/// All extensions up to the sign of `m` (the lexicographically larger of
/// `±m` is kept; `m = 0` is its own representative). `apply_congruences`
/// toggles the mod-4 filter; `det ≡ 0 (mod 16)` is always enforced.
pub fn enumerate_extensions(l: &GrossLattice, apply_congruences: bool) -> Vec<ExtensionMatrix> {
    let q_adj = adjugate_int(&l.gram);
    let four_d = crate::linalg::det_int(&l.gram);
    let bound = BigRational::from_integer(&four_d - BigInt::from(1));
    let mut offsets = vec![vec![BigInt::zero(); 3]];
    offsets.extend(enumerate_up_to(&to_rational(&q_adj), &bound));
    let sixteen = BigInt::from(16);
    let mut out = Vec::new();
    for m in offsets {
        let qm = crate::lattice::quad_value(&to_rational(&q_adj), &m);
        let det = &four_d - qm.to_integer();
        if !det.is_positive() || !(&det % &sixteen).is_zero() {
            continue;
        }
        if apply_congruences && !congruences_hold(&l.gram, &m) {
            continue;
        }
        out.push(ExtensionMatrix {
            gram: l.gram.clone(),
            offset: m,
            det,
        });
    }
    out.sort_by(|a, b| b.det.cmp(&a.det).then_with(|| a.offset.cmp(&b.offset)));
    out
}

/// Sorted primes `p ≤ d/4`, inert or ramified, dividing the determinant of
/// some congruence-valid extension of the rank-3 lattice.  These are the
/// primes the determinant sieve itself points at.
pub fn det_supported_primes(order: &CmOrder, l: &GrossLattice) -> Vec<i64> {
    let ts = enumerate_extensions(l, true);
    let mut set = BTreeSet::new();
    for p in primes_up_to(order.d / 4) {
        if order.splitting_type(p) == SplittingType::Split {
            continue;
        }
        if ts
            .iter()
            .any(|t| (t.det.clone() % BigInt::from(p)).is_zero())
        {
            set.insert(p);
        }
    }
    set.into_iter().collect()
}

/// Sorted primes that can support potentially decomposable reduction:
/// the determinant-supported primes, plus `p = d/4` itself when
/// `d ≡ 0 (mod 4)` and `d/4` is prime (that prime can carry reduction even
/// when no surviving extension determinant picks it up).
pub fn candidate_primes(order: &CmOrder, l: &GrossLattice) -> Vec<i64> {
    let mut set: BTreeSet<i64> = det_supported_primes(order, l).into_iter().collect();
    if order.d % 4 == 0 {
        let q = order.d / 4;
        if is_prime(q) {
            set.insert(q);
        }
    }
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gross::gross_lattice;
    use crate::lattice::is_positive_definite_int;
    use crate::polarization::HermitianForm;

    fn lattice(d: i64, a: i64, c: i64, b1: i64, b2: i64) -> (CmOrder, GrossLattice) {
        let order = CmOrder::new(d).unwrap();
        let p = HermitianForm::new(&order, a, c, b1, b2).unwrap();
        let l = gross_lattice(&order, &p);
        (order, l)
    }

    fn det16_multiset(ts: &[ExtensionMatrix]) -> Vec<i64> {
        let mut v: Vec<i64> = ts
            .iter()
            .map(|t| {
                let q = t.det.clone() / BigInt::from(16);
                i64::try_from(q).unwrap()
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn d163_pre_congruence_count_and_multiset() {
        let (_, l) = lattice(163, 6, 7, 0, 1);
        let ts = enumerate_extensions(&l, false);
        assert_eq!(ts.len(), 19);
        let mut want = vec![
            32, 31, 27, 23, 20, 20, 19, 18, 17, 17, 13, 11, 11, 7, 5, 5, 3, 2, 2,
        ];
        want.sort();
        assert_eq!(det16_multiset(&ts), want);
    }

    #[test]
    fn d163_post_congruence_count_and_multiset() {
        let (_, l) = lattice(163, 6, 7, 0, 1);
        let ts = enumerate_extensions(&l, true);
        assert_eq!(ts.len(), 8);
        let mut want = vec![2, 27, 20, 7, 11, 17, 19, 23];
        want.sort();
        assert_eq!(det16_multiset(&ts), want);
    }

    #[test]
    fn d83_multiset() {
        let (_, l) = lattice(83, 2, 11, 0, 1);
        let ts = enumerate_extensions(&l, true);
        assert_eq!(det16_multiset(&ts), vec![5, 8, 14, 15]);
    }

    #[test]
    fn extension_invariants() {
        let (_, l) = lattice(163, 6, 7, 0, 1);
        for t in enumerate_extensions(&l, true) {
            let full = t.full_matrix();
            assert!(is_positive_definite_int(&full), "T must be positive definite");
            assert_eq!(
                crate::linalg::det_int(&full),
                t.det,
                "4×4 determinant must equal recorded det"
            );
            assert!((t.det % BigInt::from(16)).is_zero());
        }
    }

    #[test]
    fn sign_representatives() {
        let (_, l) = lattice(163, 6, 7, 0, 1);
        let ts = enumerate_extensions(&l, false);
        for t in &ts {
            if t.offset.iter().all(|v| v.is_zero()) {
                continue;
            }
            let neg: Vec<BigInt> = t.offset.iter().map(|v| -v).collect();
            assert!(
                t.offset > neg,
                "kept representative must be the lexicographically larger sign"
            );
            assert!(
                !ts.iter().any(|u| u.offset == neg),
                "only one of ±m may appear"
            );
        }
    }

    #[test]
    fn candidates_d163() {
        let (order, l) = lattice(163, 6, 7, 0, 1);
        assert_eq!(
            candidate_primes(&order, &l),
            vec![2, 3, 5, 7, 11, 17, 19, 23]
        );
    }

    /// The d=83 determinants 16·{3·5, 2·7, 2³, 5} contain the primes
    /// {2, 3, 5, 7}, but both 3 and 7 split (3 = 3·1² + 1·0 + 7·0² is
    /// represented by a discriminant −83 form; 7 likewise), leaving {2, 5}.
    #[test]
    fn candidates_d83_exclude_split_primes() {
        let (order, l) = lattice(83, 2, 11, 0, 1);
        assert_eq!(candidate_primes(&order, &l), vec![2, 5]);
        assert_eq!(order.splitting_type(3), SplittingType::Split);
        assert_eq!(order.splitting_type(7), SplittingType::Split);
        assert_eq!(order.splitting_type(5), SplittingType::Inert);
    }

    #[test]
    fn candidates_d8_include_d_over_4() {
        let (order, l) = lattice(8, 2, 2, 1, 1);
        let cands = candidate_primes(&order, &l);
        assert!(cands.contains(&2), "p = d/4 = 2 must be a candidate");
    }

    #[test]
    fn candidates_respect_splitting_and_size() {
        for (d, a, c, b1, b2) in [(163, 6, 7, 0, 1), (83, 2, 11, 0, 1), (59, 3, 6, 1, 1)] {
            let (order, l) = lattice(d, a, c, b1, b2);
            for p in candidate_primes(&order, &l) {
                assert!(p <= d / 4 || (d % 4 == 0 && p == d / 4));
                assert_ne!(
                    order.splitting_type(p),
                    SplittingType::Split,
                    "split prime {p} must not appear at d={d}"
                );
            }
        }
    }
}

