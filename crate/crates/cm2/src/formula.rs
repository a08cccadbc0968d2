//! Closed logarithmic formula for the discriminant product, evaluated as an
//! exact signed prime factorization.
//!
//! For odd `d` let `Q₁` be the Gram matrix of the trace-zero lattice `L₀`
//! (positive definite here; classically the same form carries the opposite
//! sign, written `Q = −d·Q₁⁻¹`) and `Q = d·Q₁⁻¹`, an integral positive
//! definite ternary form (its integrality is asserted, not assumed —
//! [`Error::NonIntegralQ`] reports a failure). The formula accumulates,
//! over all `m ∈ Z³` (both signs
//! counted) with `s = (d − Q(m))/4` a positive integer, and over all
//! divisors `n > 1` of `s`:
//!
//! ```text
//! −6 · χ(n) · v_ℓ(n)    added to the exponent of every prime ℓ | n,
//! ```
//!
//! where `χ(n)` is the Kronecker symbol `(−d/n)` by default, or `(n/d)`
//! under the alternative convention — for fundamental odd `d` the two
//! agree. The result is a map `prime → exponent` (exponents may be
//! negative, zeros dropped, always divisible by 6).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith::{divisors, kronecker, prime_factors};
use crate::error::Error;
use crate::gross::trace_zero_lattice;
use crate::lattice::{enumerate_up_to, is_positive_definite_int, quad_value};
use crate::linalg::{det_int, det_rat, inverse_rat, rat_to_int, to_rational, IMat};
use crate::order::CmOrder;
use crate::polarization::HermitianForm;
use crate::Result;

/// Signed prime-power factorization: `prime → exponent`, no zero exponents.
pub type FactoredProduct = BTreeMap<i64, i64>;

/// Which character to use for `χ(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CharConvention {
    /// `χ(n) = (−d/n)` — the convention validated against ground truth.
    #[default]
    MinusDOverN,
    /// `χ(n) = (n/d)`.
    NOverD,
}

impl std::str::FromStr for CharConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus_d_over_n" => Ok(CharConvention::MinusDOverN),
            "n_over_d" => Ok(CharConvention::NOverD),
            other => Err(Error::InvalidInput(format!(
                "unknown character convention {other:?} (use minus_d_over_n or n_over_d)"
            ))),
        }
    }
}

impl std::fmt::Display for CharConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CharConvention::MinusDOverN => write!(f, "minus_d_over_n"),
            CharConvention::NOverD => write!(f, "n_over_d"),
        }
    }
}

/// `Q = d·Q₁⁻¹` as an integral positive definite matrix. (With `Q₁` taken
/// negative definite, as in the classical normalization, this is `−d·Q₁⁻¹`.)
pub fn closed_q(order: &CmOrder, p: &HermitianForm) -> Result<IMat> {
    if order.d % 2 == 0 {
        return Err(Error::NotApplicableEvenD(order.d));
    }
    let l0 = trace_zero_lattice(order, p);
    let q1 = l0.gram;
    let inv = inverse_rat(&q1).expect("positive definite Gram is invertible");
    let d_rat = BigRational::from_integer(BigInt::from(order.d));
    let scaled: Vec<Vec<BigRational>> = inv
        .iter()
        .map(|row| row.iter().map(|v| &d_rat * v).collect())
        .collect();
    let q = rat_to_int(&scaled).ok_or(Error::NonIntegralQ(order.d))?;
    assert!(
        is_positive_definite_int(&q),
        "d·Q₁⁻¹ must be positive definite"
    );
    // det(Q)·det(Q₁) = d³·det(Q₁⁻¹)·det(Q₁) = d³.
    let lhs = BigRational::from_integer(det_int(&q)) * det_rat(&q1);
    assert_eq!(
        lhs,
        BigRational::from_integer(BigInt::from(order.d).pow(3)),
        "determinant identity det(Q)·det(Q₁) = d³ violated"
    );
    Ok(q)
}

/// Evaluates the formula; exponents are guaranteed multiples of 6.
pub fn evaluate_closed_formula(
    order: &CmOrder,
    p: &HermitianForm,
    convention: CharConvention,
) -> Result<FactoredProduct> {
    let q = closed_q(order, p)?;
    let d = order.d;
    let qr = to_rational(&q);
    // All m with Q(m) < d, both signs; m = 0 never qualifies (d odd).
    let bound = BigRational::from_integer(BigInt::from(d - 1));
    let mut exps: BTreeMap<i64, i64> = BTreeMap::new();
    let mut accumulate = |s: i64| {
        for n in divisors(s) {
            if n == 1 {
                continue;
            }
            let chi = match convention {
                CharConvention::MinusDOverN => kronecker(-d, n),
                CharConvention::NOverD => kronecker(n, d),
            };
            if chi == 0 {
                continue;
            }
            for l in prime_factors(n) {
                let v = crate::arith::valuation(n, l) as i64;
                *exps.entry(l).or_insert(0) += -6 * chi * v;
            }
        }
    };
    for m in enumerate_up_to(&qr, &bound) {
        let qm = quad_value(&qr, &m).to_integer().to_i64().expect("small value");
        if (d - qm) % 4 != 0 {
            continue;
        }
        let s = (d - qm) / 4;
        if s <= 0 {
            continue;
        }
        // The enumerator returns one representative of ±m; both count.
        accumulate(s);
        accumulate(s);
    }
    exps.retain(|_, e| *e != 0);
    for (l, e) in &exps {
        assert!(
            e % 6 == 0,
            "exponent of {l} must be a multiple of 6, got {e}"
        );
    }
    Ok(exps)
}
