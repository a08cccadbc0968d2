//! The imaginary quadratic maximal order `O = Z[ω]` and its elements.
//!
//! For a fundamental discriminant `−d < −3` the maximal order is `Z[ω]` with
//!
//! * `d ≡ 3 (mod 4)`: `ω = (1+√−d)/2`, trace `t = 1`, norm `n = (1+d)/4`,
//! * `d ≡ 0 (mod 4)`: `ω = √−d/2`, trace `t = 0`, norm `n = d/4`,
//!
//! so `ω² = t·ω − n` in both cases. Elements are stored as `x + y·ω` with
//! exact rational coordinates; conjugation sends `(x, y)` to `(x + t·y, −y)`
//! and the norm is `x² + t·x·y + n·y²`.
//!
//! The class number is computed by counting reduced primitive binary
//! quadratic forms `(a, b, c)` of discriminant `b² − 4ac = −d`
//! (`−a < b ≤ a ≤ c`, with `b ≥ 0` when `a = c`); for a fundamental
//! discriminant every form is automatically primitive.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{is_squarefree, kronecker};
use crate::error::Error;
use crate::Result;

/// How a rational prime behaves in the quadratic field `Q(√−d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

impl std::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SplittingType::Split => write!(f, "split"),
            SplittingType::Inert => write!(f, "inert"),
            SplittingType::Ramified => write!(f, "ramified"),
        }
    }
}

/// The maximal order `Z[ω]` of discriminant `−d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmOrder {
    /// Positive integer `d`; the field discriminant is `−d`.
    pub d: i64,
    /// Trace `t` of `ω` (1 for `d ≡ 3 mod 4`, 0 for `d ≡ 0 mod 4`).
    pub omega_trace: i64,
    /// Norm `n` of `ω` (`(1+d)/4` resp. `d/4`).
    pub omega_norm: i64,
    /// Class number `h(−d)`, by reduced-form count.
    pub class_number: u64,
}

impl CmOrder {
    /// Builds the order, rejecting non-fundamental discriminants and `d ≤ 3`.
    pub fn new(d: i64) -> Result<Self> {
        if d <= 3 || !is_fundamental_negative(d) {
            return Err(Error::NonFundamentalDiscriminant(d));
        }
        let (omega_trace, omega_norm) = if d % 4 == 3 {
            (1, (1 + d) / 4)
        } else {
            (0, d / 4)
        };
        Ok(CmOrder {
            d,
            omega_trace,
            omega_norm,
            class_number: reduced_form_count(d),
        })
    }

    /// Splitting behavior of `p`: ramified iff `p | d`, otherwise decided by
    /// the Kronecker symbol `(−d/p)` (whose `p = 2` convention covers the
    /// even prime).
    pub fn splitting_type(&self, p: i64) -> SplittingType {
        if self.d % p == 0 {
            SplittingType::Ramified
        } else if kronecker(-self.d, p) == -1 {
            SplittingType::Inert
        } else {
            SplittingType::Split
        }
    }
}

/// True iff `−d` is a fundamental discriminant (of some imaginary quadratic
/// field): either `d ≡ 3 (mod 4)` squarefree, or `d = 4k` with `k` squarefree
/// and `k ≡ 1, 2 (mod 4)`.
pub fn is_fundamental_negative(d: i64) -> bool {
    if d <= 0 {
        return false;
    }
    match d % 4 {
        3 => is_squarefree(d),
        0 => {
            let k = d / 4;
            is_squarefree(k) && (k % 4 == 1 || k % 4 == 2)
        }
        _ => false,
    }
}

/// Number of reduced forms `(a, b, c)` with `b² − 4ac = −d`,
/// `−a < b ≤ a ≤ c`, and `b ≥ 0` whenever `a = c`.
fn reduced_form_count(d: i64) -> u64 {
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= d {
        for b in (-a + 1)..=a {
            let num = b * b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if a == c && b < 0 {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

/// An element `x + y·ω` of `K = Q(√−d)` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadElem {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        QuadElem { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        QuadElem {
            x: BigRational::from_integer(BigInt::from(x)),
            y: BigRational::from_integer(BigInt::from(y)),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn omega() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// True iff both coordinates are integers, i.e. the element lies in `O`.
    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// True iff the element lies in `Q` (no `ω` component).
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        QuadElem::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        QuadElem::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn neg(&self) -> Self {
        QuadElem::new(-self.x.clone(), -self.y.clone())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadElem::new(&self.x * k, &self.y * k)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Product in `K`, using `ω² = t·ω − n`.
    pub fn mul(&self, other: &Self, order: &CmOrder) -> Self {
        let t = BigRational::from_integer(BigInt::from(order.omega_trace));
        let n = BigRational::from_integer(BigInt::from(order.omega_norm));
        let yy = &self.y * &other.y;
        let x = &self.x * &other.x - &n * &yy;
        let y = &self.x * &other.y + &self.y * &other.x + &t * &yy;
        QuadElem::new(x, y)
    }

    /// Conjugate `x + y·ω̄ = (x + t·y) − y·ω`.
    pub fn conj(&self, order: &CmOrder) -> Self {
        let t = BigRational::from_integer(BigInt::from(order.omega_trace));
        QuadElem::new(&self.x + &t * &self.y, -self.y.clone())
    }

    /// Field norm `z·z̄ = x² + t·x·y + n·y² ≥ 0`.
    pub fn norm(&self, order: &CmOrder) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(order.omega_trace));
        let n = BigRational::from_integer(BigInt::from(order.omega_norm));
        &self.x * &self.x + &t * &self.x * &self.y + &n * &self.y * &self.y
    }

    /// Field trace `z + z̄ = 2x + t·y`.
    pub fn trace(&self, order: &CmOrder) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(order.omega_trace));
        &self.x + &self.x + &t * &self.y
    }
}

/// Renders `b₁ + b₂ω` the way the polarization tables do: `w`, `2w-1`,
/// `w+2`, `3`, `0`, …
pub fn format_quad_int(b1: i64, b2: i64) -> String {
    if b2 == 0 {
        return format!("{b1}");
    }
    let omega_part = match b2 {
        1 => "w".to_string(),
        -1 => "-w".to_string(),
        _ => format!("{b2}w"),
    };
    match b1.cmp(&0) {
        std::cmp::Ordering::Equal => omega_part,
        std::cmp::Ordering::Greater => format!("{omega_part}+{b1}"),
        std::cmp::Ordering::Less => format!("{omega_part}{b1}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};

    #[test]
    fn order_163() {
        let o = CmOrder::new(163).unwrap();
        assert_eq!(o.omega_trace, 1);
        assert_eq!(o.omega_norm, 41);
        assert_eq!(o.class_number, 1);
    }

    #[test]
    fn order_8() {
        let o = CmOrder::new(8).unwrap();
        assert_eq!(o.omega_trace, 0);
        assert_eq!(o.omega_norm, 2);
        assert_eq!(o.class_number, 1);
    }

    #[test]
    fn order_79_has_class_number_5() {
        assert_eq!(CmOrder::new(79).unwrap().class_number, 5);
    }

    #[test]
    fn non_fundamental_rejected() {
        // −12 = −3·2² is not fundamental.
        assert_eq!(
            CmOrder::new(12).unwrap_err(),
            Error::NonFundamentalDiscriminant(12)
        );
        // d ≤ 3 is out of scope even when −3 is fundamental.
        assert!(CmOrder::new(3).is_err());
        assert!(CmOrder::new(7).is_ok());
        for d in [1, 2, 5, 6, 9, 16, 27, 44, 45, 48, 75, 100] {
            assert!(CmOrder::new(d).is_err(), "d={d} should be rejected");
        }
    }

    #[test]
    fn class_numbers_match_literature() {
        // Reduced-form counts against published class numbers h(−d).
        for (d, h) in [
            (7, 1),
            (8, 1),
            (11, 1),
            (15, 2),
            (19, 1),
            (20, 2),
            (23, 3),
            (24, 2),
            (31, 3),
            (35, 2),
            (39, 4),
            (40, 2),
            (43, 1),
            (47, 5),
            (55, 4),
            (56, 4),
            (59, 3),
            (67, 1),
            (68, 4),
            (71, 7),
            (79, 5),
            (83, 3),
            (84, 4),
            (87, 6),
            (88, 2),
            (91, 2),
            (95, 8),
            (163, 1),
        ] {
            assert_eq!(
                CmOrder::new(d).unwrap().class_number,
                h,
                "class number mismatch for d={d}"
            );
        }
    }

    #[test]
    fn splitting_examples() {
        let o163 = CmOrder::new(163).unwrap();
        assert_eq!(o163.splitting_type(17), SplittingType::Inert);
        assert_eq!(o163.splitting_type(41), SplittingType::Split);
        let o55 = CmOrder::new(55).unwrap();
        assert_eq!(o55.splitting_type(5), SplittingType::Ramified);
    }

    #[test]
    fn split_41_confirmed_by_square_solvability() {
        // 41 = N(ω) for d = 163; brute-force check that x² ≡ −163 (mod 41)
        // is solvable, the defining property of a split prime.
        let target = (-163i64).rem_euclid(41);
        assert!(
            (0..41).any(|x| (x * x) % 41 == target),
            "x² ≡ −163 mod 41 should be solvable"
        );
    }

    #[test]
    fn quad_elem_algebra() {
        let o = CmOrder::new(163).unwrap();
        let w = QuadElem::omega();
        // ω·ω̄ = N(ω) = 41 and ω + ω̄ = 1.
        assert_eq!(w.norm(&o).to_integer().to_i64().unwrap(), 41);
        assert_eq!(w.trace(&o).to_integer().to_i64().unwrap(), 1);
        // Conjugation is an involution.
        let z = QuadElem::from_ints(3, -2);
        assert_eq!(z.conj(&o).conj(&o), z);
        // N(z) = z·z̄ as rationals.
        let zzbar = z.mul(&z.conj(&o), &o);
        assert!(zzbar.is_rational());
        assert_eq!(zzbar.x, z.norm(&o));
        // Norm positivity off zero.
        assert!(z.norm(&o) > BigRational::zero());
        assert!(QuadElem::zero().norm(&o).is_zero());
        // ω² = t·ω − n = ω − 41.
        let w2 = w.mul(&w, &o);
        assert_eq!(w2, QuadElem::from_ints(-41, 1));
    }

    #[test]
    fn quad_formatting() {
        assert_eq!(format_quad_int(0, 1), "w");
        assert_eq!(format_quad_int(1, 1), "w+1");
        assert_eq!(format_quad_int(-1, 2), "2w-1");
        assert_eq!(format_quad_int(2, 0), "2");
        assert_eq!(format_quad_int(0, 3), "3w");
        assert_eq!(format_quad_int(0, 0), "0");
    }

    #[test]
    fn one_is_unit_norm() {
        let o = CmOrder::new(55).unwrap();
        assert!(QuadElem::one().norm(&o).is_one());
    }
}
