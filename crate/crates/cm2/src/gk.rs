//! Gross–Keating invariants of ternary positive definite forms and the
//! local intersection multiplicity they determine.
//!
//! The input is the Gram matrix `Q` of an integral ternary lattice (bilinear
//! values integral, diagonal = quadratic-form values).
//!
//! **Odd `p`.** The invariants are the sorted `p`-valuations of the Jordan
//! blocks of `Q` over `Z_p`: pick a pivot of minimal valuation (a diagonal
//! one when possible, otherwise fold the off-diagonal minimum onto the
//! diagonal — valid since 2 is a unit), split it off, recurse. Their sum is
//! `v_p(det Q)`, asserted.
//!
//! **`p = 2`.** The forms arising here always satisfy `Q(x) ≡ 0 (mod 4)`:
//! diagonal divisible by 4 and even off-diagonal entries. That condition is
//! `GL₃(Z)`-invariant; when it fails we return [`Error::GK2Unhandled`]
//! rather than guess. Otherwise `T′ = Q/4` is half-integral and the
//! invariants follow their definition directly: the lexicographically
//! largest `a₁ ≤ a₂ ≤ a₃` (with `a₁+a₂+a₃ = v₂(det 2T′) − 1`) for which a
//! basis `(y₁,y₂,y₃)` of `Z₂³` exists with `v₂(T′(yᵢ)) ≥ aᵢ` and
//! `v₂(2B(yᵢ,yⱼ)) ≥ ⌈(aᵢ+aⱼ)/2⌉`. All conditions only depend on the basis
//! modulo `2^{a₃}`, so the search is a finite exact computation.
//!
//! The multiplicity of a norm-1 vector with perpendicular form of invariants
//! `(a₁, a₂, a₃)` is
//!
//! ```text
//! e = Σ_{i=0}^{a₁−1} (i+1)(a₁+a₂+a₃−3i)pⁱ
//!   + Σ_{i=a₁}^{(a₁+a₂−2)/2} (a₁+1)(2a₁+a₂+a₃−4i)pⁱ
//!   + ½(a₁+1)(a₃−a₂+1)p^{(a₁+a₂)/2}          (a₁+a₂ even)
//!
//! e = Σ_{i=0}^{a₁−1} (i+1)(a₁+a₂+a₃−3i)pⁱ
//!   + Σ_{i=a₁}^{(a₁+a₂−1)/2} (a₁+1)(2a₁+a₂+a₃−4i)pⁱ   (a₁+a₂ odd)
//! ```
//!
//! which must come out a positive integer; when it does not (e.g.
//! `(0,0,2) → 3/2`) the caller gets [`Error::NonIntegralMultiplicity`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::linalg::{det_int, to_rational, IMat, QMat};
use crate::Result;

/// Sorted invariants `(a₁ ≤ a₂ ≤ a₃)` at a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GkInvariants {
    pub p: i64,
    pub a1: u32,
    pub a2: u32,
    pub a3: u32,
}

impl GkInvariants {
    pub fn tuple(&self) -> (u32, u32, u32) {
        (self.a1, self.a2, self.a3)
    }
}

fn val_big(n: &BigInt, p: i64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    while (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

fn val_rat(x: &BigRational, p: i64) -> Option<i64> {
    if x.is_zero() {
        return None; // infinite
    }
    Some(val_big(x.numer(), p) as i64 - val_big(x.denom(), p) as i64)
}

/// Gross–Keating invariants of a positive definite integral ternary Gram
/// matrix at `p`.
pub fn gk_invariants(q: &IMat, p: i64) -> Result<GkInvariants> {
    assert_eq!(q.len(), 3, "ternary forms only");
    if p == 2 {
        return gk2(q);
    }
    let mut vals = jordan_valuations(&to_rational(q), p);
    vals.sort_unstable();
    let det = det_int(q);
    assert_eq!(
        vals.iter().sum::<u32>(),
        val_big(&det, p),
        "Jordan valuations must sum to v_p(det)"
    );
    Ok(GkInvariants {
        p,
        a1: vals[0],
        a2: vals[1],
        a3: vals[2],
    })
}

/// Jordan block valuations over `Z_p`, odd `p`.
fn jordan_valuations(m: &QMat, p: i64) -> Vec<u32> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    // Locate the minimal valuation, preferring a diagonal witness.
    let mut best: Option<(i64, usize, usize)> = None;
    for i in 0..n {
        for j in 0..n {
            if let Some(v) = val_rat(&m[i][j], p) {
                let better = match best {
                    None => true,
                    Some((bv, bi, bj)) => {
                        v < bv || (v == bv && bi != bj && i == j)
                    }
                };
                if better {
                    best = Some((v, i, j));
                }
            }
        }
    }
    let (_, bi, bj) = best.expect("nonzero symmetric matrix");
    let mut work = m.clone();
    let pivot = if bi == bj {
        bi
    } else {
        // Fold column/row bj into bi; for odd p the new diagonal entry
        // attains the minimal valuation because 2 is a unit.
        for k in 0..n {
            let add = work[bj][k].clone();
            work[bi][k] += add;
        }
        for k in 0..n {
            let add = work[k][bj].clone();
            work[k][bi] += add;
        }
        bi
    };
    let piv_val = val_rat(&work[pivot][pivot], p).expect("pivot became zero");
    // Symmetric elimination of the pivot row/column.
    let d = work[pivot][pivot].clone();
    let mut rest: QMat = Vec::new();
    for i in 0..n {
        if i == pivot {
            continue;
        }
        let mut row = Vec::new();
        let ci = &work[i][pivot] / &d;
        for j in 0..n {
            if j == pivot {
                continue;
            }
            row.push(&work[i][j] - &ci * &work[pivot][j]);
        }
        rest.push(row);
    }
    let mut vals = jordan_valuations(&rest, p);
    vals.push(u32::try_from(piv_val).expect("integral lattice has non-negative valuations"));
    vals
}

/// Dyadic case. Requires `Q(x) ≡ 0 (mod 4)` structurally.
fn gk2(q: &IMat) -> Result<GkInvariants> {
    let four = BigInt::from(4);
    let two = BigInt::from(2);
    for i in 0..3 {
        if !(&q[i][i] % &four).is_zero() {
            return Err(Error::GK2Unhandled(format!(
                "diagonal entry {} not divisible by 4",
                q[i][i]
            )));
        }
        for j in 0..3 {
            if i != j && !(&q[i][j] % &two).is_zero() {
                return Err(Error::GK2Unhandled(format!(
                    "off-diagonal entry {} is odd",
                    q[i][j]
                )));
            }
        }
    }
    // 2T′ = Q/2 (integral, even diagonal).
    let mut two_t = vec![vec![BigInt::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            two_t[i][j] = q[i][j].clone() / &two;
        }
    }
    let (a1, a2, a3) = gk2_half_integral(&two_t)?;
    Ok(GkInvariants { p: 2, a1, a2, a3 })
}

/// Invariants of a half-integral ternary `T′` given via the integral matrix
/// `2T′` (even diagonal). Public for direct testing against known values.
pub fn gk2_half_integral(two_t: &IMat) -> Result<(u32, u32, u32)> {
    let det2t = det_int(two_t);
    assert!(!det2t.is_zero(), "degenerate form");
    let total = val_big(&det2t, 2);
    assert!(total >= 1, "v₂(det 2T′) ≥ 1 for half-integral ternary T′");
    let sum = total - 1;
    // Candidate tuples a₁ ≤ a₂ ≤ a₃ with the fixed sum, largest first.
    let mut tuples = Vec::new();
    for a1 in 0..=sum / 3 {
        for a2 in a1..=(sum - a1) / 2 {
            tuples.push((a1, a2, sum - a1 - a2));
        }
    }
    tuples.sort();
    tuples.reverse();
    for (a1, a2, a3) in tuples {
        if gk2_achievable(two_t, a1, a2, a3) {
            return Ok((a1, a2, a3));
        }
    }
    Err(Error::GK2Unhandled(format!(
        "no achievable invariant tuple of weight {sum}"
    )))
}

/// Is there a basis of `Z₂³` with `v₂(T′(yᵢ)) ≥ aᵢ` and
/// `v₂(2B(yᵢ,yⱼ)) ≥ ⌈(aᵢ+aⱼ)/2⌉`?
///
/// Decidable on truncations: `v₂(T′(y)) ≥ a` only depends on `y mod 2^a`
/// (the difference `T′(y+2^a z) − T′(y) = 2^a·2B(y,z) + 2^{2a}T′(z)` lies
/// in `2^a Z₂`), and `v₂(2B(y,z)) ≥ c` only on `y, z mod 2^c`. So slot `i`
/// is enumerated modulo `2^{mᵢ}` where `mᵢ` is the largest level any of
/// its conditions needs: `m₃ = a₃`, `m₂ = ⌈(a₂+a₃)/2⌉`, `m₁ = ⌈(a₁+a₃)/2⌉`
/// (each at least 1 so the determinant parity is visible). A witnessing
/// triple lifts to a genuine `GL₃(Z₂)` basis because every condition is
/// determined at these levels and an odd determinant is a 2-adic unit;
/// conversely a genuine basis truncates to a witness. Vectors that vanish
/// mod 2 can never appear in an odd-determinant triple and are skipped.
fn gk2_achievable(two_t: &IMat, a1: u32, a2: u32, a3: u32) -> bool {
    if a3 == 0 {
        return true; // the standard basis works
    }
    assert!(
        a3 <= 8,
        "dyadic search modulus 2^{a3} out of supported range"
    );
    let ceil_half = |a: u32, b: u32| (a + b).div_ceil(2);
    let m3 = a3.max(1);
    let m2 = ceil_half(a2, a3).max(1);
    let m1 = ceil_half(a1, a3).max(1);
    // T′(y) = yᵀ(2T′)y / 2; 2B(y,z) = yᵀ(2T′)z. Entries are only ever
    // needed modulo 2^{m₃+1}, and all slot coordinates are < 2^{m₃}, so
    // reducing modulo 2^{2m₃+2} keeps every product exact in i64.
    let tt: Vec<Vec<i64>> = two_t
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| (v % BigInt::from(1i64 << (2 * m3 + 2))).to_i64().unwrap())
                .collect()
        })
        .collect();
    let qval = |y: &[i64; 3]| -> i64 {
        let mut s = 0i64;
        for i in 0..3 {
            for j in 0..3 {
                s += tt[i][j] * y[i] * y[j];
            }
        }
        s / 2
    };
    let bval = |y: &[i64; 3], z: &[i64; 3]| -> i64 {
        let mut s = 0i64;
        for i in 0..3 {
            for j in 0..3 {
                s += tt[i][j] * y[i] * z[j];
            }
        }
        s
    };
    let ord_ok = |v: i64, need: u32| -> bool {
        if need == 0 {
            return true;
        }
        v.rem_euclid(1i64 << need.min(62)) == 0
    };
    // Primitive vectors mod 2^m whose value has 2-valuation at least a.
    let slot = |m: u32, a: u32| -> Vec<[i64; 3]> {
        let modulus = 1i64 << m;
        let mut out = Vec::new();
        for x in 0..modulus {
            for y in 0..modulus {
                for z in 0..modulus {
                    if (x | y | z) & 1 == 0 {
                        continue;
                    }
                    let v = [x, y, z];
                    if ord_ok(qval(&v), a) {
                        out.push(v);
                    }
                }
            }
        }
        out
    };
    let slot3 = slot(m3, a3);
    let slot2 = slot(m2, a2);
    let slot1 = slot(m1, a1);
    let (c23, c12, c13) = (ceil_half(a2, a3), ceil_half(a1, a2), ceil_half(a1, a3));
    for y3 in &slot3 {
        for y2 in &slot2 {
            if !ord_ok(bval(y2, y3), c23) {
                continue;
            }
            for y1 in &slot1 {
                if !ord_ok(bval(y1, y2), c12) || !ord_ok(bval(y1, y3), c13) {
                    continue;
                }
                let det = y1[0] * (y2[1] * y3[2] - y2[2] * y3[1])
                    - y1[1] * (y2[0] * y3[2] - y2[2] * y3[0])
                    + y1[2] * (y2[0] * y3[1] - y2[1] * y3[0]);
                if det % 2 != 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Evaluates the two-branch multiplicity formula exactly.
pub fn local_multiplicity(gk: &GkInvariants) -> Result<BigInt> {
    let (a1, a2, a3) = (gk.a1 as i64, gk.a2 as i64, gk.a3 as i64);
    let p = BigInt::from(gk.p);
    let mut acc = BigRational::zero();
    let pow = |i: i64| -> BigInt {
        p.pow(u32::try_from(i).expect("non-negative exponent"))
    };
    for i in 0..a1 {
        acc += BigRational::from_integer(
            BigInt::from((i + 1) * (a1 + a2 + a3 - 3 * i)) * pow(i),
        );
    }
    if (a1 + a2) % 2 == 0 {
        let hi = (a1 + a2 - 2).div_euclid(2);
        for i in a1..=hi {
            acc += BigRational::from_integer(
                BigInt::from((a1 + 1) * (2 * a1 + a2 + a3 - 4 * i)) * pow(i),
            );
        }
        let last = BigRational::from_integer(
            BigInt::from((a1 + 1) * (a3 - a2 + 1)) * pow((a1 + a2) / 2),
        ) / BigRational::from_integer(BigInt::from(2));
        acc += last;
    } else {
        let hi = (a1 + a2 - 1) / 2;
        for i in a1..=hi {
            acc += BigRational::from_integer(
                BigInt::from((a1 + 1) * (2 * a1 + a2 + a3 - 4 * i)) * pow(i),
            );
        }
    }
    if !acc.is_integer() {
        return Err(Error::NonIntegralMultiplicity {
            a1: gk.a1,
            a2: gk.a2,
            a3: gk.a3,
            p: gk.p,
            num: acc.numer().to_i64().unwrap_or(i64::MAX),
            den: acc.denom().to_i64().unwrap_or(i64::MAX),
        });
    }
    let out = acc.to_integer();
    assert!(out.is_positive(), "multiplicity must be positive");
    Ok(out)
}
