//! Definite rational quaternion algebras of prime discriminant.
//!
//! For a prime `p` this module constructs the quaternion algebra `B_{p,∞}`
//! ramified exactly at `p` and `∞` from a fixed congruence recipe, builds a
//! maximal order by integral saturation of `Z⟨1,i,j,k⟩`, walks the right
//! ideal classes of that order until the exact Eichler mass count
//! `Σ 12/|unitsₗ/±1| = p − 1` certifies completeness, and groups the class
//! left orders into conjugacy types. On top of that sit the unit groups
//! (norm-one vectors of the rank-4 norm form), the unique two-sided prime
//! ideal above `p` together with its principality, and the optimal
//! embeddings of an imaginary quadratic maximal order into each type, one
//! representative per conjugation orbit under the unit group.
//!
//! Elements are written over the basis `1, i, j, k` with `k = ij`,
//! `i² = i_sq`, `j² = j_sq`; lattices are rows of rational coordinates held
//! in canonical Hermite form so that equality of lattices is equality of
//! bases.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime, kronecker, prime_factors, valuation};
use crate::error::Error;
use crate::lattice::{are_isometric, enumerate_exact};
use crate::linalg::{
    complete_to_unimodular, det_rat, hnf_rows, inverse_rat, left_kernel, IMat, QMat,
};
use crate::order::CmOrder;
use crate::Result;

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// Quaternion written over the basis `1, i, j, k`.
///
/// The coordinates are exact rationals; the struct is ordered
/// lexicographically by coordinates so that sets of elements can be sorted
/// canonically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuatElem {
    pub c: [BigRational; 4],
}

impl QuatElem {
    pub fn new(c: [BigRational; 4]) -> Self {
        QuatElem { c }
    }

    pub fn from_i64(c0: i64, c1: i64, c2: i64, c3: i64) -> Self {
        QuatElem::new([
            BigRational::from_integer(BigInt::from(c0)),
            BigRational::from_integer(BigInt::from(c1)),
            BigRational::from_integer(BigInt::from(c2)),
            BigRational::from_integer(BigInt::from(c3)),
        ])
    }

    /// `n0/d0 + (n1/d1)i + (n2/d2)j + (n3/d3)k` from integer pairs.
    pub fn from_fracs(parts: [(i64, i64); 4]) -> Self {
        QuatElem::new(parts.map(|(n, d)| {
            BigRational::new(BigInt::from(n), BigInt::from(d))
        }))
    }

    pub fn zero() -> Self {
        QuatElem::from_i64(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        QuatElem::from_i64(1, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    /// Reduced trace `x + x̄ = 2·c₀`.
    pub fn trd(&self) -> BigRational {
        &self.c[0] + &self.c[0]
    }

    /// Standard involution `c₀ − c₁i − c₂j − c₃k`.
    pub fn conj(&self) -> Self {
        QuatElem::new([
            self.c[0].clone(),
            -self.c[1].clone(),
            -self.c[2].clone(),
            -self.c[3].clone(),
        ])
    }

    pub fn add(&self, other: &Self) -> Self {
        QuatElem::new([
            &self.c[0] + &other.c[0],
            &self.c[1] + &other.c[1],
            &self.c[2] + &other.c[2],
            &self.c[3] + &other.c[3],
        ])
    }

    pub fn sub(&self, other: &Self) -> Self {
        QuatElem::new([
            &self.c[0] - &other.c[0],
            &self.c[1] - &other.c[1],
            &self.c[2] - &other.c[2],
            &self.c[3] - &other.c[3],
        ])
    }

    pub fn neg(&self) -> Self {
        QuatElem::new([
            -self.c[0].clone(),
            -self.c[1].clone(),
            -self.c[2].clone(),
            -self.c[3].clone(),
        ])
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuatElem::new([
            &self.c[0] * k,
            &self.c[1] * k,
            &self.c[2] * k,
            &self.c[3] * k,
        ])
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }
}

impl std::fmt::Display for QuatElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels = ["", "i", "j", "k"];
        let mut first = true;
        for (v, label) in self.c.iter().zip(labels) {
            if v.is_zero() {
                continue;
            }
            let mag = v.abs();
            if first {
                if v.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if v.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if label.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}*{label}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Algebras
// ---------------------------------------------------------------------------

/// Quaternion algebra `(i_sq, j_sq / Q)` attached to the prime `p`, ramified
/// exactly at `p` and `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuatAlgebra {
    /// The finite ramified prime (also the reduced discriminant).
    pub p: i64,
    /// `i²` (a negative integer).
    pub i_sq: i64,
    /// `j²` (a negative integer).
    pub j_sq: i64,
}

impl QuatAlgebra {
    /// Product in the basis `1, i, j, k` with `k = ij`, `ji = −ij`.
    pub fn mul(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        let a = BigRational::from_integer(BigInt::from(self.i_sq));
        let b = BigRational::from_integer(BigInt::from(self.j_sq));
        let ab = &a * &b;
        let (x0, x1, x2, x3) = (&x.c[0], &x.c[1], &x.c[2], &x.c[3]);
        let (y0, y1, y2, y3) = (&y.c[0], &y.c[1], &y.c[2], &y.c[3]);
        QuatElem::new([
            x0 * y0 + &a * &(x1 * y1) + &b * &(x2 * y2) - &ab * &(x3 * y3),
            x0 * y1 + x1 * y0 - &b * &(x2 * y3) + &b * &(x3 * y2),
            x0 * y2 + x2 * y0 + &a * &(x1 * y3) - &a * &(x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }

    /// Reduced norm `x·x̄ = c₀² − i_sq·c₁² − j_sq·c₂² + i_sq·j_sq·c₃²`;
    /// positive definite because both squares are negative.
    pub fn nrd(&self, x: &QuatElem) -> BigRational {
        let a = BigRational::from_integer(BigInt::from(self.i_sq));
        let b = BigRational::from_integer(BigInt::from(self.j_sq));
        let (x0, x1, x2, x3) = (&x.c[0], &x.c[1], &x.c[2], &x.c[3]);
        x0 * x0 - &a * &(x1 * x1) - &b * &(x2 * x2) + &(&a * &b) * &(x3 * x3)
    }

    /// The four standard basis elements `1, i, j, k`.
    pub fn standard_basis() -> Vec<QuatElem> {
        vec![
            QuatElem::from_i64(1, 0, 0, 0),
            QuatElem::from_i64(0, 1, 0, 0),
            QuatElem::from_i64(0, 0, 1, 0),
            QuatElem::from_i64(0, 0, 0, 1),
        ]
    }
}

// ---------------------------------------------------------------------------
// Hilbert symbols and the congruence recipe
// ---------------------------------------------------------------------------

/// Hilbert symbol `(a, b)` over the reals: `−1` iff both arguments are
/// negative.
pub fn hilbert_symbol_real(a: i64, b: i64) -> i32 {
    if a < 0 && b < 0 {
        -1
    } else {
        1
    }
}

/// Hilbert symbol `(a, b)_ℓ` at a finite prime `ℓ` for nonzero integers.
pub fn hilbert_symbol(a: i64, b: i64, ell: i64) -> i32 {
    assert!(a != 0 && b != 0 && is_prime(ell));
    let alpha = valuation(a.unsigned_abs() as i64, ell);
    let beta = valuation(b.unsigned_abs() as i64, ell);
    let u = a / ell.pow(alpha);
    let w = b / ell.pow(beta);
    if ell == 2 {
        // ε(x) = (x−1)/2 mod 2 and ω(x) = (x²−1)/8 mod 2 for odd x.
        let eps = |x: i64| ((x - 1) / 2).rem_euclid(2);
        let om = |x: i64| {
            let r = x.rem_euclid(8);
            i64::from(r == 3 || r == 5)
        };
        let e = eps(u) * eps(w) + alpha as i64 * om(w) + beta as i64 * om(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut sign = 1i64;
        if (alpha * beta) % 2 == 1 && (ell - 1) / 2 % 2 == 1 {
            sign = -sign;
        }
        if beta % 2 == 1 {
            sign *= kronecker(u, ell);
        }
        if alpha % 2 == 1 {
            sign *= kronecker(w, ell);
        }
        sign as i32
    }
}

/// Finite primes at which `(i_sq, j_sq / Q)` is ramified.
pub fn ramified_finite_primes(alg: &QuatAlgebra) -> Vec<i64> {
    let mut support = vec![2];
    support.extend(prime_factors(alg.i_sq.unsigned_abs() as i64));
    support.extend(prime_factors(alg.j_sq.unsigned_abs() as i64));
    support.extend(prime_factors(alg.p));
    support.sort_unstable();
    support.dedup();
    support
        .into_iter()
        .filter(|&ell| hilbert_symbol(alg.i_sq, alg.j_sq, ell) == -1)
        .collect()
}

/// Presentation of `B_{p,∞}` by congruence class of `p`:
/// `(−1,−1)` for `p = 2`, `(−1,−p)` for `p ≡ 3 (mod 4)`, `(−2,−p)` for
/// `p ≡ 5 (mod 8)`, and `(−q,−p)` for `p ≡ 1 (mod 8)` with `q` the least
/// prime `q ≡ 3 (mod 4)` such that `−q` is a non-residue mod `p`. The
/// ramification set `{p, ∞}` is verified with Hilbert symbols.
pub fn build_algebra(p: i64) -> QuatAlgebra {
    assert!(is_prime(p), "discriminant of the algebra must be prime, got {p}");
    let (i_sq, j_sq) = if p == 2 {
        (-1, -1)
    } else if p % 4 == 3 {
        (-1, -p)
    } else if p % 8 == 5 {
        (-2, -p)
    } else {
        let q = (3..)
            .step_by(4)
            .find(|&q| is_prime(q) && kronecker(-q, p) == -1)
            .expect("a suitable auxiliary prime exists");
        (-q, -p)
    };
    let alg = QuatAlgebra { p, i_sq, j_sq };
    debug_assert_eq!(
        ramified_finite_primes(&alg),
        vec![p],
        "presentation for p={p} must be ramified exactly at p and ∞"
    );
    debug_assert_eq!(hilbert_symbol_real(i_sq, j_sq), -1);
    alg
}

// ---------------------------------------------------------------------------
// Lattices (rank-4 Z-modules in the algebra)
// ---------------------------------------------------------------------------

fn coord_rows(elems: &[QuatElem]) -> QMat {
    elems.iter().map(|e| e.c.to_vec()).collect()
}

/// Canonical Hermite-form basis of the span of the given elements.
/// Panics unless the span has full rank 4.
pub fn lattice_hnf(gens: &[QuatElem]) -> Vec<QuatElem> {
    let mut den = BigInt::one();
    for g in gens {
        for v in &g.c {
            den = num_integer::lcm(den, v.denom().clone());
        }
    }
    let scaled: IMat = gens
        .iter()
        .map(|g| {
            g.c.iter()
                .map(|v| (v * BigRational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let h = hnf_rows(&scaled);
    assert_eq!(h.len(), 4, "lattice must have full rank 4");
    let den_rat = BigRational::from_integer(den);
    h.iter()
        .map(|row| {
            QuatElem::new([
                BigRational::from_integer(row[0].clone()) / &den_rat,
                BigRational::from_integer(row[1].clone()) / &den_rat,
                BigRational::from_integer(row[2].clone()) / &den_rat,
                BigRational::from_integer(row[3].clone()) / &den_rat,
            ])
        })
        .collect()
}

/// Product lattice: Hermite basis of the span of all pairwise products.
pub fn lattice_mul(alg: &QuatAlgebra, x: &[QuatElem], y: &[QuatElem]) -> Vec<QuatElem> {
    let mut gens = Vec::with_capacity(x.len() * y.len());
    for a in x {
        for b in y {
            gens.push(alg.mul(a, b));
        }
    }
    lattice_hnf(&gens)
}

/// Image of a lattice under the standard involution.
pub fn lattice_conj(x: &[QuatElem]) -> Vec<QuatElem> {
    let gens: Vec<QuatElem> = x.iter().map(QuatElem::conj).collect();
    lattice_hnf(&gens)
}

fn lattice_scale(x: &[QuatElem], k: &BigRational) -> Vec<QuatElem> {
    let gens: Vec<QuatElem> = x.iter().map(|e| e.scale(k)).collect();
    lattice_hnf(&gens)
}

fn lattice_det_abs(x: &[QuatElem]) -> BigRational {
    det_rat(&coord_rows(x)).abs()
}

/// Gram matrix of the reduced norm on the lattice basis:
/// `G[i][j] = trd(bᵢ·b̄ⱼ)/2`, so that `nrd(Σ xᵢbᵢ) = xᵀGx`.
pub fn lattice_norm_gram(alg: &QuatAlgebra, basis: &[QuatElem]) -> QMat {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let n = basis.len();
    let mut g = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = alg.mul(&basis[i], &basis[j].conj()).trd() * &half;
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    g
}

fn sqrt_rational_exact(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let num = v.numer().sqrt();
    let den = v.denom().sqrt();
    if &(&num * &num) == v.numer() && &(&den * &den) == v.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

/// Reduced norm of a lattice relative to a maximal order of the same
/// algebra: `nrd(M)² = |det M| / |det O|`. Panics if the ratio is not a
/// perfect square (it always is for one-sided ideals of maximal orders).
pub fn lattice_nrd(lat: &[QuatElem], reference: &QuatOrder) -> BigRational {
    let ratio = lattice_det_abs(lat) / reference.det_abs();
    sqrt_rational_exact(&ratio).expect("ideal index must be a perfect square")
}

// ---------------------------------------------------------------------------
// Orders
// ---------------------------------------------------------------------------

/// An order (full-rank ring lattice) in a definite quaternion algebra, held
/// by its canonical Hermite-form basis.
#[derive(Clone, Debug)]
pub struct QuatOrder {
    pub alg: QuatAlgebra,
    /// Canonical basis (4 elements).
    pub basis: Vec<QuatElem>,
    inv: QMat,
}

impl PartialEq for QuatOrder {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.basis == other.basis
    }
}
impl Eq for QuatOrder {}

impl QuatOrder {
    /// Order spanned by the generators. Debug builds verify that the span
    /// contains 1, is closed under multiplication, and has integral traces
    /// and norms.
    pub fn from_generators(alg: &QuatAlgebra, gens: &[QuatElem]) -> Self {
        let basis = lattice_hnf(gens);
        let inv = inverse_rat(&coord_rows(&basis)).expect("full-rank basis");
        let order = QuatOrder {
            alg: *alg,
            basis,
            inv,
        };
        debug_assert!(order.contains(&QuatElem::one()), "an order contains 1");
        #[cfg(debug_assertions)]
        for x in &order.basis {
            assert!(x.trd().is_integer(), "integral trace");
            assert!(alg.nrd(x).is_integer(), "integral norm");
            for y in &order.basis {
                assert!(
                    order.contains(&alg.mul(x, y)),
                    "order closed under multiplication"
                );
            }
        }
        order
    }

    /// Integer coordinates of `x` over the basis, if `x` lies in the order.
    pub fn coords(&self, x: &QuatElem) -> Option<Vec<BigInt>> {
        let mut out = Vec::with_capacity(4);
        for col in 0..4 {
            let mut acc = BigRational::zero();
            for (k, v) in x.c.iter().enumerate() {
                acc += v * &self.inv[k][col];
            }
            if !acc.is_integer() {
                return None;
            }
            out.push(acc.to_integer());
        }
        Some(out)
    }

    pub fn contains(&self, x: &QuatElem) -> bool {
        self.coords(x).is_some()
    }

    pub fn det_abs(&self) -> BigRational {
        lattice_det_abs(&self.basis)
    }

    /// Reduced discriminant: the square root of `|det(trd(bᵢbⱼ))|`.
    pub fn discrd(&self) -> BigInt {
        discrd_of(&self.alg, &self.basis)
    }

    /// Gram matrix of the reduced norm on the order basis.
    pub fn norm_gram(&self) -> QMat {
        lattice_norm_gram(&self.alg, &self.basis)
    }

    /// Basis of the rank-3 sublattice of trace-zero elements.
    pub fn trace_zero_basis(&self) -> Vec<QuatElem> {
        let col: IMat = self
            .basis
            .iter()
            .map(|b| {
                let t = b.trd();
                assert!(t.is_integer());
                vec![t.to_integer()]
            })
            .collect();
        let kern = left_kernel(&col);
        assert_eq!(kern.len(), 3, "trace-zero sublattice has rank 3");
        kern.iter()
            .map(|row| {
                let mut acc = QuatElem::zero();
                for (c, b) in row.iter().zip(&self.basis) {
                    acc = acc.add(&b.scale(&BigRational::from_integer(c.clone())));
                }
                acc
            })
            .collect()
    }

    /// Integral Gram matrix `trd(xᵢ·x̄ⱼ)` (twice the norm form) of the
    /// trace-zero sublattice; an isometry invariant of the conjugacy type.
    pub fn ternary_gram(&self) -> IMat {
        let tz = self.trace_zero_basis();
        let n = tz.len();
        let mut g = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = self.alg.mul(&tz[i], &tz[j].conj()).trd();
                assert!(v.is_integer());
                g[i][j] = v.to_integer();
            }
        }
        g
    }
}

fn discrd_of(alg: &QuatAlgebra, basis: &[QuatElem]) -> BigInt {
    let n = basis.len();
    let mut t = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            t[i][j] = alg.mul(&basis[i], &basis[j]).trd();
        }
    }
    let d = det_rat(&t).abs();
    let r = sqrt_rational_exact(&d).expect("discriminant is a perfect square");
    assert!(r.is_integer(), "reduced discriminant is an integer");
    r.to_integer()
}

// ---------------------------------------------------------------------------
// Maximal orders by saturation
// ---------------------------------------------------------------------------

/// Representatives of the projective space `P³(F_ℓ)`: first nonzero
/// coordinate normalized to 1.
fn projective_reps(ell: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for pos in 0..4usize {
        let free = 3 - pos;
        let total = ell.pow(free as u32);
        for mut code in 0..total {
            let mut c = [0i64; 4];
            c[pos] = 1;
            for slot in (pos + 1)..4 {
                c[slot] = code % ell;
                code /= ell;
            }
            out.push(c);
        }
    }
    out
}

/// Closure of the span of `gens` under multiplication, or `None` if the
/// closure is not discrete (detected by the coordinate determinant dropping
/// below the floor that any order of this algebra satisfies).
fn ring_closure(
    alg: &QuatAlgebra,
    gens: &[QuatElem],
    det_floor: &BigRational,
) -> Option<Vec<QuatElem>> {
    let mut cur = lattice_hnf(gens);
    for _ in 0..20 {
        if &lattice_det_abs(&cur) < det_floor {
            return None;
        }
        let mut all = cur.clone();
        for x in &cur {
            for y in &cur {
                all.push(alg.mul(x, y));
            }
        }
        let next = lattice_hnf(&all);
        if next == cur {
            return Some(cur);
        }
        cur = next;
    }
    None
}

/// A maximal order containing `Z⟨1,i,j,k⟩`, built by repeatedly adjoining a
/// vector with denominator `ℓ` (for primes `ℓ` still dividing the reduced
/// discriminant beyond `p`), closing under multiplication, and keeping the
/// enlargement whenever the result is still an integral order. Terminates
/// when the reduced discriminant equals `p`, which certifies maximality.
pub fn maximal_order(alg: &QuatAlgebra) -> QuatOrder {
    let p = alg.p;
    // Any order O of this algebra has discrd(O) = 4|i_sq·j_sq|·|det coords|
    // a positive multiple of p, so coordinate determinants are ≥ this floor.
    let det_floor = BigRational::new(
        BigInt::from(p),
        BigInt::from(4 * (alg.i_sq * alg.j_sq).abs()),
    );
    let mut basis = lattice_hnf(&QuatAlgebra::standard_basis());
    loop {
        let disc = discrd_of(alg, &basis);
        if disc == BigInt::from(p) {
            return QuatOrder::from_generators(alg, &basis);
        }
        let excess = &disc / BigInt::from(p);
        assert!(
            (&excess * BigInt::from(p)) == disc,
            "reduced discriminant stays a multiple of p"
        );
        let ell = prime_factors(i64::try_from(&excess).expect("small discriminant"))[0];
        let ell_rat = BigRational::from_integer(BigInt::from(ell));
        let mut advanced = false;
        'candidates: for c in projective_reps(ell) {
            let mut v = QuatElem::zero();
            for (coef, b) in c.iter().zip(&basis) {
                v = v.add(&b.scale_i64(*coef));
            }
            v = v.scale(&(BigRational::one() / &ell_rat));
            if !v.trd().is_integer() || !alg.nrd(&v).is_integer() {
                continue;
            }
            let mut gens = basis.clone();
            gens.push(v);
            if let Some(closed) = ring_closure(alg, &gens, &det_floor) {
                let new_disc = discrd_of(alg, &closed);
                if new_disc < disc && (&disc % &new_disc).is_zero() {
                    basis = closed;
                    advanced = true;
                    break 'candidates;
                }
            }
        }
        assert!(
            advanced,
            "saturation toward the maximal order stalled at discrd {disc} for p={p}"
        );
    }
}

// ---------------------------------------------------------------------------
// Unit groups
// ---------------------------------------------------------------------------

/// Representatives of the unit group modulo `±1`: one norm-one vector per
/// `±` pair, canonically ordered.
pub fn units_mod_sign(order: &QuatOrder) -> Vec<QuatElem> {
    let g = order.norm_gram();
    enumerate_exact(&g, &BigRational::one())
        .iter()
        .map(|coords| {
            let mut acc = QuatElem::zero();
            for (c, b) in coords.iter().zip(&order.basis) {
                acc = acc.add(&b.scale(&BigRational::from_integer(c.clone())));
            }
            acc
        })
        .collect()
}

/// The full (finite) unit group of the order: all elements of reduced norm
/// one, both signs included.
pub fn unit_group(order: &QuatOrder) -> Vec<QuatElem> {
    let mut out = Vec::new();
    for u in units_mod_sign(order) {
        out.push(u.neg());
        out.push(u);
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Ideal classes, types, and the mass certificate
// ---------------------------------------------------------------------------

/// The two-sided prime ideal of a maximal order above the ramified prime.
#[derive(Clone, Debug)]
pub struct TwoSidedPrime {
    /// Hermite basis of the ideal.
    pub basis: Vec<QuatElem>,
    /// Whether the ideal is principal, i.e. contains an element of reduced
    /// norm `p`.
    pub principal: bool,
    /// A generator of reduced norm `p` when principal.
    pub generator: Option<QuatElem>,
}

/// Everything the rest of the crate needs about `B_{p,∞}`: the algebra, a
/// base maximal order, its right ideal classes (certified complete by the
/// mass count), and one maximal order per conjugacy type with its two-sided
/// prime.
#[derive(Debug)]
pub struct QuaternionData {
    pub algebra: QuatAlgebra,
    pub base_order: QuatOrder,
    /// Hermite bases of one right ideal per class (the first is the order).
    pub class_ideals: Vec<Vec<QuatElem>>,
    /// Left order of each class ideal.
    pub class_left_orders: Vec<QuatOrder>,
    /// `|units/±1|` of each class left order.
    pub class_unit_counts: Vec<usize>,
    /// Indices into the class arrays, one per conjugacy type of maximal
    /// orders.
    pub type_indices: Vec<usize>,
    /// Two-sided prime of each type representative.
    pub type_two_sided: Vec<TwoSidedPrime>,
}

/// Left order `{x : xI ⊆ I}` of a right ideal of a maximal order, via
/// `O_l(I) = (1/nrd I)·I·Ī`.
pub fn left_order(alg: &QuatAlgebra, ideal: &[QuatElem], reference: &QuatOrder) -> QuatOrder {
    let n = lattice_nrd(ideal, reference);
    let prod = lattice_mul(alg, ideal, &lattice_conj(ideal));
    let scaled = lattice_scale(&prod, &(BigRational::one() / n));
    QuatOrder::from_generators(alg, &scaled)
}

/// Whether two right ideals of the same maximal order differ by a left
/// factor `α ∈ B^×`: equivalent iff `I·J̄` contains an element of reduced
/// norm `nrd(I)·nrd(J)`.
fn ideals_equivalent(
    alg: &QuatAlgebra,
    a: &[QuatElem],
    b: &[QuatElem],
    reference: &QuatOrder,
) -> bool {
    let target = lattice_nrd(a, reference) * lattice_nrd(b, reference);
    let prod = lattice_mul(alg, a, &lattice_conj(b));
    let gram = lattice_norm_gram(alg, &prod);
    !enumerate_exact(&gram, &target).is_empty()
}

/// Whether two maximal orders are conjugate in the algebra.
///
/// The product lattice `M = O·O'` is a connecting ideal; the orders are
/// conjugate iff some connecting ideal is principal (contains an element
/// whose reduced norm equals the ideal norm). Connecting ideals form a
/// torsor under the two-sided ideal class group of `O`, which is generated
/// by the two-sided prime `𝒫`, so it suffices to test `M` and `𝒫·M`.
/// Debug builds cross-check the verdict against isometry of the trace-zero
/// ternary Gram matrices.
pub fn orders_conjugate(a: &QuatOrder, b: &QuatOrder) -> bool {
    assert_eq!(a.alg, b.alg);
    let verdict = if a == b {
        true
    } else {
        let has_norm_generator = |lat: &[QuatElem]| {
            let target = lattice_nrd(lat, a);
            let gram = lattice_norm_gram(&a.alg, lat);
            !enumerate_exact(&gram, &target).is_empty()
        };
        let prod = lattice_mul(&a.alg, &a.basis, &b.basis);
        has_norm_generator(&prod) || {
            let twisted = lattice_mul(&a.alg, &two_sided_prime(a).basis, &prod);
            has_norm_generator(&twisted)
        }
    };
    debug_assert_eq!(
        verdict,
        are_isometric(&a.ternary_gram(), &b.ternary_gram()),
        "conjugacy and ternary isometry must agree"
    );
    verdict
}

/// The `ℓ+1` right ideals of index `ℓ²` between `I` and `ℓI` (for `ℓ` prime
/// to the discriminant), each of the form `xI + ℓI` with `x` running over
/// rank-one residues of the left order.
fn neighbor_ideals(
    alg: &QuatAlgebra,
    ideal: &[QuatElem],
    ol: &QuatOrder,
    ell: i64,
) -> Vec<Vec<QuatElem>> {
    let base_det = lattice_det_abs(ideal);
    let index_target = BigRational::from_integer(BigInt::from(ell * ell));
    let scaled: Vec<QuatElem> = ideal.iter().map(|e| e.scale_i64(ell)).collect();
    let mut out: Vec<Vec<QuatElem>> = Vec::new();
    for c in projective_reps(ell) {
        let mut x = QuatElem::zero();
        for (coef, b) in c.iter().zip(&ol.basis) {
            x = x.add(&b.scale_i64(*coef));
        }
        let mut gens = scaled.clone();
        for g in ideal {
            gens.push(alg.mul(&x, g));
        }
        let j = lattice_hnf(&gens);
        if lattice_det_abs(&j) / &base_det == index_target && !out.contains(&j) {
            out.push(j);
        }
    }
    debug_assert_eq!(out.len() as i64, ell + 1, "neighbor count at split ℓ");
    out
}

fn compute_quaternion_data(p: i64) -> Result<QuaternionData> {
    let algebra = build_algebra(p);
    let base_order = maximal_order(&algebra);
    let ell = if p == 2 { 3 } else { 2 };

    let mut class_ideals: Vec<Vec<QuatElem>> = vec![base_order.basis.clone()];
    let mut class_left_orders: Vec<QuatOrder> = vec![base_order.clone()];
    let mut frontier = vec![0usize];
    while let Some(idx) = frontier.pop() {
        let ideal = class_ideals[idx].clone();
        let ol = class_left_orders[idx].clone();
        for j in neighbor_ideals(&algebra, &ideal, &ol, ell) {
            let known = class_ideals
                .iter()
                .any(|known| ideals_equivalent(&algebra, known, &j, &base_order));
            if !known {
                let jl = left_order(&algebra, &j, &base_order);
                class_ideals.push(j);
                class_left_orders.push(jl);
                frontier.push(class_ideals.len() - 1);
            }
        }
    }

    let class_unit_counts: Vec<usize> = class_left_orders
        .iter()
        .map(|o| units_mod_sign(o).len())
        .collect();
    let have: i64 = class_unit_counts
        .iter()
        .map(|&u| {
            assert!(12 % u == 0, "unit group order divides 24");
            12 / u as i64
        })
        .sum();
    let want = p - 1;
    if have != want {
        return Err(Error::MassNotReached { p, have, want });
    }

    let mut type_indices: Vec<usize> = Vec::new();
    for (idx, order) in class_left_orders.iter().enumerate() {
        let fresh = !type_indices
            .iter()
            .any(|&t| orders_conjugate(&class_left_orders[t], order));
        if fresh {
            type_indices.push(idx);
        }
    }
    let type_two_sided: Vec<TwoSidedPrime> = type_indices
        .iter()
        .map(|&t| two_sided_prime(&class_left_orders[t]))
        .collect();

    Ok(QuaternionData {
        algebra,
        base_order,
        class_ideals,
        class_left_orders,
        class_unit_counts,
        type_indices,
        type_two_sided,
    })
}

/// Memoized class and type data for `B_{p,∞}`.
pub fn quaternion_data(p: i64) -> Result<Arc<QuaternionData>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<QuaternionData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&p) {
        return Ok(hit.clone());
    }
    let data = Arc::new(compute_quaternion_data(p)?);
    cache.lock().unwrap().insert(p, data.clone());
    Ok(data)
}

/// One maximal order per conjugacy type in `B_{p,∞}`.
pub fn maximal_order_types(p: i64) -> Result<Vec<QuatOrder>> {
    let data = quaternion_data(p)?;
    Ok(data
        .type_indices
        .iter()
        .map(|&t| data.class_left_orders[t].clone())
        .collect())
}

// ---------------------------------------------------------------------------
// The two-sided prime above p
// ---------------------------------------------------------------------------

/// Basis of the null space of `m·x ≡ 0 (mod p)` over `F_p`.
fn fp_kernel(m: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<i64>> = m
        .iter()
        .map(|r| r.iter().map(|v| v.rem_euclid(p)).collect())
        .collect();
    let inv_mod = |x: i64| -> i64 {
        // Fermat inverse; p prime and x ≢ 0.
        let mut result = 1i64;
        let mut base = x.rem_euclid(p);
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    };
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c]);
        for v in a[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for cc in 0..cols {
                    a[i][cc] = (a[i][cc] - f * a[r][cc]).rem_euclid(p);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0i64; cols];
        v[free] = 1;
        for (row_idx, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (-a[row_idx][free]).rem_euclid(p);
        }
        kernel.push(v);
    }
    kernel
}

/// The unique two-sided prime ideal `𝒫` of a maximal order above the
/// ramified prime: the set of elements whose reduced norm is divisible by
/// `p`. Verifies `𝒫² = pR`, `[R:𝒫] = p²`, and `nrd(𝒫) = p`, then tests
/// principality by searching for an element of reduced norm `p`.
pub fn two_sided_prime(order: &QuatOrder) -> TwoSidedPrime {
    let alg = order.alg;
    let p = alg.p;
    // Mod p, the reduced norm vanishes exactly on a 2-dimensional subspace
    // of R/pR. For odd p that subspace is the radical of the bilinear Gram
    // trd(bᵢ·b̄ⱼ); for p = 2 it is found by direct enumeration of the 16
    // residues.
    let residues: Vec<Vec<i64>> = if p == 2 {
        let mut zero: Vec<Vec<i64>> = Vec::new();
        for code in 1..16u32 {
            let c: Vec<i64> = (0..4).map(|b| i64::from(code >> b & 1)).collect();
            let mut x = QuatElem::zero();
            for (coef, bas) in c.iter().zip(&order.basis) {
                x = x.add(&bas.scale_i64(*coef));
            }
            let n = alg.nrd(&x);
            assert!(n.is_integer());
            if (n.to_integer() % BigInt::from(2)).is_zero() {
                zero.push(c);
            }
        }
        assert_eq!(zero.len(), 3, "norm-zero residues mod 2 form a 2-dim space");
        zero.truncate(2);
        // The two vectors kept must be independent mod 2; with three nonzero
        // vectors of a 2-dimensional F₂-space any two distinct ones are.
        zero
    } else {
        let mut g2: Vec<Vec<i64>> = vec![vec![0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let v = alg.mul(&order.basis[i], &order.basis[j].conj()).trd();
                assert!(v.is_integer());
                g2[i][j] = i64::try_from(&(v.to_integer() % BigInt::from(p)))
                    .expect("reduced entry fits");
            }
        }
        let k = fp_kernel(&g2, p);
        assert_eq!(k.len(), 2, "radical of the norm form mod p has dimension 2");
        k
    };
    let mut gens: Vec<QuatElem> = order.basis.iter().map(|b| b.scale_i64(p)).collect();
    for c in &residues {
        let mut x = QuatElem::zero();
        for (coef, bas) in c.iter().zip(&order.basis) {
            x = x.add(&bas.scale_i64(*coef));
        }
        gens.push(x);
    }
    let basis = lattice_hnf(&gens);

    let index = lattice_det_abs(&basis) / order.det_abs();
    assert_eq!(
        index,
        BigRational::from_integer(BigInt::from(p * p)),
        "two-sided prime has index p²"
    );
    let square = lattice_mul(&alg, &basis, &basis);
    let p_r = lattice_scale(&order.basis, &BigRational::from_integer(BigInt::from(p)));
    assert_eq!(square, p_r, "the two-sided prime squares to pR");
    assert_eq!(
        lattice_mul(&alg, &order.basis, &basis),
        basis,
        "left stability under the order"
    );
    assert_eq!(
        lattice_mul(&alg, &basis, &order.basis),
        basis,
        "right stability under the order"
    );
    let nrd = lattice_nrd(&basis, order);
    assert_eq!(nrd, BigRational::from_integer(BigInt::from(p)));

    let gram = lattice_norm_gram(&alg, &basis);
    let generator = enumerate_exact(&gram, &BigRational::from_integer(BigInt::from(p)))
        .first()
        .map(|coords| {
            let mut acc = QuatElem::zero();
            for (c, b) in coords.iter().zip(&basis) {
                acc = acc.add(&b.scale(&BigRational::from_integer(c.clone())));
            }
            acc
        });
    TwoSidedPrime {
        basis,
        principal: generator.is_some(),
        generator,
    }
}

// ---------------------------------------------------------------------------
// Optimal embeddings
// ---------------------------------------------------------------------------

/// Images of `ω` under every optimal embedding of the quadratic maximal
/// order into the given quaternion order, one per conjugation orbit under
/// the unit group, canonically sorted.
///
/// An image is an element `w` with `w² − t·w + n = 0` (`t`, `n` the trace
/// and norm of `ω`); optimality — `Q(w) ∩ R = Z + Zw` — is automatic here
/// because the quadratic order is maximal.
pub fn embeddings_into(order: &QuatOrder, quad: &CmOrder) -> Vec<QuatElem> {
    let alg = order.alg;
    let t = quad.omega_trace;
    let d = quad.d;
    let tz = order.trace_zero_basis();
    let gram = lattice_norm_gram(&alg, &tz);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let t_elem = QuatElem::from_i64(t, 0, 0, 0);

    let mut images: Vec<QuatElem> = Vec::new();
    for coords in enumerate_exact(&gram, &BigRational::from_integer(BigInt::from(d))) {
        let mut x = QuatElem::zero();
        for (c, b) in coords.iter().zip(&tz) {
            x = x.add(&b.scale(&BigRational::from_integer(c.clone())));
        }
        for cand in [x.clone(), x.neg()] {
            let w = t_elem.add(&cand).scale(&half);
            if order.contains(&w) {
                images.push(w);
            }
        }
    }

    // One representative per orbit of w ↦ u·w·u⁻¹ = u·w·ū over units u.
    let units = units_mod_sign(order);
    let orbit_min = |w: &QuatElem| -> QuatElem {
        let mut best = w.clone();
        for u in &units {
            let conj = alg.mul(&alg.mul(u, w), &u.conj());
            if conj < best {
                best = conj;
            }
        }
        best
    };
    let mut kept: Vec<QuatElem> = images
        .iter()
        .filter(|w| **w == orbit_min(w))
        .cloned()
        .collect();
    kept.sort();
    kept.dedup();

    #[cfg(debug_assertions)]
    for w in &kept {
        let n = BigInt::from(quad.omega_norm);
        let rel = alg
            .mul(w, w)
            .sub(&w.scale_i64(t))
            .add(&QuatElem::new([
                BigRational::from_integer(n),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ]));
        assert!(rel.is_zero(), "ω-image satisfies its quadratic relation");
    }
    kept
}

/// An optimal embedding of the quadratic maximal order into a maximal
/// quaternion order, presented on a basis `1, w, r₁, r₂` of the order.
#[derive(Clone, Debug)]
pub struct OptimalEmbedding {
    /// Index of the conjugacy type carrying the embedding.
    pub type_index: usize,
    /// The maximal order (type representative).
    pub order: QuatOrder,
    /// Image of `ω`.
    pub omega_image: QuatElem,
    /// The two completing basis vectors `r₁, r₂`.
    pub completion: (QuatElem, QuatElem),
    /// Whether the two-sided prime of the order is principal.
    pub two_sided_principal: bool,
}

fn complete_embedding_basis(order: &QuatOrder, w: &QuatElem) -> (QuatElem, QuatElem) {
    let c1 = order.coords(&QuatElem::one()).expect("1 in order");
    let cw = order.coords(w).expect("image in order");
    let rows: IMat = vec![c1, cw];
    let full = complete_to_unimodular(&rows)
        .expect("1, w span a saturated sublattice of the order");
    let from_row = |row: &[BigInt]| {
        let mut acc = QuatElem::zero();
        for (c, b) in row.iter().zip(&order.basis) {
            acc = acc.add(&b.scale(&BigRational::from_integer(c.clone())));
        }
        acc
    };
    (from_row(&full[2]), from_row(&full[3]))
}

fn compute_optimal_embeddings(quad: &CmOrder, p: i64) -> Result<Vec<OptimalEmbedding>> {
    let data = quaternion_data(p)?;
    let mut out = Vec::new();
    for (ti, &ci) in data.type_indices.iter().enumerate() {
        let order = &data.class_left_orders[ci];
        for w in embeddings_into(order, quad) {
            let completion = complete_embedding_basis(order, &w);
            out.push(OptimalEmbedding {
                type_index: ti,
                order: order.clone(),
                omega_image: w,
                completion,
                two_sided_principal: data.type_two_sided[ti].principal,
            });
        }
    }
    Ok(out)
}

/// All optimal embeddings of the quadratic maximal order into the conjugacy
/// types of maximal orders of `B_{p,∞}`, each completed to an order basis
/// `1, w, r₁, r₂` and tagged with the principality of the two-sided prime.
/// Memoized per `(d, p)`: every polarization of a discriminant consumes the
/// same embedding set.
pub fn optimal_embeddings(quad: &CmOrder, p: i64) -> Result<Vec<OptimalEmbedding>> {
    static CACHE: OnceLock<Mutex<HashMap<(i64, i64), Arc<Vec<OptimalEmbedding>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(quad.d, p)) {
        return Ok(hit.as_ref().clone());
    }
    let embs = Arc::new(compute_optimal_embeddings(quad, p)?);
    cache
        .lock()
        .unwrap()
        .insert((quad.d, p), embs.clone());
    Ok(embs.as_ref().clone())
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
