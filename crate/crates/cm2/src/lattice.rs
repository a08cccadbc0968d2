//! Exact lattice point enumeration (Fincke–Pohst) and integral lattice
//! isometry for small positive definite forms.
//!
//! The quadratic form is given by a symmetric Gram matrix `G` (rational
//! entries allowed). Enumeration uses the exact rational Gram–Schmidt
//! decomposition
//!
//! `Q(x) = Σᵢ cᵢ·(xᵢ + Σ_{j>i} μ_{ji}·xⱼ)²`,
//!
//! recursing from the last coordinate with exact interval bounds: candidate
//! ranges are over-approximated with an integer square root and every
//! candidate is re-checked against the exact inequality, so no point is ever
//! missed or spuriously reported. One representative of each `±x` pair is
//! returned, canonicalized so that the first nonzero coordinate is positive
//! (the lexicographically larger of the pair).
//!
//! Isometry testing between integral Gram matrices is exhaustive
//! backtracking: images of basis vectors are drawn from the exact-norm
//! shells of the target form, constrained by all pairwise inner products.
//! For equal determinants a full rank match is automatically unimodular.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::linalg::{det_int, to_rational, IMat, QMat};

/// `xᵀ·G·x` for an integer vector.
pub fn quad_value(gram: &QMat, x: &[BigInt]) -> BigRational {
    let n = gram.len();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let xi = BigRational::from_integer(x[i].clone());
        for j in 0..n {
            if x[j].is_zero() {
                continue;
            }
            let xj = BigRational::from_integer(x[j].clone());
            acc += &gram[i][j] * &xi * &xj;
        }
    }
    acc
}

/// Bilinear value `xᵀ·G·y`.
pub fn bilinear_value(gram: &QMat, x: &[BigInt], y: &[BigInt]) -> BigRational {
    let n = gram.len();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let xi = BigRational::from_integer(x[i].clone());
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            let yj = BigRational::from_integer(y[j].clone());
            acc += &gram[i][j] * &xi * &yj;
        }
    }
    acc
}

/// Gram–Schmidt data: `c[i]` the orthogonal norms, `mu[j][i]` (j > i) the
/// projection coefficients. Returns `None` if the form is not positive
/// definite.
fn gram_schmidt(gram: &QMat) -> Option<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = gram.len();
    let mut c = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut ci = gram[i][i].clone();
        for k in 0..i {
            ci -= &mu[i][k] * &mu[i][k] * &c[k];
        }
        if ci <= BigRational::zero() {
            return None;
        }
        c[i] = ci;
        for j in (i + 1)..n {
            let mut v = gram[j][i].clone();
            for k in 0..i {
                v -= &mu[j][k] * &mu[i][k] * &c[k];
            }
            mu[j][i] = v / &c[i];
        }
    }
    Some((c, mu))
}

/// True iff the symmetric matrix is positive definite.
pub fn is_positive_definite(gram: &QMat) -> bool {
    gram_schmidt(gram).is_some()
}

pub fn is_positive_definite_int(gram: &IMat) -> bool {
    is_positive_definite(&to_rational(gram))
}

/// Floor of `√v` for a non-negative rational, as a `BigInt`.
fn floor_sqrt_rational(v: &BigRational) -> BigInt {
    assert!(!v.is_negative());
    // floor(sqrt(p/q)) = floor(sqrt(p*q)/q); use integer sqrt and adjust.
    let p = v.numer();
    let q = v.denom();
    let mut s = (p * q).sqrt() / q;
    // Adjust for the floor interacting with the division: the exact
    // condition for s = ⌊√(p/q)⌋ is s²·q ≤ p < (s+1)²·q.
    while (&s + 1u32) * (&s + 1u32) * q <= *p {
        s += 1u32;
    }
    while &s * &s * q > *p {
        s -= 1u32;
    }
    s
}

/// Exact LLL reduction of a positive definite Gram matrix. Returns the
/// reduced Gram `g' = u·G·uᵀ` together with the unimodular row-transform
/// `u` (row `i` of `u` holds the coordinates of the `i`-th reduced basis
/// vector over the input basis). Bases produced by normal-form
/// canonicalization can be extremely skew; enumeration from them explores
/// astronomically wide ranges, so every enumeration call reduces first.
fn lll_reduce(gram: &QMat) -> (QMat, IMat) {
    let n = gram.len();
    let mut g = gram.clone();
    let mut u: IMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect();
    if n < 2 {
        return (g, u);
    }
    // delta = 3/4 (classic Lovász parameter).
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1usize;
    let mut guard = 0u64;
    let (mut b, mut mu) = gram_schmidt(&g).expect("LLL needs a positive definite form");
    while k < n {
        guard += 1;
        assert!(guard < 1_000_000, "LLL failed to terminate");
        // Size-reduce row k against rows k-1, …, 0, updating μ in place:
        // after row_k −= q·row_j, μ[k][i] −= q·μ[j][i] for i < j and
        // μ[k][j] −= q; the orthogonal norms b are unchanged.
        for j in (0..k).rev() {
            let q = round_rational(&mu[k][j]);
            if !q.is_zero() {
                row_sub(&mut g, &mut u, k, j, &q);
                let qr = BigRational::from_integer(q);
                for i in 0..j {
                    let v = &mu[j][i] * &qr;
                    mu[k][i] -= v;
                }
                mu[k][j] -= qr;
            }
        }
        let lhs = b[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            g.swap(k - 1, k);
            for row in g.iter_mut() {
                row.swap(k - 1, k);
            }
            u.swap(k - 1, k);
            // A swap disturbs the decomposition globally; recompute.
            let gs = gram_schmidt(&g).expect("positive definite");
            b = gs.0;
            mu = gs.1;
            k = k.max(2) - 1;
        }
    }
    (g, u)
}

/// Nearest integer to a rational (ties toward even via floor of x+1/2).
fn round_rational(v: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    (v + half).floor().to_integer()
}

/// Row operation `row_k -= q·row_j` applied simultaneously to the Gram
/// matrix (rows and columns) and the transform.
fn row_sub(g: &mut QMat, u: &mut IMat, k: usize, j: usize, q: &BigInt) {
    let n = g.len();
    let qr = BigRational::from_integer(q.clone());
    for col in 0..n {
        let v = &g[j][col] * &qr;
        g[k][col] -= v;
    }
    for row in 0..n {
        let v = &g[row][j] * &qr;
        g[row][k] -= v;
    }
    for col in 0..n {
        let v = &u[j][col] * q;
        u[k][col] -= v;
    }
}

/// All `x ≠ 0` with `0 < Q(x) ≤ bound`, one per `±` pair, first nonzero
/// coordinate positive. Results are sorted lexicographically.
pub fn enumerate_up_to(gram: &QMat, bound: &BigRational) -> Vec<Vec<BigInt>> {
    let n = gram.len();
    let mut out = Vec::new();
    if bound.is_negative() {
        return out;
    }
    let (g_red, u) = lll_reduce(gram);
    let (c, mu) = gram_schmidt(&g_red).expect("enumeration needs a positive definite form");
    let mut x = vec![BigInt::zero(); n];
    let mut reduced_pts = Vec::new();
    recurse(&g_red, &c, &mu, bound.clone(), n, &mut x, &mut reduced_pts);
    for xp in reduced_pts {
        // Coordinates over the original basis: x = Σᵢ x'ᵢ·(row i of u).
        let mut orig = vec![BigInt::zero(); n];
        for (xi, urow) in xp.iter().zip(u.iter()) {
            if xi.is_zero() {
                continue;
            }
            for (o, uv) in orig.iter_mut().zip(urow.iter()) {
                *o += xi * uv;
            }
        }
        out.push(orig);
    }
    for v in out.iter_mut() {
        let flip = match v.iter().find(|t| !t.is_zero()) {
            None => false,
            Some(t) => t.is_negative(),
        };
        if flip {
            for t in v.iter_mut() {
                *t = -t.clone();
            }
        }
    }
    out.retain(|v| v.iter().any(|t| !t.is_zero()));
    out.sort();
    out.dedup();
    out
}

/// All `x` with `Q(x) = value` exactly, one per `±` pair (first nonzero
/// coordinate positive).
pub fn enumerate_exact(gram: &QMat, value: &BigRational) -> Vec<Vec<BigInt>> {
    enumerate_up_to(gram, value)
        .into_iter()
        .filter(|x| &quad_value(gram, x) == value)
        .collect()
}

fn recurse(
    gram: &QMat,
    c: &[BigRational],
    mu: &[Vec<BigRational>],
    bound: BigRational,
    level: usize,
    x: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    if level == 0 {
        if !x.iter().all(|v| v.is_zero()) {
            out.push(x.clone());
        }
        return;
    }
    let i = level - 1;
    // Center t = Σ_{j>i} mu[j][i]·x[j]; allowed: c[i]·(x_i + t)² ≤ bound.
    let n = gram.len();
    let mut t = BigRational::zero();
    for j in (i + 1)..n {
        if !x[j].is_zero() {
            t += &mu[j][i] * BigRational::from_integer(x[j].clone());
        }
    }
    let radius = &bound / &c[i];
    let w = floor_sqrt_rational(&radius) + 1u32; // over-approximation
    let lo = (-&t - BigRational::from_integer(w.clone())).ceil().to_integer();
    let hi = (-&t + BigRational::from_integer(w)).floor().to_integer();
    let mut v = lo;
    while v <= hi {
        let shifted = BigRational::from_integer(v.clone()) + &t;
        let used = &c[i] * &shifted * &shifted;
        if used <= bound {
            x[i] = v.clone();
            recurse(gram, c, mu, bound.clone() - used, i, x, out);
            x[i] = BigInt::zero();
        }
        v += 1u32;
    }
}

/// Searches for `U` with `Uᵀ·G₂·U = G₁` (columns of `U` are the images of
/// the `G₁`-basis in the `G₂`-basis). Returns `None` if no isometry exists.
/// With `det G₁ = det G₂` a found `U` is automatically unimodular.
pub fn isometry_int(g1: &IMat, g2: &IMat) -> Option<IMat> {
    let n = g1.len();
    assert_eq!(g2.len(), n);
    if det_int(g1) != det_int(g2) {
        return None;
    }
    let g2r = to_rational(g2);
    // Candidate images per basis vector: the exact-norm shell, both signs.
    let mut shells: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(n);
    for i in 0..n {
        let norm = BigRational::from_integer(g1[i][i].clone());
        let mut shell = Vec::new();
        for v in enumerate_exact(&g2r, &norm) {
            shell.push(v.iter().map(|t| -t).collect());
            shell.push(v);
        }
        if shell.is_empty() {
            return None;
        }
        shells.push(shell);
    }
    let mut chosen: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    if backtrack_isometry(g1, &g2r, &shells, &mut chosen) {
        // chosen[i] is the image of basis vector i; U has them as columns.
        let mut u = vec![vec![BigInt::zero(); n]; n];
        for (i, col) in chosen.iter().enumerate() {
            for r in 0..n {
                u[r][i] = col[r].clone();
            }
        }
        Some(u)
    } else {
        None
    }
}

fn backtrack_isometry(
    g1: &IMat,
    g2r: &QMat,
    shells: &[Vec<Vec<BigInt>>],
    chosen: &mut Vec<Vec<BigInt>>,
) -> bool {
    let i = chosen.len();
    if i == g1.len() {
        return true;
    }
    'cand: for cand in &shells[i] {
        for (j, prev) in chosen.iter().enumerate() {
            let want = BigRational::from_integer(g1[i][j].clone());
            if bilinear_value(g2r, cand, prev) != want {
                continue 'cand;
            }
        }
        chosen.push(cand.clone());
        if backtrack_isometry(g1, g2r, shells, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Convenience: are two integral positive definite Gram matrices isometric?
pub fn are_isometric(g1: &IMat, g2: &IMat) -> bool {
    isometry_int(g1, g2).is_some()
}
