//! Exact linear algebra over `Z` and `Q` for the small dense matrices used
//! throughout (rank ≤ 8).
//!
//! Provides determinants and adjugates by cofactor expansion (fast and
//! allocation-light at these sizes), exact Gauss–Jordan inversion over `Q`,
//! and a row-style Hermite normal form with unimodular transform. The HNF is
//! the canonical one: pivots positive, entries above each pivot reduced into
//! `[0, pivot)`, pivot columns strictly increasing. The left kernel of an
//! integer matrix and the completion of a primitive `k×n` row block to a
//! unimodular `n×n` matrix are both derived from the HNF transform, so they
//! are automatically saturated/exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;
pub type QMat = Vec<Vec<BigRational>>;

pub fn imat_from_i64(rows: &[&[i64]]) -> IMat {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

pub fn identity_int(n: usize) -> IMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose_int(a: &IMat) -> IMat {
    let rows = a.len();
    let cols = a[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].clone()).collect())
        .collect()
}

pub fn mat_mul_int(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    assert_eq!(a[0].len(), k, "dimension mismatch in matrix product");
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec_int(a: &IMat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Determinant by cofactor expansion; intended for `n ≤ 6`.
pub fn det_int(a: &IMat) -> BigInt {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n));
    match n {
        1 => a[0][0].clone(),
        2 => &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0],
        _ => {
            let mut det = BigInt::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: IMat = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| a[i][c].clone())
                            .collect()
                    })
                    .collect();
                let term = &a[0][j] * det_int(&minor);
                if j % 2 == 0 {
                    det += term;
                } else {
                    det -= term;
                }
            }
            det
        }
    }
}

/// Adjugate matrix: `A·adj(A) = det(A)·I`.
pub fn adjugate_int(a: &IMat) -> IMat {
    let n = a.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: IMat = (0..n)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| a[r][c].clone())
                        .collect()
                })
                .collect();
            let cof = det_int(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

pub fn to_rational(a: &IMat) -> QMat {
    a.iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect()
}

/// Converts back to integers, or `None` if any entry has a denominator.
pub fn rat_to_int(a: &QMat) -> Option<IMat> {
    a.iter()
        .map(|r| {
            r.iter()
                .map(|v| v.is_integer().then(|| v.to_integer()))
                .collect()
        })
        .collect()
}

pub fn transpose_rat(a: &QMat) -> QMat {
    let rows = a.len();
    let cols = a[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].clone()).collect())
        .collect()
}

pub fn mat_mul_rat(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    assert_eq!(a[0].len(), k, "dimension mismatch in matrix product");
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

pub fn det_rat(a: &QMat) -> BigRational {
    let n = a.len();
    match n {
        1 => a[0][0].clone(),
        2 => &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0],
        _ => {
            let mut det = BigRational::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: QMat = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| a[i][c].clone())
                            .collect()
                    })
                    .collect();
                let term = &a[0][j] * det_rat(&minor);
                if j % 2 == 0 {
                    det += term;
                } else {
                    det -= term;
                }
            }
            det
        }
    }
}

/// Exact Gauss–Jordan inverse; `None` for singular input.
pub fn inverse_rat(a: &QMat) -> Option<QMat> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n));
    let mut work = a.clone();
    let mut inv = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot);
        inv.swap(col, pivot);
        let p = work[col][col].clone();
        for j in 0..n {
            work[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !work[r][col].is_zero() {
                let f = work[r][col].clone();
                for j in 0..n {
                    let w = &work[col][j] * &f;
                    work[r][j] -= w;
                    let v = &inv[col][j] * &f;
                    inv[r][j] -= v;
                }
            }
        }
    }
    Some(inv)
}

/// Row-style Hermite normal form with transform: returns `(H, U)` with `U`
/// unimodular, `U·A = H`, `H` canonical (zero rows at the bottom).
pub fn hnf_with_transform(a: &IMat) -> (IMat, IMat) {
    let m = a.len();
    let n = a[0].len();
    let mut h = a.clone();
    let mut u = identity_int(m);
    let mut r = 0usize;
    for col in 0..n {
        if r >= m {
            break;
        }
        // Euclidean elimination below row r in this column.
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !h[i][col].is_zero()
                    && best.map_or(true, |b| h[i][col].abs() < h[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap(r, b);
            u.swap(r, b);
            let mut clean = true;
            for i in (r + 1)..m {
                if !h[i][col].is_zero() {
                    let q = h[i][col].div_floor(&h[r][col]);
                    for j in 0..n {
                        let s = &h[r][j] * &q;
                        h[i][j] -= s;
                    }
                    for j in 0..m {
                        let s = &u[r][j] * &q;
                        u[i][j] -= s;
                    }
                    if !h[i][col].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            for j in 0..n {
                h[r][j] = -h[r][j].clone();
            }
            for j in 0..m {
                u[r][j] = -u[r][j].clone();
            }
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..r {
            if !h[i][col].is_zero() {
                let q = h[i][col].div_floor(&h[r][col]);
                if !q.is_zero() {
                    for j in 0..n {
                        let s = &h[r][j] * &q;
                        h[i][j] -= s;
                    }
                    for j in 0..m {
                        let s = &u[r][j] * &q;
                        u[i][j] -= s;
                    }
                }
            }
        }
        r += 1;
    }
    (h, u)
}

/// Canonical HNF basis of the row span, zero rows dropped.
pub fn hnf_rows(a: &IMat) -> IMat {
    hnf_with_transform(a)
        .0
        .into_iter()
        .filter(|row| row.iter().any(|v| !v.is_zero()))
        .collect()
}

/// Saturated basis of `{x : x·A = 0}` as rows (may be empty).
pub fn left_kernel(a: &IMat) -> IMat {
    let (h, u) = hnf_with_transform(a);
    h.iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|v| v.is_zero()))
        .map(|(_, ur)| ur)
        .collect()
}

/// Exact inverse of a unimodular integer matrix (`det = ±1`).
pub fn inverse_unimodular(a: &IMat) -> IMat {
    let d = det_int(a);
    assert!(
        d.clone().abs().is_one(),
        "inverse_unimodular needs det ±1, got {d}"
    );
    let adj = adjugate_int(a);
    adj.into_iter()
        .map(|row| row.into_iter().map(|v| v * &d).collect())
        .collect()
}

/// Completes a primitive `k×n` block of rows to a unimodular `n×n` matrix
/// whose first `k` rows are the given ones; `None` if the rows do not span a
/// saturated (primitive) sublattice.
pub fn complete_to_unimodular(rows: &IMat) -> Option<IMat> {
    let k = rows.len();
    let n = rows[0].len();
    assert!(k <= n);
    let t = transpose_int(rows);
    let (h, u) = hnf_with_transform(&t);
    // Primitivity ⟺ the nonzero block of the HNF of the transpose is I_k.
    for (i, row) in h.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expect_one = i < k && i == j;
            if expect_one && !v.is_one() {
                return None;
            }
            if !expect_one && !v.is_zero() {
                return None;
            }
        }
    }
    let w = inverse_unimodular(&transpose_int(&u));
    debug_assert_eq!(&w[..k], &rows[..], "completion must start with the input rows");
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_adjugate() {
        let a = imat_from_i64(&[&[2, 1, 0], &[0, 3, 1], &[1, 0, 1]]);
        let d = det_int(&a);
        assert_eq!(d, BigInt::from(7)); // 2(3·1−0) −1(0−1) = 6+1
        let adj = adjugate_int(&a);
        let prod = mat_mul_int(&a, &adj);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d.clone() } else { BigInt::zero() };
                assert_eq!(prod[i][j], want);
            }
        }
    }

    #[test]
    fn rational_inverse_round_trips() {
        let a = to_rational(&imat_from_i64(&[
            &[1, 2, 0],
            &[0, 1, 5],
            &[2, 0, 1],
        ]));
        let inv = inverse_rat(&a).unwrap();
        let prod = mat_mul_rat(&a, &inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                assert_eq!(prod[i][j], want);
            }
        }
        assert!(inverse_rat(&to_rational(&imat_from_i64(&[
            &[1, 2],
            &[2, 4],
        ])))
        .is_none());
    }

    #[test]
    fn hnf_canonical_form() {
        // Span of (2,4) and (1,1): HNF is [[1,1],[0,2]] (pivot 1, then the
        // second row 2·(0,1); above-pivot entry 1 already lies in [0,2)).
        let h = hnf_rows(&imat_from_i64(&[&[2, 4], &[1, 1]]));
        assert_eq!(h, imat_from_i64(&[&[1, 1], &[0, 2]]));
        // Transform check: U·A = H with |det U| = 1.
        let a = imat_from_i64(&[&[6, 4, 2], &[2, 8, 4], &[0, 0, 0]]);
        let (h, u) = hnf_with_transform(&a);
        assert_eq!(mat_mul_int(&u, &a), h);
        assert!(det_int(&u).abs().is_one());
    }

    #[test]
    fn hnf_is_basis_invariant() {
        // Two generating sets of the same lattice give the same HNF.
        let g1 = imat_from_i64(&[&[3, 1, 2], &[1, 5, 9], &[4, 6, 11]]);
        let g2 = imat_from_i64(&[
            &[4, 6, 11],
            &[3, 1, 2],
            &[7, 7, 13],
            &[1, 5, 9],
        ]);
        assert_eq!(hnf_rows(&g1), hnf_rows(&g2));
    }

    #[test]
    fn left_kernel_saturated() {
        let a = imat_from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 1);
        let row = &k[0];
        // x·A = 0 means x = ±(2,−1) up to sign; kernel must be saturated.
        let prod = mat_mul_int(&vec![row.clone()], &a);
        assert!(prod[0].iter().all(|v| v.is_zero()));
        assert!(row[0].clone().abs() == BigInt::from(2) && row[1].clone().abs().is_one());
    }

    #[test]
    fn unimodular_completion() {
        let rows = imat_from_i64(&[&[2, 3, 0, 1], &[1, 1, 1, 0]]);
        let w = complete_to_unimodular(&rows).expect("rows are primitive");
        assert_eq!(&w[..2], &rows[..]);
        assert!(det_int(&w).abs().is_one());
        // A non-primitive block (doubled row) must be rejected.
        assert!(complete_to_unimodular(&imat_from_i64(&[&[2, 4, 6, 0]])).is_none());
    }

    #[test]
    fn inverse_unimodular_exact() {
        let a = imat_from_i64(&[&[1, 2, 0], &[0, 1, 3], &[0, 0, -1]]);
        let inv = inverse_unimodular(&a);
        assert_eq!(mat_mul_int(&a, &inv), identity_int(3));
    }
}
