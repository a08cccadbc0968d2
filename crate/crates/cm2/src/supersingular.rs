//! Rank-5 endomorphism lattice at a supersingular prime.
//!
//! When the elliptic factor of the polarized square acquires quaternionic
//! endomorphisms, the trace-adjusted symmetric-endomorphism lattice grows
//! from rank 3 to rank 5: the rank-3 lattice maps in through the chosen ring
//! embedding, and two further vectors come from the completing pair of the
//! quaternion order basis.  A decomposition of the reduced surface into a
//! product of elliptic curves corresponds to a vector of quarter-norm 1 in
//! the rank-5 lattice, and the local multiplicity analysis consumes the Gram
//! matrix of its orthogonal complement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::gross::{gross_lattice, GrossLattice, KMat};
use crate::lattice::{enumerate_exact, is_positive_definite_int};
use crate::linalg::{det_int, to_rational, IMat};
use crate::order::{CmOrder, QuadElem};
use crate::polarization::HermitianForm;
use crate::quaternion::{OptimalEmbedding, QuatAlgebra, QuatElem};
use crate::Result;

/// A 2×2 matrix with quaternion entries.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatMat {
    pub e: [[QuatElem; 2]; 2],
}

impl QuatMat {
    pub fn zero() -> Self {
        QuatMat {
            e: [
                [QuatElem::zero(), QuatElem::zero()],
                [QuatElem::zero(), QuatElem::zero()],
            ],
        }
    }

    pub fn identity() -> Self {
        let mut m = QuatMat::zero();
        m.e[0][0] = QuatElem::one();
        m.e[1][1] = QuatElem::one();
        m
    }

    /// Anti-diagonal matrix `[[0, r], [r̄, 0]]`.
    pub fn antidiag(r: &QuatElem) -> Self {
        let mut m = QuatMat::zero();
        m.e[0][1] = r.clone();
        m.e[1][0] = r.conj();
        m
    }

    pub fn add(&self, other: &QuatMat) -> QuatMat {
        let mut m = QuatMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][j].add(&other.e[i][j]);
            }
        }
        m
    }

    pub fn sub(&self, other: &QuatMat) -> QuatMat {
        let mut m = QuatMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][j].sub(&other.e[i][j]);
            }
        }
        m
    }

    pub fn scale(&self, k: &BigRational) -> QuatMat {
        let mut m = QuatMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][j].scale(k);
            }
        }
        m
    }

    pub fn scale_i64(&self, k: i64) -> QuatMat {
        let mut m = QuatMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][j].scale_i64(k);
            }
        }
        m
    }

    pub fn mul(&self, other: &QuatMat, alg: &QuatAlgebra) -> QuatMat {
        let mut m = QuatMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = QuatElem::zero();
                for (k, row) in other.e.iter().enumerate() {
                    s = s.add(&alg.mul(&self.e[i][k], &row[j]));
                }
                m.e[i][j] = s;
            }
        }
        m
    }

    /// Matrix trace, a quaternion.
    pub fn mat_trace(&self) -> QuatElem {
        self.e[0][0].add(&self.e[1][1])
    }

    /// Total trace on the rank-4 module: reduced trace of the matrix trace.
    pub fn total_trace(&self) -> BigRational {
        self.mat_trace().trd()
    }

    /// Conjugate-transpose: entrywise quaternion conjugation then transpose.
    pub fn conj_transpose(&self) -> QuatMat {
        let mut m = QuatMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[j][i].conj();
            }
        }
        m
    }
}

/// Image of `x + yω` under the ring embedding sending `ω` to `w`.
pub fn embed_quad(v: &QuadElem, w: &QuatElem) -> QuatElem {
    QuatElem::one().scale(&v.x).add(&w.scale(&v.y))
}

/// Entrywise application of [`embed_quad`] to a matrix over the quadratic field.
pub fn embed_kmat(m: &KMat, w: &QuatElem) -> QuatMat {
    let mut out = QuatMat::zero();
    for i in 0..2 {
        for j in 0..2 {
            out.e[i][j] = embed_quad(&m.e[i][j], w);
        }
    }
    out
}

/// Trace adjustment `α ↦ 2α − ½·Tr(α)·1` with `Tr` the total trace.
pub fn tau_quat(m: &QuatMat) -> QuatMat {
    let half_trace = m.total_trace() / BigRational::from_integer(BigInt::from(2));
    m.scale_i64(2).sub(&QuatMat::identity().scale(&half_trace))
}

/// Quarter-norm pairing `b(x, y) = trd(tr(x·y))/4` on trace-adjusted matrices.
pub fn quarter_pairing(alg: &QuatAlgebra, x: &QuatMat, y: &QuatMat) -> BigRational {
    x.mul(y, alg).total_trace() / BigRational::from_integer(BigInt::from(4))
}

/// The rank-5 trace-adjusted lattice of the reduced polarized surface.
#[derive(Debug, Clone)]
pub struct SupersingularLattice {
    pub algebra: QuatAlgebra,
    /// `ℓ₁..ℓ₅`: the mapped rank-3 basis followed by the two completing vectors.
    pub basis: [QuatMat; 5],
    /// 5×5 Gram matrix of the quarter norm, integral and positive definite.
    pub gram: IMat,
}

/// Assembles the rank-5 lattice from a mapped rank-3 basis, the inverse
/// polarization matrix, and the completing pair `(r₁, r₂)`:
/// `ℓ₄ = τ(P⁻¹·[[0,r₁],[r̄₁,0]])` and `ℓ₅ = τ(P⁻¹·[[0,r₂],[r̄₂,0]])`.
pub fn lbar_from_parts(
    alg: &QuatAlgebra,
    l123: [QuatMat; 3],
    p_inv: &QuatMat,
    r1: &QuatElem,
    r2: &QuatElem,
) -> Result<SupersingularLattice> {
    let l4 = tau_quat(&p_inv.mul(&QuatMat::antidiag(r1), alg));
    let l5 = tau_quat(&p_inv.mul(&QuatMat::antidiag(r2), alg));
    let [l1, l2, l3] = l123;
    let basis = [l1, l2, l3, l4, l5];
    let mut gram = vec![vec![BigInt::zero(); 5]; 5];
    for i in 0..5 {
        for j in i..5 {
            let v = quarter_pairing(alg, &basis[i], &basis[j]);
            if !v.is_integer() {
                return Err(Error::NonIntegralGram(format!(
                    "pairing of basis vectors {} and {} is {v}",
                    i + 1,
                    j + 1
                )));
            }
            gram[i][j] = v.to_integer();
            gram[j][i] = gram[i][j].clone();
        }
    }
    assert!(
        is_positive_definite_int(&gram),
        "rank-5 Gram matrix must be positive definite"
    );
    Ok(SupersingularLattice {
        algebra: *alg,
        basis,
        gram,
    })
}

/// Builds the rank-5 lattice attached to a polarization and an optimal
/// embedding of the quadratic order into a quaternion maximal order.
pub fn build_lbar(
    order: &CmOrder,
    pol: &HermitianForm,
    emb: &OptimalEmbedding,
) -> Result<SupersingularLattice> {
    let gl = gross_lattice(order, pol);
    let alg = emb.order.alg;
    let w = &emb.omega_image;
    let l123 = [
        embed_kmat(&gl.basis[0], w),
        embed_kmat(&gl.basis[1], w),
        embed_kmat(&gl.basis[2], w),
    ];
    let b = pol.b();
    let bbar = b.conj(order);
    let mut p_inv = QuatMat::zero();
    p_inv.e[0][0] = QuatElem::from_i64(pol.c, 0, 0, 0);
    p_inv.e[0][1] = embed_quad(&b, w).neg();
    p_inv.e[1][0] = embed_quad(&bbar, w).neg();
    p_inv.e[1][1] = QuatElem::from_i64(pol.a, 0, 0, 0);
    let lbar = lbar_from_parts(&alg, l123, &p_inv, &emb.completion.0, &emb.completion.1)?;
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(
                lbar.gram[i][j], gl.gram[i][j],
                "quaternion pairing must agree with the quadratic-field pairing on the rank-3 block"
            );
        }
    }
    if alg.p % 2 != 0 {
        assert!(
            scaled_minors_vanish(&lbar.gram, alg.p),
            "4·Gram must have rank ≤ 3 modulo p"
        );
    }
    Ok(lbar)
}

/// Every 4×4 minor of `4·gram` vanishes modulo `p`.
fn scaled_minors_vanish(gram: &IMat, p: i64) -> bool {
    let p = BigInt::from(p);
    let scaled: IMat = gram
        .iter()
        .map(|row| row.iter().map(|x| x * BigInt::from(4)).collect())
        .collect();
    for skip_row in 0..5 {
        for skip_col in 0..5 {
            let sub: IMat = (0..5)
                .filter(|&i| i != skip_row)
                .map(|i| {
                    (0..5)
                        .filter(|&j| j != skip_col)
                        .map(|j| scaled[i][j].clone())
                        .collect()
                })
                .collect();
            if !(det_int(&sub) % &p).is_zero() {
                return false;
            }
        }
    }
    true
}

fn fmt_coords(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Searches the lattice for a vector of quarter-norm 1.  Returns the
/// representative with the lexicographically larger coordinate tuple among
/// `±ℓ₀`; `None` when the norm is not represented.  Two non-proportional
/// norm-1 vectors would contradict the uniqueness of the product splitting
/// and surface as `UniquenessViolated`.
pub fn find_norm_one(lbar: &SupersingularLattice) -> Result<Option<Vec<BigInt>>> {
    let gram_q = to_rational(&lbar.gram);
    let hits = enumerate_exact(&gram_q, &BigRational::one());
    match hits.len() {
        0 => Ok(None),
        1 => {
            let v = &hits[0];
            let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
            Ok(Some(if *v >= neg { v.clone() } else { neg }))
        }
        _ => Err(Error::UniquenessViolated(
            fmt_coords(&hits[0]),
            fmt_coords(&hits[1]),
        )),
    }
}

/// Pairings `b(ℓᵢ, ℓ₀)` of the first three basis vectors against the vector
/// with the given coordinates.
pub fn cross_vector(lbar: &SupersingularLattice, coords: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(coords.len(), 5);
    (0..3)
        .map(|i| (0..5).map(|j| &lbar.gram[i][j] * &coords[j]).sum())
        .collect()
}

/// Quarter-norm of the vector with the given coordinates.
pub fn coords_norm(lbar: &SupersingularLattice, coords: &[BigInt]) -> BigInt {
    let mut total = BigInt::zero();
    for (i, ci) in coords.iter().enumerate() {
        for (j, cj) in coords.iter().enumerate() {
            total += ci * cj * &lbar.gram[i][j];
        }
    }
    total
}

/// Gram matrix of the orthogonal complement of a norm-1 vector `ℓ₀` inside
/// `⟨ℓ₁, ℓ₂, ℓ₃, ℓ₀⟩`, on the basis `ℓᵢ − b(ℓᵢ, ℓ₀)·ℓ₀`:
/// entries `b(ℓᵢ, ℓⱼ) − b(ℓᵢ, ℓ₀)·b(ℓⱼ, ℓ₀)`.
pub fn perp_gram(l: &GrossLattice, cross: &[BigInt]) -> IMat {
    assert_eq!(cross.len(), 3);
    let mut out = vec![vec![BigInt::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = &l.gram[i][j] - &cross[i] * &cross[j];
        }
    }
    out
}

/// 4×4 Gram matrix of `⟨ℓ₁, ℓ₂, ℓ₃, ℓ₀⟩` for the quarter norm.
pub fn extension_gram(lbar: &SupersingularLattice, coords: &[BigInt]) -> IMat {
    let cross = cross_vector(lbar, coords);
    let mut t = vec![vec![BigInt::zero(); 4]; 4];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = lbar.gram[i][j].clone();
        }
        t[i][3] = cross[i].clone();
        t[3][i] = cross[i].clone();
    }
    t[3][3] = coords_norm(lbar, coords);
    t
}

/// A found norm-1 vector with its pairing data and complement Gram matrix.
#[derive(Debug, Clone)]
pub struct NormOneData {
    pub coords: Vec<BigInt>,
    pub cross: Vec<BigInt>,
    pub perp: IMat,
}

/// Runs the norm-1 search and, on success, packages the pairings with the
/// rank-3 block and the complement Gram matrix (taken with respect to the
/// upper-left block of the rank-5 Gram).
pub fn norm_one_data(lbar: &SupersingularLattice) -> Result<Option<NormOneData>> {
    let Some(coords) = find_norm_one(lbar)? else {
        return Ok(None);
    };
    let cross = cross_vector(lbar, &coords);
    let mut perp = vec![vec![BigInt::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            perp[i][j] = &lbar.gram[i][j] - &cross[i] * &cross[j];
        }
    }
    Ok(Some(NormOneData {
        coords,
        cross,
        perp,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::imat_from_i64;
    use crate::quaternion::{build_algebra, optimal_embeddings};

    fn order163() -> CmOrder {
        CmOrder::new(163).unwrap()
    }

    fn pol163(order: &CmOrder) -> HermitianForm {
        HermitianForm::new(order, 6, 7, 0, 1).unwrap()
    }

    /// Published quaternionic data for d = 163 at p = 17 over the algebra
    /// with i² = −3, j² = −17.
    fn published_163_17() -> (QuatAlgebra, QuatElem, QuatElem, QuatElem) {
        let alg = build_algebra(17);
        assert_eq!((alg.i_sq, alg.j_sq), (-3, -17));
        let w = QuatElem::from_fracs([(1, 2), (-4, 3), (-5, 4), (5, 12)]);
        let r1 = QuatElem::from_fracs([(-1, 2), (1, 2), (1, 2), (-1, 2)]);
        let r2 = QuatElem::from_fracs([(-1, 2), (2, 3), (3, 4), (5, 12)]);
        (alg, w, r1, r2)
    }

    /// Published rank-3 basis of the trace-adjusted lattice for d = 163,
    /// P = [6, 7, ω], as matrices over the quadratic field.
    fn published_163_l123() -> [KMat; 3] {
        [
            KMat::from_int_coords([[1, 0], [0, -2], [-2, 2], [-1, 0]]),
            KMat::from_int_coords([[5, 0], [0, 4], [2, -2], [-5, 0]]),
            KMat::from_int_coords([[3, -2], [14, -4], [8, 4], [-3, 2]]),
        ]
    }

    fn published_163_lbar() -> SupersingularLattice {
        let (alg, w, r1, r2) = published_163_17();
        let l123k = published_163_l123();
        let l123 = [
            embed_kmat(&l123k[0], &w),
            embed_kmat(&l123k[1], &w),
            embed_kmat(&l123k[2], &w),
        ];
        // P = [6, 7, ω] has inverse [[7, −ω], [−ω̄, 6]] with ω̄ = 1 − ω.
        let mut p_inv = QuatMat::zero();
        p_inv.e[0][0] = QuatElem::from_i64(7, 0, 0, 0);
        p_inv.e[0][1] = w.neg();
        p_inv.e[1][0] = w.sub(&QuatElem::one());
        p_inv.e[1][1] = QuatElem::from_i64(6, 0, 0, 0);
        lbar_from_parts(&alg, l123, &p_inv, &r1, &r2).unwrap()
    }

    fn combo(parts: [(i64, &QuatElem); 4]) -> QuatElem {
        let mut s = QuatElem::zero();
        for (k, v) in parts {
            s = s.add(&v.scale_i64(k));
        }
        s
    }

    #[test]
    fn pinned_rank5_gram_for_d163_at_17() {
        let lbar = published_163_lbar();
        // Gram of the basis (ℓ₁, ℓ₂, ℓ₃, ℓ₄, ℓ₅) exactly as constructed from
        // the published completing vectors.
        let direct = imat_from_i64(&[
            &[165, -241, 317, 611, 260],
            &[-241, 353, -463, -893, -380],
            &[317, -463, 613, 1173, 498],
            &[611, -893, 1173, 2281, 928],
            &[260, -380, 498, 928, 480],
        ]);
        assert_eq!(lbar.gram, direct);
        // The published 5×5 Gram corresponds to the same lattice after the
        // unimodular substitution ℓ₄ ↦ 2ℓ₁ − ℓ₃ − ℓ₄, ℓ₅ ↦ 2ℓ₁ − ℓ₃ − ℓ₅.
        let t = imat_from_i64(&[
            &[1, 0, 0, 2, 2],
            &[0, 1, 0, 0, 0],
            &[0, 0, 1, -1, -1],
            &[0, 0, 0, -1, 0],
            &[0, 0, 0, 0, -1],
        ]);
        let published = imat_from_i64(&[
            &[165, -241, 317, -598, -247],
            &[-241, 353, -463, 874, 361],
            &[317, -463, 613, -1152, -477],
            &[-598, 874, -1152, 2188, 862],
            &[-247, 361, -477, 862, 441],
        ]);
        let tt = crate::linalg::transpose_int(&t);
        let changed = crate::linalg::mat_mul_int(&tt, &crate::linalg::mat_mul_int(&lbar.gram, &t));
        assert_eq!(changed, published);
        // Either way the discriminant is 16·p².
        assert_eq!(det_int(&lbar.gram), BigInt::from(16 * 17 * 17));
    }

    #[test]
    fn pinned_norm_one_vector_for_d163_at_17() {
        let lbar = published_163_lbar();
        let data = norm_one_data(&lbar).unwrap().unwrap();
        let expect: Vec<BigInt> = [8, -2, -1, -2, -1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(data.coords, expect);
        let cross: Vec<BigInt> = [3, -5, 5].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(data.cross, cross);
        let perp = imat_from_i64(&[
            &[156, -226, 302],
            &[-226, 328, -438],
            &[302, -438, 588],
        ]);
        assert_eq!(data.perp, perp);
        // Complement of a unimodular line: same determinant as the rank-4
        // extension Gram, which in turn is one of the sieve candidates.
        let ext = extension_gram(&lbar, &data.coords);
        assert_eq!(det_int(&ext), det_int(&data.perp));
        assert_eq!(ext[3][3], BigInt::one());
    }

    #[test]
    fn production_path_matches_published_perp_for_d163_at_17() {
        let order = order163();
        let pol = pol163(&order);
        let published = imat_from_i64(&[
            &[156, -226, 302],
            &[-226, 328, -438],
            &[302, -438, 588],
        ]);
        let embs = optimal_embeddings(&order, 17).unwrap();
        assert_eq!(embs.len(), 2);
        for emb in &embs {
            let lbar = build_lbar(&order, &pol, emb).unwrap();
            let data = norm_one_data(&lbar).unwrap().unwrap();
            assert!(crate::lattice::are_isometric(&data.perp, &published));
        }
    }

    #[test]
    fn norm_one_data_for_d55_at_5() {
        let order = CmOrder::new(55).unwrap();
        let pol = HermitianForm::new(&order, 3, 5, 0, 1).unwrap();
        let embs = optimal_embeddings(&order, 5).unwrap();
        assert_eq!(embs.len(), 4);
        let perp = imat_from_i64(&[&[104, 96, 284], &[96, 92, 262], &[284, 262, 776]]);
        assert_eq!(det_int(&perp), BigInt::from(160));
        for emb in &embs {
            assert!(emb.two_sided_principal);
            let lbar = build_lbar(&order, &pol, emb).unwrap();
            let data = norm_one_data(&lbar).unwrap().unwrap();
            assert_eq!(data.perp, perp);
        }
    }

    #[test]
    fn pinned_completing_vectors_for_d163_at_17() {
        let (_, w, r1, r2) = published_163_17();
        let one = QuatElem::one();
        let lbar = published_163_lbar();
        let l4 = &lbar.basis[3];
        assert_eq!(
            l4.e[0][0],
            combo([(-69, &one), (-116, &w), (-168, &r1), (-86, &r2)])
        );
        assert_eq!(l4.e[0][1], r1.scale_i64(14));
        assert_eq!(l4.e[1][0], combo([(-12, &one), (-12, &r1), (0, &w), (0, &r2)]));
        assert_eq!(
            l4.e[1][1],
            combo([(-69, &one), (-118, &w), (-170, &r1), (-86, &r2)])
        );
        let l5 = &lbar.basis[4];
        assert_eq!(
            l5.e[0][0],
            combo([(136, &one), (232, &w), (334, &r1), (170, &r2)])
        );
        assert_eq!(l5.e[0][1], r2.scale_i64(14));
        assert_eq!(l5.e[1][0], combo([(-12, &one), (-12, &r2), (0, &w), (0, &r1)]));
        assert_eq!(
            l5.e[1][1],
            combo([(136, &one), (230, &w), (334, &r1), (168, &r2)])
        );
    }

    #[test]
    fn no_norm_one_vector_for_d79_second_polarization() {
        let order = CmOrder::new(79).unwrap();
        let pol = HermitianForm::new(&order, 5, 16, -1, 2).unwrap();
        let embs = optimal_embeddings(&order, 7).unwrap();
        assert_eq!(embs.len(), 10);
        for emb in &embs {
            let lbar = build_lbar(&order, &pol, emb).unwrap();
            assert_eq!(find_norm_one(&lbar).unwrap(), None);
        }
    }

    #[test]
    fn norm_one_counts_for_d79_polarizations() {
        let order = CmOrder::new(79).unwrap();
        let pols = [
            HermitianForm::new(&order, 3, 7, 0, 1).unwrap(),
            HermitianForm::new(&order, 5, 16, -1, 2).unwrap(),
            HermitianForm::new(&order, 8, 12, 3, 2).unwrap(),
        ];
        let embs = optimal_embeddings(&order, 7).unwrap();
        let counts: Vec<usize> = pols
            .iter()
            .map(|pol| {
                embs.iter()
                    .filter(|emb| {
                        let lbar = build_lbar(&order, pol, emb).unwrap();
                        find_norm_one(&lbar).unwrap().is_some()
                    })
                    .count()
            })
            .collect();
        assert_eq!(counts, vec![6, 0, 4]);
    }

    #[test]
    fn perp_gram_with_zero_cross_is_rank3_gram() {
        let order = order163();
        let pol = pol163(&order);
        let gl = gross_lattice(&order, &pol);
        let zero = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        assert_eq!(perp_gram(&gl, &zero), gl.gram);
    }

    #[test]
    fn gram_minimum_above_one_means_no_norm_one_vector() {
        let lbar = SupersingularLattice {
            algebra: build_algebra(17),
            basis: [
                QuatMat::zero(),
                QuatMat::zero(),
                QuatMat::zero(),
                QuatMat::zero(),
                QuatMat::zero(),
            ],
            gram: imat_from_i64(&[
                &[2, 0, 0, 0, 0],
                &[0, 2, 0, 0, 0],
                &[0, 0, 2, 0, 0],
                &[0, 0, 0, 2, 0],
                &[0, 0, 0, 0, 2],
            ]),
        };
        assert_eq!(find_norm_one(&lbar).unwrap(), None);
    }

    #[test]
    fn built_lattices_satisfy_block_and_rank_invariants() {
        // The constructor asserts the rank-3 block equality and the mod-p
        // rank drop; exercise it across inert odd, ramified odd, and p = 2.
        for (d, a, c, b1, b2, p) in [
            (163i64, 6i64, 7i64, 0i64, 1i64, 17i64),
            (55, 3, 5, 0, 1, 5),
            (83, 2, 11, 0, 1, 2),
        ] {
            let order = CmOrder::new(d).unwrap();
            let pol = HermitianForm::new(&order, a, c, b1, b2).unwrap();
            for emb in &optimal_embeddings(&order, p).unwrap() {
                let lbar = build_lbar(&order, &pol, emb).unwrap();
                assert!(is_positive_definite_int(&lbar.gram));
            }
        }
    }
}
