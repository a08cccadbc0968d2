//! Rank-3 lattices of symmetric endomorphisms attached to a polarization.
//!
//! For `P` a determinant-1 hermitian form on `O²`, the endomorphisms of the
//! abelian surface fixed by the Rosati involution form a rank-4 lattice
//! `S = P⁻¹·{hermitian O-matrices}` with Z-basis `sᵢ = P⁻¹eᵢ`, where
//! `e₁ = diag(1,0)`, `e₂ = diag(0,1)`, `e₃ = [[0,1],[1,0]]`,
//! `e₄ = [[0,ω],[ω̄,0]]`. Two quadratic lattices derived from `S` drive
//! everything downstream:
//!
//! * the **norm lattice** `L = τ(S)` where `τ(M) = 2M − tr(M)·Id`, rank 3
//!   (the kernel of `τ` on `S` is `Z·Id`), with quadratic form
//!   `q(β) = −det(β)`, positive definite of determinant `4d`;
//! * the **trace-zero lattice** `L₀ = {M ∈ S : tr M = 0}`, the saturation
//!   of `L`, whose Gram matrix under the same form is rational (entries in
//!   `¼Z`) and has determinant `4d / [L₀:L]²`.
//!
//! The polarization is indecomposable precisely when `q` does not represent
//! 1 on `L`. Since trace-zero 2×2 matrices square to scalars, Cayley–
//! Hamilton gives `β² = q(β)·Id`, a consistency check the tests exercise.
//!
//! Bases are canonicalized by flattening matrices to 8 integer coordinates
//! (row-major over the entries, `(1, ω)`-coefficients within an entry) and
//! taking the Hermite normal form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::linalg::{det_rat, hnf_rows, left_kernel, IMat, QMat};
use crate::order::{CmOrder, QuadElem};
use crate::polarization::HermitianForm;

/// A 2×2 matrix over `K = Q(ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KMat {
    pub e: [[QuadElem; 2]; 2],
}

impl KMat {
    pub fn zero() -> Self {
        KMat {
            e: [
                [QuadElem::zero(), QuadElem::zero()],
                [QuadElem::zero(), QuadElem::zero()],
            ],
        }
    }

    pub fn identity() -> Self {
        let mut m = KMat::zero();
        m.e[0][0] = QuadElem::one();
        m.e[1][1] = QuadElem::one();
        m
    }

    /// Entries from integer `(1, ω)` coordinates, row-major.
    pub fn from_int_coords(c: [[i64; 2]; 4]) -> Self {
        let q = |p: [i64; 2]| QuadElem::from_ints(p[0], p[1]);
        KMat {
            e: [[q(c[0]), q(c[1])], [q(c[2]), q(c[3])]],
        }
    }

    pub fn add(&self, other: &KMat) -> KMat {
        let mut m = KMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][j].add(&other.e[i][j]);
            }
        }
        m
    }

    pub fn sub(&self, other: &KMat) -> KMat {
        let mut m = KMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][j].sub(&other.e[i][j]);
            }
        }
        m
    }

    pub fn neg(&self) -> KMat {
        KMat::zero().sub(self)
    }

    /// Scalar multiplication by an element of `K`.
    pub fn scale_q(&self, k: &QuadElem, order: &CmOrder) -> KMat {
        let mut m = KMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][j].mul(k, order);
            }
        }
        m
    }

    pub fn scale_int(&self, k: i64) -> KMat {
        let mut m = KMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[i][j].scale_int(k);
            }
        }
        m
    }

    pub fn mul(&self, other: &KMat, order: &CmOrder) -> KMat {
        let mut m = KMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = QuadElem::zero();
                for k in 0..2 {
                    acc = acc.add(&self.e[i][k].mul(&other.e[k][j], order));
                }
                m.e[i][j] = acc;
            }
        }
        m
    }

    /// Matrix trace (an element of `K`).
    pub fn tr(&self) -> QuadElem {
        self.e[0][0].add(&self.e[1][1])
    }

    pub fn det(&self, order: &CmOrder) -> QuadElem {
        self.e[0][0]
            .mul(&self.e[1][1], order)
            .sub(&self.e[0][1].mul(&self.e[1][0], order))
    }

    /// Conjugate transpose `M*`.
    pub fn conj_transpose(&self, order: &CmOrder) -> KMat {
        let mut m = KMat::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[j][i].conj(order);
            }
        }
        m
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().flatten().all(|q| q.is_integral())
    }

    /// Row-major 8-coordinate flattening ((1, ω) coefficients per entry);
    /// requires integral entries.
    pub fn flatten(&self) -> Vec<BigInt> {
        assert!(self.is_integral(), "flatten requires integral entries");
        let mut v = Vec::with_capacity(8);
        for i in 0..2 {
            for j in 0..2 {
                v.push(self.e[i][j].x.to_integer());
                v.push(self.e[i][j].y.to_integer());
            }
        }
        v
    }

    pub fn unflatten(row: &[BigInt]) -> KMat {
        assert_eq!(row.len(), 8);
        let q = |a: &BigInt, b: &BigInt| {
            QuadElem::new(
                BigRational::from_integer(a.clone()),
                BigRational::from_integer(b.clone()),
            )
        };
        KMat {
            e: [
                [q(&row[0], &row[1]), q(&row[2], &row[3])],
                [q(&row[4], &row[5]), q(&row[6], &row[7])],
            ],
        }
    }
}

/// `τ(M) = 2M − tr(M)·Id`, projecting symmetric endomorphisms onto
/// trace-zero matrices (scaled by 2).
pub fn tau(m: &KMat, order: &CmOrder) -> KMat {
    m.scale_int(2).sub(&KMat::identity().scale_q(&m.tr(), order))
}

/// The hermitian matrix of the polarization itself.
pub fn polarization_matrix(order: &CmOrder, p: &HermitianForm) -> KMat {
    let b = p.b();
    KMat {
        e: [
            [QuadElem::from_ints(p.a, 0), b.clone()],
            [b.conj(order), QuadElem::from_ints(p.c, 0)],
        ],
    }
}

/// Z-basis `sᵢ = P⁻¹eᵢ` of the rank-4 symmetric-endomorphism lattice,
/// using `P⁻¹ = adj(P) = [[c, −b],[−b̄, a]]` (determinant 1).
pub fn symmetric_basis(order: &CmOrder, p: &HermitianForm) -> [KMat; 4] {
    let b = p.b();
    let bbar = b.conj(order);
    let p_inv = KMat {
        e: [
            [QuadElem::from_ints(p.c, 0), b.neg()],
            [bbar.neg(), QuadElem::from_ints(p.a, 0)],
        ],
    };
    let omega = QuadElem::omega();
    let omega_bar = omega.conj(order);
    let e1 = KMat::from_int_coords([[1, 0], [0, 0], [0, 0], [0, 0]]);
    let e2 = KMat::from_int_coords([[0, 0], [0, 0], [0, 0], [1, 0]]);
    let e3 = KMat::from_int_coords([[0, 0], [1, 0], [1, 0], [0, 0]]);
    let mut e4 = KMat::zero();
    e4.e[0][1] = omega;
    e4.e[1][0] = omega_bar;
    [
        p_inv.mul(&e1, order),
        p_inv.mul(&e2, order),
        p_inv.mul(&e3, order),
        p_inv.mul(&e4, order),
    ]
}

/// `q(β) = −det(β)`; rational for the matrices arising here.
pub fn q4_value(order: &CmOrder, m: &KMat) -> BigRational {
    let d = m.det(order);
    assert!(
        d.is_rational(),
        "norm form applied to a matrix with irrational determinant"
    );
    -d.x
}

/// Polar bilinear form `b(x, y) = (q(x+y) − q(x) − q(y))/2`.
pub fn q4_bilinear(order: &CmOrder, m1: &KMat, m2: &KMat) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    (q4_value(order, &m1.add(m2)) - q4_value(order, m1) - q4_value(order, m2)) / two
}

/// Gram matrix of `q` on an arbitrary list of matrices (rational entries).
pub fn q4_gram(order: &CmOrder, mats: &[KMat]) -> QMat {
    let n = mats.len();
    let mut g = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = q4_bilinear(order, &mats[i], &mats[j]);
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    g
}

/// The rank-3 norm lattice `L = τ(S)` with its integral Gram matrix.
#[derive(Debug, Clone)]
pub struct GrossLattice {
    /// Canonical (Hermite normal form) Z-basis.
    pub basis: Vec<KMat>,
    /// Gram matrix of `−det`, integral, determinant `4d`.
    pub gram: IMat,
}

/// Builds `L` for a polarization. Panics if the structural guarantees
/// (rank 3, integral Gram, determinant `4d`) fail, since they are theorems.
pub fn gross_lattice(order: &CmOrder, p: &HermitianForm) -> GrossLattice {
    let s = symmetric_basis(order, p);
    let rows: IMat = s.iter().map(|m| tau(m, order).flatten()).collect();
    let h = hnf_rows(&rows);
    assert_eq!(h.len(), 3, "norm lattice must have rank 3");
    let basis: Vec<KMat> = h.iter().map(|r| KMat::unflatten(r)).collect();
    let gram_rat = q4_gram(order, &basis);
    let mut gram = vec![vec![BigInt::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            assert!(
                gram_rat[i][j].is_integer(),
                "norm lattice Gram matrix must be integral"
            );
            gram[i][j] = gram_rat[i][j].to_integer();
        }
    }
    let det = crate::linalg::det_int(&gram);
    assert_eq!(
        det,
        BigInt::from(4 * order.d),
        "norm lattice determinant must be 4d"
    );
    GrossLattice { basis, gram }
}

/// The saturation `L₀ = {M ∈ S : tr M = 0}` with rational Gram matrix.
#[derive(Debug, Clone)]
pub struct TraceZeroLattice {
    /// Canonical Z-basis (integral matrices).
    pub basis: Vec<KMat>,
    /// Gram matrix of `−det`; entries lie in `¼Z`.
    pub gram: QMat,
    /// Index `[L₀ : L]` of the norm lattice in its saturation.
    pub index_of_norm_lattice: u64,
}

/// Builds `L₀` for a polarization.
pub fn trace_zero_lattice(order: &CmOrder, p: &HermitianForm) -> TraceZeroLattice {
    let s = symmetric_basis(order, p);
    // Traces of the sᵢ are rational integers; the trace-zero condition is a
    // single Z-linear equation on coordinates.
    let trace_col: IMat = s
        .iter()
        .map(|m| {
            let t = m.tr();
            assert!(
                t.is_rational() && t.x.is_integer(),
                "symmetric basis must have integral rational traces"
            );
            vec![t.x.to_integer()]
        })
        .collect();
    let kernel = left_kernel(&trace_col);
    assert_eq!(kernel.len(), 3, "trace-zero sublattice must have rank 3");
    let mats: Vec<KMat> = kernel
        .iter()
        .map(|coeffs| {
            let mut acc = KMat::zero();
            for (x, si) in coeffs.iter().zip(s.iter()) {
                let xi = i64::try_from(x.clone()).expect("small kernel coefficients");
                acc = acc.add(&si.scale_int(xi));
            }
            acc
        })
        .collect();
    let rows: IMat = mats.iter().map(|m| m.flatten()).collect();
    let h = hnf_rows(&rows);
    assert_eq!(h.len(), 3);
    let basis: Vec<KMat> = h.iter().map(|r| KMat::unflatten(r)).collect();
    let gram = q4_gram(order, &basis);
    // det Gram(L) = 4d and det Gram(L₀) = 4d / [L₀:L]².
    let det0 = det_rat(&gram);
    let ratio = BigRational::from_integer(BigInt::from(4 * order.d)) / det0;
    assert!(
        ratio.is_integer() && ratio.to_integer().is_positive(),
        "saturation index squared must divide 4d ratio"
    );
    let idx_sq = ratio.to_integer();
    let idx = idx_sq.sqrt();
    assert_eq!(
        &idx * &idx,
        idx_sq,
        "4d / det(L₀) must be a perfect square"
    );
    let index_of_norm_lattice = u64::try_from(idx).expect("small saturation index");
    TraceZeroLattice {
        basis,
        gram,
        index_of_norm_lattice,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::are_isometric;
    use crate::linalg::imat_from_i64;

    fn setup(d: i64, a: i64, c: i64, b1: i64, b2: i64) -> (CmOrder, HermitianForm) {
        let order = CmOrder::new(d).unwrap();
        let p = HermitianForm::new(&order, a, c, b1, b2).unwrap();
        (order, p)
    }

    #[test]
    fn symmetric_basis_is_rosati_fixed() {
        let (order, p) = setup(163, 6, 7, 0, 1);
        let pm = polarization_matrix(&order, &p);
        for s in symmetric_basis(&order, &p) {
            // Rosati-fixed: M*P = PM.
            assert_eq!(
                s.conj_transpose(&order).mul(&pm, &order),
                pm.mul(&s, &order)
            );
        }
    }

    #[test]
    fn known_gram_for_d163() {
        let (order, p) = setup(163, 6, 7, 0, 1);
        let l = gross_lattice(&order, &p);
        let target = imat_from_i64(&[&[5, -1, 2], &[-1, 5, 0], &[2, 0, 28]]);
        assert_eq!(crate::linalg::det_int(&l.gram), BigInt::from(652));
        assert!(
            are_isometric(&l.gram, &target),
            "canonical Gram must be isometric to the reduced form"
        );
    }

    #[test]
    fn explicit_basis_gram_for_d163() {
        // Independent hand-checkable basis of the same lattice:
        // ℓ₁ = [[1, −2ω],[−2+2ω, −1]], ℓ₂ = [[5, 4ω],[2−2ω, −5]],
        // ℓ₃ = [[3−2ω, 14−4ω],[8+4ω, −3+2ω]]. For d=163, ω² = ω − 41, so
        // e.g. −det ℓ₁ = 1 + (4ω − 4ω²) + ... = 165.
        let order = CmOrder::new(163).unwrap();
        let l1 = KMat::from_int_coords([[1, 0], [0, -2], [-2, 2], [-1, 0]]);
        let l2 = KMat::from_int_coords([[5, 0], [0, 4], [2, -2], [-5, 0]]);
        let l3 = KMat::from_int_coords([[3, -2], [14, -4], [8, 4], [-3, 2]]);
        let got = q4_gram(&order, &[l1, l2, l3]);
        let want = [
            [165i64, -241, 317],
            [-241, 353, -463],
            [317, -463, 613],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(
                    got[i][j],
                    BigRational::from_integer(BigInt::from(want[i][j])),
                    "entry ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn basis_elements_square_to_their_norm() {
        // Trace-zero 2×2 matrices satisfy β² = −det(β)·Id.
        for (d, a, c, b1, b2) in [(163, 6, 7, 0, 1), (83, 2, 11, 0, 1), (8, 2, 2, 1, 1)] {
            let (order, p) = setup(d, a, c, b1, b2);
            let l = gross_lattice(&order, &p);
            for beta in &l.basis {
                let q = q4_value(&order, beta);
                let want = KMat::identity().scale_q(
                    &QuadElem::new(q, BigRational::zero()),
                    &order,
                );
                assert_eq!(beta.mul(beta, &order), want);
            }
        }
    }

    #[test]
    fn determinant_is_4d_across_discriminants() {
        for d in [8i64, 11, 20, 40, 59, 83, 163] {
            let order = CmOrder::new(d).unwrap();
            for p in crate::polarization::enumerate_polarizations(&order) {
                let l = gross_lattice(&order, &p);
                assert_eq!(
                    crate::linalg::det_int(&l.gram),
                    BigInt::from(4 * d),
                    "det 4d failed at d={d}, P={p}"
                );
            }
        }
    }

    #[test]
    fn trace_zero_saturation_d163() {
        let (order, p) = setup(163, 6, 7, 0, 1);
        let l0 = trace_zero_lattice(&order, &p);
        // det Gram(L₀) = 4d/idx² = 652/16 = 163/4.
        assert_eq!(
            det_rat(&l0.gram),
            BigRational::new(BigInt::from(163), BigInt::from(4))
        );
        assert_eq!(l0.index_of_norm_lattice, 4);
        for m in &l0.basis {
            assert!(m.tr().is_zero(), "basis of L₀ must be trace-free");
            assert!(m.is_integral());
        }
        // L ⊆ L₀: every canonical basis vector of L must have integer
        // coordinates over the basis of L₀.
        let l = gross_lattice(&order, &p);
        let b0: IMat = l0.basis.iter().map(|m| m.flatten()).collect();
        for beta in &l.basis {
            let target = beta.flatten();
            assert!(
                integer_combination(&b0, &target),
                "norm lattice must embed in trace-zero lattice"
            );
        }
    }

    /// The index `[L₀ : L]` is 4 exactly when some symmetric endomorphism
    /// has odd trace and 8 when every trace is even (then `L = 2·L₀`):
    /// for trace-zero `α`, `τ(α) = 2α`, so `L ⊇ 2L₀` always with
    /// `[L₀ : 2L₀] = 8`, and an odd-trace element contributes the one extra
    /// index-2 step. Writing `s₁…s₄` for the symmetric basis, the traces
    /// are `(c, a, −Tr b, −Tr(b·ω̄))`, which for odd `d` always contain an
    /// odd value.
    #[test]
    fn saturation_index_is_four_or_eight() {
        for d in [8i64, 11, 20, 35, 40, 59, 83, 163] {
            let order = CmOrder::new(d).unwrap();
            for p in crate::polarization::enumerate_polarizations(&order) {
                let l0 = trace_zero_lattice(&order, &p);
                let s = symmetric_basis(&order, &p);
                let all_even = s.iter().all(|m| {
                    let t = m.tr();
                    (t.x.to_integer() % 2i32).is_zero()
                });
                let expected = if all_even { 8 } else { 4 };
                assert_eq!(
                    l0.index_of_norm_lattice, expected,
                    "saturation index mismatch at d={d}, P={p}"
                );
                if d % 2 == 1 {
                    assert_eq!(l0.index_of_norm_lattice, 4, "odd d forces index 4");
                }
            }
        }
    }

    #[test]
    fn d8_lattice() {
        let (order, p) = setup(8, 2, 2, 1, 1);
        let l = gross_lattice(&order, &p);
        assert_eq!(crate::linalg::det_int(&l.gram), BigInt::from(32));
        // Diagonal of a positive definite lattice: all norms positive, and
        // no vector of norm 1 (the form is indecomposable).
        assert!(crate::lattice::enumerate_exact(
            &crate::linalg::to_rational(&l.gram),
            &BigRational::from_integer(BigInt::from(1))
        )
        .is_empty());
    }

    /// Solves `x·basis = target` over Z by rational elimination on the
    /// (independent) rows, then integrality check.
    fn integer_combination(basis: &IMat, target: &[BigInt]) -> bool {
        use crate::linalg::{inverse_rat, mat_mul_rat, to_rational as tr};
        // Solve via the 3×3 Gram system: x·B = t ⟹ x·(B Bᵀ) = t·Bᵀ.
        let b = tr(basis);
        let bt = crate::linalg::transpose_rat(&b);
        let bbt = mat_mul_rat(&b, &bt);
        let inv = inverse_rat(&bbt).expect("basis rows independent");
        let t = vec![target.iter().map(|v| BigRational::from_integer(v.clone())).collect::<Vec<_>>()];
        let tbt = mat_mul_rat(&t, &bt);
        let x = mat_mul_rat(&tbt, &inv);
        // Verify the solution reproduces the target exactly and is integral.
        let back = mat_mul_rat(&x, &b);
        back == t[..] .to_vec() && x[0].iter().all(|v| v.is_integer())
    }

    #[test]
    fn q4_congruences_reflect_diagonal() {
        // Norms on L are ≥ 0 and the three canonical diagonal entries obey
        // q(ℓᵢ) ≡ 0 or 1 (mod 4) restrictions only through the general
        // congruence machinery; here just check positivity and symmetry.
        let (order, p) = setup(59, 3, 6, 1, 1);
        let l = gross_lattice(&order, &p);
        for i in 0..3 {
            assert!(l.gram[i][i].is_positive());
            for j in 0..3 {
                assert_eq!(l.gram[i][j], l.gram[j][i]);
            }
        }
    }
}
