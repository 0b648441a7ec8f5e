//! Constructors for the positive-map families handled by the crate.

use num_complex::Complex64;
use rand::Rng;

use crate::config::Tolerances;
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{frobenius, matrix_unit, pauli_y, random_unitary, CMatrix};
use crate::maps::LinearMatrixMap;

/// Names a catalog map together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum MapDescriptor {
    Transposition {
        n: usize,
    },
    /// X ↦ V X V*
    Ad {
        v: CMatrix,
    },
    /// X ↦ V Xᵗ V*
    CoAd {
        v: CMatrix,
    },
    Reduction {
        n: usize,
    },
    ChoiFamily(ChoiFamilyParams),
    BreuerHall {
        u: AntisymmetricUnitary,
    },
    Robertson,
    FromChoi {
        choi: CMatrix,
        n: usize,
        m: usize,
    },
}

impl MapDescriptor {
    pub fn build(&self) -> Result<LinearMatrixMap> {
        match self {
            Self::Transposition { n } => transposition(*n),
            Self::Ad { v } => Ok(ad_map(v)),
            Self::CoAd { v } => Ok(co_ad_map(v)),
            Self::Reduction { n } => reduction(*n),
            Self::ChoiFamily(p) => Ok(choi_family(p)),
            Self::BreuerHall { u } => Ok(breuer_hall(u)),
            Self::Robertson => Ok(robertson()),
            Self::FromChoi { choi, n, m } => {
                LinearMatrixMap::from_choi(choi.clone(), *n, *m, &Tolerances::default())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Transposition { .. } => "transpose",
            Self::Ad { .. } => "ad",
            Self::CoAd { .. } => "co-ad",
            Self::Reduction { .. } => "reduction",
            Self::ChoiFamily(_) => "choi-family",
            Self::BreuerHall { .. } => "breuer-hall",
            Self::Robertson => "robertson",
            Self::FromChoi { .. } => "from-choi",
        }
    }

    /// (input, output) dimensions of the described map.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Self::Transposition { n } | Self::Reduction { n } => (*n, *n),
            Self::Ad { v } | Self::CoAd { v } => (v.ncols(), v.nrows()),
            Self::ChoiFamily(_) => (3, 3),
            Self::BreuerHall { u } => (u.dim(), u.dim()),
            Self::Robertson => (4, 4),
            Self::FromChoi { n, m, .. } => (*n, *m),
        }
    }
}

/// τ(X) = Xᵗ on M_n.
pub fn transposition(n: usize) -> Result<LinearMatrixMap> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    LinearMatrixMap::from_action(n, n, |x| x.transpose())
}

/// φ_V(X) = V X V* for V: Cⁿ → Cᵐ. Its Choi matrix is |v⟩⟨v| with v = Σ e_i ⊗ V e_i.
pub fn ad_map(v: &CMatrix) -> LinearMatrixMap {
    let vd = v.adjoint();
    LinearMatrixMap::from_action(v.ncols(), v.nrows(), |x| v * x * &vd)
        .expect("V X V* preserves Hermiticity")
}

/// φ^V(X) = V Xᵗ V*.
pub fn co_ad_map(v: &CMatrix) -> LinearMatrixMap {
    let vd = v.adjoint();
    LinearMatrixMap::from_action(v.ncols(), v.nrows(), |x| v * x.transpose() * &vd)
        .expect("V Xᵗ V* preserves Hermiticity")
}

/// R_n(X) = I Tr X − X.
pub fn reduction(n: usize) -> Result<LinearMatrixMap> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "reduction map needs n >= 2, got {n}"
        )));
    }
    LinearMatrixMap::from_action(n, n, reduction_action)
}

fn reduction_action(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    CMatrix::identity(n, n) * x.trace() - x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiFamilyParams {
    a: f64,
    b: f64,
    c: f64,
}

impl ChoiFamilyParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b), ("c", c)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::NegativeParameter { name, value });
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The three positivity conditions: a < 2, a + b + c ≥ 2, and bc ≥ (1 − a)² when a ≤ 1.
    ///
    /// These characterize the maps of the family that are positive but not
    /// completely positive. For a ≥ 2 the map is completely positive.
    pub fn is_positive(&self) -> bool {
        let Self { a, b, c } = *self;
        a < 2.0 && a + b + c >= 2.0 && (a > 1.0 || b * c >= (1.0 - a).powi(2))
    }

    /// bc < (2 − a)²/4, defined for parameters passing [`Self::is_positive`].
    pub fn is_indecomposable(&self) -> Result<bool> {
        if !self.is_positive() {
            return Err(Error::NotPositiveMap);
        }
        Ok(self.b * self.c < (2.0 - self.a).powi(2) / 4.0)
    }
}

/// The generalized Choi map φ[a,b,c] on M₃.
pub fn choi_family(p: &ChoiFamilyParams) -> LinearMatrixMap {
    let (a, b, c) = (p.a, p.b, p.c);
    // row k of the diagonal weights: output (k,k) = Σ_j weight[k][j]·x_jj
    let weight = [[a, b, c], [c, a, b], [b, c, a]];
    LinearMatrixMap::from_action(3, 3, |x| {
        CMatrix::from_fn(3, 3, |r, s| {
            if r == s {
                (0..3).map(|j| x[(j, j)] * weight[r][j]).sum()
            } else {
                -x[(r, s)]
            }
        })
    })
    .expect("φ[a,b,c] preserves Hermiticity")
}

pub fn choi_family_is_positive(a: f64, b: f64, c: f64) -> Result<bool> {
    Ok(ChoiFamilyParams::new(a, b, c)?.is_positive())
}

pub fn choi_family_is_indecomposable(a: f64, b: f64, c: f64) -> Result<bool> {
    ChoiFamilyParams::new(a, b, c)?.is_indecomposable()
}

/// A unitary U with Uᵗ = −U. Such matrices exist only in even dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricUnitary(CMatrix);

impl AntisymmetricUnitary {
    pub fn new(u: CMatrix, tol: &Tolerances) -> Result<Self> {
        if !u.is_square() {
            return Err(dim_mismatch(
                "square matrix",
                format!("{}x{}", u.nrows(), u.ncols()),
            ));
        }
        let d = u.nrows();
        if d % 2 == 1 {
            return Err(Error::OddDimension(d));
        }
        let unitarity = frobenius(&(u.adjoint() * &u - CMatrix::identity(d, d)));
        if unitarity > tol.structure {
            return Err(Error::NotUnitary(unitarity));
        }
        let antisymmetry = frobenius(&(&u + u.transpose()));
        if antisymmetry > tol.structure {
            return Err(Error::NotAntisymmetric(antisymmetry));
        }
        Ok(Self(u))
    }

    /// I_{d/2} ⊗ σ_y.
    pub fn canonical(d: usize) -> Result<Self> {
        if d == 0 || d % 2 == 1 {
            return Err(Error::OddDimension(d));
        }
        let half = d / 2;
        Ok(Self(CMatrix::identity(half, half).kronecker(&pauli_y())))
    }

    /// V (I ⊗ σ_y) Vᵗ for a unitary V.
    pub fn conjugated(v: &CMatrix, tol: &Tolerances) -> Result<Self> {
        let base = Self::canonical(v.nrows())?;
        Self::new(v * base.0 * v.transpose(), tol)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
}

pub fn random_antisymmetric_unitary<R: Rng + ?Sized>(
    n2: usize,
    rng: &mut R,
) -> Result<AntisymmetricUnitary> {
    if n2 == 0 || n2 % 2 == 1 {
        return Err(Error::OddDimension(n2));
    }
    let v = random_unitary(n2, rng);
    AntisymmetricUnitary::conjugated(&v, &Tolerances::default())
}

/// φ_BH(X) = I Tr X − X − U Xᵗ U*.
pub fn breuer_hall(u: &AntisymmetricUnitary) -> LinearMatrixMap {
    let ud = u.0.adjoint();
    LinearMatrixMap::from_action(u.dim(), u.dim(), |x| {
        reduction_action(x) - &u.0 * x.transpose() * &ud
    })
    .expect("Breuer-Hall map preserves Hermiticity")
}

/// The Robertson map on M₄ = M₂ ⊗ M₂, built from its 2×2 block form:
/// diagonal blocks I Tr X₂₂ and I Tr X₁₁, off-diagonal blocks
/// −(X₁₂ + R₂(X₂₁)) and −(X₂₁ + R₂(X₁₂)).
pub fn robertson() -> LinearMatrixMap {
    LinearMatrixMap::from_action(4, 4, |x| {
        let block = |k: usize, l: usize| x.view((2 * k, 2 * l), (2, 2)).into_owned();
        let (x11, x12, x21, x22) = (block(0, 0), block(0, 1), block(1, 0), block(1, 1));
        let id = CMatrix::identity(2, 2);
        let mut out = CMatrix::zeros(4, 4);
        out.view_mut((0, 0), (2, 2)).copy_from(&(&id * x22.trace()));
        out.view_mut((2, 2), (2, 2)).copy_from(&(&id * x11.trace()));
        out.view_mut((0, 2), (2, 2))
            .copy_from(&(-(&x12 + reduction_action(&x21))));
        out.view_mut((2, 0), (2, 2))
            .copy_from(&(-(&x21 + reduction_action(&x12))));
        out
    })
    .expect("Robertson map preserves Hermiticity")
}

/// D_ij = V(e_ij − e_ji)Vᵗ for 1 ≤ i < j ≤ n2, taken without normalization.
///
/// Conjugating by Vᵗ (rather than V*) keeps every D_ij antisymmetric, and
/// Σ D_ij|x̄⟩⟨x̄|D_ij* = I − |x⟩⟨x| holds for every unitary V.
pub fn antisym_basis(v: &CMatrix, n2: usize, tol: &Tolerances) -> Result<Vec<CMatrix>> {
    if v.nrows() != n2 || v.ncols() != n2 {
        return Err(dim_mismatch(
            format!("{n2}x{n2}"),
            format!("{}x{}", v.nrows(), v.ncols()),
        ));
    }
    let unitarity = frobenius(&(v.adjoint() * v - CMatrix::identity(n2, n2)));
    if unitarity > tol.structure {
        return Err(Error::NotUnitary(unitarity));
    }
    let vt = v.transpose();
    let mut out = Vec::with_capacity(n2 * n2.saturating_sub(1) / 2);
    for i in 0..n2 {
        for j in (i + 1)..n2 {
            let e = matrix_unit(n2, n2, i, j) - matrix_unit(n2, n2, j, i);
            out.push(v * e * &vt);
        }
    }
    Ok(out)
}

/// Complex antisymmetric matrix with independent Gaussian entries above the diagonal.
pub fn random_antisymmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    use rand_distr::StandardNormal;
    let mut a = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            a[(i, j)] = z;
            a[(j, i)] = -z;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, conj_vec, eigh, projector, random_unit_vector, ONE, ZERO};
    use crate::maps::identity_map;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(entries: &[f64]) -> CMatrix {
        CMatrix::from_fn(entries.len(), entries.len(), |r, c| {
            if r == c {
                Complex64::from(entries[r])
            } else {
                ZERO
            }
        })
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        frobenius(&(a - b)) <= tol
    }

    #[test]
    fn transposition_basics() {
        let tau = transposition(2).unwrap();
        let out = tau.apply(&matrix_unit(2, 2, 0, 1)).unwrap();
        assert!(close(&out, &matrix_unit(2, 2, 1, 0), 0.0));
        let swap = CMatrix::from_fn(4, 4, |r, c| {
            if r / 2 == c % 2 && r % 2 == c / 2 {
                ONE
            } else {
                ZERO
            }
        });
        assert!(close(tau.choi(), &swap, 0.0));
        let twice = tau.compose_with_transpose();
        assert!(close(twice.choi(), identity_map(2).choi(), 0.0));
        assert!(transposition(0).is_err());
    }

    #[test]
    fn ad_and_co_ad() {
        let id3 = CMatrix::identity(3, 3);
        assert!(close(ad_map(&id3).choi(), identity_map(3).choi(), 0.0));
        assert!(close(
            co_ad_map(&id3).choi(),
            transposition(3).unwrap().choi(),
            0.0
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unit_vector(3, &mut rng);
        let w = random_unit_vector(2, &mut rng);
        let v = &u * w.adjoint(); // 3×2: C² → C³
        let phi = ad_map(&v);
        let x = CMatrix::from_fn(2, 2, |r, c| Complex64::new(r as f64 + 1.0, c as f64 - 0.5));
        let expect = projector(&u) * w.dotc(&(&x * &w));
        assert!(close(&phi.apply(&x).unwrap(), &expect, 1e-13));

        // rank-one PSD Choi |v⟩⟨v| with v = Σ e_i ⊗ V e_i
        let big = CMatrix::from_fn(3, 2, |r, c| {
            Complex64::new(r as f64 - c as f64, 0.5 * c as f64)
        });
        let vec = crate::linalg::CVector::from_fn(6, |k, _| big[(k % 3, k / 3)]);
        assert!(close(ad_map(&big).choi(), &projector(&vec), 1e-13));
    }

    #[test]
    fn reduction_values() {
        let sz = diag(&[1.0, -1.0]);
        let r2 = reduction(2).unwrap();
        assert!(close(&r2.apply(&sz).unwrap(), &(-&sz), 1e-15));
        for n in 2..=5 {
            let out = reduction(n)
                .unwrap()
                .apply(&CMatrix::identity(n, n))
                .unwrap();
            assert!(close(
                &out,
                &(CMatrix::identity(n, n) * Complex64::from(n as f64 - 1.0)),
                1e-14
            ));
        }
        // R₂ = σ_y (·)ᵗ σ_y
        assert!(close(r2.choi(), co_ad_map(&pauli_y()).choi(), 1e-15));
        assert!(reduction(1).is_err());
    }

    #[test]
    fn reduction_choi_entrywise() {
        // Σ e_ij ⊗ (δ_ij I − e_ij) = I − Σ e_ij ⊗ e_ij
        for n in [2, 3] {
            let w = reduction(n).unwrap().into_choi();
            for r in 0..n * n {
                for c in 0..n * n {
                    let (i, a, j, b) = (r / n, r % n, c / n, c % n);
                    let mut expect = 0.0;
                    if r == c {
                        expect += 1.0;
                    }
                    if i == a && j == b {
                        expect -= 1.0;
                    }
                    assert_eq!(w[(r, c)], Complex64::from(expect), "entry ({r},{c})");
                }
            }
            let (vals, _) = eigh(&w, 1e-12).unwrap();
            assert!((vals[0] - (1.0 - n as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn choi_family_values() {
        let r3 = reduction(3).unwrap();
        let p011 = ChoiFamilyParams::new(0.0, 1.0, 1.0).unwrap();
        assert!(close(choi_family(&p011).choi(), r3.choi(), 1e-15));

        let p200 = ChoiFamilyParams::new(2.0, 0.0, 0.0).unwrap();
        let out = choi_family(&p200).apply(&CMatrix::identity(3, 3)).unwrap();
        assert!(close(&out, &diag(&[2.0, 2.0, 2.0]), 1e-15));

        let p110 = ChoiFamilyParams::new(1.0, 1.0, 0.0).unwrap();
        let out = choi_family(&p110).apply(&matrix_unit(3, 3, 0, 0)).unwrap();
        assert!(close(&out, &diag(&[1.0, 0.0, 1.0]), 1e-15));

        assert!(matches!(
            ChoiFamilyParams::new(-0.1, 1.0, 1.0),
            Err(Error::NegativeParameter { name: "a", .. })
        ));
    }

    #[test]
    fn choi_family_predicates() {
        assert!(choi_family_is_positive(1.0, 1.0, 0.0).unwrap());
        assert!(!choi_family_is_positive(2.0, 0.0, 0.0).unwrap());
        assert!(choi_family_is_positive(0.0, 1.0, 1.0).unwrap());
        assert!(!choi_family_is_positive(1.0, 0.0, 0.0).unwrap());

        assert!(choi_family_is_indecomposable(1.0, 1.0, 0.0).unwrap());
        assert!(!choi_family_is_indecomposable(0.0, 1.0, 1.0).unwrap());
        // boundary bc = (2 − a)²/4 is decomposable
        assert!(!choi_family_is_indecomposable(1.0, 0.5, 0.5).unwrap());
        assert_eq!(
            choi_family_is_indecomposable(2.0, 0.0, 0.0),
            Err(Error::NotPositiveMap)
        );
    }

    #[test]
    fn antisymmetric_unitary_validation() {
        let tol = Tolerances::default();
        assert!(AntisymmetricUnitary::new(pauli_y(), &tol).is_ok());
        assert_eq!(
            AntisymmetricUnitary::new(CMatrix::identity(3, 3), &tol),
            Err(Error::OddDimension(3))
        );
        assert!(matches!(
            AntisymmetricUnitary::new(CMatrix::identity(2, 2), &tol),
            Err(Error::NotAntisymmetric(_))
        ));
        let scaled = pauli_y() * Complex64::from(2.0);
        assert!(matches!(
            AntisymmetricUnitary::new(scaled, &tol),
            Err(Error::NotUnitary(_))
        ));
        let canon = AntisymmetricUnitary::conjugated(&CMatrix::identity(4, 4), &tol).unwrap();
        assert_eq!(canon, AntisymmetricUnitary::canonical(4).unwrap());
    }

    #[test]
    fn random_antisymmetric_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n2 in [2, 4, 6] {
            let u = random_antisymmetric_unitary(n2, &mut rng).unwrap();
            assert!(frobenius(&(u.matrix() + u.matrix().transpose())) < 1e-10);
        }
        assert_eq!(
            random_antisymmetric_unitary(5, &mut rng),
            Err(Error::OddDimension(5))
        );
        let u1 = random_antisymmetric_unitary(4, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let u2 = random_antisymmetric_unitary(4, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(frobenius(&(breuer_hall(&u1).into_choi() - breuer_hall(&u2).into_choi())) > 1e-3);
    }

    #[test]
    fn breuer_hall_special_cases() {
        let zero =
            breuer_hall(&AntisymmetricUnitary::new(pauli_y(), &Tolerances::default()).unwrap());
        assert!(frobenius(zero.choi()) < 1e-15);

        let canon = AntisymmetricUnitary::canonical(4).unwrap();
        let bh = breuer_hall(&canon);
        assert!(close(bh.choi(), robertson().choi(), 1e-12));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n2 in [4, 6] {
            let u = random_antisymmetric_unitary(n2, &mut rng).unwrap();
            let out = breuer_hall(&u).apply(&CMatrix::identity(n2, n2)).unwrap();
            let expect = CMatrix::identity(n2, n2) * Complex64::from(n2 as f64 - 2.0);
            assert!(close(&out, &expect, 1e-12));
        }
    }

    #[test]
    fn breuer_hall_plus_co_ad_is_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n2 in [2, 4, 6] {
            let u = random_antisymmetric_unitary(n2, &mut rng).unwrap();
            let sum = breuer_hall(&u).add(&co_ad_map(u.matrix())).unwrap();
            assert!(close(sum.choi(), reduction(n2).unwrap().choi(), 1e-13));
        }
    }

    #[test]
    fn robertson_block_formula() {
        let mut x = CMatrix::zeros(4, 4);
        x.view_mut((0, 0), (2, 2))
            .copy_from(&CMatrix::identity(2, 2));
        let out = robertson().apply(&x).unwrap();
        assert!(close(&out, &diag(&[0.0, 0.0, 2.0, 2.0]), 1e-15));
        let out = robertson().apply(&CMatrix::identity(4, 4)).unwrap();
        assert!(close(&out, &diag(&[2.0; 4]), 1e-15));
    }

    #[test]
    fn antisym_basis_shapes() {
        let tol = Tolerances::default();
        let single = antisym_basis(&CMatrix::identity(2, 2), 2, &tol).unwrap();
        assert_eq!(single.len(), 1);
        assert!(close(
            &single[0],
            &(matrix_unit(2, 2, 0, 1) - matrix_unit(2, 2, 1, 0)),
            0.0
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_unitary(4, &mut rng);
        let basis = antisym_basis(&v, 4, &tol).unwrap();
        assert_eq!(basis.len(), 6);
        assert!(basis
            .iter()
            .all(|d| frobenius(&(d + d.transpose())) < 1e-12));
        assert!(matches!(
            antisym_basis(&(v * Complex64::from(2.0)), 4, &tol),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn antisymmetric_sum_identity() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n2 in [2, 4, 6] {
            let v = random_unitary(n2, &mut rng);
            let basis = antisym_basis(&v, n2, &tol).unwrap();
            let x = random_unit_vector(n2, &mut rng);
            let xb = conj_vec(&x);
            let lhs = basis.iter().fold(CMatrix::zeros(n2, n2), |acc, d| {
                acc + d * projector(&xb) * d.adjoint()
            });
            let rhs = CMatrix::identity(n2, n2) - projector(&x);
            assert!(close(&lhs, &rhs, 1e-10));
        }
    }

    #[test]
    fn antisymmetric_unitary_is_orthogonal_to_its_conjugate_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n2 in [2, 4, 6] {
            let u = random_antisymmetric_unitary(n2, &mut rng).unwrap();
            for _ in 0..20 {
                let x = random_unit_vector(n2, &mut rng);
                let ux = u.matrix() * conj_vec(&x);
                assert!(x.dotc(&ux).norm() < 1e-12);
            }
        }
        let e1 = basis_vector(4, 0);
        let canon = AntisymmetricUnitary::canonical(4).unwrap();
        assert!(e1.dotc(&(canon.matrix() * conj_vec(&e1))).norm() == 0.0);
    }
}
