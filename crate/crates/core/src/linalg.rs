//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra` dense matrices over `Complex64`. The computational
//! basis is the standard one and complex conjugation is entrywise in it.

use nalgebra::{DMatrix, DVector, SymmetricEigen, QR, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{dim_mismatch, Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

const EIGH_MAX_ITERS: usize = 10_000;
const SVD_MAX_ITERS: usize = 10_000;

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ‖A − A†‖_F.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] - a[(j, i)].conj()).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Rejects matrices that are not Hermitian within `rel_tol·max(1, ‖A‖_F)`.
/// Nothing is symmetrized.
pub fn check_hermitian(a: &CMatrix, rel_tol: f64) -> Result<()> {
    if !a.is_square() {
        return Err(dim_mismatch(
            "square matrix",
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    let deviation = hermitian_deviation(a);
    let limit = rel_tol * frobenius(a).max(1.0);
    if deviation > limit || !deviation.is_finite() {
        return Err(Error::NonHermitianInput { deviation, limit });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back in ascending order; column `k` of the returned
/// unitary is the eigenvector for eigenvalue `k`, phase-fixed so that its
/// first entry of non-negligible modulus is real and positive.
pub fn eigh(a: &CMatrix, rel_tol: f64) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(a, rel_tol)?;
    eigh_unchecked(a)
}

pub(crate) fn eigh_unchecked(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = a.nrows();
    let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, EIGH_MAX_ITERS)
        .ok_or_else(|| Error::ConvergenceFailure("Hermitian eigensolver".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        fix_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok((values, vectors))
}

/// Bottom eigenpair of a Hermitian matrix.
pub(crate) fn bottom_eigenpair(a: &CMatrix) -> Result<(f64, CVector)> {
    let (values, vectors) = eigh_unchecked(a)?;
    Ok((values[0], vectors.column(0).into_owned()))
}

/// Multiplies by a phase so that the first entry with modulus above 1e-8 is real positive.
pub fn fix_phase(v: &mut CVector) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().find(|z| z.norm() > 1e-8 * scale) {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Rank and orthonormal null-space basis of a real matrix.
#[derive(Debug, Clone)]
pub struct NullSpace {
    pub rank: usize,
    /// Null-space basis vectors as columns.
    pub basis: RMatrix,
    /// Singular values in descending order.
    pub singular_values: Vec<f64>,
}

impl NullSpace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

/// Null space by SVD: singular values above `rel_tol·σ_max` count towards the rank.
///
/// Tall inputs are first reduced to their square `R` factor, which has the
/// same singular values and right singular vectors; wide inputs are padded
/// with zero rows so the full right basis is available. Very tall, large
/// inputs go through [`gram_nullspace`] instead.
pub fn svd_nullspace(m: &RMatrix, rel_tol: f64) -> Result<NullSpace> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rel_tol must lie in (0, 1), got {rel_tol}"
        )));
    }
    let cols = m.ncols();
    if m.nrows() >= 4 * cols && (m.nrows() as f64) * (cols as f64).powi(2) > GRAM_FLOPS {
        return gram_nullspace(m, rel_tol);
    }
    let square = if m.nrows() > cols {
        QR::new(m.clone()).r()
    } else {
        let mut padded = RMatrix::zeros(cols, cols);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    };
    let svd = SVD::try_new(square, false, true, f64::EPSILON, SVD_MAX_ITERS)
        .ok_or_else(|| Error::ConvergenceFailure("SVD".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::ConvergenceFailure("SVD returned no right vectors".into()))?;
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let sigma_max = singular_values[0];
    let rank = singular_values
        .iter()
        .filter(|&&s| s > rel_tol * sigma_max)
        .count();
    let null_rows: Vec<usize> = order[rank..].to_vec();
    let mut basis = RMatrix::zeros(cols, null_rows.len());
    for (c, &r) in null_rows.iter().enumerate() {
        basis.set_column(c, &v_t.row(r).transpose());
    }
    Ok(NullSpace {
        rank,
        basis,
        singular_values,
    })
}

/// Above this many multiply-adds a tall system is reduced through its Gram matrix.
const GRAM_FLOPS: f64 = 1e10;

const GRAM_BLOCK: usize = 2048;

/// Eigenvalues of AᵀA below this fraction of the largest are re-examined exactly.
const RITZ_WINDOW: f64 = 1e-8;

/// Null space of a tall matrix through its Gram matrix G = AᵀA.
///
/// Eigenvalues of G only resolve singular values down to about √ε·σ_max, so
/// every eigenvector with λ ≤ 1e-8·λ_max is kept as a candidate and A is
/// re-examined on that subspace: an SVD of A·V_c gives the small singular
/// values and the null directions at full precision.
pub fn gram_nullspace(m: &RMatrix, rel_tol: f64) -> Result<NullSpace> {
    let cols = m.ncols();
    // blocked so the product runs through the gemm kernel without a full transposed copy
    let mut gram = RMatrix::zeros(cols, cols);
    for start in (0..m.nrows()).step_by(GRAM_BLOCK) {
        let len = GRAM_BLOCK.min(m.nrows() - start);
        let block = m.rows(start, len).clone_owned();
        gram += block.transpose() * &block;
    }
    let eig = nalgebra::SymmetricEigen::try_new(gram, f64::EPSILON, SVD_MAX_ITERS)
        .ok_or_else(|| Error::ConvergenceFailure("Gram eigendecomposition".into()))?;
    let lambda_max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let (mut coarse, mut window) = (Vec::new(), Vec::new());
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l > RITZ_WINDOW * lambda_max {
            coarse.push(l.sqrt());
        } else {
            window.push(k);
        }
    }
    let mut candidates = RMatrix::zeros(cols, window.len());
    for (c, &k) in window.iter().enumerate() {
        candidates.set_column(c, &eig.eigenvectors.column(k));
    }
    let (fine, rotation) = if window.is_empty() {
        (Vec::new(), RMatrix::zeros(0, 0))
    } else {
        let restricted = m * &candidates;
        let r = QR::new(restricted).r();
        let svd = SVD::try_new(r, false, true, f64::EPSILON, SVD_MAX_ITERS)
            .ok_or_else(|| Error::ConvergenceFailure("SVD".into()))?;
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::ConvergenceFailure("SVD returned no right vectors".into()))?;
        (svd.singular_values.iter().copied().collect(), v_t)
    };
    let sigma_max = lambda_max.sqrt();
    let mut order: Vec<usize> = (0..fine.len()).collect();
    order.sort_by(|&i, &j| fine[j].total_cmp(&fine[i]));
    let null: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| fine[k].is_nan() || fine[k] <= rel_tol * sigma_max)
        .collect();
    let mut basis = RMatrix::zeros(cols, null.len());
    for (c, &k) in null.iter().enumerate() {
        basis.set_column(c, &(&candidates * rotation.row(k).transpose()));
    }
    let mut singular_values: Vec<f64> = coarse.into_iter().chain(fine).collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Ok(NullSpace {
        rank: cols - null.len(),
        basis,
        singular_values,
    })
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let norm = v.norm();
        if norm > 1e-300 {
            return v / Complex64::from(norm);
        }
    }
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal moved into Q.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let ginibre = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = QR::new(ginibre);
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let m = b.len();
    CVector::from_fn(a.len() * m, |k, _| a[k / m] * b[k % m])
}

pub fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

pub fn projector(v: &CVector) -> CMatrix {
    outer(v, v)
}

/// Matrix unit e_ij of size n×m.
pub fn matrix_unit(n: usize, m: usize, i: usize, j: usize) -> CMatrix {
    let mut e = CMatrix::zeros(n, m);
    e[(i, j)] = ONE;
    e
}

pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut e = CVector::zeros(n);
    e[i] = ONE;
    e
}

/// ⟨v|A|v⟩.
pub fn expectation(a: &CMatrix, v: &CVector) -> Complex64 {
    v.dotc(&(a * v))
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

/// Transposes the first tensor factor of an operator on Cⁿ ⊗ Cᵐ.
pub fn partial_transpose_first(w: &CMatrix, n: usize, m: usize) -> CMatrix {
    CMatrix::from_fn(n * m, n * m, |r, c| {
        let (i, a) = (r / m, r % m);
        let (j, b) = (c / m, c % m);
        w[(j * m + a, i * m + b)]
    })
}

/// Real coordinates of a d×d Hermitian matrix.
///
/// Layout: the d diagonal entries, then for each k < l in row-major order the
/// pair (√2·Re A_kl, √2·Im A_kl). The √2 weighting makes the map an isometry
/// from the Frobenius norm to the Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianParamVector {
    pub dim: usize,
    pub coords: Vec<f64>,
}

impl HermitianParamVector {
    pub fn from_hermitian(a: &CMatrix, rel_tol: f64) -> Result<Self> {
        check_hermitian(a, rel_tol)?;
        Ok(Self::from_hermitian_unchecked(a))
    }

    pub(crate) fn from_hermitian_unchecked(a: &CMatrix) -> Self {
        let d = a.nrows();
        let mut coords = Vec::with_capacity(d * d);
        coords.extend((0..d).map(|k| a[(k, k)].re));
        let s = std::f64::consts::SQRT_2;
        for k in 0..d {
            for l in (k + 1)..d {
                coords.push(s * a[(k, l)].re);
                coords.push(s * a[(k, l)].im);
            }
        }
        Self { dim: d, coords }
    }

    pub fn from_coords(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != dim * dim {
            return Err(dim_mismatch(dim * dim, coords.len()));
        }
        Ok(Self { dim, coords })
    }

    pub fn to_hermitian(&self) -> CMatrix {
        let d = self.dim;
        let mut a = CMatrix::zeros(d, d);
        for k in 0..d {
            a[(k, k)] = Complex64::from(self.coords[k]);
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut idx = d;
        for k in 0..d {
            for l in (k + 1)..d {
                let z = Complex64::new(self.coords[idx] * h, self.coords[idx + 1] * h);
                a[(k, l)] = z;
                a[(l, k)] = z.conj();
                idx += 2;
            }
        }
        a
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Row of real coefficients `r` with r·coords(W) = ⟨v|W|v⟩ for every Hermitian W.
pub fn pairing_row(v: &CVector) -> Vec<f64> {
    let d = v.len();
    let s = std::f64::consts::SQRT_2;
    let mut row = Vec::with_capacity(d * d);
    row.extend(v.iter().map(|z| z.norm_sqr()));
    for k in 0..d {
        for l in (k + 1)..d {
            let p = v[k].conj() * v[l];
            row.push(s * p.re);
            row.push(-s * p.im);
        }
    }
    row
}

/// Two real rows (real and imaginary part) for the functional W ↦ ⟨u|W|v⟩
/// on Hermitian W, in [`HermitianParamVector`] coordinates.
pub fn sesquilinear_rows(u: &CVector, v: &CVector) -> (Vec<f64>, Vec<f64>) {
    let d = v.len();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut coeffs = Vec::with_capacity(d * d);
    coeffs.extend((0..d).map(|k| u[k].conj() * v[k]));
    for k in 0..d {
        for l in (k + 1)..d {
            let a = u[k].conj() * v[l];
            let b = u[l].conj() * v[k];
            coeffs.push((a + b) * h);
            coeffs.push(I * (a - b) * h);
        }
    }
    (
        coeffs.iter().map(|z| z.re).collect(),
        coeffs.iter().map(|z| z.im).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let g = CMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        (&g + g.adjoint()) * Complex64::from(0.5)
    }

    #[test]
    fn eigh_identity_and_pauli() {
        let (vals, _) = eigh(&CMatrix::identity(2, 2), 1e-12).unwrap();
        assert_eq!(vals.len(), 2);
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let (vals, vecs) = eigh(&pauli_y(), 1e-12).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let resid = pauli_y() * vecs.column(0) - vecs.column(0) * Complex64::from(vals[0]);
        assert!(resid.norm() < 1e-12);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let a = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(
            eigh(&a, 1e-12),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [1, 3, 6, 16] {
            let a = random_hermitian(d, &mut rng);
            let (vals, v) = eigh(&a, 1e-12).unwrap();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            let lambda = CMatrix::from_diagonal(&CVector::from_iterator(
                d,
                vals.iter().map(|&x| Complex64::from(x)),
            ));
            let recon = &v * lambda * v.adjoint();
            assert!(frobenius(&(recon - &a)) <= 1e-10 * frobenius(&a));
            let unit = v.adjoint() * &v - CMatrix::identity(d, d);
            assert!(frobenius(&unit) < 1e-12);
        }
    }

    #[test]
    fn gram_path_matches_qr_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        // rank 30 in 40 columns, rows scaled over six orders of magnitude
        let left = RMatrix::from_fn(400, 30, |i, _| {
            rng.sample::<f64, _>(StandardNormal) * 10f64.powi((i % 7) as i32 - 3)
        });
        let right = RMatrix::from_fn(30, 40, |_, _| rng.sample(StandardNormal));
        let a = left * right;
        let exact = svd_nullspace(&a, 1e-8).unwrap();
        let gram = gram_nullspace(&a, 1e-8).unwrap();
        assert_eq!((exact.dim(), gram.dim()), (10, 10));
        assert_eq!(gram.rank, 30);
        assert!((&a * &gram.basis).amax() < 1e-9 * gram.sigma_max());
        let overlap = exact.basis.transpose() * &gram.basis;
        assert!(overlap
            .singular_values()
            .iter()
            .all(|s| (s - 1.0).abs() < 1e-8));
        let unit = gram.basis.transpose() * &gram.basis - RMatrix::identity(10, 10);
        assert!(unit.amax() < 1e-12);
        assert!((gram.sigma_max() - exact.sigma_max()).abs() < 1e-10 * exact.sigma_max());
        let full = gram_nullspace(
            &RMatrix::from_fn(50, 5, |_, _| rng.sample(StandardNormal)),
            1e-8,
        )
        .unwrap();
        assert_eq!((full.rank, full.dim()), (5, 0));
        assert_eq!(
            gram_nullspace(&RMatrix::zeros(20, 4), 1e-8).unwrap().dim(),
            4
        );
    }

    #[test]
    fn nullspace_trivial_cases() {
        let z = svd_nullspace(&RMatrix::zeros(2, 3), 1e-8).unwrap();
        // σ_max = 0: no singular value exceeds the cutoff
        assert_eq!((z.rank, z.dim()), (0, 3));
        let id = svd_nullspace(&RMatrix::identity(3, 3), 1e-8).unwrap();
        assert_eq!((id.rank, id.dim()), (3, 0));
        let row = RMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = svd_nullspace(&row, 1e-8).unwrap();
        assert_eq!(ns.dim(), 2);
        for c in ns.basis.column_iter() {
            assert!((c[0] + c[1]).abs() < 1e-12);
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
        let gram = ns.basis.transpose() * &ns.basis;
        assert!((gram - RMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn nullspace_rejects_bad_tolerance() {
        assert!(svd_nullspace(&RMatrix::identity(2, 2), 0.0).is_err());
        assert!(svd_nullspace(&RMatrix::identity(2, 2), 1.0).is_err());
        assert!(svd_nullspace(&RMatrix::zeros(0, 2), 0.5).is_err());
    }

    #[test]
    fn nullspace_of_tall_matrix_has_small_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // 40×10 matrix of rank 6
        let left = RMatrix::from_fn(40, 6, |_, _| rng.sample(StandardNormal));
        let right = RMatrix::from_fn(6, 10, |_, _| rng.sample(StandardNormal));
        let m = left * right;
        let ns = svd_nullspace(&m, 1e-8).unwrap();
        assert_eq!((ns.rank, ns.dim()), (6, 4));
        for b in ns.basis.column_iter() {
            assert!((&m * b).norm() <= 10.0 * 1e-8 * ns.sigma_max());
        }
    }

    #[test]
    fn random_vectors_and_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random_unit_vector(1, &mut rng);
        assert!((x[0].norm() - 1.0).abs() < 1e-14);
        for n in [1, 2, 5] {
            let v = random_unit_vector(n, &mut rng);
            assert!((v.norm() - 1.0).abs() < 1e-14);
            let u = random_unitary(n, &mut rng);
            let dev = u.adjoint() * &u - CMatrix::identity(n, n);
            assert!(frobenius(&dev) < 1e-12);
        }
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(random_unitary(4, &mut a), random_unitary(4, &mut b));
        assert_eq!(random_unit_vector(4, &mut a), random_unit_vector(4, &mut b));
    }

    #[test]
    fn sphere_second_moment() {
        // E|x_1|² = 1/n on the uniform sphere
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let samples = 10_000;
        let mean = (0..samples)
            .map(|_| random_unit_vector(4, &mut rng)[0].norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.25).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn haar_invariance_first_moment() {
        // |(WU)_{11}|² and |U_{11}|² share the Haar mean 1/n
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let fixed = random_unitary(3, &mut rng);
        let trials = 4000;
        let (mut plain, mut rotated) = (0.0, 0.0);
        for _ in 0..trials {
            let u = random_unitary(3, &mut rng);
            plain += u[(0, 0)].norm_sqr();
            rotated += (&fixed * &u)[(0, 0)].norm_sqr();
        }
        plain /= trials as f64;
        rotated /= trials as f64;
        assert!((plain - 1.0 / 3.0).abs() < 0.02);
        assert!((rotated - 1.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn hermitian_coordinates_round_trip_and_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [1, 2, 5] {
            let a = random_hermitian(d, &mut rng);
            let p = HermitianParamVector::from_hermitian(&a, 1e-12).unwrap();
            assert_eq!(p.coords.len(), d * d);
            assert!(frobenius(&(p.to_hermitian() - &a)) < 1e-14);
            assert!((p.norm() - frobenius(&a)).abs() < 1e-12);
        }
    }

    #[test]
    fn pairing_and_sesquilinear_rows_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let w = random_hermitian(6, &mut rng);
        let coords = HermitianParamVector::from_hermitian(&w, 1e-12)
            .unwrap()
            .coords;
        let u = random_unit_vector(6, &mut rng);
        let v = random_unit_vector(6, &mut rng);
        let dot = |r: &[f64]| r.iter().zip(&coords).map(|(a, b)| a * b).sum::<f64>();
        assert!((dot(&pairing_row(&v)) - expectation(&w, &v).re).abs() < 1e-12);
        let (re, im) = sesquilinear_rows(&u, &v);
        let exact = u.dotc(&(&w * &v));
        assert!((dot(&re) - exact.re).abs() < 1e-12);
        assert!((dot(&im) - exact.im).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_of_swap_is_unnormalized_omega() {
        let n = 3;
        let swap = CMatrix::from_fn(n * n, n * n, |r, c| {
            if r / n == c % n && r % n == c / n {
                ONE
            } else {
                ZERO
            }
        });
        let pt = partial_transpose_first(&swap, n, n);
        let omega = CVector::from_fn(n * n, |k, _| if k / n == k % n { ONE } else { ZERO });
        assert!(frobenius(&(pt - projector(&omega))) < 1e-15);
    }
}
