//! Linear maps M_n → M_m stored through their Choi matrices.
//!
//! The Choi matrix of φ is W = Σ_ij e_ij ⊗ φ(e_ij) with e_ij the matrix units
//! of the computational basis of the input space, so
//! `W[(i·m + a, j·m + b)] = φ(e_ij)[a, b]`. The inverse is
//! φ(X) = Tr_in(W (Xᵗ ⊗ I_m)).

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    check_hermitian, conj_vec, expectation, frobenius, kron_vec, matrix_unit,
    partial_transpose_first, CMatrix, CVector, ZERO,
};

/// A Hermiticity-preserving linear map between matrix algebras.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMatrixMap {
    dim_in: usize,
    dim_out: usize,
    choi: CMatrix,
}

impl LinearMatrixMap {
    /// Wraps a Choi matrix of size nm×nm. Non-Hermitian input is rejected.
    pub fn from_choi(choi: CMatrix, n: usize, m: usize, tol: &Tolerances) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument("dimensions must be positive".into()));
        }
        if choi.nrows() != n * m || choi.ncols() != n * m {
            return Err(dim_mismatch(
                format!("{0}x{0}", n * m),
                format!("{}x{}", choi.nrows(), choi.ncols()),
            ));
        }
        check_hermitian(&choi, tol.hermitian)?;
        Ok(Self {
            dim_in: n,
            dim_out: m,
            choi,
        })
    }

    /// Builds the Choi matrix by evaluating `f` on every matrix unit e_ij of M_n.
    pub fn from_action<F>(n: usize, m: usize, f: F) -> Result<Self>
    where
        F: Fn(&CMatrix) -> CMatrix,
    {
        let mut choi = CMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let image = f(&matrix_unit(n, n, i, j));
                if image.nrows() != m || image.ncols() != m {
                    return Err(dim_mismatch(
                        format!("{m}x{m}"),
                        format!("{}x{}", image.nrows(), image.ncols()),
                    ));
                }
                choi.view_mut((i * m, j * m), (m, m)).copy_from(&image);
            }
        }
        Self::from_choi(choi, n, m, &Tolerances::default())
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    pub fn into_choi(self) -> CMatrix {
        self.choi
    }

    /// φ(X) = Tr_in(W (Xᵗ ⊗ I)).
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        let (n, m) = (self.dim_in, self.dim_out);
        if x.nrows() != n || x.ncols() != n {
            return Err(dim_mismatch(
                format!("{n}x{n}"),
                format!("{}x{}", x.nrows(), x.ncols()),
            ));
        }
        let mut out = CMatrix::zeros(m, m);
        for i in 0..n {
            for j in 0..n {
                let xij = x[(i, j)];
                if xij == ZERO {
                    continue;
                }
                out += self.choi.view((i * m, j * m), (m, m)) * xij;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dims(other)?;
        Ok(self.with_choi(&self.choi + &other.choi))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dims(other)?;
        Ok(self.with_choi(&self.choi - &other.choi))
    }

    pub fn scale(&self, lambda: f64) -> Self {
        self.with_choi(&self.choi * Complex64::from(lambda))
    }

    /// φ∘τ: the Choi matrix with its input factor transposed.
    pub fn compose_with_transpose(&self) -> Self {
        self.with_choi(partial_transpose_first(
            &self.choi,
            self.dim_in,
            self.dim_out,
        ))
    }

    /// ⟨y|φ(P_x)|y⟩ evaluated through the Choi matrix.
    pub fn pairing(&self, x: &CVector, y: &CVector, tol: &Tolerances) -> Result<f64> {
        witness_pairing(&self.choi, x, y, tol)
    }

    /// Representative of the ray [φ]: Tr W = nm when the trace is positive,
    /// otherwise unit Frobenius norm with the first nonzero coordinate positive.
    pub fn ray_representative(&self) -> CMatrix {
        ray_representative(&self.choi, self.dim_in * self.dim_out)
    }

    /// φ ∈ [ψ] for positive multiples only.
    pub fn same_ray(&self, other: &Self, tol: &Tolerances) -> bool {
        self.dim_in == other.dim_in
            && self.dim_out == other.dim_out
            && same_ray(&self.choi, &other.choi, tol.proportionality)
    }

    fn with_choi(&self, choi: CMatrix) -> Self {
        Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            choi,
        }
    }

    fn check_same_dims(&self, other: &Self) -> Result<()> {
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out) {
            return Err(dim_mismatch(
                format!("M_{} -> M_{}", self.dim_in, self.dim_out),
                format!("M_{} -> M_{}", other.dim_in, other.dim_out),
            ));
        }
        Ok(())
    }
}

/// The vector x̄ ⊗ y at which a Choi matrix is paired to evaluate ⟨y|φ(P_x)|y⟩.
///
/// With W = Σ e_ij ⊗ φ(e_ij) one has ⟨x̄⊗y|W|x̄⊗y⟩ = ⟨y|φ(P_x)|y⟩ for every
/// map. For maps commuting with entrywise conjugation (all real-coefficient
/// maps) this also equals ⟨x⊗ȳ|W|x⊗ȳ⟩. This is the only place where map
/// coordinates (x, y) are converted to witness coordinates.
pub fn witness_vector(x: &CVector, y: &CVector) -> CVector {
    kron_vec(&conj_vec(x), y)
}

/// ⟨y|φ(P_x)|y⟩ computed from the Choi matrix, checked to be real.
pub fn witness_pairing(w: &CMatrix, x: &CVector, y: &CVector, tol: &Tolerances) -> Result<f64> {
    let d = x.len() * y.len();
    if w.nrows() != d || w.ncols() != d {
        return Err(dim_mismatch(
            format!("{d}x{d}"),
            format!("{}x{}", w.nrows(), w.ncols()),
        ));
    }
    let value = expectation(w, &witness_vector(x, y));
    let scale = frobenius(w).max(1.0) * x.norm_squared() * y.norm_squared();
    if value.im.abs() > tol.pairing_imag * scale.max(1.0) {
        return Err(Error::NonRealPairing { imag: value.im });
    }
    Ok(value.re)
}

pub fn ray_representative(w: &CMatrix, target_trace: usize) -> CMatrix {
    let trace = w.trace().re;
    let norm = frobenius(w);
    if trace > 1e-12 * norm.max(1.0) {
        return w * Complex64::from(target_trace as f64 / trace);
    }
    if norm == 0.0 {
        return w.clone();
    }
    let mut out = w / Complex64::from(norm);
    // column-major scan over the real coordinates
    let first = out
        .iter()
        .flat_map(|z| [z.re, z.im])
        .find(|c| c.abs() > 1e-12);
    if matches!(first, Some(c) if c < 0.0) {
        out = -out;
    }
    out
}

/// ‖A/‖A‖ − B/‖B‖‖_F ≤ tol.
pub fn same_ray(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    let (na, nb) = (frobenius(a), frobenius(b));
    if na == 0.0 || nb == 0.0 {
        return na == nb;
    }
    frobenius(&(a / Complex64::from(na) - b / Complex64::from(nb))) <= tol
}

/// Identity map on M_n.
pub fn identity_map(n: usize) -> LinearMatrixMap {
    LinearMatrixMap::from_action(n, n, |x| x.clone()).expect("identity map is well formed")
}
