//! Block-positivity certification by see-saw optimization over product
//! vectors, plus the Choi-matrix tests for complete (co)positivity and
//! witness-based entanglement detection.
//!
//! Internally the optimizer works in witness coordinates, minimizing
//! ⟨u⊗z|W|u⊗z⟩ over unit u, z. Reported pairs are in map coordinates
//! (x = ū, y = z), so `witness_pairing(W, x, y)` reproduces the reported value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{SeeSawConfig, Tolerances};
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    bottom_eigenpair, check_hermitian, conj_vec, eigh, frobenius, random_unit_vector, CMatrix,
    CVector, ZERO,
};
use crate::maps::{witness_pairing, witness_vector, LinearMatrixMap};
use crate::par;

/// Unit vectors x ∈ Cⁿ, y ∈ Cᵐ describing the product state P_x ⊗ P_y.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPair {
    pub x: CVector,
    pub y: CVector,
}

impl ProductPair {
    /// Validates that both vectors have unit norm to 1e-12.
    pub fn new(x: CVector, y: CVector) -> Result<Self> {
        for (label, v) in [("x", &x), ("y", &y)] {
            if (v.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "{label} must be a unit vector, has norm {}",
                    v.norm()
                )));
            }
        }
        Ok(Self { x, y })
    }

    /// The vector x̄ ⊗ y in witness coordinates.
    pub fn witness_vector(&self) -> CVector {
        witness_vector(&self.x, &self.y)
    }

    /// ⟨y|φ(P_x)|y⟩ for the map with Choi matrix `w`.
    pub fn pairing(&self, w: &CMatrix, tol: &Tolerances) -> Result<f64> {
        witness_pairing(w, &self.x, &self.y, tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockPositivityReport {
    pub min_value: f64,
    pub argmin: ProductPair,
    pub restarts_used: usize,
    /// False when some restart ran out of iterations before stationarity.
    pub converged: bool,
    pub tolerance: f64,
    /// Total see-saw sweeps over all restarts.
    pub iterations: usize,
}

impl BlockPositivityReport {
    pub fn ensure_converged(&self) -> Result<()> {
        if self.converged {
            Ok(())
        } else {
            Err(Error::ConvergenceFailure(format!(
                "see-saw restart exceeded the iteration limit (best value {:e})",
                self.min_value
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BlockPositivityVerdict {
    /// A product vector with pairing below −tol was found.
    CertifiedNotBp,
    /// No violation found; evidence for, not proof of, block-positivity.
    EvidenceBp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockPositivityCheck {
    pub verdict: BlockPositivityVerdict,
    pub report: BlockPositivityReport,
}

impl BlockPositivityCheck {
    /// The violating pair, when the verdict is a certified violation.
    pub fn certificate(&self) -> Option<&ProductPair> {
        (self.verdict == BlockPositivityVerdict::CertifiedNotBp).then_some(&self.report.argmin)
    }
}

/// (M_x)_{ab} = Σ_ij x̄_i x_j W[(i,a),(j,b)]: W contracted with x on the first factor.
fn contract_first(w: &CMatrix, x: &CVector, n: usize, m: usize) -> CMatrix {
    let mut out = CMatrix::zeros(m, m);
    for i in 0..n {
        let xi = x[i].conj();
        if xi == ZERO {
            continue;
        }
        for j in 0..n {
            let coeff = xi * x[j];
            if coeff == ZERO {
                continue;
            }
            for b in 0..m {
                for a in 0..m {
                    out[(a, b)] += coeff * w[(i * m + a, j * m + b)];
                }
            }
        }
    }
    hermitize(out)
}

/// (N_z)_{ij} = Σ_ab z̄_a z_b W[(i,a),(j,b)]: W contracted with z on the second factor.
fn contract_second(w: &CMatrix, z: &CVector, n: usize, m: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mut acc = ZERO;
            for a in 0..m {
                let za = z[a].conj();
                for b in 0..m {
                    acc += za * z[b] * w[(i * m + a, j * m + b)];
                }
            }
            out[(i, j)] = acc;
        }
    }
    hermitize(out)
}

// Contractions of a Hermitian W are Hermitian up to rounding; the eigensolver
// only reads one triangle, so make both agree.
fn hermitize(a: CMatrix) -> CMatrix {
    (&a + a.adjoint()) * num_complex::Complex64::from(0.5)
}

/// One see-saw descent in witness coordinates.
#[derive(Debug, Clone)]
pub(crate) struct SeeSawRun {
    pub value: f64,
    pub x: CVector,
    pub z: CVector,
    pub sweeps: usize,
    pub converged: bool,
    /// Objective after every half-step.
    pub trace: Vec<f64>,
}

pub(crate) fn seesaw_from(
    w: &CMatrix,
    n: usize,
    m: usize,
    x0: CVector,
    config: &SeeSawConfig,
    keep_trace: bool,
) -> Result<SeeSawRun> {
    let scale = frobenius(w).max(1.0);
    let mut x = x0;
    let mut z;
    let mut previous = f64::INFINITY;
    let mut trace = Vec::new();
    let mut sweeps = 0;
    let mut converged = false;
    let mut value;
    loop {
        let (vz, new_z) = bottom_eigenpair(&contract_first(w, &x, n, m))?;
        z = new_z;
        let (vx, new_x) = bottom_eigenpair(&contract_second(w, &z, n, m))?;
        x = new_x;
        value = vx;
        if keep_trace {
            trace.push(vz);
            trace.push(vx);
        }
        sweeps += 1;
        if previous - value <= config.stationarity * scale {
            converged = true;
            break;
        }
        if sweeps >= config.max_iters {
            break;
        }
        previous = value;
    }
    Ok(SeeSawRun {
        value,
        x,
        z,
        sweeps,
        converged,
        trace,
    })
}

/// Objective trace of a single see-saw run from a given start, for diagnostics.
pub fn seesaw_trace(
    w: &CMatrix,
    n: usize,
    m: usize,
    x0: &CVector,
    config: &SeeSawConfig,
) -> Result<Vec<f64>> {
    check_dims(w, n, m)?;
    Ok(seesaw_from(w, n, m, x0.clone(), config, true)?.trace)
}

fn check_dims(w: &CMatrix, n: usize, m: usize) -> Result<()> {
    if w.nrows() != n * m || w.ncols() != n * m {
        return Err(dim_mismatch(
            format!("{0}x{0}", n * m),
            format!("{}x{}", w.nrows(), w.ncols()),
        ));
    }
    Ok(())
}

/// Deterministic per-task generator derived from a base seed.
pub(crate) fn task_rng(base: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index as u64);
    rng
}

/// Multistart see-saw minimum of ⟨x⊗y|W|x⊗y⟩ over unit product vectors.
///
/// The returned value is an upper bound on the true minimum. It certifies a
/// violation of block-positivity when it is below −tol; otherwise it is only
/// evidence of block-positivity.
pub fn block_positivity_min<R: Rng + ?Sized>(
    w: &CMatrix,
    n: usize,
    m: usize,
    config: &SeeSawConfig,
    rng: &mut R,
) -> Result<BlockPositivityReport> {
    block_positivity_min_with_starts(w, n, m, config, &[], rng)
}

/// As [`block_positivity_min`], additionally starting one restart from each of `starts`
/// (vectors in Cⁿ, the first factor).
pub fn block_positivity_min_with_starts<R: Rng + ?Sized>(
    w: &CMatrix,
    n: usize,
    m: usize,
    config: &SeeSawConfig,
    starts: &[CVector],
    rng: &mut R,
) -> Result<BlockPositivityReport> {
    check_dims(w, n, m)?;
    check_hermitian(w, Tolerances::default().hermitian)?;
    if config.restarts == 0 && starts.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one restart is required".into(),
        ));
    }
    let base: u64 = rng.random();
    let total = starts.len() + config.restarts;
    let runs = par::map_indexed(total, config.execution, |k| {
        let x0 = match starts.get(k) {
            Some(s) => s.normalize(),
            None => random_unit_vector(n, &mut task_rng(base, k)),
        };
        seesaw_from(w, n, m, x0, config, false)
    });
    let mut best: Option<SeeSawRun> = None;
    let mut converged = true;
    let mut iterations = 0;
    for run in runs {
        let run = run?;
        converged &= run.converged;
        iterations += run.sweeps;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let argmin = ProductPair {
        x: conj_vec(&best.x).normalize(),
        y: best.z.normalize(),
    };
    let min_value = argmin.pairing(w, &Tolerances::default())?;
    Ok(BlockPositivityReport {
        min_value,
        argmin,
        restarts_used: total,
        converged,
        tolerance: config.tol,
        iterations,
    })
}

/// Block-positivity verdict with tolerance `tol`.
pub fn is_block_positive<R: Rng + ?Sized>(
    w: &CMatrix,
    n: usize,
    m: usize,
    tol: f64,
    config: &SeeSawConfig,
    rng: &mut R,
) -> Result<BlockPositivityCheck> {
    let report = block_positivity_min(w, n, m, config, rng)?;
    Ok(classify(report, tol))
}

pub(crate) fn classify(report: BlockPositivityReport, tol: f64) -> BlockPositivityCheck {
    let verdict = if report.min_value < -tol {
        BlockPositivityVerdict::CertifiedNotBp
    } else {
        BlockPositivityVerdict::EvidenceBp
    };
    BlockPositivityCheck { verdict, report }
}

/// Result of a Choi-matrix eigenvalue test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpReport {
    pub holds: bool,
    pub min_eigenvalue: f64,
    pub threshold: f64,
}

/// Complete positivity: λ_min(W_φ) ≥ −cp·‖W_φ‖_F.
pub fn is_completely_positive(phi: &LinearMatrixMap, tol: &Tolerances) -> Result<CpReport> {
    let (values, _) = eigh(phi.choi(), tol.hermitian)?;
    let threshold = -tol.cp * frobenius(phi.choi());
    Ok(CpReport {
        holds: values[0] >= threshold,
        min_eigenvalue: values[0],
        threshold,
    })
}

/// Complete copositivity: φ∘τ is completely positive.
pub fn is_completely_copositive(phi: &LinearMatrixMap, tol: &Tolerances) -> Result<CpReport> {
    is_completely_positive(&phi.compose_with_transpose(), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DetectionVerdict {
    Detected,
    NotDetected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    /// Tr(ρW).
    pub value: f64,
    pub verdict: DetectionVerdict,
    pub tolerance: f64,
}

/// Evaluates Tr(ρW); the state is detected as entangled when the value is below −tol.
pub fn detect_entanglement(
    rho: &CMatrix,
    w: &CMatrix,
    tol: &Tolerances,
) -> Result<DetectionReport> {
    if rho.shape() != w.shape() {
        return Err(dim_mismatch(
            format!("{}x{}", w.nrows(), w.ncols()),
            format!("{}x{}", rho.nrows(), rho.ncols()),
        ));
    }
    check_hermitian(w, tol.hermitian)?;
    check_state(rho, tol)?;
    let value = (rho * w).trace();
    Ok(DetectionReport {
        value: value.re,
        verdict: if value.re < -tol.detection {
            DetectionVerdict::Detected
        } else {
            DetectionVerdict::NotDetected
        },
        tolerance: tol.detection,
    })
}

/// Checks that ρ is Hermitian, PSD and of unit trace within `tol.state`.
pub fn check_state(rho: &CMatrix, tol: &Tolerances) -> Result<()> {
    let (values, _) = eigh(rho, tol.hermitian).map_err(|e| match e {
        Error::NonHermitianInput { .. } => Error::NotAState("not Hermitian".into()),
        other => other,
    })?;
    if values[0] < -tol.state {
        return Err(Error::NotAState(format!(
            "negative eigenvalue {:e}",
            values[0]
        )));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > tol.state || trace.im.abs() > tol.state {
        return Err(Error::NotAState(format!("trace {trace} differs from 1")));
    }
    Ok(())
}
