//! Tolerances and search budgets shared by every module.
//!
//! Each operation that depends on a threshold takes one of these records, so
//! the defaults below are the only place numerical cut-offs are chosen.

use serde::{Deserialize, Serialize};

/// How independent tasks (restarts, samples, candidates) are executed.
///
/// `Parallel` falls back to sequential execution when the crate is built
/// without the `parallel` feature. Results are identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative Hermiticity tolerance: ‖A − A†‖_F ≤ hermitian·max(1, ‖A‖_F).
    pub hermitian: f64,
    /// Imaginary residue allowed in a pairing ⟨v|W|v⟩ (relative to max(1, ‖W‖_F)).
    pub pairing_imag: f64,
    /// Unitarity / antisymmetry tolerance for catalog inputs (absolute, Frobenius).
    pub structure: f64,
    /// Complete positivity: λ_min ≥ −cp·‖W‖_F.
    pub cp: f64,
    /// Density operator checks (PSD and unit trace).
    pub state: f64,
    /// Entanglement detection threshold on Tr(ρW).
    pub detection: f64,
    /// Ray proportionality threshold on normalized Choi matrices.
    pub proportionality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            pairing_imag: 1e-12,
            structure: 1e-10,
            cp: 1e-10,
            state: 1e-10,
            detection: 1e-9,
            proportionality: 1e-8,
        }
    }
}

/// Settings for the see-saw block-positivity certifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stationarity threshold on the decrease of the objective, relative to max(1, ‖W‖_F).
    pub stationarity: f64,
    /// Verdict threshold: a minimum below −tol certifies a violation.
    pub tol: f64,
    pub execution: Execution,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 500,
            stationarity: 1e-12,
            tol: 1e-9,
            execution: Execution::default(),
        }
    }
}

/// Settings for dual-face sampling, the double-dual null space and the cone search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExposednessConfig {
    /// Number of dual-face pairs; `None` means the oversampling rule 2·(nm)².
    pub samples: Option<usize>,
    /// Relative singular-value cutoff for the null space.
    pub rel_tol: f64,
    /// A product pair belongs to the dual face when |pairing| ≤ zero_tol.
    pub zero_tol: f64,
    /// Add first-order stationarity rows to the constraint system.
    pub first_order: bool,
    /// Number of cone-search candidates.
    pub budget: usize,
    /// Supergradient steps per cone-search candidate.
    pub ascent_steps: usize,
    /// Upper bound on the weight of the map's own direction in a candidate.
    pub max_ray_weight: f64,
    pub seesaw: SeeSawConfig,
    pub tolerances: Tolerances,
}

impl Default for ExposednessConfig {
    fn default() -> Self {
        Self {
            samples: None,
            rel_tol: 1e-8,
            zero_tol: 1e-9,
            first_order: true,
            budget: 2000,
            ascent_steps: 60,
            max_ray_weight: 1e3,
            seesaw: SeeSawConfig::default(),
            tolerances: Tolerances::default(),
        }
    }
}
