//! The `conewitness` command line.
//!
//! Exit codes: 0 success, 2 invalid input or parameters, 3 convergence
//! failure, 4 exposedness input not block-positive, 5 a verify suite failed,
//! 1 output could not be written. Verdicts are reported in the output, never
//! through the exit code.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{AntisymmetricUnitary, ChoiFamilyParams, MapDescriptor};
use crate::config::{Execution, ExposednessConfig, SeeSawConfig, Tolerances};
use crate::error::{Error, Result};
use crate::exposedness::{exposedness_report, verify_bh_structure, verify_lemma1, Counterexample};
use crate::io::{self, canonical_json, float, matrix_value, vector_value};
use crate::linalg::{random_unit_vector, random_unitary, CMatrix};
use crate::maps::LinearMatrixMap;
use crate::positivity::{
    block_positivity_min, check_state, classify, detect_entanglement, is_completely_copositive,
    is_completely_positive, ProductPair,
};

pub const SEED_ENV: &str = "CONEWITNESS_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "conewitness",
    version,
    about = "Positive maps, entanglement witnesses and exposedness checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the output here instead of stdout (atomically).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run restarts and candidates on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Emit the Choi matrix of a catalog map.
    Catalog {
        #[command(subcommand)]
        map: MapArgs,
    },
    /// Block-positivity, complete positivity or complete copositivity of a Choi matrix.
    Check(CheckArgs),
    /// Tr(ρW) for a state and a witness.
    Detect { state: PathBuf, witness: PathBuf },
    /// Exposedness report for a catalog map or a Choi file.
    Exposedness(ExposednessArgs),
    /// Numerical verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapArgs {
    /// X ↦ Xᵗ on M_n.
    Transpose {
        #[arg(long)]
        n: usize,
    },
    /// X ↦ I Tr X − X on M_n.
    Reduction {
        #[arg(long)]
        n: usize,
    },
    /// φ[a,b,c] on M₃
    ChoiFamily {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
    },
    /// Uses the antisymmetric unitary in --u, or I ⊗ σ_y of size --dim.
    BreuerHall {
        #[arg(long)]
        u: Option<PathBuf>,
        #[arg(long, default_value_t = 4, conflicts_with = "u")]
        dim: usize,
    },
    /// Robertson map on M₄
    Robertson,
    /// X ↦ V X V*.
    Ad {
        #[arg(long)]
        v: PathBuf,
    },
    /// X ↦ V Xᵗ V*.
    CoAd {
        #[arg(long)]
        v: PathBuf,
    },
    /// A map given by its Choi matrix on Cⁿ ⊗ Cᵐ.
    FromChoi {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    BlockPositive,
    Cp,
    Ccp,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    pub choi: PathBuf,
    #[arg(long, value_enum, default_value = "block-positive")]
    pub mode: CheckMode,
    /// Input dimension; defaults to √rows when --m is absent.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub restarts: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExposednessArgs {
    #[command(subcommand)]
    pub map: MapArgs,
    /// Dual-face pairs; defaults to 2·(nm)².
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Cone-search candidates.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Constrain only the pairing values, without the first-order rows.
    #[arg(long, global = true)]
    pub pairing_only: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma1,
    BhStructure,
    RobertsonEquality,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Even dimension 2n for the random draws.
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    /// Fixed antisymmetric unitary for bh-structure.
    #[arg(long)]
    pub u: Option<PathBuf>,
}

pub const LEMMA1_TOL: f64 = 1e-10;
pub const ROBERTSON_TOL: f64 = 1e-12;

/// A finished command: text to emit plus the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ConvergenceFailure(_) => 3,
        Error::NotPositiveMap => 4,
        _ => 2,
    }
}

/// Runs a parsed command line, writing the output and returning the exit code.
pub fn main_with(cli: Cli) -> i32 {
    let outcome = match execute(&cli.command, execution(cli.sequential)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => io::write_atomic(path, &outcome.text),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    outcome.code
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

pub fn execute(command: &Command, execution: Execution) -> Result<Outcome> {
    let echo = serde_json::to_value(command).expect("arguments serialize");
    match command {
        Command::Catalog { map } => {
            let map = descriptor(map)?.build()?;
            Ok(Outcome {
                text: canonical_json(&matrix_value(map.choi(), Some(true))),
                code: 0,
            })
        }
        Command::Check(args) => check(args, echo, execution),
        Command::Detect { state, witness } => detect(state, witness, echo),
        Command::Exposedness(args) => exposedness(args, echo, execution),
        Command::Verify(args) => verify(args, echo),
    }
}

fn read_unitary(path: &Path, tol: &Tolerances) -> Result<AntisymmetricUnitary> {
    AntisymmetricUnitary::new(io::read_matrix(path)?, tol)
}

pub fn descriptor(map: &MapArgs) -> Result<MapDescriptor> {
    let tol = Tolerances::default();
    Ok(match map {
        MapArgs::Transpose { n } => MapDescriptor::Transposition { n: *n },
        MapArgs::Reduction { n } => MapDescriptor::Reduction { n: *n },
        MapArgs::ChoiFamily { a, b, c } => {
            MapDescriptor::ChoiFamily(ChoiFamilyParams::new(*a, *b, *c)?)
        }
        MapArgs::BreuerHall { u: Some(path), .. } => MapDescriptor::BreuerHall {
            u: read_unitary(path, &tol)?,
        },
        MapArgs::BreuerHall { u: None, dim } => MapDescriptor::BreuerHall {
            u: AntisymmetricUnitary::canonical(*dim)?,
        },
        MapArgs::Robertson => MapDescriptor::Robertson,
        MapArgs::Ad { v } => MapDescriptor::Ad {
            v: io::read_matrix(v)?,
        },
        MapArgs::CoAd { v } => MapDescriptor::CoAd {
            v: io::read_matrix(v)?,
        },
        MapArgs::FromChoi { file, n, m } => {
            let choi = io::read_matrix(file)?;
            let (n, m) = split_dims(choi.nrows(), choi.ncols(), *n, *m)?;
            LinearMatrixMap::from_choi(choi.clone(), n, m, &tol)?;
            MapDescriptor::FromChoi { choi, n, m }
        }
    })
}

/// Resolves (n, m) for a Choi matrix with `rows` × `cols` entries.
fn split_dims(
    rows: usize,
    cols: usize,
    n: Option<usize>,
    m: Option<usize>,
) -> Result<(usize, usize)> {
    if rows != cols {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{rows}x{cols}"),
        });
    }
    let (n, m) = match (n, m) {
        (Some(n), Some(m)) => (n, m),
        (Some(n), None) if n > 0 && rows.is_multiple_of(n) => (n, rows / n),
        (None, Some(m)) if m > 0 && rows.is_multiple_of(m) => (rows / m, m),
        (None, None) => {
            let r = (rows as f64).sqrt().round() as usize;
            (r, r)
        }
        (n, m) => {
            return Err(Error::DimensionMismatch {
                expected: format!("factors of {rows}"),
                found: format!("n={n:?}, m={m:?}"),
            })
        }
    };
    if n == 0 || m == 0 || n * m != rows {
        return Err(Error::DimensionMismatch {
            expected: format!("n·m = {rows}"),
            found: format!("n={n}, m={m}"),
        });
    }
    Ok((n, m))
}

fn pair_value(p: &ProductPair) -> Value {
    json!({ "x": vector_value(&p.x), "y": vector_value(&p.y) })
}

fn check(args: &CheckArgs, echo: Value, execution: Execution) -> Result<Outcome> {
    let tol = Tolerances::default();
    let choi = io::read_matrix(&args.choi)?;
    let (n, m) = split_dims(choi.nrows(), choi.ncols(), args.n, args.m)?;
    let map = LinearMatrixMap::from_choi(choi, n, m, &tol)?;
    let mut seesaw = SeeSawConfig {
        execution,
        ..SeeSawConfig::default()
    };
    if let Some(r) = args.restarts {
        seesaw.restarts = r;
    }
    let mut code = 0;
    let (config, result) = match args.mode {
        CheckMode::BlockPositive => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let report = block_positivity_min(map.choi(), n, m, &seesaw, &mut rng)?;
            if !report.converged {
                eprintln!("error: {}", report.ensure_converged().unwrap_err());
                code = 3;
            }
            let check = classify(report, seesaw.tol);
            let r = &check.report;
            let result = json!({
                "verdict": check.verdict,
                "min_value": float(r.min_value),
                "argmin": pair_value(&r.argmin),
                "certificate": check.certificate().map(pair_value),
                "restarts_used": r.restarts_used,
                "converged": r.converged,
                "iterations": r.iterations,
                "tolerance": float(r.tolerance),
            });
            (config_value(&seesaw), result)
        }
        CheckMode::Cp | CheckMode::Ccp => {
            let report = if matches!(args.mode, CheckMode::Cp) {
                is_completely_positive(&map, &tol)?
            } else {
                is_completely_copositive(&map, &tol)?
            };
            (
                config_value(&tol),
                serde_json::to_value(report).expect("report serializes"),
            )
        }
    };
    let mut result = result;
    result["dims"] = json!([n, m]);
    Ok(Outcome {
        text: canonical_json(&io::report(echo, Some(args.seed), config, result)),
        code,
    })
}

fn config_value<T: Serialize>(c: &T) -> Value {
    serde_json::to_value(c).expect("config serializes")
}

fn detect(state: &Path, witness: &Path, echo: Value) -> Result<Outcome> {
    let tol = Tolerances::default();
    let rho = io::read_matrix(state)?;
    let w = io::read_matrix(witness)?;
    check_state(&rho, &tol)?;
    let report = detect_entanglement(&rho, &w, &tol)?;
    let result = json!({
        "value": float(report.value),
        "verdict": report.verdict,
        "tolerance": float(report.tolerance),
    });
    Ok(Outcome {
        text: canonical_json(&io::report(echo, None, config_value(&tol), result)),
        code: 0,
    })
}

fn counterexample_value(c: &Counterexample) -> Value {
    json!({
        "choi": matrix_value(&c.choi, Some(true)),
        "ray_distance": float(c.ray_distance),
        "constraint_residual": float(c.constraint_residual),
        "candidate_index": c.candidate_index,
        "evidence": {
            "min_value": float(c.evidence.min_value),
            "argmin": pair_value(&c.evidence.argmin),
            "restarts_used": c.evidence.restarts_used,
            "converged": c.evidence.converged,
        },
    })
}

fn exposedness(args: &ExposednessArgs, echo: Value, execution: Execution) -> Result<Outcome> {
    let desc = descriptor(&args.map)?;
    let mut config = ExposednessConfig {
        samples: args.samples,
        first_order: !args.pairing_only,
        ..ExposednessConfig::default()
    };
    config.seesaw.execution = execution;
    if let Some(b) = args.budget {
        config.budget = b;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let report = exposedness_report(&desc, &config, &mut rng)?;
    let (n, m) = desc.dims();
    let result = json!({
        "map": desc.name(),
        "dims": [n, m],
        "verdict": report.verdict,
        "nullspace_dim": report.nullspace_dim,
        "samples_used": report.samples_used,
        "counterexample": report.counterexample.as_ref().map(counterexample_value),
        "diagnostics": report.diagnostics,
    });
    Ok(Outcome {
        text: canonical_json(&io::report(
            echo,
            Some(args.seed),
            config_value(&config),
            result,
        )),
        code: 0,
    })
}

fn verify(args: &VerifyArgs, echo: Value) -> Result<Outcome> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let result = match args.suite {
        Suite::Lemma1 => {
            if args.dim % 2 == 1 {
                return Err(Error::OddDimension(args.dim));
            }
            let mut worst = 0.0_f64;
            for _ in 0..args.trials {
                let v = random_unitary(args.dim, &mut rng);
                let x = random_unit_vector(args.dim, &mut rng);
                worst = worst.max(verify_lemma1(&v, &x, &tol)?);
            }
            json!({
                "max_residual": float(worst),
                "tolerance": float(LEMMA1_TOL),
                "passed": worst <= LEMMA1_TOL,
            })
        }
        Suite::BhStructure => {
            let fixed = args
                .u
                .as_deref()
                .map(|p| read_unitary(p, &tol))
                .transpose()?;
            if fixed.is_none() && args.dim % 2 == 1 {
                return Err(Error::OddDimension(args.dim));
            }
            let (mut action, mut reduction, mut orth, mut flipped) =
                (0.0_f64, 0.0_f64, 0.0_f64, f64::NEG_INFINITY);
            let mut passed = true;
            for _ in 0..args.trials {
                let u = match &fixed {
                    Some(u) => u.clone(),
                    None => crate::catalog::random_antisymmetric_unitary(args.dim, &mut rng)?,
                };
                let x = random_unit_vector(u.dim(), &mut rng);
                let r = verify_bh_structure(&u, &x, &tol)?;
                action = action.max(r.action_residual);
                reduction = reduction.max(r.reduction_residual);
                orth = orth.max(r.orthogonality);
                flipped = flipped.max(r.flipped_min_eigenvalue);
                passed &= r.passed;
            }
            json!({
                "max_action_residual": float(action),
                "max_reduction_residual": float(reduction),
                "max_orthogonality": float(orth),
                "max_flipped_min_eigenvalue": float(flipped),
                "max_residual": float(action.max(reduction).max(orth)),
                "tolerances": {
                    "action": float(crate::exposedness::BH_ACTION_TOL),
                    "reduction": float(crate::exposedness::BH_REDUCTION_TOL),
                    "orthogonality": float(crate::exposedness::BH_ORTHOGONALITY_TOL),
                },
                "passed": passed && args.trials > 0,
            })
        }
        Suite::RobertsonEquality => {
            let rob = crate::catalog::robertson();
            let bh = crate::catalog::breuer_hall(&AntisymmetricUnitary::canonical(4)?);
            let diff: CMatrix = rob.choi() - bh.choi();
            let worst = diff.iter().map(|z| z.norm()).fold(0.0, f64::max);
            json!({
                "max_residual": float(worst),
                "tolerance": float(ROBERTSON_TOL),
                "passed": worst <= ROBERTSON_TOL,
            })
        }
    };
    let code = if result["passed"] == Value::Bool(true) {
        0
    } else {
        5
    };
    Ok(Outcome {
        text: canonical_json(&io::report(
            echo,
            Some(args.seed),
            config_value(&tol),
            result,
        )),
        code,
    })
}
