//! Positive maps on matrix algebras and their entanglement witnesses.
//!
//! Maps are stored through their Choi matrices ([`maps`]), built from a
//! catalog of standard families ([`catalog`]), tested for block-positivity
//! and complete (co)positivity ([`positivity`]) and probed for exposedness
//! through their dual faces ([`exposedness`]).

pub mod catalog;
pub mod cli;
pub mod config;
pub mod error;
pub mod exposedness;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod par;
pub mod positivity;

pub use config::{Execution, ExposednessConfig, SeeSawConfig, Tolerances};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use maps::LinearMatrixMap;
