use thiserror::Error;

use crate::model::{Branch, ParamViolation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {}", join(.0))]
    InvalidParams(Vec<ParamViolation>),

    #[error("pump {pump} is within the threshold guard band (E/E_th = {ratio}); linearization is invalid at threshold")]
    AtThreshold { pump: f64, ratio: f64 },

    #[error("unequal pumps or nonlinearities are not supported: {0}")]
    AsymmetricPumps(String),

    #[error("operation requires the {expected} branch, steady state is {found}")]
    WrongBranch { expected: Branch, found: Branch },

    #[error("drift matrix is not stable (largest eigenvalue real part {max_real:e})")]
    Unstable { max_real: f64 },

    #[error("quadrature selector mixes pump and signal modes with different decay rates")]
    MixedDecay,

    #[error("conditioning spectrum {value:e} at omega = {omega} is too small to infer from")]
    DegenerateInference { omega: f64, value: f64 },

    #[error("all {n_traj} trajectories diverged")]
    AllDiverged { n_traj: usize },

    #[error("need at least 2 trajectories for error estimates, have {n}")]
    InsufficientData { n: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}

fn join(v: &[ParamViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
