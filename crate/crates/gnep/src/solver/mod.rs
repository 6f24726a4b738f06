//! Alternating primal-dual solver: inner Jacobi projected-gradient loop on a
//! quadratic surrogate, exact perturbation and multiplier steps, outer stopping.

mod config;
mod lipschitz;
pub mod monitor;
mod solve;
mod steps;
mod trace;

pub use config::{GammaPolicy, SigmaSchedule, SigmaScope, SolverConfig};
pub use lipschitz::{
    choose_gamma, choose_sigma, choose_sigma_scoped, estimate_lipschitz, gamma_bound, LipschitzEstimates, SigmaChoice, GAMMA_FLOOR,
};
pub use solve::{run_bounds, solve, SolveFailure, SolveResult, SolveStatus};
pub use steps::{inner_residual, inner_step, solve_inner, step_duals, step_z, stopping_residual, InnerOutcome};
pub use trace::{trace_header, IterationRecord, PlayerRecord, SolveTrace};
