//! Generalized Nash equilibrium solver based on a proximal-perturbed
//! Lagrangian with an alternating primal-dual update.
//!
//! ```
//! use gnep::problems::make_example3;
//! use gnep::solver::{solve, SolverConfig};
//!
//! let game = make_example3();
//! let res = solve(&game, &[2.0, 1.0], &SolverConfig::default()).unwrap();
//! assert!(res.status.is_success());
//! assert!((res.state.x[0] - 1.0).abs() < 1e-3);
//! ```

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod lagrangian;
pub mod linalg;
pub mod model;
mod par;
pub mod problems;
pub mod solver;

pub use error::{GnepError, Result};
