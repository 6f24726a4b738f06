//! Checks that a returned point is an equilibrium: KKT residuals, a reference
//! best-response oracle, saddle-inequality sampling and the projected gradient.

mod best_response;
mod bound;
mod kkt;
mod projected;
mod saddle;

pub use best_response::{best_response, best_response_gap, BestResponse, BestResponseOptions};
pub use bound::{bound_constant, perturbation_block_residue, projected_gradient_bound_violations, run_maxima, RunMaxima};
pub use kkt::{kkt_residual, kkt_residual_player, KktResidual};
pub use projected::{projected_gradient, projected_gradient_norm, projected_gradient_player, ProjectedGradient};
pub use saddle::{saddle_check, SaddleReport, SADDLE_SLACK};

use crate::error::Result;
use crate::lagrangian::PenaltyParams;
use crate::linalg::norm2;
use crate::model::{GameInstance, IterateState};

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerDiagnostics {
    pub stationarity: f64,
    pub complementarity: f64,
    pub feasibility: f64,
    pub best_response_gap: f64,
    pub lambda_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub players: Vec<PlayerDiagnostics>,
    pub projected_gradient_norm: f64,
    pub saddle: SaddleReport,
}

impl DiagnosticsReport {
    /// Largest stationarity, complementarity or feasibility residual.
    pub fn max_kkt(&self) -> f64 {
        self.players
            .iter()
            .map(|p| p.stationarity.max(p.complementarity).max(p.feasibility))
            .fold(0.0, f64::max)
    }

    pub fn max_gap(&self) -> f64 {
        self.players.iter().map(|p| p.best_response_gap).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnoseOptions {
    pub saddle_samples: usize,
    pub seed: u64,
    /// Skip the best-response oracle and report NaN gaps.
    pub skip_best_response: bool,
    pub best_response: BestResponseOptions,
}

impl Default for DiagnoseOptions {
    fn default() -> Self {
        Self {
            saddle_samples: 1000,
            seed: 0,
            skip_best_response: false,
            best_response: BestResponseOptions::default(),
        }
    }
}

pub fn diagnose(game: &GameInstance, state: &IterateState, p: &PenaltyParams, opts: &DiagnoseOptions) -> Result<DiagnosticsReport> {
    let lambdas: Vec<Vec<f64>> = state.duals.iter().map(|d| d.lambda.clone()).collect();
    let kkt = kkt_residual(game, &state.x, &lambdas)?;
    let mut players = Vec::with_capacity(kkt.len());
    for (nu, r) in kkt.into_iter().enumerate() {
        let gap = if opts.skip_best_response {
            f64::NAN
        } else {
            best_response_gap(game, &state.x, nu, &opts.best_response)?
        };
        players.push(PlayerDiagnostics {
            stationarity: r.stationarity,
            complementarity: r.complementarity,
            feasibility: r.feasibility,
            best_response_gap: gap,
            lambda_norm: norm2(&lambdas[nu]),
        });
    }
    Ok(DiagnosticsReport {
        players,
        projected_gradient_norm: projected_gradient_norm(game, state, p)?,
        saddle: saddle_check(game, state, p, opts.saddle_samples, opts.seed)?,
    })
}
