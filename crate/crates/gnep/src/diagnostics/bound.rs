use super::projected::projected_gradient_player;
use crate::error::{GnepError, Result};
use crate::lagrangian::PenaltyParams;
use crate::linalg::{norm2, spectral_norm};
use crate::model::GameInstance;
use crate::solver::monitor::Violation;
use crate::solver::SolveTrace;

/// Run-wide quantities entering the projected-gradient constant.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMaxima {
    /// Largest multiplier norm of each player.
    pub lambda: Vec<f64>,
    /// Largest own-block constraint Jacobian norm of each player.
    pub own_jacobian: Vec<f64>,
}

pub fn run_maxima(game: &GameInstance, trace: &SolveTrace) -> Result<RunMaxima> {
    let np = game.num_players();
    let n = game.n();
    let mut out = RunMaxima {
        lambda: vec![0.0; np],
        own_jacobian: vec![0.0; np],
    };
    for s in &trace.iterates {
        for nu in 0..np {
            out.lambda[nu] = out.lambda[nu].max(norm2(&s.duals[nu].lambda));
            let m = game.player(nu)?.m();
            if m == 0 {
                continue;
            }
            let jac = game.constraint_jacobian(nu, &s.x)?;
            let r = game.layout.range(nu)?;
            let own: Vec<f64> = (0..m).flat_map(|i| jac[i * n + r.start..i * n + r.end].to_vec()).collect();
            out.own_jacobian[nu] = out.own_jacobian[nu].max(spectral_norm(&own, m, r.len()));
        }
    }
    Ok(out)
}

/// `2 + gamma + L_theta + |L_g| B_lambda + R_g L_gfun / beta + L_gfun` for record `k` (0-based).
pub fn bound_constant(trace: &SolveTrace, maxima: &RunMaxima, p: &PenaltyParams, k: usize, nu: usize) -> f64 {
    let r = &trace.records[k].players[nu];
    2.0 + r.gamma
        + r.l_theta
        + r.l_g_norm * maxima.lambda[nu]
        + maxima.own_jacobian[nu] * r.l_gfun / p.beta[nu]
        + r.l_gfun
}

/// Iterations where a player's projected-gradient norm exceeds `C |x^{k+1} - x^k| + slack`.
///
/// Needs a trace recorded with iterates.
pub fn projected_gradient_bound_violations(
    game: &GameInstance,
    trace: &SolveTrace,
    p: &PenaltyParams,
    slack: f64,
) -> Result<Vec<Violation>> {
    if trace.iterates.len() != trace.records.len() + 1 {
        return Err(GnepError::Config("trace was recorded without iterates".into()));
    }
    let maxima = run_maxima(game, trace)?;
    let mut out = Vec::new();
    for (k, rec) in trace.records.iter().enumerate() {
        let next = &trace.iterates[k + 1];
        for nu in 0..game.num_players() {
            let lhs = projected_gradient_player(game, next, p, nu)?.total();
            let rhs = bound_constant(trace, &maxima, p, k, nu) * rec.dx_2 + slack;
            if lhs > rhs {
                out.push(Violation {
                    k: rec.k,
                    player: nu,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(out)
}

/// Iterations after which the perturbation or proximal blocks are not exactly zero.
pub fn perturbation_block_residue(game: &GameInstance, trace: &SolveTrace, p: &PenaltyParams) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for s in trace.iterates.iter().skip(1) {
        for nu in 0..game.num_players() {
            let q = projected_gradient_player(game, s, p, nu)?;
            if q.z != 0.0 || q.mu != 0.0 {
                out.push(Violation {
                    k: s.outer_k,
                    player: nu,
                    lhs: q.z.max(q.mu),
                    rhs: 0.0,
                });
            }
        }
    }
    Ok(out)
}
