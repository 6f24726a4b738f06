use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GnepError, Result};
use crate::lagrangian::{eval_l, PenaltyParams};
use crate::linalg::norm2;
use crate::model::{GameInstance, IterateState, PlayerDualState};

pub const SADDLE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SaddleReport {
    pub samples: usize,
    /// Dual deviations that raise the Lagrangian above its value at the candidate.
    pub left_violations: usize,
    /// Feasible primal deviations that push it below.
    pub right_violations: usize,
    pub worst_left: f64,
    pub worst_right: f64,
}

impl SaddleReport {
    pub fn violations(&self) -> usize {
        self.left_violations + self.right_violations
    }
}

fn own_deviation(game: &GameInstance, nu: usize, x: &[f64], rng: &mut ChaCha8Rng) -> Result<Option<Vec<f64>>> {
    let r = game.layout.range(nu)?;
    let scale = 1.0 + x[r.clone()].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for _ in 0..50 {
        let radius = scale * rng.gen_range(0.0..1.0f64).powi(2);
        let mut v: Vec<f64> = x[r.clone()].iter().map(|a| a + radius * rng.gen_range(-1.0..1.0)).collect();
        game.player(nu)?.set.project_in_place(&mut v)?;
        let mut cand = x.to_vec();
        cand[r.clone()].copy_from_slice(&v);
        if game.constraints(nu, &cand)?.iter().all(|g| *g <= 0.0) {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// Samples both sides of the parametrized saddle inequality at `state`.
///
/// For each sample a player is drawn; the left side perturbs `(lambda, mu)`
/// and the right side draws a feasible own-block deviation with an arbitrary `z`.
pub fn saddle_check(
    game: &GameInstance,
    state: &IterateState,
    p: &PenaltyParams,
    samples: usize,
    seed: u64,
) -> Result<SaddleReport> {
    let np = game.num_players();
    if state.duals.len() != np {
        return Err(GnepError::DimensionMismatch { expected: np, got: state.duals.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<f64> = (0..np)
        .map(|nu| eval_l(game, nu, &state.x, &state.duals[nu], p))
        .collect::<Result<_>>()?;
    let mut rep = SaddleReport {
        samples,
        ..Default::default()
    };
    let mut right_attempts = 0usize;
    for s in 0..samples {
        let nu = s % np;
        let star = &state.duals[nu];
        let m = star.m();
        let hi = 2.0 * norm2(&star.lambda).max(1.0);
        let lambda: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..hi)).collect();
        let mu: Vec<f64> = star.mu.iter().map(|v| v + rng.gen_range(-1.0..1.0)).collect();
        let dev = PlayerDualState {
            z: star.z.clone(),
            lambda,
            mu,
        };
        let left = eval_l(game, nu, &state.x, &dev, p)? - base[nu];
        if left > SADDLE_SLACK {
            rep.left_violations += 1;
        }
        rep.worst_left = rep.worst_left.max(left);

        let Some(x_dev) = own_deviation(game, nu, &state.x, &mut rng)? else {
            right_attempts += 1;
            if right_attempts > samples {
                return Err(GnepError::DegenerateSampling { player: nu });
            }
            continue;
        };
        let dual = PlayerDualState {
            z: (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            lambda: star.lambda.clone(),
            mu: star.mu.clone(),
        };
        let right = base[nu] - eval_l(game, nu, &x_dev, &dual, p)?;
        if right > SADDLE_SLACK {
            rep.right_violations += 1;
        }
        rep.worst_right = rep.worst_right.max(right);
    }
    Ok(rep)
}
