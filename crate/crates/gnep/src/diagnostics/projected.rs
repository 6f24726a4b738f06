use super::kkt::own_lagrangian_grad;
use crate::error::Result;
use crate::lagrangian::PenaltyParams;
use crate::linalg::{dist2, norm2};
use crate::model::{GameInstance, IterateState};

/// Norms of the four blocks of a player's projected Lagrangian gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedGradient {
    pub x: f64,
    pub z: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl ProjectedGradient {
    pub fn total(&self) -> f64 {
        self.x + self.z + self.lambda + self.mu
    }
}

pub fn projected_gradient_player(
    game: &GameInstance,
    state: &IterateState,
    p: &PenaltyParams,
    nu: usize,
) -> Result<ProjectedGradient> {
    let d = &state.duals[nu];
    let (a, b) = (p.alpha[nu], p.beta[nu]);
    let r = game.layout.range(nu)?;
    let own = &state.x[r];
    let grad = own_lagrangian_grad(game, nu, &state.x, &d.lambda)?;
    let mut step: Vec<f64> = own.iter().zip(&grad).map(|(v, g)| v - g).collect();
    game.player(nu)?.set.project_in_place(&mut step)?;
    let g = game.constraints(nu, &state.x)?;
    let m = d.m();
    let qz: Vec<f64> = (0..m).map(|i| d.mu[i] - d.lambda[i] + a * d.z[i]).collect();
    let ql: Vec<f64> = (0..m)
        .map(|i| d.lambda[i] - (d.lambda[i] + g[i] - d.z[i] - b * (d.lambda[i] - d.mu[i])).max(0.0))
        .collect();
    let qm: Vec<f64> = (0..m).map(|i| d.z[i] + b * (d.lambda[i] - d.mu[i])).collect();
    Ok(ProjectedGradient {
        x: dist2(own, &step),
        z: norm2(&qz),
        lambda: norm2(&ql),
        mu: norm2(&qm),
    })
}

pub fn projected_gradient(game: &GameInstance, state: &IterateState, p: &PenaltyParams) -> Result<Vec<ProjectedGradient>> {
    (0..game.num_players()).map(|nu| projected_gradient_player(game, state, p, nu)).collect()
}

/// Sum over players of the assembled projected-gradient norms.
pub fn projected_gradient_norm(game: &GameInstance, state: &IterateState, p: &PenaltyParams) -> Result<f64> {
    Ok(projected_gradient(game, state, p)?.iter().map(|q| q.total()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PlayerDualState;
    use crate::problems::make_example3;
    use crate::solver::{step_duals, step_z};

    #[test]
    fn exact_steps_zero_the_perturbation_blocks() {
        let g = make_example3();
        let p = PenaltyParams::uniform(2, 10.0, 1.0).unwrap();
        let mut s = IterateState::initial(&g, &[0.7, 0.9]).unwrap();
        s.duals[0] = PlayerDualState {
            z: vec![0.3, -0.2],
            lambda: vec![1.0, 2.0],
            mu: vec![0.5, 0.0],
        };
        step_z(&mut s.duals, &p);
        step_duals(&g, &s.x, &mut s.duals, &p, false).unwrap();
        step_z(&mut s.duals, &p);
        for q in projected_gradient(&g, &s, &p).unwrap() {
            assert_eq!(q.z, 0.0);
            assert_eq!(q.mu, 0.0);
        }
    }

    #[test]
    fn generic_point_is_not_stationary() {
        let g = make_example3();
        let p = PenaltyParams::uniform(2, 10.0, 1.0).unwrap();
        let mut s = IterateState::initial(&g, &[3.0, -2.0]).unwrap();
        s.duals[1] = PlayerDualState {
            z: vec![0.1, 0.0],
            lambda: vec![0.0, 1.0],
            mu: vec![0.2, 0.0],
        };
        assert!(projected_gradient_norm(&g, &s, &p).unwrap() > 0.0);
    }
}
