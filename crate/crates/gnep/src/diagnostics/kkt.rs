use crate::error::{GnepError, Result};
use crate::linalg::dist_inf;
use crate::model::GameInstance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktResidual {
    pub stationarity: f64,
    pub complementarity: f64,
    pub feasibility: f64,
}

impl KktResidual {
    pub fn max(&self) -> f64 {
        self.stationarity.max(self.complementarity).max(self.feasibility)
    }
}

/// Own-block gradient of `theta + lambda' g` for player `nu`.
pub(crate) fn own_lagrangian_grad(game: &GameInstance, nu: usize, x: &[f64], lambda: &[f64]) -> Result<Vec<f64>> {
    let r = game.layout.range(nu)?;
    let n = game.n();
    let grad = game.objective_grad(nu, x)?;
    let mut out = grad[r.clone()].to_vec();
    if !lambda.is_empty() {
        let jac = game.constraint_jacobian(nu, x)?;
        for (i, l) in lambda.iter().enumerate() {
            if *l != 0.0 {
                for (o, j) in out.iter_mut().zip(r.clone()) {
                    *o += l * jac[i * n + j];
                }
            }
        }
    }
    Ok(out)
}

/// Natural-map stationarity, complementarity and feasibility residuals of one player.
pub fn kkt_residual_player(game: &GameInstance, nu: usize, x: &[f64], lambda: &[f64]) -> Result<KktResidual> {
    game.layout.check_len(x.len())?;
    let m = game.player(nu)?.m();
    if lambda.len() != m {
        return Err(GnepError::DimensionMismatch { expected: m, got: lambda.len() });
    }
    let r = game.layout.range(nu)?;
    let grad = own_lagrangian_grad(game, nu, x, lambda)?;
    let own = &x[r];
    let mut step: Vec<f64> = own.iter().zip(&grad).map(|(a, g)| a - g).collect();
    game.player(nu)?.set.project_in_place(&mut step)?;
    let g = game.constraints(nu, x)?;
    Ok(KktResidual {
        stationarity: dist_inf(own, &step),
        complementarity: g.iter().zip(lambda).map(|(gi, l)| (gi * l).abs()).fold(0.0, f64::max),
        feasibility: g.iter().map(|gi| gi.max(0.0)).fold(0.0, f64::max),
    })
}

pub fn kkt_residual(game: &GameInstance, x: &[f64], lambdas: &[Vec<f64>]) -> Result<Vec<KktResidual>> {
    if lambdas.len() != game.num_players() {
        return Err(GnepError::DimensionMismatch { expected: game.num_players(), got: lambdas.len() });
    }
    (0..game.num_players()).map(|nu| kkt_residual_player(game, nu, x, &lambdas[nu])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SimpleSet;
    use crate::problems::{make_example3, QuadraticConstraintSpec, QuadraticGnepSpec, QuadraticPlayerSpec};

    #[test]
    fn unconstrained_minimizer_is_clean() {
        let g = QuadraticGnepSpec {
            name: "bowl".into(),
            layout: vec![2],
            players: vec![QuadraticPlayerSpec {
                q: vec![2.0, 0.0, 0.0, 2.0],
                b: vec![-2.0, 4.0],
                set: SimpleSet::boxed(vec![f64::NEG_INFINITY; 2], vec![f64::INFINITY; 2]).unwrap(),
                constraints: vec![],
            }],
        }
        .to_game()
        .unwrap();
        let r = kkt_residual(&g, &[1.0, -2.0], &[vec![]]).unwrap();
        assert_eq!(r[0].max(), 0.0);
    }

    #[test]
    fn infeasibility_is_measured() {
        let g = QuadraticGnepSpec {
            name: "one".into(),
            layout: vec![1],
            players: vec![QuadraticPlayerSpec {
                q: vec![1.0],
                b: vec![0.0],
                set: SimpleSet::NonnegOrthant { dim: 1 },
                constraints: vec![QuadraticConstraintSpec {
                    a: vec![0.0],
                    c: vec![1.0],
                    d: -1.0,
                }],
            }],
        }
        .to_game()
        .unwrap();
        let r = kkt_residual_player(&g, 0, &[1.5], &[0.0]).unwrap();
        assert_eq!(r.feasibility, 0.5);
        assert_eq!(r.complementarity, 0.0);
    }

    #[test]
    fn circle_game_tangency_with_multiplier() {
        let g = make_example3();
        // At (1, 0) player 1 has gradient (2, 0) and the second disk has gradient (-2, 0).
        let r = kkt_residual(&g, &[1.0, 0.0], &[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(r[0].stationarity < 1e-15);
        assert_eq!(r[1].stationarity, 0.0);
        assert_eq!(r[0].complementarity, 0.0);
    }
}
