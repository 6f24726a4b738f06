use crate::error::{GnepError, Result};
use crate::lagrangian::{PenaltyParams, QuadraticModelAnchor};
use crate::linalg::{dist2, dist_inf, norm_inf};
use crate::model::{GameInstance, IterateState, PlayerDualState};

/// One synchronous projected-gradient sweep on the surrogate, all players from `u`.
pub fn inner_step(
    game: &GameInstance,
    anchor: &QuadraticModelAnchor,
    u: &[f64],
    sigma: &[f64],
    parallel: bool,
) -> Result<Vec<f64>> {
    let blocks = crate::par::map_players(game.num_players(), parallel, |nu| {
        let grad = anchor.grad_lhat_block(game, nu, u)?;
        let r = game.layout.range(nu)?;
        let mut v: Vec<f64> = u[r].iter().zip(&grad).map(|(a, g)| a - sigma[nu] * g).collect();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(GnepError::NonFinite { player: nu });
        }
        game.player(nu)?.set.project_in_place(&mut v)?;
        Ok(v)
    })?;
    Ok(blocks.concat())
}

pub fn inner_residual(
    game: &GameInstance,
    anchor: &QuadraticModelAnchor,
    u: &[f64],
    sigma: &[f64],
    parallel: bool,
) -> Result<f64> {
    Ok(dist2(&inner_step(game, anchor, u, sigma, parallel)?, u))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerOutcome {
    pub x_next: Vec<f64>,
    pub inner_iters: usize,
    /// No strict descent and no movement beyond the outer tolerance.
    pub stalled: bool,
    /// Every player's surrogate value fell strictly below its anchor value.
    pub descent: bool,
    pub residual: f64,
}

/// Inner fixed-point loop.
///
/// Exits once the residual is at most `eps` and every player's surrogate
/// strictly decreases. When the iterates reach a numerical fixed point
/// without that decrease, further sweeps cannot help: the point is returned
/// as stalled if it has not moved beyond `outer_tol`, otherwise it is
/// accepted with `descent = false`.
#[allow(clippy::too_many_arguments)]
pub fn solve_inner(
    game: &GameInstance,
    x_k: &[f64],
    anchor: &QuadraticModelAnchor,
    sigma: &[f64],
    eps: f64,
    outer_tol: f64,
    max_inner: usize,
    outer_k: usize,
    parallel: bool,
) -> Result<InnerOutcome> {
    let np = game.num_players();
    let descends = |u: &[f64]| (0..np).all(|nu| anchor.eval_lhat(nu, u) < anchor.values[nu]);
    let mut u = x_k.to_vec();
    let mut next = inner_step(game, anchor, &u, sigma, parallel)?;
    let mut iters = 1;
    loop {
        let res = dist2(&next, &u);
        if res <= eps {
            if descends(&u) {
                return Ok(InnerOutcome {
                    x_next: u,
                    inner_iters: iters,
                    stalled: false,
                    descent: true,
                    residual: res,
                });
            }
            let fixed = res <= 4.0 * f64::EPSILON * (1.0 + norm_inf(&u));
            if fixed || iters >= max_inner {
                let stalled = dist_inf(&u, x_k) <= outer_tol;
                return Ok(InnerOutcome {
                    x_next: u,
                    inner_iters: iters,
                    stalled,
                    descent: false,
                    residual: res,
                });
            }
        } else if iters >= max_inner {
            return Err(GnepError::InnerNonconvergence {
                outer: outer_k,
                iterations: iters,
                residual: res,
                eps,
            });
        }
        u = next;
        next = inner_step(game, anchor, &u, sigma, parallel)?;
        iters += 1;
    }
}

/// Exact minimization in the perturbation variables: `z = (lambda - mu)/alpha`.
pub fn step_z(duals: &mut [PlayerDualState], p: &PenaltyParams) {
    for (nu, d) in duals.iter_mut().enumerate() {
        for i in 0..d.z.len() {
            d.z[i] = (d.lambda[i] - d.mu[i]) / p.alpha[nu];
        }
    }
}

/// Exact maximization in the multipliers: `lambda = [mu + (g - z)/beta]^+`, then `mu = lambda`.
pub fn step_duals(
    game: &GameInstance,
    x_next: &[f64],
    duals: &mut [PlayerDualState],
    p: &PenaltyParams,
    parallel: bool,
) -> Result<()> {
    let gs = crate::par::map_players(game.num_players(), parallel, |nu| game.constraints(nu, x_next))?;
    for (nu, (d, g)) in duals.iter_mut().zip(gs).enumerate() {
        for i in 0..g.len() {
            d.lambda[i] = (d.mu[i] + (g[i] - d.z[i]) / p.beta[nu]).max(0.0);
        }
        d.mu.clone_from(&d.lambda);
    }
    Ok(())
}

/// Largest change of any player's strategy block or multipliers, in the max norm.
pub fn stopping_residual(game: &GameInstance, prev: &IterateState, next: &IterateState) -> f64 {
    let mut r = 0.0f64;
    for nu in 0..game.num_players() {
        let range = game.layout.range(nu).expect("valid player");
        r = r.max(dist_inf(&prev.x[range.clone()], &next.x[range]));
        r = r.max(dist_inf(&prev.duals[nu].lambda, &next.duals[nu].lambda));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::eval_l;
    use crate::model::SimpleSet;
    use crate::problems::{make_example3, QuadraticConstraintSpec, QuadraticGnepSpec, QuadraticPlayerSpec};

    fn box_qp() -> GameInstance {
        // min 1/2 (2 x1^2 + 4 x2^2) + (-6, 2)'x over [0, 1]^2
        QuadraticGnepSpec {
            name: "box-qp".into(),
            layout: vec![2],
            players: vec![QuadraticPlayerSpec {
                q: vec![2.0, 0.0, 0.0, 4.0],
                b: vec![-6.0, 2.0],
                set: SimpleSet::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap(),
                constraints: vec![],
            }],
        }
        .to_game()
        .unwrap()
    }

    #[test]
    fn z_step_examples() {
        let p = PenaltyParams::uniform(1, 10.0, 1.0).unwrap();
        let mut d = vec![PlayerDualState {
            z: vec![9.0, 9.0],
            lambda: vec![2.0, 0.0],
            mu: vec![0.0, 0.0],
        }];
        step_z(&mut d, &p);
        assert_eq!(d[0].z, vec![0.2, 0.0]);
        let mut same = vec![PlayerDualState::with_lambda(vec![1.5, 3.0])];
        same[0].z = vec![1.0, 1.0];
        step_z(&mut same, &p);
        assert_eq!(same[0].z, vec![0.0, 0.0]);
    }

    #[test]
    fn z_step_minimizes_lagrangian() {
        let g = make_example3();
        let p = PenaltyParams::uniform(2, 10.0, 1.0).unwrap();
        let x = [0.4, 0.3];
        let mut d = vec![
            PlayerDualState {
                z: vec![0.0; 2],
                lambda: vec![2.0, 0.5],
                mu: vec![0.3, 1.0],
            },
            PlayerDualState::zeros(2),
        ];
        step_z(&mut d, &p);
        let base = eval_l(&g, 0, &x, &d[0], &p).unwrap();
        for i in 0..2 {
            for delta in [1e-3, -1e-3] {
                let mut e = d[0].clone();
                e.z[i] += delta;
                assert!(eval_l(&g, 0, &x, &e, &p).unwrap() > base);
            }
        }
    }

    fn scalar_game() -> GameInstance {
        // one player, g(x) = x - 1
        QuadraticGnepSpec {
            name: "scalar".into(),
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
        .unwrap()
    }

    #[test]
    fn dual_step_examples() {
        let g = scalar_game();
        let p = PenaltyParams::uniform(1, 10.0, 1.0).unwrap();
        let mut d = vec![PlayerDualState::zeros(1)];
        step_duals(&g, &[0.0], &mut d, &p, false).unwrap();
        assert_eq!(d[0].lambda, vec![0.0]);
        let mut d = vec![PlayerDualState::with_lambda(vec![0.5])];
        step_duals(&g, &[1.25], &mut d, &p, false).unwrap();
        assert_eq!(d[0].lambda, vec![0.75]);
        assert_eq!(d[0].mu, d[0].lambda);
    }

    #[test]
    fn dual_step_maximizes_over_lambda() {
        let g = make_example3();
        let p = PenaltyParams::uniform(2, 10.0, 1.0).unwrap();
        let x = [1.3, 0.2];
        let mut d = vec![PlayerDualState::with_lambda(vec![0.7, 0.4]), PlayerDualState::zeros(2)];
        let mu_before = d[0].mu.clone();
        step_duals(&g, &x, &mut d, &p, false).unwrap();
        // Lambda maximizes with mu held at its previous value.
        let held = PlayerDualState {
            z: vec![0.0; 2],
            lambda: d[0].lambda.clone(),
            mu: mu_before.clone(),
        };
        let best = eval_l(&g, 0, &x, &held, &p).unwrap();
        for i in 0..2 {
            for delta in [1e-3, -1e-3] {
                let mut e = held.clone();
                e.lambda[i] += delta;
                if e.lambda[i] >= 0.0 {
                    assert!(eval_l(&g, 0, &x, &e, &p).unwrap() < best);
                }
            }
        }
        // Then mu = lambda maximizes with lambda fixed.
        let at = eval_l(&g, 0, &x, &d[0], &p).unwrap();
        for i in 0..2 {
            for delta in [1e-3, -1e-3] {
                let mut e = d[0].clone();
                e.mu[i] += delta;
                assert!(eval_l(&g, 0, &x, &e, &p).unwrap() < at);
            }
        }
    }

    #[test]
    fn stopping_residual_examples() {
        let g = make_example3();
        let a = IterateState::initial(&g, &[0.5, 0.5]).unwrap();
        assert_eq!(stopping_residual(&g, &a, &a), 0.0);
        let mut b = a.clone();
        b.duals[1].lambda[0] = 0.3;
        assert_eq!(stopping_residual(&g, &a, &b), 0.3);
        b.x[0] = 0.1;
        assert_eq!(stopping_residual(&g, &a, &b), stopping_residual(&g, &b, &a));
    }

    #[test]
    fn box_qp_inner_loop_reaches_model_minimizer() {
        let g = box_qp();
        let p = PenaltyParams::uniform(1, 10.0, 1.0).unwrap();
        let x_k = vec![0.5, 0.5];
        let duals = vec![PlayerDualState::zeros(0)];
        let gamma = 5.0;
        let anchor = QuadraticModelAnchor::build(&g, &x_k, &duals, &p, vec![gamma], false).unwrap();
        let out = solve_inner(&g, &x_k, &anchor, &[0.1], 1e-12, 1e-4, 100_000, 0, false).unwrap();
        // Separable model: minimizer is the clamp of y - grad/gamma.
        let grad = [2.0 * 0.5 - 6.0, 4.0 * 0.5 + 2.0];
        let expect: Vec<f64> = (0..2).map(|i| (x_k[i] - grad[i] / gamma).clamp(0.0, 1.0)).collect();
        assert!(out.descent && !out.stalled);
        for i in 0..2 {
            assert!((out.x_next[i] - expect[i]).abs() < 1e-8);
        }
        assert!(inner_residual(&g, &anchor, &out.x_next, &[0.1], false).unwrap() <= 1e-12);
    }

    #[test]
    fn stalls_at_model_fixed_point() {
        let g = box_qp();
        let p = PenaltyParams::uniform(1, 10.0, 1.0).unwrap();
        // (1, 0) is the constrained minimizer of the objective itself.
        let x_k = vec![1.0, 0.0];
        let anchor = QuadraticModelAnchor::build(&g, &x_k, &[PlayerDualState::zeros(0)], &p, vec![5.0], false).unwrap();
        let out = solve_inner(&g, &x_k, &anchor, &[0.1], 1e-6, 1e-4, 1000, 0, false).unwrap();
        assert!(out.stalled && !out.descent);
        assert_eq!(out.x_next, x_k);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let g = box_qp();
        let p = PenaltyParams::uniform(1, 10.0, 1.0).unwrap();
        let x_k = vec![0.5, 0.5];
        let anchor = QuadraticModelAnchor::build(&g, &x_k, &[PlayerDualState::zeros(0)], &p, vec![5.0], false).unwrap();
        let err = solve_inner(&g, &x_k, &anchor, &[1e-6], 1e-12, 1e-4, 3, 7, false).unwrap_err();
        assert!(matches!(err, GnepError::InnerNonconvergence { outer: 7, iterations: 3, .. }));
    }

    #[test]
    fn residual_of_outside_point_is_finite() {
        let g = box_qp();
        let p = PenaltyParams::uniform(1, 10.0, 1.0).unwrap();
        let y = vec![0.5, 0.5];
        let anchor = QuadraticModelAnchor::build(&g, &y, &[PlayerDualState::zeros(0)], &p, vec![5.0], false).unwrap();
        let r = inner_residual(&g, &anchor, &[7.0, -3.0], &[0.1], false).unwrap();
        assert!(r.is_finite() && r > 0.0);
    }
}
