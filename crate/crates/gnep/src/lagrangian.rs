//! Proximal-perturbed Lagrangian, its reduced form, and the quadratic surrogate.

use crate::error::{GnepError, Result};
use crate::linalg::{dot, norm2};
use crate::model::{GameInstance, PlayerDualState};

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyParams {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl PenaltyParams {
    pub fn uniform(players: usize, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(vec![alpha; players], vec![beta; players])
    }

    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(GnepError::DimensionMismatch {
                expected: alpha.len(),
                got: beta.len(),
            });
        }
        if alpha.iter().chain(&beta).any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(GnepError::Config("alpha and beta must be positive".into()));
        }
        Ok(Self { alpha, beta })
    }
}

fn check_duals(game: &GameInstance, nu: usize, d: &PlayerDualState) -> Result<()> {
    let m = game.player(nu)?.m();
    for len in [d.z.len(), d.lambda.len(), d.mu.len()] {
        if len != m {
            return Err(GnepError::DimensionMismatch { expected: m, got: len });
        }
    }
    Ok(())
}

/// `theta + lambda'(g - z) + mu'z + alpha/2 |z|^2 - beta/2 |lambda - mu|^2`.
pub fn eval_l(game: &GameInstance, nu: usize, x: &[f64], d: &PlayerDualState, p: &PenaltyParams) -> Result<f64> {
    check_duals(game, nu, d)?;
    let theta = game.objective(nu, x)?;
    let g = game.constraints(nu, x)?;
    let (a, b) = (p.alpha[nu], p.beta[nu]);
    let mut v = theta;
    for i in 0..g.len() {
        let diff = d.lambda[i] - d.mu[i];
        v += d.lambda[i] * (g[i] - d.z[i]) + d.mu[i] * d.z[i] + 0.5 * a * d.z[i] * d.z[i]
            - 0.5 * b * diff * diff;
    }
    finite(v, nu)
}

/// Value after eliminating `z = (lambda - mu)/alpha`.
pub fn eval_l_reduced(
    game: &GameInstance,
    nu: usize,
    x: &[f64],
    lambda: &[f64],
    mu: &[f64],
    p: &PenaltyParams,
) -> Result<f64> {
    let m = game.player(nu)?.m();
    if lambda.len() != m || mu.len() != m {
        return Err(GnepError::DimensionMismatch { expected: m, got: lambda.len().min(mu.len()) });
    }
    let theta = game.objective(nu, x)?;
    let g = game.constraints(nu, x)?;
    let (a, b) = (p.alpha[nu], p.beta[nu]);
    let sq: f64 = lambda.iter().zip(mu).map(|(l, u)| (l - u) * (l - u)).sum();
    finite(theta + dot(lambda, &g) - (1.0 + a * b) / (2.0 * a) * sq, nu)
}

/// Full gradient in `x`: `grad theta + J_g' lambda`.
pub fn grad_x_l(game: &GameInstance, nu: usize, x: &[f64], d: &PlayerDualState, _p: &PenaltyParams) -> Result<Vec<f64>> {
    check_duals(game, nu, d)?;
    let mut grad = game.objective_grad(nu, x)?;
    let m = d.m();
    if m > 0 {
        let n = x.len();
        let jac = game.constraint_jacobian(nu, x)?;
        for i in 0..m {
            let l = d.lambda[i];
            if l != 0.0 {
                for (gj, jj) in grad.iter_mut().zip(&jac[i * n..(i + 1) * n]) {
                    *gj += l * jj;
                }
            }
        }
    }
    Ok(grad)
}

fn finite(v: f64, player: usize) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GnepError::NonFinite { player })
    }
}

/// Linearization point of the surrogate with cached values and gradients.
#[derive(Debug, Clone)]
pub struct QuadraticModelAnchor {
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    pub grads: Vec<Vec<f64>>,
    pub gamma: Vec<f64>,
}

impl QuadraticModelAnchor {
    pub fn build(
        game: &GameInstance,
        y: &[f64],
        duals: &[PlayerDualState],
        p: &PenaltyParams,
        gamma: Vec<f64>,
        parallel: bool,
    ) -> Result<Self> {
        let np = game.num_players();
        if duals.len() != np || gamma.len() != np {
            return Err(GnepError::DimensionMismatch { expected: np, got: duals.len().min(gamma.len()) });
        }
        let eval = |nu: usize| -> Result<(f64, Vec<f64>)> {
            Ok((eval_l(game, nu, y, &duals[nu], p)?, grad_x_l(game, nu, y, &duals[nu], p)?))
        };
        let parts: Vec<(f64, Vec<f64>)> = crate::par::map_players(np, parallel, eval)?;
        let (values, grads) = parts.into_iter().unzip();
        Ok(Self {
            y: y.to_vec(),
            values,
            grads,
            gamma,
        })
    }

    /// `L(y) + grad L(y)'(x - y) + gamma/2 |x - y|^2`.
    pub fn eval_lhat(&self, nu: usize, x: &[f64]) -> f64 {
        let mut lin = 0.0;
        let mut sq = 0.0;
        for ((xi, yi), gi) in x.iter().zip(&self.y).zip(&self.grads[nu]) {
            let d = xi - yi;
            lin += gi * d;
            sq += d * d;
        }
        self.values[nu] + lin + 0.5 * self.gamma[nu] * sq
    }

    /// Own-block gradient of the surrogate at `u`.
    pub fn grad_lhat_block(&self, game: &GameInstance, nu: usize, u: &[f64]) -> Result<Vec<f64>> {
        let r = game.layout.range(nu)?;
        let g = self.gamma[nu];
        Ok(r.map(|j| self.grads[nu][j] + g * (u[j] - self.y[j])).collect())
    }

    /// Recomputes the cache and reports whether it matches.
    pub fn is_consistent(&self, game: &GameInstance, duals: &[PlayerDualState], p: &PenaltyParams) -> bool {
        (0..game.num_players()).all(|nu| {
            matches!(eval_l(game, nu, &self.y, &duals[nu], p), Ok(v) if v == self.values[nu])
                && matches!(grad_x_l(game, nu, &self.y, &duals[nu], p), Ok(g) if g == self.grads[nu])
        })
    }
}

/// Euclidean norm of `lambda - mu`.
pub fn dual_gap(d: &PlayerDualState) -> f64 {
    let v: Vec<f64> = d.lambda.iter().zip(&d.mu).map(|(a, b)| a - b).collect();
    norm2(&v)
}
