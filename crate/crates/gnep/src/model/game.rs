use std::fmt;
use std::sync::Arc;

use super::layout::BlockLayout;
use super::sets::SimpleSet;
use crate::error::{GnepError, Result};
use crate::linalg::all_finite;

/// Exact gradient Lipschitz constants for oracles with constant Hessians.
#[derive(Debug, Clone, PartialEq)]
pub struct Curvature {
    pub objective: f64,
    pub constraints: Vec<f64>,
}

/// Objective and constraint oracles of one player, evaluated on the joint vector.
///
/// Gradients and Jacobians are taken with respect to all `n` variables.
/// Implementations must be pure.
pub trait PlayerOracle: Send + Sync {
    fn num_constraints(&self) -> usize;
    fn objective(&self, x: &[f64]) -> f64;
    fn objective_grad(&self, x: &[f64]) -> Vec<f64>;
    fn constraints(&self, x: &[f64]) -> Vec<f64>;
    /// Row-major `m x n`; row `i` is the gradient of constraint `i`.
    fn constraint_jacobian(&self, x: &[f64]) -> Vec<f64>;
    fn curvature(&self) -> Option<Curvature> {
        None
    }
}

#[derive(Clone)]
pub struct PlayerProblem {
    pub oracle: Arc<dyn PlayerOracle>,
    pub set: SimpleSet,
}

impl fmt::Debug for PlayerProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlayerProblem")
            .field("m", &self.oracle.num_constraints())
            .field("set", &self.set)
            .finish()
    }
}

impl PlayerProblem {
    pub fn new(oracle: Arc<dyn PlayerOracle>, set: SimpleSet) -> Self {
        Self { oracle, set }
    }

    pub fn m(&self) -> usize {
        self.oracle.num_constraints()
    }
}

#[derive(Debug, Clone)]
pub struct GameInstance {
    pub name: String,
    pub layout: BlockLayout,
    pub players: Vec<PlayerProblem>,
}

impl GameInstance {
    pub fn new(name: impl Into<String>, layout: BlockLayout, players: Vec<PlayerProblem>) -> Result<Self> {
        if players.is_empty() {
            return Err(GnepError::InvalidLayout("no players".into()));
        }
        if players.len() != layout.players() {
            return Err(GnepError::DimensionMismatch {
                expected: layout.players(),
                got: players.len(),
            });
        }
        for (p, &d) in players.iter().zip(layout.dims()) {
            if p.set.dim() != d {
                return Err(GnepError::DimensionMismatch {
                    expected: d,
                    got: p.set.dim(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            layout,
            players,
        })
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn constraint_counts(&self) -> Vec<usize> {
        self.players.iter().map(|p| p.m()).collect()
    }

    pub fn total_constraints(&self) -> usize {
        self.players.iter().map(|p| p.m()).sum()
    }

    /// Functional constraints plus the finite bounds of the private sets.
    pub fn total_constraints_with_bounds(&self) -> usize {
        self.players
            .iter()
            .map(|p| p.m() + p.set.finite_bound_count())
            .sum()
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.layout.check_len(x.len())?;
        let mut out = x.to_vec();
        for (nu, p) in self.players.iter().enumerate() {
            let r = self.layout.range(nu)?;
            p.set.project_in_place(&mut out[r])?;
        }
        Ok(out)
    }

    pub fn objective(&self, nu: usize, x: &[f64]) -> Result<f64> {
        let v = self.player(nu)?.oracle.objective(x);
        finite_scalar(v, nu)
    }

    pub fn objective_grad(&self, nu: usize, x: &[f64]) -> Result<Vec<f64>> {
        finite_vec(self.player(nu)?.oracle.objective_grad(x), nu)
    }

    pub fn constraints(&self, nu: usize, x: &[f64]) -> Result<Vec<f64>> {
        finite_vec(self.player(nu)?.oracle.constraints(x), nu)
    }

    pub fn constraint_jacobian(&self, nu: usize, x: &[f64]) -> Result<Vec<f64>> {
        finite_vec(self.player(nu)?.oracle.constraint_jacobian(x), nu)
    }

    /// Largest positive part of any player's constraints at `x`.
    pub fn max_violation(&self, x: &[f64]) -> Result<f64> {
        let mut worst = 0.0f64;
        for nu in 0..self.num_players() {
            for g in self.constraints(nu, x)? {
                worst = worst.max(g);
            }
        }
        Ok(worst)
    }

    pub fn player(&self, nu: usize) -> Result<&PlayerProblem> {
        self.players.get(nu).ok_or(GnepError::PlayerOutOfRange {
            index: nu,
            players: self.players.len(),
        })
    }
}

fn finite_scalar(v: f64, player: usize) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GnepError::NonFinite { player })
    }
}

fn finite_vec(v: Vec<f64>, player: usize) -> Result<Vec<f64>> {
    if all_finite(&v) {
        Ok(v)
    } else {
        Err(GnepError::NonFinite { player })
    }
}

/// Perturbation variables and multipliers of one player.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerDualState {
    pub z: Vec<f64>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

impl PlayerDualState {
    pub fn zeros(m: usize) -> Self {
        Self {
            z: vec![0.0; m],
            lambda: vec![0.0; m],
            mu: vec![0.0; m],
        }
    }

    pub fn with_lambda(lambda: Vec<f64>) -> Self {
        let m = lambda.len();
        Self {
            z: vec![0.0; m],
            mu: lambda.clone(),
            lambda,
        }
    }

    pub fn m(&self) -> usize {
        self.lambda.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub x: Vec<f64>,
    pub duals: Vec<PlayerDualState>,
    pub outer_k: usize,
}

impl IterateState {
    /// Projects `x0` onto the private sets and zeroes every dual block.
    pub fn initial(game: &GameInstance, x0: &[f64]) -> Result<Self> {
        Ok(Self {
            x: game.project(x0)?,
            duals: game
                .players
                .iter()
                .map(|p| PlayerDualState::zeros(p.m()))
                .collect(),
            outer_k: 0,
        })
    }
}
