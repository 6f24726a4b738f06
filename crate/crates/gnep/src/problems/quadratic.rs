use std::sync::Arc;

use crate::error::{GnepError, Result};
use crate::linalg::{dot, matvec, sym_eigenvalues};
use crate::model::{BlockLayout, Curvature, GameInstance, PlayerOracle, PlayerProblem, SimpleSet};

/// `1/2 x'Ax + c'x + d` over the joint vector; `A` is dense row-major `n x n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticConstraintSpec {
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub d: f64,
}

/// One player: objective `1/2 x'Qx + b'x`, private set, quadratic constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPlayerSpec {
    pub q: Vec<f64>,
    pub b: Vec<f64>,
    pub set: SimpleSet,
    pub constraints: Vec<QuadraticConstraintSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticGnepSpec {
    pub name: String,
    pub layout: Vec<usize>,
    pub players: Vec<QuadraticPlayerSpec>,
}

const PSD_TOL: f64 = 1e-10;

fn own_block(m: &[f64], n: usize, r: std::ops::Range<usize>) -> Vec<f64> {
    let mut out = Vec::with_capacity(r.len() * r.len());
    for i in r.clone() {
        for j in r.clone() {
            out.push(m[i * n + j]);
        }
    }
    out
}

impl QuadraticGnepSpec {
    pub fn n(&self) -> usize {
        self.layout.iter().sum()
    }

    /// Dimension checks plus own-block positive semidefiniteness.
    pub fn check(&self) -> Result<()> {
        let layout = BlockLayout::new(self.layout.clone())?;
        let n = layout.n();
        if self.players.len() != layout.players() {
            return Err(GnepError::DimensionMismatch {
                expected: layout.players(),
                got: self.players.len(),
            });
        }
        let dim = |player: usize, constraint: Option<usize>, what: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(GnepError::Admissibility {
                    player,
                    constraint,
                    message: format!("{what} has length {got}, expected {want}"),
                })
            }
        };
        for (nu, p) in self.players.iter().enumerate() {
            dim(nu, None, "Q", p.q.len(), n * n)?;
            dim(nu, None, "b", p.b.len(), n)?;
            dim(nu, None, "set", p.set.dim(), layout.dims()[nu])?;
            let r = layout.range(nu)?;
            let check_psd = |m: &[f64], constraint: Option<usize>| -> Result<()> {
                let blk = own_block(m, n, r.clone());
                let ev = sym_eigenvalues(&blk, r.len());
                let min = ev.iter().fold(f64::INFINITY, |a, &b| a.min(b));
                if min < -PSD_TOL {
                    return Err(GnepError::Admissibility {
                        player: nu,
                        constraint,
                        message: format!("own block not positive semidefinite (smallest eigenvalue {min:e})"),
                    });
                }
                Ok(())
            };
            check_psd(&p.q, None)?;
            for (i, c) in p.constraints.iter().enumerate() {
                dim(nu, Some(i), "A", c.a.len(), n * n)?;
                dim(nu, Some(i), "c", c.c.len(), n)?;
                check_psd(&c.a, Some(i))?;
            }
        }
        Ok(())
    }

    pub fn to_game(&self) -> Result<GameInstance> {
        self.check()?;
        let layout = BlockLayout::new(self.layout.clone())?;
        let n = layout.n();
        let players = self
            .players
            .iter()
            .map(|p| {
                let oracle: Arc<dyn PlayerOracle> = Arc::new(QuadraticPlayer::new(n, p));
                PlayerProblem::new(oracle, p.set.clone())
            })
            .collect();
        GameInstance::new(self.name.clone(), layout, players)
    }
}

fn symmetrize(m: &[f64], n: usize) -> Vec<f64> {
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = 0.5 * (m[i * n + j] + m[j * n + i]);
        }
    }
    s
}

fn sym_norm(m: &[f64], n: usize) -> f64 {
    sym_eigenvalues(m, n).iter().fold(0.0f64, |a, &v| a.max(v.abs()))
}

/// Oracle for a quadratic player; matrices are symmetrized on construction.
#[derive(Debug, Clone)]
pub struct QuadraticPlayer {
    n: usize,
    q: Vec<f64>,
    b: Vec<f64>,
    cons: Vec<(Vec<f64>, Vec<f64>, f64)>,
    curvature: Curvature,
}

impl QuadraticPlayer {
    pub fn new(n: usize, spec: &QuadraticPlayerSpec) -> Self {
        let q = symmetrize(&spec.q, n);
        let cons: Vec<_> = spec
            .constraints
            .iter()
            .map(|c| (symmetrize(&c.a, n), c.c.clone(), c.d))
            .collect();
        let curvature = Curvature {
            objective: sym_norm(&q, n),
            constraints: cons.iter().map(|(a, _, _)| sym_norm(a, n)).collect(),
        };
        Self {
            n,
            q,
            b: spec.b.clone(),
            cons,
            curvature,
        }
    }
}

impl PlayerOracle for QuadraticPlayer {
    fn num_constraints(&self) -> usize {
        self.cons.len()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        0.5 * dot(x, &matvec(&self.q, self.n, self.n, x)) + dot(&self.b, x)
    }

    fn objective_grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = matvec(&self.q, self.n, self.n, x);
        g.iter_mut().zip(&self.b).for_each(|(a, b)| *a += b);
        g
    }

    fn constraints(&self, x: &[f64]) -> Vec<f64> {
        self.cons
            .iter()
            .map(|(a, c, d)| 0.5 * dot(x, &matvec(a, self.n, self.n, x)) + dot(c, x) + d)
            .collect()
    }

    fn constraint_jacobian(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.cons.len() * self.n);
        for (a, c, _) in &self.cons {
            let ax = matvec(a, self.n, self.n, x);
            out.extend(ax.iter().zip(c).map(|(u, v)| u + v));
        }
        out
    }

    fn curvature(&self) -> Option<Curvature> {
        Some(self.curvature.clone())
    }
}
