use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{GammaPolicy, SigmaSchedule, SigmaScope, SolverConfig};
use crate::error::{GnepError, Result};
use crate::lagrangian::PenaltyParams;
use crate::linalg::{dist2, spectral_norm};
use crate::model::{GameInstance, IterateState};

/// Smallest proximal weight handed out by the automatic policy.
pub const GAMMA_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzEstimates {
    /// Gradient Lipschitz constant of each objective.
    pub l_theta: Vec<f64>,
    /// Per-constraint gradient Lipschitz constants.
    pub l_g_each: Vec<Vec<f64>>,
    /// Function Lipschitz constant of each constraint map.
    pub l_gfun: Vec<f64>,
    /// Gradient Lipschitz constant of each player's Lagrangian at the current multipliers.
    pub l_nu: Vec<f64>,
    /// Surrogate gradient Lipschitz constants; equal to gamma once chosen.
    pub lhat: Vec<f64>,
    pub gamma_min: f64,
    pub lhat_max: f64,
}

impl LipschitzEstimates {
    /// Largest per-constraint gradient constant of player `nu`.
    pub fn l_g(&self, nu: usize) -> f64 {
        self.l_g_each[nu].iter().fold(0.0, |a: f64, &b| a.max(b))
    }

    /// Euclidean aggregate of the per-constraint gradient constants.
    pub fn l_g_norm(&self, nu: usize) -> f64 {
        self.l_g_each[nu].iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn set_gamma(&mut self, gamma: &[f64]) {
        self.lhat = gamma.to_vec();
        self.gamma_min = gamma.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        self.lhat_max = gamma.iter().fold(0.0, |a: f64, &b| a.max(b));
    }

    /// `sqrt(1 - 2 gamma_min s + s^2 lhat_max^2)`.
    pub fn tau(&self, sigma_hat: f64) -> f64 {
        let t = 1.0 - 2.0 * self.gamma_min * sigma_hat + sigma_hat * sigma_hat * self.lhat_max * self.lhat_max;
        t.max(0.0).sqrt()
    }

    /// Step cap keeping the inner map a contraction.
    pub fn sigma_cap(&self) -> f64 {
        step_cap(self.gamma_min, self.lhat_max)
    }

    /// Cap for player `nu` alone; its block of the surrogate map only sees its own weight.
    pub fn sigma_cap_player(&self, nu: usize) -> f64 {
        step_cap(self.lhat[nu], self.lhat[nu])
    }

    /// Contraction factor of the block of player `nu` under step `s`.
    pub fn tau_player(&self, nu: usize, s: f64) -> f64 {
        let l = self.lhat[nu];
        (1.0 - 2.0 * l * s + s * s * l * l).max(0.0).sqrt()
    }
}

fn step_cap(g: f64, l: f64) -> f64 {
    0.9 * (2.0 * g / (l * l)).min(2.0 * g * g / l)
}

impl LipschitzEstimates {
}

fn player_rng(seed: u64, k: usize, nu: usize) -> ChaCha8Rng {
    let mix = seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (nu as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    ChaCha8Rng::seed_from_u64(mix)
}

fn perturbed(game: &GameInstance, x: &[f64], r: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = x.iter().map(|v| v + rng.gen_range(-r..=r)).collect();
    game.project(&raw).expect("layout-consistent point")
}

struct PlayerEstimate {
    l_theta: f64,
    l_g_each: Vec<f64>,
    l_gfun: f64,
}

fn estimate_player(game: &GameInstance, nu: usize, x: &[f64], cfg: &SolverConfig, k: usize) -> Result<PlayerEstimate> {
    let player = game.player(nu)?;
    let m = player.m();
    let n = game.n();
    let curvature = player.oracle.curvature();
    let mut radius = cfg.lipschitz_radius;
    for attempt in 0..2 {
        let mut rng = player_rng(cfg.seed, k, nu);
        let mut l_theta = 0.0f64;
        let mut l_g = vec![0.0f64; m];
        let mut l_gfun = if m > 0 {
            spectral_norm(&game.constraint_jacobian(nu, x)?, m, n)
        } else {
            0.0
        };
        let mut informative = false;
        for _ in 0..cfg.lipschitz_pairs {
            let a = perturbed(game, x, radius, &mut rng);
            let b = perturbed(game, x, radius, &mut rng);
            let ja = if m > 0 { game.constraint_jacobian(nu, &a)? } else { Vec::new() };
            let jb = if m > 0 { game.constraint_jacobian(nu, &b)? } else { Vec::new() };
            if m > 0 {
                l_gfun = l_gfun.max(spectral_norm(&ja, m, n)).max(spectral_norm(&jb, m, n));
            }
            let d = dist2(&a, &b);
            if d <= 1e-12 {
                continue;
            }
            informative = true;
            if curvature.is_none() {
                let ga = game.objective_grad(nu, &a)?;
                let gb = game.objective_grad(nu, &b)?;
                l_theta = l_theta.max(dist2(&ga, &gb) / d);
                for i in 0..m {
                    let ri = dist2(&ja[i * n..(i + 1) * n], &jb[i * n..(i + 1) * n]) / d;
                    l_g[i] = l_g[i].max(ri);
                }
            }
        }
        if let Some(c) = &curvature {
            return Ok(PlayerEstimate {
                l_theta: c.objective,
                l_g_each: c.constraints.clone(),
                l_gfun,
            });
        }
        if informative {
            let s = cfg.lipschitz_safety;
            return Ok(PlayerEstimate {
                l_theta: s * l_theta,
                l_g_each: l_g.iter().map(|v| s * v).collect(),
                l_gfun,
            });
        }
        if attempt == 0 {
            radius *= 10.0;
        }
    }
    Err(GnepError::DegenerateSampling { player: nu })
}

/// Local Lipschitz constants around the current iterate.
///
/// Oracles reporting exact curvature use it; the rest are sampled with
/// seeded pairs in a box around `x` and inflated by the safety factor.
pub fn estimate_lipschitz(game: &GameInstance, state: &IterateState, cfg: &SolverConfig) -> Result<LipschitzEstimates> {
    let np = game.num_players();
    let parts = crate::par::map_players(np, cfg.parallel(), |nu| {
        estimate_player(game, nu, &state.x, cfg, state.outer_k)
    })?;
    let mut est = LipschitzEstimates {
        l_theta: Vec::with_capacity(np),
        l_g_each: Vec::with_capacity(np),
        l_gfun: Vec::with_capacity(np),
        l_nu: Vec::with_capacity(np),
        lhat: vec![0.0; np],
        gamma_min: 0.0,
        lhat_max: 0.0,
    };
    for (nu, p) in parts.into_iter().enumerate() {
        let cross: f64 = p
            .l_g_each
            .iter()
            .zip(&state.duals[nu].lambda)
            .map(|(l, lam)| l * lam.abs())
            .sum();
        est.l_nu.push(p.l_theta + cross);
        est.l_theta.push(p.l_theta);
        est.l_g_each.push(p.l_g_each);
        est.l_gfun.push(p.l_gfun);
    }
    Ok(est)
}

/// Lower bound on gamma that the sufficient-decrease argument asks for.
pub fn gamma_bound(est: &LipschitzEstimates, p: &PenaltyParams, nu: usize) -> f64 {
    est.l_nu[nu] + 3.0 * est.l_gfun[nu] * est.l_gfun[nu] / p.beta[nu]
}

/// Returns gamma per player and, per player, whether it falls below the bound.
pub fn choose_gamma(est: &LipschitzEstimates, p: &PenaltyParams, policy: &GammaPolicy) -> (Vec<f64>, Vec<bool>) {
    let np = est.l_nu.len();
    let mut gamma = Vec::with_capacity(np);
    let mut below = Vec::with_capacity(np);
    for nu in 0..np {
        let bound = gamma_bound(est, p, nu);
        let g = match policy {
            GammaPolicy::Auto { safety } => safety * bound.max(GAMMA_FLOOR),
            GammaPolicy::Fixed(v) => *v,
        };
        below.push(g < bound);
        gamma.push(g);
    }
    (gamma, below)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaChoice {
    pub sigma: Vec<f64>,
    pub cap: f64,
    pub sigma_hat: f64,
    pub tau: f64,
}

fn scheduled(schedule: &SigmaSchedule, cap: f64, k: usize) -> f64 {
    let raw = match schedule {
        SigmaSchedule::Constant { sigma0 } => sigma0.unwrap_or(0.5 * cap),
        SigmaSchedule::Diminishing { sigma0, decay } => sigma0.unwrap_or(0.5 * cap) / (1.0 + k as f64 / decay),
    };
    raw.min(cap)
}

/// Step sizes for outer iteration `k`, capped so that `tau < 1`.
pub fn choose_sigma(est: &LipschitzEstimates, schedule: &SigmaSchedule, k: usize) -> SigmaChoice {
    choose_sigma_scoped(est, schedule, SigmaScope::Common, k)
}

pub fn choose_sigma_scoped(est: &LipschitzEstimates, schedule: &SigmaSchedule, scope: SigmaScope, k: usize) -> SigmaChoice {
    match scope {
        SigmaScope::Common => {
            let cap = est.sigma_cap();
            let s = scheduled(schedule, cap, k);
            SigmaChoice {
                sigma: vec![s; est.lhat.len()],
                cap,
                sigma_hat: s,
                tau: est.tau(s),
            }
        }
        SigmaScope::PerPlayer => {
            let players = est.lhat.len();
            let caps: Vec<f64> = (0..players).map(|nu| est.sigma_cap_player(nu)).collect();
            let sigma: Vec<f64> = caps.iter().map(|&c| scheduled(schedule, c, k)).collect();
            let tau = (0..players).map(|nu| est.tau_player(nu, sigma[nu])).fold(0.0, f64::max);
            SigmaChoice {
                cap: caps.iter().cloned().fold(0.0, f64::max),
                sigma_hat: sigma.iter().cloned().fold(0.0, f64::max),
                sigma,
                tau,
            }
        }
    }
}
