use std::time::{Duration, Instant};

use super::config::SolverConfig;
use super::lipschitz::{choose_gamma, choose_sigma_scoped, estimate_lipschitz};
use super::steps::{solve_inner, step_duals, step_z, stopping_residual};
use super::trace::{IterationRecord, PlayerRecord, SolveTrace};
use crate::error::{GnepError, Result};
use crate::lagrangian::{eval_l, PenaltyParams, QuadraticModelAnchor};
use crate::linalg::{dist2, dist_inf, norm2, norm_inf};
use crate::model::{GameInstance, IterateState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxOuter,
    StalledStationary,
    OracleFailure,
    InnerNonconvergence,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxOuter => "max_outer",
            SolveStatus::StalledStationary => "stalled-stationary",
            SolveStatus::OracleFailure => "oracle-failure",
            SolveStatus::InnerNonconvergence => "inner-nonconvergence",
        }
    }

    /// The stopping test fired.
    pub fn is_success(&self) -> bool {
        matches!(self, SolveStatus::Converged | SolveStatus::StalledStationary)
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub state: IterateState,
    pub trace: SolveTrace,
    pub wall_time: Duration,
    pub outer_iterations: usize,
    pub total_inner_iterations: usize,
    pub final_residual: f64,
    /// Accepted inner exits that did not decrease every surrogate.
    pub descent_failures: usize,
    pub penalty: PenaltyParams,
}

/// Error raised mid-run, with the partial run attached.
#[derive(Debug)]
pub struct SolveFailure {
    pub error: GnepError,
    pub partial: Box<SolveResult>,
}

impl std::fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} after {} outer iterations", self.error, self.partial.outer_iterations)
    }
}

impl std::error::Error for SolveFailure {}

impl From<GnepError> for SolveFailure {
    fn from(error: GnepError) -> Self {
        SolveFailure {
            error,
            partial: Box::new(SolveResult {
                status: SolveStatus::OracleFailure,
                state: IterateState { x: Vec::new(), duals: Vec::new(), outer_k: 0 },
                trace: SolveTrace::default(),
                wall_time: Duration::ZERO,
                outer_iterations: 0,
                total_inner_iterations: 0,
                final_residual: f64::INFINITY,
                descent_failures: 0,
                penalty: PenaltyParams { alpha: vec![], beta: vec![] },
            }),
        }
    }
}

/// Runs the alternating primal-dual scheme from `x0` with zero duals.
pub fn solve(game: &GameInstance, x0: &[f64], cfg: &SolverConfig) -> std::result::Result<SolveResult, SolveFailure> {
    cfg.validate()?;
    if x0.len() != game.n() {
        return Err(GnepError::DimensionMismatch { expected: game.n(), got: x0.len() }.into());
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(GnepError::Config("start point must be finite".into()).into());
    }
    if cfg.parallel() {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| GnepError::Config(format!("thread pool: {e}")))?;
        pool.install(|| run(game, x0, cfg))
    } else {
        run(game, x0, cfg)
    }
}

fn run(game: &GameInstance, x0: &[f64], cfg: &SolverConfig) -> std::result::Result<SolveResult, SolveFailure> {
    let start = Instant::now();
    let np = game.num_players();
    let penalty = PenaltyParams::uniform(np, cfg.alpha, cfg.beta)?;
    let parallel = cfg.parallel();
    let mut state = IterateState::initial(game, x0)?;
    let mut trace = SolveTrace::default();
    let mut result = SolveResult {
        status: SolveStatus::MaxOuter,
        state: state.clone(),
        trace: SolveTrace::default(),
        wall_time: Duration::ZERO,
        outer_iterations: 0,
        total_inner_iterations: 0,
        final_residual: f64::INFINITY,
        descent_failures: 0,
        penalty: penalty.clone(),
    };
    let fail = |error: GnepError, mut partial: SolveResult, trace: SolveTrace, state: IterateState| {
        partial.status = match error {
            GnepError::InnerNonconvergence { .. } => SolveStatus::InnerNonconvergence,
            _ => SolveStatus::OracleFailure,
        };
        partial.trace = trace;
        partial.state = state;
        partial.wall_time = start.elapsed();
        SolveFailure { error, partial: Box::new(partial) }
    };

    match (0..np).map(|nu| eval_l(game, nu, &state.x, &state.duals[nu], &penalty)).collect::<Result<Vec<_>>>() {
        Ok(v) => trace.initial_l = v,
        Err(e) => return Err(fail(e, result, trace, state)),
    }
    if cfg.record_iterates {
        trace.iterates.push(state.clone());
    }

    for k in 0..cfg.max_outer {
        let step = (|| -> Result<(IterateState, IterationRecord, bool)> {
            let mut est = estimate_lipschitz(game, &state, cfg)?;
            let (gamma, below) = choose_gamma(&est, &penalty, &cfg.gamma);
            est.set_gamma(&gamma);
            let sig = choose_sigma_scoped(&est, &cfg.sigma, cfg.sigma_scope, k);
            let anchor = QuadraticModelAnchor::build(game, &state.x, &state.duals, &penalty, gamma.clone(), parallel)?;
            let inner = solve_inner(
                game,
                &state.x,
                &anchor,
                &sig.sigma,
                cfg.inner_eps,
                cfg.outer_tol,
                cfg.max_inner,
                k,
                parallel,
            )?;
            let mut next = IterateState {
                x: inner.x_next.clone(),
                duals: state.duals.clone(),
                outer_k: k + 1,
            };
            step_z(&mut next.duals, &penalty);
            step_duals(game, &next.x, &mut next.duals, &penalty, parallel)?;

            let mut players = Vec::with_capacity(np);
            let mut dlambda_inf = 0.0f64;
            for nu in 0..np {
                let l_value = eval_l(game, nu, &next.x, &next.duals[nu], &penalty)?;
                let dl = dist2(&next.duals[nu].lambda, &state.duals[nu].lambda);
                dlambda_inf = dlambda_inf.max(dist_inf(&next.duals[nu].lambda, &state.duals[nu].lambda));
                players.push(PlayerRecord {
                    l_value,
                    dlambda_2: dl,
                    lambda_norm: norm2(&next.duals[nu].lambda),
                    gamma: gamma[nu],
                    gamma_below_bound: below[nu],
                    l_theta: est.l_theta[nu],
                    l_g: est.l_g(nu),
                    l_g_norm: est.l_g_norm(nu),
                    l_gfun: est.l_gfun[nu],
                });
            }
            let rec = IterationRecord {
                k: k + 1,
                players,
                dx_inf: dist_inf(&next.x, &state.x),
                dx_2: dist2(&next.x, &state.x),
                dlambda_inf,
                feas: game.max_violation(&next.x)?,
                inner_iters: inner.inner_iters,
                sigma: sig.sigma_hat,
                tau: sig.tau,
                stalled: inner.stalled,
                descent: inner.descent,
            };
            Ok((next, rec, inner.stalled))
        })();
        let (next, rec, stalled) = match step {
            Ok(v) => v,
            Err(e) => return Err(fail(e, result, trace, state)),
        };
        result.total_inner_iterations += rec.inner_iters;
        if !rec.descent && !rec.stalled {
            result.descent_failures += 1;
        }
        let residual = stopping_residual(game, &state, &next);
        trace.records.push(rec);
        if cfg.record_iterates {
            trace.iterates.push(next.clone());
        }
        state = next;
        result.outer_iterations = k + 1;
        result.final_residual = residual;
        if residual <= cfg.outer_tol {
            result.status = if stalled {
                SolveStatus::StalledStationary
            } else {
                SolveStatus::Converged
            };
            break;
        }
    }
    result.state = state;
    result.trace = trace;
    result.wall_time = start.elapsed();
    Ok(result)
}

/// Largest `|x|_inf` and per-player `|lambda|_inf` seen over recorded iterates.
pub fn run_bounds(trace: &SolveTrace) -> (f64, Vec<f64>) {
    let mut bx = 0.0f64;
    let mut bl: Vec<f64> = Vec::new();
    for s in &trace.iterates {
        bx = bx.max(norm_inf(&s.x));
        if bl.len() < s.duals.len() {
            bl.resize(s.duals.len(), 0.0);
        }
        for (b, d) in bl.iter_mut().zip(&s.duals) {
            *b = b.max(norm_inf(&d.lambda));
        }
    }
    (bx, bl)
}
