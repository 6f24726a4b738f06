use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsReport;
use crate::error::{GnepError, Result};
use crate::model::{GameInstance, IterateState, PlayerDualState};
use crate::problems::format::{floats, reals, Real};
use crate::solver::{GammaPolicy, SigmaSchedule, SigmaScope, SolveResult, SolverConfig};

pub const RESULT_VERSION: &str = "result/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    /// Built-in name or the instance name stored in the file.
    pub name: String,
    /// Set when the instance came from a file.
    pub path: Option<String>,
    pub seed: u64,
    pub players: usize,
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub alpha: Real,
    pub beta: Real,
    /// `"auto"` or the fixed value.
    pub gamma: String,
    pub gamma_safety: Real,
    pub sigma_schedule: String,
    pub sigma0: Option<Real>,
    pub sigma_decay: Option<Real>,
    pub sigma_scope: String,
    pub tol: Real,
    pub inner_eps: Real,
    pub max_outer: usize,
    pub max_inner: usize,
    pub seed: u64,
}

impl ConfigDoc {
    pub fn from_config(cfg: &SolverConfig) -> Self {
        let (gamma, gamma_safety) = match cfg.gamma {
            GammaPolicy::Auto { safety } => ("auto".to_string(), safety),
            GammaPolicy::Fixed(g) => (format!("{g:e}"), 1.0),
        };
        let (sigma_schedule, sigma0, sigma_decay) = match cfg.sigma {
            SigmaSchedule::Constant { sigma0 } => ("constant", sigma0, None),
            SigmaSchedule::Diminishing { sigma0, decay } => ("diminishing", sigma0, Some(decay)),
        };
        Self {
            alpha: Real(cfg.alpha),
            beta: Real(cfg.beta),
            gamma,
            gamma_safety: Real(gamma_safety),
            sigma_schedule: sigma_schedule.into(),
            sigma0: sigma0.map(Real),
            sigma_decay: sigma_decay.map(Real),
            sigma_scope: match cfg.sigma_scope {
                SigmaScope::Common => "common",
                SigmaScope::PerPlayer => "per-player",
            }
            .into(),
            tol: Real(cfg.outer_tol),
            inner_eps: Real(cfg.inner_eps),
            max_outer: cfg.max_outer,
            max_inner: cfg.max_inner,
            seed: cfg.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerDoc {
    pub block: Vec<Real>,
    pub lambda: Vec<Real>,
    pub mu: Vec<Real>,
    pub z: Vec<Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerDiagDoc {
    pub stationarity: Real,
    pub complementarity: Real,
    pub feasibility: Real,
    pub best_response_gap: Real,
    pub lambda_norm: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsDoc {
    pub players: Vec<PlayerDiagDoc>,
    pub projected_gradient_norm: Real,
    pub saddle_samples: usize,
    pub saddle_left_violations: usize,
    pub saddle_right_violations: usize,
}

impl DiagnosticsDoc {
    pub fn from_report(r: &DiagnosticsReport) -> Self {
        Self {
            players: r
                .players
                .iter()
                .map(|p| PlayerDiagDoc {
                    stationarity: Real(p.stationarity),
                    complementarity: Real(p.complementarity),
                    feasibility: Real(p.feasibility),
                    best_response_gap: Real(p.best_response_gap),
                    lambda_norm: Real(p.lambda_norm),
                })
                .collect(),
            projected_gradient_norm: Real(r.projected_gradient_norm),
            saddle_samples: r.saddle.samples,
            saddle_left_violations: r.saddle.left_violations,
            saddle_right_violations: r.saddle.right_violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDoc {
    pub format: String,
    pub problem: ProblemDoc,
    pub x0: String,
    pub config: ConfigDoc,
    pub status: String,
    pub message: Option<String>,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub final_residual: Real,
    pub descent_failures: usize,
    /// Seconds; absent unless timing was requested.
    pub wall_time: Option<Real>,
    pub x: Vec<Real>,
    pub players: Vec<PlayerDoc>,
    pub diagnostics: Option<DiagnosticsDoc>,
}

impl ResultDoc {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        game: &GameInstance,
        problem: ProblemDoc,
        x0: &str,
        cfg: &SolverConfig,
        result: &SolveResult,
        message: Option<String>,
        diagnostics: Option<&DiagnosticsReport>,
        timing: bool,
    ) -> Self {
        let s = &result.state;
        let players = (0..game.num_players())
            .map(|nu| {
                let d = &s.duals[nu];
                PlayerDoc {
                    block: reals(game.layout.block(&s.x, nu).expect("valid player")),
                    lambda: reals(&d.lambda),
                    mu: reals(&d.mu),
                    z: reals(&d.z),
                }
            })
            .collect();
        Self {
            format: RESULT_VERSION.into(),
            problem,
            x0: x0.into(),
            config: ConfigDoc::from_config(cfg),
            status: result.status.as_str().into(),
            message,
            outer_iterations: result.outer_iterations,
            inner_iterations: result.total_inner_iterations,
            final_residual: Real(result.final_residual),
            descent_failures: result.descent_failures,
            wall_time: timing.then(|| Real(result.wall_time.as_secs_f64())),
            x: reals(&s.x),
            players,
            diagnostics: diagnostics.map(DiagnosticsDoc::from_report),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: Self = serde_path_to_error::deserialize(de).map_err(|e| GnepError::Parse {
            path: e.path().to_string(),
            line: e.inner().line(),
            column: e.inner().column(),
            message: e.inner().to_string(),
        })?;
        if doc.format != RESULT_VERSION {
            return Err(GnepError::Parse {
                path: "format".into(),
                line: 0,
                column: 0,
                message: format!("expected `{RESULT_VERSION}`, found `{}`", doc.format),
            });
        }
        Ok(doc)
    }

    /// Solver state carried by the document.
    pub fn state(&self, game: &GameInstance) -> Result<IterateState> {
        let x = floats(&self.x);
        game.layout.check_len(x.len())?;
        if self.players.len() != game.num_players() {
            return Err(GnepError::DimensionMismatch {
                expected: game.num_players(),
                got: self.players.len(),
            });
        }
        let mut duals = Vec::with_capacity(self.players.len());
        for (nu, p) in self.players.iter().enumerate() {
            let m = game.player(nu)?.m();
            let d = PlayerDualState {
                z: floats(&p.z),
                lambda: floats(&p.lambda),
                mu: floats(&p.mu),
            };
            if d.z.len() != m || d.lambda.len() != m || d.mu.len() != m {
                return Err(GnepError::DimensionMismatch { expected: m, got: d.lambda.len() });
            }
            if d.lambda.iter().any(|l| !(*l >= 0.0)) {
                return Err(GnepError::Admissibility {
                    player: nu,
                    constraint: d.lambda.iter().position(|l| !(*l >= 0.0)),
                    message: "multiplier is negative".into(),
                });
            }
            duals.push(d);
        }
        Ok(IterateState {
            x,
            duals,
            outer_k: self.outer_iterations,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.format);
        let _ = writeln!(
            s,
            "problem {} (N={}, n={}, m={})",
            self.problem.name, self.problem.players, self.problem.n, self.problem.m
        );
        let _ = writeln!(s, "status {}", self.status);
        if let Some(m) = &self.message {
            let _ = writeln!(s, "message {m}");
        }
        let _ = writeln!(
            s,
            "iterations outer={} inner={} residual={:e}",
            self.outer_iterations, self.inner_iterations, self.final_residual.0
        );
        match self.wall_time {
            Some(t) => {
                let _ = writeln!(s, "wall_time {:.3}s", t.0);
            }
            None => {
                let _ = writeln!(s, "wall_time NA");
            }
        }
        for (nu, p) in self.players.iter().enumerate() {
            let _ = writeln!(s, "player {}", nu + 1);
            let _ = writeln!(s, "  x      {}", join(&p.block));
            let _ = writeln!(s, "  lambda {}", join(&p.lambda));
        }
        if let Some(d) = &self.diagnostics {
            s.push_str(&diagnostics_text(d));
        }
        s
    }
}

fn join(v: &[Real]) -> String {
    v.iter().map(|r| format!("{:.6}", r.0)).collect::<Vec<_>>().join(" ")
}

pub fn diagnostics_text(d: &DiagnosticsDoc) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "diagnostics");
    let _ = writeln!(s, "  player  stationarity  complementarity  feasibility  br_gap  |lambda|");
    for (nu, p) in d.players.iter().enumerate() {
        let _ = writeln!(
            s,
            "  {:<6}  {:<12.3e}  {:<15.3e}  {:<11.3e}  {:<.3e}  {:.3e}",
            nu + 1,
            p.stationarity.0,
            p.complementarity.0,
            p.feasibility.0,
            p.best_response_gap.0,
            p.lambda_norm.0
        );
    }
    let _ = writeln!(s, "  projected_gradient {:.3e}", d.projected_gradient_norm.0);
    let _ = writeln!(
        s,
        "  saddle {} samples, {} left and {} right violations",
        d.saddle_samples, d.saddle_left_violations, d.saddle_right_violations
    );
    s
}
