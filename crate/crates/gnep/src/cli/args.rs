use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{GnepError, Result};
use crate::solver::{GammaPolicy, SigmaSchedule, SigmaScope, SolverConfig};

#[derive(Debug, Parser)]
#[command(name = "gnep", version, about = "Solve and check generalized Nash equilibrium problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and write the result document.
    Solve(SolveArgs),
    /// Solve a list of instances and print a summary table.
    Bench(BenchArgs),
    /// Solve one instance and write its per-iteration trace as CSV.
    Trace(TraceArgs),
    /// Check a result document: KKT residuals, best-response gaps, saddle sampling.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleKind {
    Diminishing,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeKind {
    Common,
    PerPlayer,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Built-in instance name.
    #[arg(long, conflicts_with = "load", required_unless_present = "load")]
    pub problem: Option<String>,
    /// Quadratic instance file.
    #[arg(long)]
    pub load: Option<PathBuf>,
    /// Start point: const:<v>, vec:<v1,v2,...> or file:<path>.
    #[arg(long, default_value = "const:0")]
    pub x0: String,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 10.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Proximal weight: `auto` or a fixed positive value.
    #[arg(long, default_value = "auto")]
    pub gamma: String,
    /// Safety factor of the automatic proximal weight.
    #[arg(long, default_value_t = 1.0)]
    pub gamma_safety: f64,
    /// Initial inner step; defaults to half the contraction cap.
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long, default_value_t = 50.0)]
    pub sigma_decay: f64,
    #[arg(long, value_enum, default_value_t = ScheduleKind::Diminishing)]
    pub sigma_schedule: ScheduleKind,
    #[arg(long, value_enum, default_value_t = ScopeKind::Common)]
    pub sigma_scope: ScopeKind,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub inner_eps: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_outer: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_inner: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads: a count or `auto`.
    #[arg(long, env = "GNEP_THREADS", default_value = "1")]
    pub threads: String,
}

impl SolverArgs {
    pub fn config(&self) -> Result<SolverConfig> {
        let gamma = match self.gamma.as_str() {
            "auto" => GammaPolicy::Auto { safety: self.gamma_safety },
            v => GammaPolicy::Fixed(
                v.parse()
                    .map_err(|_| GnepError::Config(format!("--gamma expects `auto` or a number, got `{v}`")))?,
            ),
        };
        let sigma = match self.sigma_schedule {
            ScheduleKind::Diminishing => SigmaSchedule::Diminishing {
                sigma0: self.sigma0,
                decay: self.sigma_decay,
            },
            ScheduleKind::Constant => SigmaSchedule::Constant { sigma0: self.sigma0 },
        };
        let threads = match self.threads.as_str() {
            "auto" => 0,
            v => v
                .parse()
                .map_err(|_| GnepError::Config(format!("--threads expects a count or `auto`, got `{v}`")))?,
        };
        let cfg = SolverConfig {
            alpha: self.alpha,
            beta: self.beta,
            gamma,
            sigma,
            sigma_scope: match self.sigma_scope {
                ScopeKind::Common => SigmaScope::Common,
                ScopeKind::PerPlayer => SigmaScope::PerPlayer,
            },
            inner_eps: self.inner_eps,
            outer_tol: self.tol,
            max_outer: self.max_outer,
            max_inner: self.max_inner,
            seed: self.seed,
            threads,
            ..SolverConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Also write the per-iteration trace CSV here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall-clock time (makes output machine dependent).
    #[arg(long)]
    pub timing: bool,
    /// Saddle-inequality samples in the diagnostics block.
    #[arg(long, default_value_t = 1000)]
    pub saddle_samples: usize,
    /// Skip the best-response oracle in the diagnostics block.
    #[arg(long)]
    pub no_best_response: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Row as `<problem>@<x0>`; repeatable. Defaults to the circle game from three starts plus a18.
    #[arg(long = "row")]
    pub rows: Vec<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Trace destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Result document written by `solve`.
    pub input: PathBuf,
    /// Rebuild the instance from this built-in name instead of the document's.
    #[arg(long, conflicts_with = "load")]
    pub problem: Option<String>,
    #[arg(long)]
    pub load: Option<PathBuf>,
    /// Largest acceptable residual or gap.
    #[arg(long, default_value_t = 1e-3)]
    pub threshold: f64,
    #[arg(long, default_value_t = 1000)]
    pub saddle_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
