//! Command-line front end: `solve`, `bench`, `trace` and `validate`.

mod args;
mod bench;
mod report;
mod x0;

pub use args::{BenchArgs, Cli, Command, Format, ProblemArgs, SolveArgs, SolverArgs, TraceArgs, ValidateArgs};
pub use bench::{parse_row, row_succeeded, run_row, RunSummary, DEFAULT_ROWS};
pub use report::{ConfigDoc, DiagnosticsDoc, PlayerDoc, ProblemDoc, ResultDoc, RESULT_VERSION};
pub use x0::StartPoint;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;

use crate::diagnostics::{diagnose, DiagnoseOptions};
use crate::error::{GnepError, Result};
use crate::lagrangian::PenaltyParams;
use crate::model::GameInstance;
use crate::problems::{builtin, load_quadratic};
use crate::solver::{solve, SolveResult, SolveStatus, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<()> {
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => self.out.write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let mut io = Io { out, err };
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a, &mut io),
        Command::Bench(a) => cmd_bench(a, &mut io),
        Command::Trace(a) => cmd_trace(a, &mut io),
        Command::Validate(a) => cmd_validate(a, &mut io),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn load_problem(problem: Option<&str>, load: Option<&Path>, seed: u64) -> Result<(GameInstance, ProblemDoc)> {
    let (game, name, path) = match (problem, load) {
        (Some(name), _) => (builtin(name, seed)?, name.to_string(), None),
        (None, Some(p)) => {
            let game = load_quadratic(p)?;
            let name = game.name.clone();
            (game, name, Some(p.display().to_string()))
        }
        (None, None) => return Err(GnepError::Config("one of --problem or --load is required".into())),
    };
    let doc = ProblemDoc {
        name,
        path,
        seed,
        players: game.num_players(),
        n: game.n(),
        m: game.total_constraints(),
    };
    Ok((game, doc))
}

fn status_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Converged | SolveStatus::StalledStationary => EXIT_OK,
        SolveStatus::MaxOuter | SolveStatus::InnerNonconvergence => EXIT_NOT_CONVERGED,
        SolveStatus::OracleFailure => EXIT_ERROR,
    }
}

/// Runs the solver; an inner-loop failure still yields its partial result.
fn run_solver(game: &GameInstance, x0: &[f64], cfg: &SolverConfig) -> Result<(SolveResult, Option<String>)> {
    match solve(game, x0, cfg) {
        Ok(r) => Ok((r, None)),
        Err(f) if f.partial.status == SolveStatus::InnerNonconvergence => Ok((*f.partial, Some(f.error.to_string()))),
        Err(f) => Err(f.error),
    }
}

fn cmd_solve(a: &SolveArgs, io: &mut Io) -> Result<i32> {
    let cfg = a.solver.config()?;
    let (game, problem) = load_problem(a.problem.problem.as_deref(), a.problem.load.as_deref(), cfg.seed)?;
    let x0 = StartPoint::parse(&a.problem.x0)?.resolve(game.n())?;
    let (result, message) = run_solver(&game, &x0, &cfg)?;
    let penalty = PenaltyParams::uniform(game.num_players(), cfg.alpha, cfg.beta)?;
    let opts = DiagnoseOptions {
        saddle_samples: a.saddle_samples,
        seed: cfg.seed,
        skip_best_response: a.no_best_response,
        ..DiagnoseOptions::default()
    };
    let diag = diagnose(&game, &result.state, &penalty, &opts)?;
    let doc = ResultDoc::new(&game, problem, &a.problem.x0, &cfg, &result, message, Some(&diag), a.timing);
    if let Some(p) = &a.trace {
        std::fs::write(p, result.trace.to_csv(game.num_players()))?;
    }
    let text = match a.format {
        Format::Json => doc.to_json(),
        Format::Text => doc.to_text(),
        Format::Csv => solution_csv(&game, &result),
    };
    io.emit(a.out.as_deref(), &text)?;
    if let Some(m) = &doc.message {
        let _ = writeln!(io.err, "warning: {m}");
    }
    Ok(status_code(result.status))
}

fn solution_csv(game: &GameInstance, result: &SolveResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["player", "component", "value"]).expect("in-memory write");
    for nu in 0..game.num_players() {
        let block = game.layout.block(&result.state.x, nu).expect("valid player");
        for (i, v) in block.iter().enumerate() {
            w.write_record([(nu + 1).to_string(), (i + 1).to_string(), format!("{v:e}")])
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 csv")
}

fn cmd_bench(a: &BenchArgs, io: &mut Io) -> Result<i32> {
    let cfg = a.solver.config()?;
    let rows: Vec<String> = if a.rows.is_empty() {
        DEFAULT_ROWS.iter().map(|s| s.to_string()).collect()
    } else {
        a.rows.clone()
    };
    let summaries: Vec<RunSummary> = rows.iter().map(|r| run_row(r, &cfg, a.timing)).collect();
    let text = match a.format {
        Format::Csv => bench::to_csv(&summaries),
        Format::Text => bench::to_text(&summaries),
        Format::Json => bench::to_json(&summaries),
    };
    io.emit(a.out.as_deref(), &text)?;
    Ok(if summaries.iter().all(row_succeeded) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn cmd_trace(a: &TraceArgs, io: &mut Io) -> Result<i32> {
    let cfg = a.solver.config()?;
    let (game, _) = load_problem(a.problem.problem.as_deref(), a.problem.load.as_deref(), cfg.seed)?;
    let x0 = StartPoint::parse(&a.problem.x0)?.resolve(game.n())?;
    let (result, message) = run_solver(&game, &x0, &cfg)?;
    io.emit(a.out.as_deref(), &result.trace.to_csv(game.num_players()))?;
    if let Some(m) = message {
        let _ = writeln!(io.err, "warning: {m}");
    }
    Ok(status_code(result.status))
}

fn cmd_validate(a: &ValidateArgs, io: &mut Io) -> Result<i32> {
    let doc = ResultDoc::from_json(&std::fs::read_to_string(&a.input)?)?;
    let (game, _) = match (&a.problem, &a.load) {
        (None, None) => match &doc.problem.path {
            Some(p) => load_problem(None, Some(Path::new(p)), doc.problem.seed)?,
            None => load_problem(Some(&doc.problem.name), None, doc.problem.seed)?,
        },
        (p, l) => load_problem(p.as_deref(), l.as_deref(), doc.problem.seed)?,
    };
    let state = doc.state(&game)?;
    let penalty = PenaltyParams::uniform(game.num_players(), doc.config.alpha.0, doc.config.beta.0)?;
    let opts = DiagnoseOptions {
        saddle_samples: a.saddle_samples,
        seed: a.seed,
        ..DiagnoseOptions::default()
    };
    let report = diagnose(&game, &state, &penalty, &opts)?;
    let d = DiagnosticsDoc::from_report(&report);
    let text = match a.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&d).expect("diagnostics serialize");
            s.push('\n');
            s
        }
        _ => report::diagnostics_text(&d),
    };
    io.emit(a.out.as_deref(), &text)?;
    let ok = report.max_kkt() <= a.threshold
        && report.players.iter().all(|p| p.best_response_gap <= a.threshold)
        && report.saddle.violations() == 0;
    Ok(if ok { EXIT_OK } else { EXIT_INVALID })
}
