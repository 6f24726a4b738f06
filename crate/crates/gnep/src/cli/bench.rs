use serde::Serialize;

use super::x0::StartPoint;
use crate::error::Result;
use crate::problems::builtin;
use crate::problems::format::Real;
use crate::solver::{solve, SolveStatus, SolverConfig};

pub const DEFAULT_ROWS: &[&str] = &["example3@const:0", "example3@vec:2,1", "example3@vec:-1,-1", "a18@const:0"];

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub problem: String,
    #[serde(rename = "N")]
    pub players: usize,
    pub n: usize,
    /// Functional constraints plus finite variable bounds.
    pub m: usize,
    pub x0: String,
    /// Cumulative inner iterations.
    pub iter: usize,
    pub outer: usize,
    /// Seconds, when timing was requested.
    pub time: Option<Real>,
    pub status: String,
    pub residual: Real,
}

impl RunSummary {
    fn cells(&self) -> Vec<String> {
        vec![
            self.problem.clone(),
            self.players.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.x0.clone(),
            self.iter.to_string(),
            self.outer.to_string(),
            self.time.map_or("NA".to_string(), |t| format!("{:.3}", t.0)),
            self.status.clone(),
            format!("{:.3e}", self.residual.0),
        ]
    }
}

pub const HEADER: [&str; 10] = ["problem", "N", "n", "m", "x0", "iter", "outer", "time", "status", "residual"];

/// `<problem>@<x0>`; the start point defaults to the origin.
pub fn parse_row(row: &str) -> (String, String) {
    match row.split_once('@') {
        Some((p, x)) => (p.to_string(), x.to_string()),
        None => (row.to_string(), "const:0".to_string()),
    }
}

/// Runs one row; setup errors are reported as a failed row.
pub fn run_row(row: &str, cfg: &SolverConfig, timing: bool) -> RunSummary {
    let (name, x0) = parse_row(row);
    let attempt = || -> Result<RunSummary> {
        let game = builtin(&name, cfg.seed)?;
        let start = StartPoint::parse(&x0)?.resolve(game.n())?;
        let res = match solve(&game, &start, cfg) {
            Ok(r) => r,
            Err(f) => *f.partial,
        };
        Ok(RunSummary {
            problem: name.clone(),
            players: game.num_players(),
            n: game.n(),
            m: game.total_constraints_with_bounds(),
            x0: x0.clone(),
            iter: res.total_inner_iterations,
            outer: res.outer_iterations,
            time: timing.then(|| Real(res.wall_time.as_secs_f64())),
            status: res.status.as_str().into(),
            residual: Real(res.final_residual),
        })
    };
    attempt().unwrap_or_else(|e| RunSummary {
        problem: name.clone(),
        players: 0,
        n: 0,
        m: 0,
        x0: x0.clone(),
        iter: 0,
        outer: 0,
        time: None,
        status: format!("error: {e}"),
        residual: Real(f64::NAN),
    })
}

pub fn row_succeeded(r: &RunSummary) -> bool {
    r.status == SolveStatus::Converged.as_str() || r.status == SolveStatus::StalledStationary.as_str()
}

pub fn to_csv(rows: &[RunSummary]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(r.cells()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 csv")
}

pub fn to_text(rows: &[RunSummary]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.cells()).collect();
    let mut width: Vec<usize> = HEADER.iter().map(|h| h.len()).collect();
    for c in &cells {
        for (w, v) in width.iter_mut().zip(c) {
            *w = (*w).max(v.len());
        }
    }
    let line = |vals: Vec<String>| {
        let parts: Vec<String> = vals.iter().zip(&width).map(|(v, w)| format!("{v:<w$}")).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(HEADER.iter().map(|h| h.to_string()).collect());
    for c in cells {
        out.push_str(&line(c));
    }
    out
}

pub fn to_json(rows: &[RunSummary]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("summary serializes");
    s.push('\n');
    s
}
