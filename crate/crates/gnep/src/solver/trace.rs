use std::fmt::Write;

use crate::model::IterateState;

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerRecord {
    /// Lagrangian value at the new iterate.
    pub l_value: f64,
    pub dlambda_2: f64,
    pub lambda_norm: f64,
    pub gamma: f64,
    pub gamma_below_bound: bool,
    pub l_theta: f64,
    pub l_g: f64,
    pub l_g_norm: f64,
    pub l_gfun: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based outer iteration.
    pub k: usize,
    pub players: Vec<PlayerRecord>,
    pub dx_inf: f64,
    pub dx_2: f64,
    pub dlambda_inf: f64,
    pub feas: f64,
    pub inner_iters: usize,
    pub sigma: f64,
    pub tau: f64,
    pub stalled: bool,
    pub descent: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveTrace {
    /// Lagrangian values at the start point.
    pub initial_l: Vec<f64>,
    pub records: Vec<IterationRecord>,
    /// Every iterate including the start, when recording was requested.
    pub iterates: Vec<IterateState>,
}

pub fn trace_header(players: usize) -> String {
    let mut h = String::from("k");
    for nu in 1..=players {
        write!(h, ",L_{nu}").unwrap();
    }
    h.push_str(",dx_inf,dlambda_inf,feas,inner_iters");
    h
}

impl SolveTrace {
    /// CSV with one row per outer iteration.
    pub fn to_csv(&self, players: usize) -> String {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        let header = trace_header(players);
        wtr.write_record(header.split(',')).expect("in-memory write");
        for r in &self.records {
            let mut row = vec![r.k.to_string()];
            row.extend(r.players.iter().map(|p| p.l_value.to_string()));
            row.push(r.dx_inf.to_string());
            row.push(r.dlambda_inf.to_string());
            row.push(r.feas.to_string());
            row.push(r.inner_iters.to_string());
            wtr.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("flush")).expect("utf8")
    }
}
