//! Run-level checks evaluated on a finished trace.

use super::trace::SolveTrace;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub k: usize,
    pub player: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Steps where a player's Lagrangian value rose by more than `slack`,
/// starting from the initial point.
pub fn decrease_violations(trace: &SolveTrace, slack: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut prev = trace.initial_l.clone();
    for r in &trace.records {
        for (nu, p) in r.players.iter().enumerate() {
            if p.l_value > prev[nu] + slack {
                out.push(Violation { k: r.k, player: nu, lhs: p.l_value, rhs: prev[nu] });
            }
        }
        prev = r.players.iter().map(|p| p.l_value).collect();
    }
    out
}

/// Steps where `|dlambda| > (L_g/beta) |dx| + slack`.
pub fn coupling_violations(trace: &SolveTrace, beta: &[f64], slack: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for r in &trace.records {
        for (nu, p) in r.players.iter().enumerate() {
            let rhs = p.l_gfun / beta[nu] * r.dx_2;
            if p.dlambda_2 > rhs + slack {
                out.push(Violation { k: r.k, player: nu, lhs: p.dlambda_2, rhs });
            }
        }
    }
    out
}

/// Recorded iterates after the start with `lambda != mu` or `z != 0`, bitwise.
pub fn dual_identity_violations(trace: &SolveTrace) -> usize {
    trace
        .iterates
        .iter()
        .skip(1)
        .flat_map(|s| s.duals.iter())
        .filter(|d| d.lambda != d.mu || d.z.iter().any(|z| *z != 0.0))
        .count()
}

/// Mean of the last `window` primal step lengths (max norm).
pub fn tail_step_average(trace: &SolveTrace, window: usize) -> f64 {
    let n = trace.records.len();
    if n == 0 {
        return 0.0;
    }
    let tail = &trace.records[n.saturating_sub(window)..];
    tail.iter().map(|r| r.dx_inf).sum::<f64>() / tail.len() as f64
}

/// Whether some player's multiplier norm increases at every one of the last
/// `window` steps by a total of more than `window * tol`.
pub fn multiplier_blowup(trace: &SolveTrace, window: usize, tol: f64) -> bool {
    let n = trace.records.len();
    if n < 2 {
        return false;
    }
    let tail = &trace.records[n.saturating_sub(window)..];
    let players = tail[0].players.len();
    (0..players).any(|nu| {
        let seq: Vec<f64> = tail.iter().map(|r| r.players[nu].lambda_norm).collect();
        let rising = seq.windows(2).all(|w| w[1] > w[0]);
        rising && seq[seq.len() - 1] - seq[0] > tail.len() as f64 * tol
    })
}
