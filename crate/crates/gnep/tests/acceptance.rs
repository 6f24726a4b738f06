//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use gnep::diagnostics::{
    best_response_gap, kkt_residual_player, perturbation_block_residue, projected_gradient_bound_violations, saddle_check,
    BestResponseOptions, SADDLE_SLACK,
};
use gnep::lagrangian::{PenaltyParams, QuadraticModelAnchor};
use gnep::model::{GameInstance, IterateState};
use gnep::problems::{self, ArrowDebreuData};
use gnep::solver::monitor::{coupling_violations, dual_identity_violations, multiplier_blowup};
use gnep::solver::{
    choose_gamma, choose_sigma_scoped, estimate_lipschitz, inner_step, solve, SolveResult, SolverConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLE3_STARTS: [[f64; 2]; 3] = [[0.0, 0.0], [2.0, 1.0], [-1.0, -1.0]];
const A18_PLAYER1: [f64; 6] = [45.4976, 28.0478, 26.4547, 28.8309, 11.3811, 9.7880];
/// Outer budget for library-wide property runs; the properties are per step.
const LIBRARY_MAX_OUTER: usize = 300;

fn report(id: usize, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {id:>2} {name}: PASS");
    } else {
        println!("criterion {id:>2} {name}: FAIL");
        for f in failures.iter().take(20) {
            println!("    {f}");
        }
        if failures.len() > 20 {
            println!("    ... {} more", failures.len() - 20);
        }
    }
    assert!(failures.is_empty(), "criterion {id} ({name}) failed: {}", failures.len());
}

fn penalty(game: &GameInstance, cfg: &SolverConfig) -> PenaltyParams {
    PenaltyParams::uniform(game.num_players(), cfg.alpha, cfg.beta).unwrap()
}

fn run(game: &GameInstance, x0: &[f64], cfg: &SolverConfig) -> SolveResult {
    match solve(game, x0, cfg) {
        Ok(r) => r,
        Err(f) => *f.partial,
    }
}

struct LibraryRun {
    game: GameInstance,
    cfg: SolverConfig,
    result: SolveResult,
}

fn library_runs() -> &'static [LibraryRun] {
    static RUNS: OnceLock<Vec<LibraryRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let cfg = SolverConfig {
            max_outer: LIBRARY_MAX_OUTER,
            record_iterates: true,
            ..SolverConfig::default()
        };
        problems::library(0)
            .into_iter()
            .map(|(game, x0)| {
                let result = run(&game, &x0, &cfg);
                LibraryRun { game, cfg: cfg.clone(), result }
            })
            .collect()
    })
}

fn example3_runs() -> &'static [(SolveResult, Duration)] {
    static RUNS: OnceLock<Vec<(SolveResult, Duration)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let game = problems::make_example3();
        let cfg = SolverConfig::default();
        EXAMPLE3_STARTS
            .iter()
            .map(|x0| {
                let t = Instant::now();
                let r = run(&game, x0, &cfg);
                (r, t.elapsed())
            })
            .collect()
    })
}

/// Seeded desk-scale instances: up to 3 players, 2 variables each, at most 4 coupling rows.
fn random_suite() -> &'static [(GameInstance, SolveResult)] {
    static RUNS: OnceLock<Vec<(GameInstance, SolveResult)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        (0..20u64)
            .map(|seed| {
                let (players, m_per) = if seed % 2 == 0 { (2, 2) } else { (3, 1) };
                let game = problems::gen_random_quadratic(players, 2, m_per, 1000 + seed).unwrap();
                assert!(game.num_players() <= 3 && game.n() <= 6 && game.total_constraints() <= 4);
                let r = run(&game, &vec![0.0; game.n()], &SolverConfig::default());
                (game, r)
            })
            .collect()
    })
}

#[test]
fn c01_example3_reproduction() {
    let mut fails = Vec::new();
    for (x0, (r, t)) in EXAMPLE3_STARTS.iter().zip(example3_runs()) {
        if !r.status.is_success() {
            fails.push(format!("x0={x0:?}: status {}", r.status.as_str()));
        }
        if (r.state.x[0] - 1.0).abs() > 1e-3 || r.state.x[1].abs() > 1e-3 {
            fails.push(format!("x0={x0:?}: x={:?}", r.state.x));
        }
        if *t >= Duration::from_secs(5) {
            fails.push(format!("x0={x0:?}: runtime {t:?}"));
        }
        if multiplier_blowup(&r.trace, 100, 0.0) {
            fails.push(format!("x0={x0:?}: multiplier norm rises over the whole final window"));
        }
    }
    report(1, "circle game reproduction", &fails);
}

#[test]
fn c02_electricity_market_reproduction() {
    let game = problems::make_a18_electricity();
    let cfg = SolverConfig {
        max_outer: 3000,
        ..SolverConfig::default()
    };
    let t = Instant::now();
    let r = run(&game, &[0.0; 12], &cfg);
    let elapsed = t.elapsed();
    let mut fails = Vec::new();
    if !r.status.is_success() {
        fails.push(format!("status {} after {} outer, residual {:.3e}", r.status.as_str(), r.outer_iterations, r.final_residual));
    }
    for (i, want) in A18_PLAYER1.iter().enumerate() {
        if (r.state.x[i] - want).abs() > 5e-3 {
            fails.push(format!("player 1 x[{i}] = {:.4}, want {want}", r.state.x[i]));
        }
    }
    for i in 0..6 {
        if (r.state.x[i] - r.state.x[6 + i]).abs() > 5e-3 {
            fails.push(format!("asymmetric component {i}: {:.4} vs {:.4}", r.state.x[i], r.state.x[6 + i]));
        }
    }
    if elapsed >= Duration::from_secs(30) {
        fails.push(format!("runtime {elapsed:?}"));
    }
    if r.total_inner_iterations > 1140 {
        fails.push(format!("{} cumulative inner iterations, limit 1140", r.total_inner_iterations));
    }
    report(2, "electricity market reproduction", &fails);
}

#[test]
fn c03_monotone_decrease_on_trace_csv() {
    let mut fails = Vec::new();
    for lr in library_runs() {
        let np = lr.game.num_players();
        let csv_text = lr.result.trace.to_csv(np);
        let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
        let headers = rdr.headers().unwrap().clone();
        let cols: Vec<usize> = (1..=np)
            .map(|nu| headers.iter().position(|h| h == format!("L_{nu}")).unwrap())
            .collect();
        let mut prev = lr.result.trace.initial_l.clone();
        for row in rdr.records() {
            let row = row.unwrap();
            let k: usize = row[0].parse().unwrap();
            for (nu, &c) in cols.iter().enumerate() {
                let v: f64 = row[c].parse().unwrap();
                if v > prev[nu] + 1e-9 {
                    fails.push(format!("{} k={k} player {}: {v:.12e} > {:.12e}", lr.game.name, nu + 1, prev[nu]));
                }
                prev[nu] = v;
            }
        }
    }
    report(3, "per-player Lagrangian decrease", &fails);
}

#[test]
fn c04_multiplier_step_coupling() {
    let mut fails = Vec::new();
    for lr in library_runs() {
        let beta = vec![lr.cfg.beta; lr.game.num_players()];
        for v in coupling_violations(&lr.result.trace, &beta, 1e-9) {
            fails.push(format!("{} k={} player {}: {:.6e} > {:.6e}", lr.game.name, v.k, v.player + 1, v.lhs, v.rhs));
        }
    }
    report(4, "multiplier step bounded by primal step", &fails);
}

#[test]
fn c05_exact_dual_identities() {
    let mut fails = Vec::new();
    for lr in library_runs() {
        let bad = dual_identity_violations(&lr.result.trace);
        if bad > 0 {
            fails.push(format!("{}: {bad} player-iterations with lambda != mu or z != 0", lr.game.name));
        }
        if lr.result.trace.iterates.len() != lr.result.outer_iterations + 1 {
            fails.push(format!("{}: iterates not recorded", lr.game.name));
        }
    }
    report(5, "exact dual identities", &fails);
}

#[test]
fn c06_inner_contraction() {
    let game = problems::gen_random_quadratic(3, 2, 1, 7).unwrap();
    let cfg = SolverConfig {
        max_outer: 5,
        record_iterates: true,
        ..SolverConfig::default()
    };
    let r = run(&game, &vec![0.0; game.n()], &cfg);
    let p = penalty(&game, &cfg);
    let mut fails = Vec::new();
    let mut checked = 0;
    for (k, state) in r.trace.iterates.iter().take(r.outer_iterations).enumerate() {
        let mut est = estimate_lipschitz(&game, state, &cfg).unwrap();
        let (gamma, _) = choose_gamma(&est, &p, &cfg.gamma);
        est.set_gamma(&gamma);
        let sig = choose_sigma_scoped(&est, &cfg.sigma, cfg.sigma_scope, k);
        let anchor = QuadraticModelAnchor::build(&game, &state.x, &state.duals, &p, gamma, false).unwrap();
        let mut xhat = state.x.clone();
        for _ in 0..100_000 {
            xhat = inner_step(&game, &anchor, &xhat, &sig.sigma, false).unwrap();
        }
        // Ratios below this distance measure rounding, not the map.
        let floor = 1e-10 * (1.0 + xhat.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        let mut u = state.x.clone();
        for l in 0..200 {
            let next = inner_step(&game, &anchor, &u, &sig.sigma, false).unwrap();
            let before = dist(&u, &xhat);
            let after = dist(&next, &xhat);
            if before <= floor {
                break;
            }
            checked += 1;
            if after > (sig.tau + 1e-6) * before {
                fails.push(format!("k={k} l={l}: ratio {:.9} > tau {:.9}", after / before, sig.tau));
            }
            u = next;
        }
    }
    if checked == 0 {
        fails.push("no inner steps measured".into());
    }
    report(6, "inner contraction", &fails);
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[test]
fn c07_best_response_equivalence() {
    let t = Instant::now();
    let opts = BestResponseOptions::default();
    let mut fails = Vec::new();
    for (i, (game, r)) in random_suite().iter().enumerate() {
        if !r.status.is_success() {
            fails.push(format!("instance {i}: status {}", r.status.as_str()));
            continue;
        }
        for nu in 0..game.num_players() {
            let gap = best_response_gap(game, &r.state.x, nu, &opts).unwrap();
            if !(gap <= 1e-3) {
                fails.push(format!("instance {i} player {}: best-response gap {gap:.3e}", nu + 1));
            }
            let kkt = kkt_residual_player(game, nu, &r.state.x, &r.state.duals[nu].lambda).unwrap();
            if kkt.max() > 1e-3 {
                fails.push(format!("instance {i} player {}: KKT residual {:.3e}", nu + 1, kkt.max()));
            }
        }
    }
    if t.elapsed() >= Duration::from_secs(60) {
        fails.push(format!("suite took {:?}", t.elapsed()));
    }
    report(7, "best-response equivalence on random games", &fails);
}

#[test]
fn c08_saddle_falsification() {
    let cfg = SolverConfig::default();
    let mut fails = Vec::new();
    let mut check = |label: String, game: &GameInstance, state: &IterateState| {
        let rep = saddle_check(game, state, &penalty(game, &cfg), 1000, 0).unwrap();
        if rep.violations() > 0 {
            fails.push(format!(
                "{label}: {} left, {} right beyond {SADDLE_SLACK:e} (worst {:.3e}, {:.3e})",
                rep.left_violations, rep.right_violations, rep.worst_left, rep.worst_right
            ));
        }
    };
    let ex3 = problems::make_example3();
    for (x0, (r, _)) in EXAMPLE3_STARTS.iter().zip(example3_runs()) {
        if r.status.is_success() {
            check(format!("circle game from {x0:?}"), &ex3, &r.state);
        }
    }
    for (i, (game, r)) in random_suite().iter().enumerate() {
        if r.status.is_success() {
            check(format!("random game {i}"), game, &r.state);
        }
    }
    report(8, "saddle inequalities at converged points", &fails);
}

#[test]
fn c09_exchange_economy_properties() {
    let data = ArrowDebreuData::generate(5, 2, 3, 0).unwrap();
    let game = problems::gen_arrow_debreu(5, 2, 3, 0).unwrap();
    let cfg = SolverConfig {
        max_outer: 2000,
        ..SolverConfig::default()
    };
    let r = run(&game, &vec![0.0; game.n()], &cfg);
    let mut fails = Vec::new();
    if !r.status.is_success() {
        fails.push(format!("status {} after {} outer, residual {:.3e}", r.status.as_str(), r.outer_iterations, r.final_residual));
    }
    let off = data.price_offset();
    let p = &r.state.x[off..off + data.goods];
    let psum: f64 = p.iter().sum();
    if (psum - 1.0).abs() > 1e-9 {
        fails.push(format!("prices sum to {psum}"));
    }
    if p.iter().any(|v| *v < 0.0) {
        fails.push(format!("negative price in {p:?}"));
    }
    let z = data.excess_demand(&r.state.x);
    if z.iter().any(|v| *v > 1e-3) {
        fails.push(format!("excess demand {z:?}"));
    }
    let pz: f64 = p.iter().zip(&z).map(|(a, b)| a * b).sum();
    if pz.abs() > 1e-3 {
        fails.push(format!("p.z = {pz:.3e}"));
    }
    report(9, "exchange economy equilibrium properties", &fails);
}

#[test]
fn c10_gradients_match_central_differences() {
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-6 * b.abs().max(1.0);
    for (game, _) in problems::library(0) {
        let n = game.n();
        for pt in 0..50 {
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..3.0)).collect();
            let x = game.project(&raw).unwrap();
            for nu in 0..game.num_players() {
                let oracle = &game.players[nu].oracle;
                let m = oracle.num_constraints();
                let grad = oracle.objective_grad(&x);
                let jac = oracle.constraint_jacobian(&x);
                for j in 0..n {
                    let h = 1e-5 * (1.0 + x[j].abs());
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[j] += h;
                    xm[j] -= h;
                    let fd = (oracle.objective(&xp) - oracle.objective(&xm)) / (2.0 * h);
                    if !close(grad[j], fd) {
                        fails.push(format!("{} point {pt} player {} d/dx{j}: {} vs {fd}", game.name, nu + 1, grad[j]));
                    }
                    let (gp, gm) = (oracle.constraints(&xp), oracle.constraints(&xm));
                    for i in 0..m {
                        let fd = (gp[i] - gm[i]) / (2.0 * h);
                        if !close(jac[i * n + j], fd) {
                            fails.push(format!(
                                "{} point {pt} player {} dg{i}/dx{j}: {} vs {fd}",
                                game.name,
                                nu + 1,
                                jac[i * n + j]
                            ));
                        }
                    }
                }
            }
        }
    }
    report(10, "oracle derivatives", &fails);
}

#[test]
fn c11_projected_gradient_bound() {
    let mut fails = Vec::new();
    for lr in library_runs() {
        let p = penalty(&lr.game, &lr.cfg);
        for v in projected_gradient_bound_violations(&lr.game, &lr.result.trace, &p, 1e-9).unwrap() {
            fails.push(format!("{} k={} player {}: {:.6e} > {:.6e}", lr.game.name, v.k, v.player + 1, v.lhs, v.rhs));
        }
        for v in perturbation_block_residue(&lr.game, &lr.result.trace, &p).unwrap() {
            fails.push(format!("{} k={} player {}: perturbation block {:.3e}", lr.game.name, v.k, v.player + 1, v.lhs));
        }
    }
    report(11, "projected-gradient bound", &fails);
}
