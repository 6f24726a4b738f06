use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::game::GameInstance;

/// Outcome of sampled oracle checks on an instance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub samples: usize,
    pub max_gradient_error: f64,
    pub max_jacobian_error: f64,
    pub convexity_violations: usize,
    pub max_convexity_violation: f64,
    pub nonfinite_players: Vec<usize>,
}

impl ValidationReport {
    pub fn has_nonfinite(&self) -> bool {
        !self.nonfinite_players.is_empty()
    }

    pub fn passes(&self, fd_tol: f64) -> bool {
        !self.has_nonfinite()
            && self.max_gradient_error <= fd_tol
            && self.max_jacobian_error <= fd_tol
            && self.convexity_violations == 0
    }
}

const FD_STEP: f64 = 1e-6;

pub(crate) fn sample_point(game: &GameInstance, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..game.n()).map(|_| rng.gen_range(lo..hi)).collect();
    game.project(&raw).expect("layout-consistent sample")
}

fn rel_err(fd: f64, an: f64) -> f64 {
    (fd - an).abs() / an.abs().max(1.0)
}

/// Central-difference gradient check, midpoint convexity along own-block
/// segments, and finiteness flags, at `samples` seeded points.
pub fn validate_instance(game: &GameInstance, samples: usize, seed: u64) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ValidationReport {
        samples,
        ..Default::default()
    };
    let n = game.n();
    let zero = game.project(&vec![0.0; n]).expect("layout-consistent origin");
    let mut points = vec![zero];
    for _ in 1..samples.max(1) {
        points.push(sample_point(game, &mut rng, -1.0, 3.0));
    }

    for (nu, p) in game.players.iter().enumerate() {
        let o = &p.oracle;
        let m = o.num_constraints();
        let mut bad = false;
        for x in &points {
            let th = o.objective(x);
            let gr = o.objective_grad(x);
            let gv = o.constraints(x);
            let jac = o.constraint_jacobian(x);
            if !th.is_finite()
                || gr.iter().chain(&gv).chain(&jac).any(|v| !v.is_finite())
                || gr.len() != n
                || gv.len() != m
                || jac.len() != m * n
            {
                bad = true;
                continue;
            }
            let mut xp = x.clone();
            for j in 0..n {
                let x0 = xp[j];
                xp[j] = x0 + FD_STEP;
                let fp = o.objective(&xp);
                let gp = o.constraints(&xp);
                xp[j] = x0 - FD_STEP;
                let fm = o.objective(&xp);
                let gm = o.constraints(&xp);
                xp[j] = x0;
                let fd = (fp - fm) / (2.0 * FD_STEP);
                if !fd.is_finite() {
                    bad = true;
                    continue;
                }
                rep.max_gradient_error = rep.max_gradient_error.max(rel_err(fd, gr[j]));
                for i in 0..m {
                    let fdi = (gp[i] - gm[i]) / (2.0 * FD_STEP);
                    if !fdi.is_finite() {
                        bad = true;
                        continue;
                    }
                    rep.max_jacobian_error = rep.max_jacobian_error.max(rel_err(fdi, jac[i * n + j]));
                }
            }

            // Midpoint convexity along a random own-block segment.
            let r = game.layout.range(nu).expect("valid player");
            let other = sample_point(game, &mut rng, -1.0, 3.0);
            let a = x.clone();
            let mut b = x.clone();
            b[r.clone()].copy_from_slice(&other[r.clone()]);
            let mut mid = x.clone();
            for j in r.clone() {
                mid[j] = 0.5 * (a[j] + b[j]);
            }
            let check = |fa: f64, fb: f64, fm: f64, rep: &mut ValidationReport| {
                let v = fm - 0.5 * (fa + fb);
                let slack = 1e-9 * (1.0 + fa.abs().max(fb.abs()));
                if v > slack {
                    rep.convexity_violations += 1;
                    rep.max_convexity_violation = rep.max_convexity_violation.max(v);
                }
            };
            check(o.objective(&a), o.objective(&b), o.objective(&mid), &mut rep);
            let (ga, gb, gm) = (o.constraints(&a), o.constraints(&b), o.constraints(&mid));
            for i in 0..m {
                check(ga[i], gb[i], gm[i], &mut rep);
            }
        }
        if bad {
            rep.nonfinite_players.push(nu);
        }
    }
    rep
}
