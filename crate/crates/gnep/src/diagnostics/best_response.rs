use super::kkt::own_lagrangian_grad;
use crate::error::Result;
use crate::linalg::{dist_inf, dot, norm_inf};
use crate::model::GameInstance;

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseOptions {
    /// Total projected-gradient iterations over all penalty rounds.
    pub budget: usize,
    /// KKT residual the reference solution must reach before it is trusted.
    pub certify: f64,
    pub rho0: f64,
    pub rho_max: f64,
}

impl Default for BestResponseOptions {
    fn default() -> Self {
        Self {
            budget: 100_000,
            certify: 1e-8,
            rho0: 10.0,
            rho_max: 1e8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    /// Own block of the reference solution.
    pub block: Vec<f64>,
    pub multipliers: Vec<f64>,
    pub value: f64,
    pub kkt: f64,
    pub iterations: usize,
    pub certified: bool,
}

struct Own<'a> {
    game: &'a GameInstance,
    nu: usize,
    full: Vec<f64>,
    range: std::ops::Range<usize>,
}

impl Own<'_> {
    fn at(&mut self, v: &[f64]) -> &[f64] {
        self.full[self.range.clone()].copy_from_slice(v);
        &self.full
    }

    fn project(&self, v: &mut [f64]) -> Result<()> {
        self.game.player(self.nu)?.set.project_in_place(v)
    }

    /// `theta + 1/(2 rho) sum([eta + rho g]^+^2 - eta^2)` and its gradient.
    fn merit(&mut self, v: &[f64], eta: &[f64], rho: f64) -> Result<(f64, Vec<f64>)> {
        let (game, nu) = (self.game, self.nu);
        let x = self.at(v).to_vec();
        let theta = game.objective(nu, &x)?;
        let g = game.constraints(nu, &x)?;
        let shifted: Vec<f64> = g.iter().zip(eta).map(|(gi, e)| (e + rho * gi).max(0.0)).collect();
        let pen: f64 = shifted.iter().zip(eta).map(|(s, e)| s * s - e * e).sum::<f64>() / (2.0 * rho);
        let grad = own_lagrangian_grad(game, nu, &x, &shifted)?;
        Ok((theta + pen, grad))
    }

    /// Max of natural-map stationarity, complementarity and feasibility.
    fn kkt(&mut self, v: &[f64], eta: &[f64]) -> Result<f64> {
        let (game, nu) = (self.game, self.nu);
        let x = self.at(v).to_vec();
        let grad = own_lagrangian_grad(game, nu, &x, eta)?;
        let mut step: Vec<f64> = v.iter().zip(&grad).map(|(a, g)| a - g).collect();
        self.project(&mut step)?;
        let g = game.constraints(nu, &x)?;
        let stat = dist_inf(v, &step) / norm_inf(&grad).max(1.0);
        let comp = g.iter().zip(eta).map(|(gi, e)| (gi * e).abs()).fold(0.0, f64::max);
        let feas = g.iter().map(|gi| gi.max(0.0)).fold(0.0, f64::max);
        Ok(stat.max(comp).max(feas))
    }
}

/// Accelerated projected gradient with backtracking and adaptive restart on the merit function.
fn minimize_merit(own: &mut Own, v0: &[f64], eta: &[f64], rho: f64, tol: f64, budget: usize) -> Result<(Vec<f64>, usize)> {
    let mut x = v0.to_vec();
    own.project(&mut x)?;
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut lip = 1.0f64;
    let mut fx = own.merit(&x, eta, rho)?.0;
    let mut used = 0;
    while used < budget {
        used += 1;
        let (fy, gy) = own.merit(&y, eta, rho)?;
        let mut next;
        loop {
            next = y.iter().zip(&gy).map(|(a, g)| a - g / lip).collect::<Vec<f64>>();
            own.project(&mut next)?;
            let d: Vec<f64> = next.iter().zip(&y).map(|(a, b)| a - b).collect();
            let f_next = own.merit(&next, eta, rho)?.0;
            if f_next <= fy + dot(&gy, &d) + 0.5 * lip * dot(&d, &d) + 1e-14 * fy.abs().max(1.0) || lip > 1e16 {
                break;
            }
            lip *= 2.0;
        }
        let f_next = own.merit(&next, eta, rho)?.0;
        if f_next > fx && t > 1.0 {
            // restart momentum
            y = x.clone();
            t = 1.0;
            continue;
        }
        let mapping = dist_inf(&next, &y) * lip;
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = next.iter().zip(&x).map(|(a, b)| a + (t - 1.0) / t_next * (a - b)).collect();
        x = next;
        fx = f_next;
        t = t_next;
        lip *= 0.9;
        if mapping <= tol {
            break;
        }
    }
    Ok((x, used))
}

/// Reference best response of player `nu` with rivals fixed at `x`.
///
/// Augmented-Lagrangian outer loop with a ramped penalty; the answer is
/// certified only if its KKT residual reaches `opts.certify`.
pub fn best_response(game: &GameInstance, x: &[f64], nu: usize, opts: &BestResponseOptions) -> Result<BestResponse> {
    game.layout.check_len(x.len())?;
    let range = game.layout.range(nu)?;
    let m = game.player(nu)?.m();
    let mut own = Own {
        game,
        nu,
        full: x.to_vec(),
        range: range.clone(),
    };
    let mut v = x[range].to_vec();
    let mut eta = vec![0.0; m];
    let mut rho = opts.rho0;
    let mut used = 0;
    let mut kkt = f64::INFINITY;
    let mut prev_feas = f64::INFINITY;
    let mut tol = 1e-4;
    while used < opts.budget {
        let (nv, it) = minimize_merit(&mut own, &v, &eta, rho, tol, opts.budget - used)?;
        used += it;
        v = nv;
        let full = own.at(&v).to_vec();
        let g = game.constraints(nu, &full)?;
        for (e, gi) in eta.iter_mut().zip(&g) {
            *e = (*e + rho * gi).max(0.0);
        }
        kkt = own.kkt(&v, &eta)?;
        if kkt <= opts.certify {
            break;
        }
        let feas = g.iter().map(|gi| gi.max(0.0)).fold(0.0, f64::max);
        if feas > 0.25 * prev_feas && rho < opts.rho_max {
            rho = (rho * 10.0).min(opts.rho_max);
        }
        prev_feas = feas;
        tol = (tol * 0.1).max(1e-2 * opts.certify);
    }
    let full = own.at(&v).to_vec();
    let value = game.objective(nu, &full)?;
    Ok(BestResponse {
        block: v,
        multipliers: eta,
        value,
        kkt,
        iterations: used,
        certified: kkt <= opts.certify,
    })
}

/// `theta(x) - theta(best response)`, or `+inf` when the reference cannot be certified.
pub fn best_response_gap(game: &GameInstance, x: &[f64], nu: usize, opts: &BestResponseOptions) -> Result<f64> {
    let br = best_response(game, x, nu, opts)?;
    if !br.certified {
        return Ok(f64::INFINITY);
    }
    Ok(game.objective(nu, x)? - br.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SimpleSet;
    use crate::problems::{QuadraticConstraintSpec, QuadraticGnepSpec, QuadraticPlayerSpec};

    fn free(dim: usize) -> SimpleSet {
        SimpleSet::boxed(vec![f64::NEG_INFINITY; dim], vec![f64::INFINITY; dim]).unwrap()
    }

    #[test]
    fn single_player_gap_is_suboptimality() {
        // min (v - 3)^2 / 2 on [0, 2]: optimum 2 with value 0.5
        let g = QuadraticGnepSpec {
            name: "one".into(),
            layout: vec![1],
            players: vec![QuadraticPlayerSpec {
                q: vec![1.0],
                b: vec![-3.0],
                set: SimpleSet::boxed(vec![0.0], vec![2.0]).unwrap(),
                constraints: vec![],
            }],
        }
        .to_game()
        .unwrap();
        let gap = best_response_gap(&g, &[0.5], 0, &BestResponseOptions::default()).unwrap();
        // theta(0.5) = 0.125 - 1.5, theta(2) = 2 - 6
        assert!((gap - ((0.125 - 1.5) - (2.0 - 6.0))).abs() < 1e-8);
    }

    #[test]
    fn profitable_deviation_of_half() {
        // player 2 objective (y - x)^2 with x fixed at 1; deviating from y = 1 - 1 gives up 0.5
        let g = QuadraticGnepSpec {
            name: "pair".into(),
            layout: vec![1, 1],
            players: vec![
                QuadraticPlayerSpec {
                    q: vec![1.0, 0.0, 0.0, 0.0],
                    b: vec![-1.0, 0.0],
                    set: free(1),
                    constraints: vec![],
                },
                QuadraticPlayerSpec {
                    q: vec![1.0, -1.0, -1.0, 1.0],
                    b: vec![0.0, 0.0],
                    set: free(1),
                    constraints: vec![],
                },
            ],
        }
        .to_game()
        .unwrap();
        let opts = BestResponseOptions::default();
        assert!(best_response_gap(&g, &[1.0, 1.0], 0, &opts).unwrap().abs() < 1e-8);
        assert!(best_response_gap(&g, &[1.0, 1.0], 1, &opts).unwrap().abs() < 1e-8);
        let gap = best_response_gap(&g, &[1.0, 0.0], 1, &opts).unwrap();
        assert!((gap - 0.5).abs() < 1e-8);
    }

    #[test]
    fn active_constraint_multiplier_recovered() {
        // min (v - 3)^2 / 2 s.t. v - 1 <= 0: v = 1, multiplier 2
        let g = QuadraticGnepSpec {
            name: "cap".into(),
            layout: vec![1],
            players: vec![QuadraticPlayerSpec {
                q: vec![1.0],
                b: vec![-3.0],
                set: free(1),
                constraints: vec![QuadraticConstraintSpec {
                    a: vec![0.0],
                    c: vec![1.0],
                    d: -1.0,
                }],
            }],
        }
        .to_game()
        .unwrap();
        let br = best_response(&g, &[0.0], 0, &BestResponseOptions::default()).unwrap();
        assert!(br.certified);
        assert!((br.block[0] - 1.0).abs() < 1e-8);
        assert!((br.multipliers[0] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn uncertified_reference_reports_infinity() {
        // min v s.t. v^2 <= 0: the minimizer 0 admits no multiplier
        let g = QuadraticGnepSpec {
            name: "degenerate".into(),
            layout: vec![1],
            players: vec![QuadraticPlayerSpec {
                q: vec![0.0],
                b: vec![1.0],
                set: free(1),
                constraints: vec![QuadraticConstraintSpec {
                    a: vec![2.0],
                    c: vec![0.0],
                    d: 0.0,
                }],
            }],
        }
        .to_game()
        .unwrap();
        let opts = BestResponseOptions {
            budget: 5_000,
            ..Default::default()
        };
        assert_eq!(best_response_gap(&g, &[0.5], 0, &opts).unwrap(), f64::INFINITY);
    }
}
