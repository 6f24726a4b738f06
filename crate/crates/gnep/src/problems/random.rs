use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quadratic::{QuadraticConstraintSpec, QuadraticGnepSpec, QuadraticPlayerSpec};
use crate::error::{GnepError, Result};
use crate::model::{GameInstance, SimpleSet};

const BOX: f64 = 2.0;
const CROSS: f64 = 0.3;
const COUPLING: f64 = 0.2;

/// Seeded random quadratic game together with the planted feasible point.
#[derive(Debug, Clone)]
pub struct RandomQuadratic {
    pub spec: QuadraticGnepSpec,
    pub planted: Vec<f64>,
}

/// Strongly monotone quadratic game on boxes with affine coupling constraints.
///
/// Each player's own block carries enough curvature to dominate the cross
/// terms. Constraint offsets keep the planted own block feasible against any
/// rival strategy in the boxes.
pub fn random_quadratic(players: usize, n_per: usize, m_per: usize, seed: u64) -> Result<RandomQuadratic> {
    if players == 0 || n_per == 0 {
        return Err(GnepError::Config("players and block size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = players * n_per;
    let planted: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let shift = 1.0 + CROSS * n_per as f64 * (players - 1) as f64;
    let mut specs = Vec::new();
    for nu in 0..players {
        let o = nu * n_per;
        let mut q = vec![0.0; n * n];
        let r: Vec<f64> = (0..n_per * n_per).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for i in 0..n_per {
            for j in 0..n_per {
                let v: f64 = (0..n_per).map(|l| r[i * n_per + l] * r[j * n_per + l]).sum::<f64>() / n_per as f64;
                q[(o + i) * n + o + j] = v + if i == j { shift } else { 0.0 };
            }
        }
        for mu in (0..players).filter(|&m| m != nu) {
            let om = mu * n_per;
            for i in 0..n_per {
                for j in 0..n_per {
                    let v = rng.gen_range(-CROSS..CROSS);
                    q[(o + i) * n + om + j] = v;
                    q[(om + j) * n + o + i] = v;
                }
            }
        }
        let b: Vec<f64> = (0..n)
            .map(|j| if (o..o + n_per).contains(&j) { rng.gen_range(-3.0..3.0) } else { 0.0 })
            .collect();
        let mut constraints = Vec::new();
        for _ in 0..m_per {
            let mut c = vec![0.0; n];
            let mut cross_l1 = 0.0;
            for (j, cj) in c.iter_mut().enumerate() {
                if (o..o + n_per).contains(&j) {
                    *cj = rng.gen_range(-1.0..1.0);
                } else {
                    *cj = rng.gen_range(-COUPLING..COUPLING);
                    cross_l1 += cj.abs();
                }
            }
            let at_planted: f64 = c.iter().zip(&planted).map(|(a, b)| a * b).sum();
            let slack = 2.0 * BOX * cross_l1 + rng.gen_range(0.0..0.2);
            constraints.push(QuadraticConstraintSpec {
                a: vec![0.0; n * n],
                c,
                d: -at_planted - slack,
            });
        }
        specs.push(QuadraticPlayerSpec {
            q,
            b,
            set: SimpleSet::boxed(vec![-BOX; n_per], vec![BOX; n_per])?,
            constraints,
        });
    }
    Ok(RandomQuadratic {
        spec: QuadraticGnepSpec {
            name: format!("random-quadratic-{players}x{n_per}x{m_per}-{seed}"),
            layout: vec![n_per; players],
            players: specs,
        },
        planted,
    })
}

pub fn gen_random_quadratic(players: usize, n_per: usize, m_per: usize, seed: u64) -> Result<GameInstance> {
    random_quadratic(players, n_per, m_per, seed)?.spec.to_game()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let a = random_quadratic(3, 2, 2, 11).unwrap();
        let b = random_quadratic(3, 2, 2, 11).unwrap();
        assert_eq!(a.spec, b.spec);
        assert_eq!(a.planted, b.planted);
        let c = random_quadratic(3, 2, 2, 12).unwrap();
        assert_ne!(a.spec, c.spec);
    }

    #[test]
    fn planted_point_is_feasible() {
        for seed in 0..20 {
            let r = random_quadratic(3, 2, 4, seed).unwrap();
            let g = r.spec.to_game().unwrap();
            assert!(g.max_violation(&r.planted).unwrap() <= 0.0);
        }
    }

    #[test]
    fn planted_block_feasible_against_any_rival() {
        let r = random_quadratic(2, 3, 3, 5).unwrap();
        let g = r.spec.to_game().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let mut x: Vec<f64> = (0..6).map(|_| rng.gen_range(-BOX..BOX)).collect();
            x[..3].copy_from_slice(&r.planted[..3]);
            assert!(g.constraints(0, &x).unwrap().iter().all(|v| *v <= 0.0));
        }
    }
}
