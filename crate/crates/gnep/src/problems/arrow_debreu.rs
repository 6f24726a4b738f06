use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quadratic::{QuadraticConstraintSpec, QuadraticGnepSpec, QuadraticPlayerSpec};
use crate::error::{GnepError, Result};
use crate::model::{GameInstance, SimpleSet};

/// Generated exchange-and-production economy data.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowDebreuData {
    pub consumers: usize,
    pub firms: usize,
    pub goods: usize,
    /// Per consumer, row-major `K x K` utility curvature.
    pub q: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub endowment: Vec<Vec<f64>>,
    /// `shares[i][j]`: fraction of firm `j` owned by consumer `i`.
    pub shares: Vec<Vec<f64>>,
}

impl ArrowDebreuData {
    pub fn generate(consumers: usize, firms: usize, goods: usize, seed: u64) -> Result<Self> {
        if consumers == 0 || firms == 0 || goods == 0 {
            return Err(GnepError::Config("I, J, K must be positive".into()));
        }
        if consumers > SHARE_UNITS {
            return Err(GnepError::Config(format!("at most {SHARE_UNITS} consumers supported")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = goods;
        let mut q = Vec::new();
        let mut b = Vec::new();
        let mut endowment = Vec::new();
        for _ in 0..consumers {
            let r: Vec<f64> = (0..k * k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut m = vec![0.0; k * k];
            for i in 0..k {
                for j in 0..k {
                    m[i * k + j] = (0..k).map(|l| r[i * k + l] * r[j * k + l]).sum::<f64>() / k as f64;
                }
                m[i * k + i] += 0.5;
            }
            q.push(m);
            b.push((0..k).map(|_| rng.gen_range(2.0..6.0)).collect());
            endowment.push((0..k).map(|_| rng.gen_range(0.5..3.0)).collect());
        }
        let mut shares = vec![vec![0.0; firms]; consumers];
        for j in 0..firms {
            // Cut points in 1..SHARE_UNITS give positive integer parts summing to SHARE_UNITS.
            let mut cuts: Vec<usize> = sample(&mut rng, SHARE_UNITS - 1, consumers - 1)
                .into_iter()
                .map(|c| c + 1)
                .collect();
            cuts.sort_unstable();
            let mut prev = 0;
            for (i, &c) in cuts.iter().chain(std::iter::once(&SHARE_UNITS)).enumerate() {
                shares[i][j] = (c - prev) as f64 / SHARE_UNITS as f64;
                prev = c;
            }
        }
        Ok(Self {
            consumers,
            firms,
            goods,
            q,
            b,
            endowment,
            shares,
        })
    }

    pub fn n(&self) -> usize {
        (self.consumers + self.firms + 1) * self.goods
    }

    pub fn consumer_offset(&self, i: usize) -> usize {
        i * self.goods
    }

    pub fn firm_offset(&self, j: usize) -> usize {
        (self.consumers + j) * self.goods
    }

    pub fn price_offset(&self) -> usize {
        (self.consumers + self.firms) * self.goods
    }

    /// Production bound for firm `j` (0-based): `sum y^2 <= 10 (j + 1)`.
    pub fn production_bound(j: usize) -> f64 {
        10.0 * (j + 1) as f64
    }

    /// Aggregate excess demand `sum x - sum y - sum endowments`.
    pub fn excess_demand(&self, x: &[f64]) -> Vec<f64> {
        (0..self.goods)
            .map(|k| {
                let d: f64 = (0..self.consumers).map(|i| x[self.consumer_offset(i) + k]).sum();
                let s: f64 = (0..self.firms).map(|j| x[self.firm_offset(j) + k]).sum();
                let e: f64 = self.endowment.iter().map(|w| w[k]).sum();
                d - s - e
            })
            .collect()
    }

    pub fn spec(&self) -> QuadraticGnepSpec {
        let n = self.n();
        let k = self.goods;
        let p0 = self.price_offset();
        let mut players = Vec::new();
        let sym = |m: &mut Vec<f64>, a: usize, b: usize, v: f64| {
            m[a * n + b] += v;
            m[b * n + a] += v;
        };
        for i in 0..self.consumers {
            let o = self.consumer_offset(i);
            let mut q = vec![0.0; n * n];
            let mut bl = vec![0.0; n];
            for r in 0..k {
                for c in 0..k {
                    q[(o + r) * n + o + c] = self.q[i][r * k + c];
                }
                bl[o + r] = -self.b[i][r];
            }
            let mut a = vec![0.0; n * n];
            let mut c = vec![0.0; n];
            for g in 0..k {
                sym(&mut a, p0 + g, o + g, 1.0);
                for j in 0..self.firms {
                    sym(&mut a, p0 + g, self.firm_offset(j) + g, -self.shares[i][j]);
                }
                c[p0 + g] = -self.endowment[i][g];
            }
            players.push(QuadraticPlayerSpec {
                q,
                b: bl,
                set: SimpleSet::NonnegOrthant { dim: k },
                constraints: vec![QuadraticConstraintSpec { a, c, d: 0.0 }],
            });
        }
        for j in 0..self.firms {
            let o = self.firm_offset(j);
            let mut q = vec![0.0; n * n];
            let mut a = vec![0.0; n * n];
            for g in 0..k {
                sym(&mut q, p0 + g, o + g, -1.0);
                a[(o + g) * n + o + g] = 2.0;
            }
            players.push(QuadraticPlayerSpec {
                q,
                b: vec![0.0; n],
                set: SimpleSet::NonnegOrthant { dim: k },
                constraints: vec![QuadraticConstraintSpec {
                    a,
                    c: vec![0.0; n],
                    d: -Self::production_bound(j),
                }],
            });
        }
        let mut q = vec![0.0; n * n];
        let mut bl = vec![0.0; n];
        for g in 0..k {
            for i in 0..self.consumers {
                sym(&mut q, p0 + g, self.consumer_offset(i) + g, -1.0);
            }
            for j in 0..self.firms {
                sym(&mut q, p0 + g, self.firm_offset(j) + g, 1.0);
            }
            bl[p0 + g] = self.endowment.iter().map(|w| w[g]).sum();
        }
        players.push(QuadraticPlayerSpec {
            q,
            b: bl,
            set: SimpleSet::UnitSimplex { dim: k },
            constraints: vec![],
        });
        QuadraticGnepSpec {
            name: format!("arrow-debreu-{}x{}x{}", self.consumers, self.firms, self.goods),
            layout: vec![k; self.consumers + self.firms + 1],
            players,
        }
    }
}

const SHARE_UNITS: usize = 64;

/// Consumers, firms and a price-setting market player; see [`ArrowDebreuData`].
pub fn gen_arrow_debreu(consumers: usize, firms: usize, goods: usize, seed: u64) -> Result<GameInstance> {
    ArrowDebreuData::generate(consumers, firms, goods, seed)?.spec().to_game()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn share_columns_sum_to_one_exactly() {
        let d = ArrowDebreuData::generate(5, 2, 3, 7).unwrap();
        for j in 0..2 {
            let s: f64 = d.shares.iter().map(|r| r[j]).sum();
            assert_eq!(s, 1.0);
            assert!(d.shares.iter().all(|r| r[j] > 0.0));
        }
    }

    #[test]
    fn endowment_consumption_is_budget_feasible() {
        let d = ArrowDebreuData::generate(5, 2, 3, 7).unwrap();
        let g = d.spec().to_game().unwrap();
        let mut x = vec![0.0; d.n()];
        for i in 0..5 {
            let o = d.consumer_offset(i);
            x[o..o + 3].copy_from_slice(&d.endowment[i]);
        }
        x[d.price_offset()..].copy_from_slice(&[0.2, 0.3, 0.5]);
        for i in 0..5 {
            assert!(g.constraints(i, &x).unwrap()[0].abs() < 1e-14);
        }
    }

    #[test]
    fn market_objective_is_negative_value_of_excess_demand() {
        let d = ArrowDebreuData::generate(2, 1, 2, 3).unwrap();
        let g = d.spec().to_game().unwrap();
        let x: Vec<f64> = (0..d.n()).map(|i| 0.1 * i as f64 + 0.3).collect();
        let z = d.excess_demand(&x);
        let p = &x[d.price_offset()..];
        let v = -(p[0] * z[0] + p[1] * z[1]);
        assert!((g.objective(3, &x).unwrap() - v).abs() < 1e-12);
    }

    #[test]
    fn firm_ball_bounds() {
        let d = ArrowDebreuData::generate(5, 2, 3, 7).unwrap();
        let g = d.spec().to_game().unwrap();
        let mut x = vec![0.0; d.n()];
        x[d.firm_offset(1)] = 2.0;
        assert_eq!(g.constraints(6, &x).unwrap(), vec![4.0 - 20.0]);
    }
}
