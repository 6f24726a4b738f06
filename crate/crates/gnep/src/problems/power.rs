use std::f64::consts::LN_2;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GnepError, Result};
use crate::model::{BlockLayout, GameInstance, PlayerOracle, PlayerProblem, SimpleSet};

/// Channel gains: explicit `h[rx][tx][channel]` flattened, or a seed.
#[derive(Debug, Clone)]
pub enum PowerGains {
    Matrix(Vec<f64>),
    Seed(u64),
}

#[derive(Debug)]
struct PowerData {
    links: usize,
    channels: usize,
    gains: Vec<f64>,
    noise: f64,
    targets: Vec<f64>,
}

impl PowerData {
    fn h(&self, rx: usize, tx: usize, i: usize) -> f64 {
        self.gains[(rx * self.links + tx) * self.channels + i]
    }

    fn interference(&self, rx: usize, i: usize, x: &[f64]) -> f64 {
        let k = self.channels;
        self.noise
            + (0..self.links)
                .filter(|&tx| tx != rx)
                .map(|tx| self.h(rx, tx, i) * x[tx * k + i])
                .sum::<f64>()
    }

    /// Sum rate of link `rx` in bits.
    fn rate(&self, rx: usize, x: &[f64]) -> f64 {
        let k = self.channels;
        (0..k)
            .map(|i| (1.0 + self.h(rx, rx, i) * x[rx * k + i] / self.interference(rx, i, x)).log2())
            .sum()
    }
}

#[derive(Debug)]
struct Link {
    data: Arc<PowerData>,
    who: usize,
}

impl PlayerOracle for Link {
    fn num_constraints(&self) -> usize {
        1
    }

    fn objective(&self, x: &[f64]) -> f64 {
        let k = self.data.channels;
        x[self.who * k..(self.who + 1) * k].iter().sum()
    }

    fn objective_grad(&self, x: &[f64]) -> Vec<f64> {
        let k = self.data.channels;
        let mut g = vec![0.0; x.len()];
        g[self.who * k..(self.who + 1) * k].iter_mut().for_each(|v| *v = 1.0);
        g
    }

    fn constraints(&self, x: &[f64]) -> Vec<f64> {
        vec![self.data.targets[self.who] - self.data.rate(self.who, x)]
    }

    fn constraint_jacobian(&self, x: &[f64]) -> Vec<f64> {
        let d = &self.data;
        let (k, rx) = (d.channels, self.who);
        let mut j = vec![0.0; x.len()];
        for i in 0..k {
            let interf = d.interference(rx, i, x);
            let total = interf + d.h(rx, rx, i) * x[rx * k + i];
            j[rx * k + i] = -d.h(rx, rx, i) / (total * LN_2);
            for tx in (0..d.links).filter(|&t| t != rx) {
                j[tx * k + i] = d.h(rx, tx, i) * (1.0 / interf - 1.0 / total) / LN_2;
            }
        }
        j
    }
}

/// Links minimize total power subject to a minimum sum rate over `channels`
/// channels. `noise_sigma` is the noise standard deviation.
pub fn gen_power_allocation(
    links: usize,
    channels: usize,
    targets: &[f64],
    noise_sigma: f64,
    gains: PowerGains,
) -> Result<GameInstance> {
    if links == 0 || channels == 0 {
        return Err(GnepError::Config("links and channels must be positive".into()));
    }
    if targets.len() != links || targets.iter().any(|t| !(*t > 0.0)) {
        return Err(GnepError::Config("one positive rate target per link required".into()));
    }
    let count = links * links * channels;
    let gains = match gains {
        PowerGains::Matrix(h) => {
            if h.len() != count {
                return Err(GnepError::DimensionMismatch { expected: count, got: h.len() });
            }
            if h.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                return Err(GnepError::Config("channel gains must be positive".into()));
            }
            h
        }
        PowerGains::Seed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| 10f64.powf(rng.gen_range(-2.0..0.0))).collect()
        }
    };
    let data = Arc::new(PowerData {
        links,
        channels,
        gains,
        noise: noise_sigma * noise_sigma,
        targets: targets.to_vec(),
    });
    let players = (0..links)
        .map(|who| {
            PlayerProblem::new(
                Arc::new(Link { data: data.clone(), who }),
                SimpleSet::NonnegOrthant { dim: channels },
            )
        })
        .collect();
    GameInstance::new(
        format!("power-{links}x{channels}"),
        BlockLayout::new(vec![channels; links])?,
        players,
    )
}
