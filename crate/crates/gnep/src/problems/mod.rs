//! Built-in instances, seeded generators and the quadratic file format.

mod a18;
mod arrow_debreu;
mod example3;
pub mod format;
mod power;
mod quadratic;
mod random;

pub use a18::{a18_spec, make_a18_electricity, node_prices};
pub use arrow_debreu::{gen_arrow_debreu, ArrowDebreuData};
pub use example3::{make_example3, make_example3_nonshared};
pub use format::{load_quadratic, load_quadratic_spec, save_quadratic};
pub use power::{gen_power_allocation, PowerGains};
pub use quadratic::{QuadraticConstraintSpec, QuadraticGnepSpec, QuadraticPlayer, QuadraticPlayerSpec};
pub use random::{gen_random_quadratic, random_quadratic, RandomQuadratic};

use crate::error::{GnepError, Result};
use crate::model::GameInstance;

pub const BUILTIN_NAMES: &[&str] = &[
    "example3",
    "example3-nonshared",
    "a18",
    "power",
    "arrow-debreu",
    "random-quadratic",
];

/// Noise standard deviation, channel count and rate target of the power family.
pub const POWER_NOISE_SIGMA: f64 = 0.3162;
pub const POWER_CHANNELS: usize = 8;
pub const POWER_TARGET: f64 = 2.0;
pub const POWER_LINKS: usize = 2;

/// Looks up a built-in instance; `seed` drives the generated families.
pub fn builtin(name: &str, seed: u64) -> Result<GameInstance> {
    match name {
        "example3" => Ok(make_example3()),
        "example3-nonshared" => Ok(make_example3_nonshared()),
        "a18" => Ok(make_a18_electricity()),
        "power" => gen_power_allocation(
            POWER_LINKS,
            POWER_CHANNELS,
            &[POWER_TARGET; POWER_LINKS],
            POWER_NOISE_SIGMA,
            PowerGains::Seed(seed),
        ),
        "arrow-debreu" => gen_arrow_debreu(5, 2, 3, seed),
        "random-quadratic" => gen_random_quadratic(2, 3, 2, seed),
        _ => Err(GnepError::UnknownProblem(name.into())),
    }
}

/// Instances used by library-wide checks, with their customary start points.
pub fn library(seed: u64) -> Vec<(GameInstance, Vec<f64>)> {
    ["example3", "a18", "power", "arrow-debreu", "random-quadratic"]
        .iter()
        .map(|name| {
            let g = builtin(name, seed).expect("built-in name");
            let x0 = vec![0.0; g.n()];
            (g, x0)
        })
        .collect()
}
