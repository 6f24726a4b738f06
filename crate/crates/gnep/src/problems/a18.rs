use super::quadratic::{QuadraticConstraintSpec, QuadraticGnepSpec, QuadraticPlayerSpec};
use crate::model::{GameInstance, SimpleSet};

/// Price intercepts and the quantity at which each node price reaches zero.
pub const INTERCEPTS: [f64; 3] = [40.0, 35.0, 32.0];
pub const SATURATION: [f64; 3] = [500.0, 400.0, 600.0];
pub const UNIT_COST: f64 = 15.0;
pub const CAPACITIES: [f64; 2] = [100.0, 50.0];
pub const PRICE_SPREAD: f64 = 1.0;

const N: usize = 12;

/// Indices of player `p`'s sales at node `j` (one per plant).
fn sales(p: usize, j: usize) -> [usize; 2] {
    [6 * p + j, 6 * p + j + 3]
}

fn node_vars(j: usize) -> [usize; 4] {
    [j, j + 3, j + 6, j + 9]
}

fn slope(j: usize) -> f64 {
    INTERCEPTS[j] / SATURATION[j]
}

/// Two-firm, two-plant, three-node electricity market.
///
/// Node price `S_j = a_j - (a_j/s_j) * (total sales at j)`; each firm minimizes
/// `sum_j (15 - S_j) * own sales at j` subject to plant capacities and
/// pairwise price-spread limits `S_j - S_i <= 1`.
pub fn a18_spec() -> QuadraticGnepSpec {
    let players = (0..2)
        .map(|p| {
            let mut q = vec![0.0; N * N];
            let mut b = vec![0.0; N];
            for j in 0..3 {
                let c = slope(j);
                for &k in &node_vars(j) {
                    for &l in &sales(p, j) {
                        q[k * N + l] += c;
                        q[l * N + k] += c;
                    }
                }
                for &l in &sales(p, j) {
                    b[l] = UNIT_COST - INTERCEPTS[j];
                }
            }
            let mut constraints = Vec::new();
            for (plant, cap) in CAPACITIES.iter().enumerate() {
                let mut c = vec![0.0; N];
                for j in 0..3 {
                    c[6 * p + 3 * plant + j] = 1.0;
                }
                constraints.push(QuadraticConstraintSpec { a: vec![0.0; N * N], c, d: -cap });
            }
            for j in 0..3 {
                for i in 0..3 {
                    if i == j {
                        continue;
                    }
                    let mut c = vec![0.0; N];
                    for &k in &node_vars(j) {
                        c[k] -= slope(j);
                    }
                    for &k in &node_vars(i) {
                        c[k] += slope(i);
                    }
                    constraints.push(QuadraticConstraintSpec {
                        a: vec![0.0; N * N],
                        c,
                        d: INTERCEPTS[j] - INTERCEPTS[i] - PRICE_SPREAD,
                    });
                }
            }
            QuadraticPlayerSpec {
                q,
                b,
                set: SimpleSet::NonnegOrthant { dim: 6 },
                constraints,
            }
        })
        .collect();
    QuadraticGnepSpec {
        name: "a18".into(),
        layout: vec![6, 6],
        players,
    }
}

pub fn make_a18_electricity() -> GameInstance {
    a18_spec().to_game().expect("built-in instance is admissible")
}

/// Node prices at `x`.
pub fn node_prices(x: &[f64]) -> [f64; 3] {
    let mut s = [0.0; 3];
    for j in 0..3 {
        let q: f64 = node_vars(j).iter().map(|&k| x[k]).sum();
        s[j] = INTERCEPTS[j] - slope(j) * q;
    }
    s
}
