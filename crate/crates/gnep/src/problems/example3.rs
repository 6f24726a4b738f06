use std::sync::Arc;

use crate::model::{BlockLayout, Curvature, GameInstance, PlayerOracle, PlayerProblem, SimpleSet};

/// Player `who` of the two-player circle game.
///
/// With `shared`, each player carries both disks; otherwise player 0 has the
/// unit disk at the origin and player 1 the unit disk at `(2, 0)`.
#[derive(Debug, Clone, Copy)]
struct CirclePlayer {
    who: usize,
    shared: bool,
}

impl CirclePlayer {
    fn disks(&self) -> &'static [usize] {
        match (self.shared, self.who) {
            (true, _) => &[0, 1],
            (false, 0) => &[0],
            (false, _) => &[1],
        }
    }
}

const CENTERS: [f64; 2] = [0.0, 2.0];

impl PlayerOracle for CirclePlayer {
    fn num_constraints(&self) -> usize {
        self.disks().len()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        x[self.who] * x[self.who]
    }

    fn objective_grad(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; 2];
        g[self.who] = 2.0 * x[self.who];
        g
    }

    fn constraints(&self, x: &[f64]) -> Vec<f64> {
        self.disks()
            .iter()
            .map(|&d| (x[0] - CENTERS[d]).powi(2) + x[1] * x[1] - 1.0)
            .collect()
    }

    fn constraint_jacobian(&self, x: &[f64]) -> Vec<f64> {
        self.disks()
            .iter()
            .flat_map(|&d| [2.0 * (x[0] - CENTERS[d]), 2.0 * x[1]])
            .collect()
    }

    fn curvature(&self) -> Option<Curvature> {
        Some(Curvature {
            objective: 2.0,
            constraints: vec![2.0; self.num_constraints()],
        })
    }
}

fn build(name: &str, shared: bool) -> GameInstance {
    let free = || SimpleSet::boxed(vec![f64::NEG_INFINITY], vec![f64::INFINITY]).expect("valid box");
    let players = (0..2)
        .map(|who| PlayerProblem::new(Arc::new(CirclePlayer { who, shared }), free()))
        .collect();
    GameInstance::new(name, BlockLayout::new(vec![1, 1]).expect("valid layout"), players)
        .expect("consistent instance")
}

/// Two-player circle game in which both players face both disk constraints.
///
/// The disks touch only at `(1, 0)`, which is the unique equilibrium; the
/// constraint gradients there are linearly dependent.
pub fn make_example3() -> GameInstance {
    build("example3", true)
}

/// Variant where each player only sees its own disk. It has no equilibrium.
pub fn make_example3_nonshared() -> GameInstance {
    build("example3-nonshared", false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_disks_active_at_tangency() {
        let g = make_example3();
        for nu in 0..2 {
            let v = g.constraints(nu, &[1.0, 0.0]).unwrap();
            assert!(v.iter().all(|c| c.abs() < 1e-15));
        }
        assert_eq!(g.objective(0, &[1.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn tangency_is_only_feasible_grid_point() {
        let g = make_example3();
        let steps = 500;
        let mut feasible = Vec::new();
        for i in 0..=steps {
            for j in 0..=steps {
                let x = [-2.0 + 5.0 * i as f64 / steps as f64, -2.0 + 5.0 * j as f64 / steps as f64];
                if g.constraints(0, &x).unwrap().iter().all(|c| *c <= 0.0) {
                    feasible.push(x);
                }
            }
        }
        assert_eq!(feasible, vec![[1.0, 0.0]]);
    }

    #[test]
    fn linearly_dependent_gradients_at_solution() {
        let g = make_example3();
        let j = g.constraint_jacobian(0, &[1.0, 0.0]).unwrap();
        assert_eq!(j, vec![2.0, 0.0, -2.0, 0.0]);
    }
}
