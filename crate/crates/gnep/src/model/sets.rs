use crate::error::{GnepError, Result};
use crate::linalg::norm2;

/// Closed convex set with a cheap Euclidean projection.
#[derive(Debug, Clone, PartialEq)]
pub enum SimpleSet {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    NonnegOrthant { dim: usize },
    UnitSimplex { dim: usize },
    NonnegBall { dim: usize, radius: f64 },
}

impl SimpleSet {
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(GnepError::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l <= u)) {
            return Err(GnepError::InvalidSet("box requires lower <= upper".into()));
        }
        Ok(SimpleSet::Box { lower, upper })
    }

    pub fn nonneg_ball(dim: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(GnepError::InvalidSet("ball radius must be positive".into()));
        }
        Ok(SimpleSet::NonnegBall { dim, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            SimpleSet::Box { lower, .. } => lower.len(),
            SimpleSet::NonnegOrthant { dim }
            | SimpleSet::UnitSimplex { dim }
            | SimpleSet::NonnegBall { dim, .. } => *dim,
        }
    }

    /// Number of finite scalar bounds describing the set.
    pub fn finite_bound_count(&self) -> usize {
        match self {
            SimpleSet::Box { lower, upper } => lower
                .iter()
                .chain(upper)
                .filter(|v| v.is_finite())
                .count(),
            SimpleSet::NonnegOrthant { dim } => *dim,
            SimpleSet::UnitSimplex { dim } => dim + 1,
            SimpleSet::NonnegBall { dim, .. } => dim + 1,
        }
    }

    pub fn project(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = v.to_vec();
        self.project_in_place(&mut out)?;
        Ok(out)
    }

    pub fn project_in_place(&self, v: &mut [f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(GnepError::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        match self {
            SimpleSet::Box { lower, upper } => {
                for ((x, l), u) in v.iter_mut().zip(lower).zip(upper) {
                    *x = x.max(*l).min(*u);
                }
            }
            SimpleSet::NonnegOrthant { .. } => v.iter_mut().for_each(|x| *x = x.max(0.0)),
            SimpleSet::UnitSimplex { .. } => project_simplex(v),
            SimpleSet::NonnegBall { radius, .. } => {
                for _ in 0..100 {
                    let before = v.to_vec();
                    v.iter_mut().for_each(|x| *x = x.max(0.0));
                    let nrm = norm2(v);
                    if nrm > *radius {
                        let s = radius / nrm;
                        v.iter_mut().for_each(|x| *x *= s);
                    }
                    let change = before
                        .iter()
                        .zip(v.iter())
                        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                    if change <= 1e-12 {
                        break;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        match self.project(v) {
            Ok(p) => p.iter().zip(v).all(|(a, b)| (a - b).abs() <= tol),
            Err(_) => false,
        }
    }
}

fn project_simplex(v: &mut [f64]) {
    let mut s: Vec<f64> = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &sj) in s.iter().enumerate() {
        cum += sj;
        let t = (cum - 1.0) / (j + 1) as f64;
        if sj - t > 0.0 {
            theta = t;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
}
