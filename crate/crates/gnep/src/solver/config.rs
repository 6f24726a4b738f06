use crate::error::{GnepError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GammaPolicy {
    Fixed(f64),
    /// `gamma = safety * (L + 3 L_g^2 / beta)`.
    Auto { safety: f64 },
}

/// Inner step size. `sigma0 = None` means half of the contraction cap.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaSchedule {
    Constant { sigma0: Option<f64> },
    Diminishing { sigma0: Option<f64>, decay: f64 },
}

/// How the step cap is shared between players.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaScope {
    /// One step for everyone, capped by the extreme proximal weights.
    Common,
    /// Each player capped by its own proximal weight.
    PerPlayer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: GammaPolicy,
    pub sigma: SigmaSchedule,
    pub sigma_scope: SigmaScope,
    pub inner_eps: f64,
    pub outer_tol: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub seed: u64,
    /// 1 runs serially, 0 uses all cores.
    pub threads: usize,
    pub lipschitz_pairs: usize,
    pub lipschitz_radius: f64,
    pub lipschitz_safety: f64,
    /// Keep every iterate in the trace.
    pub record_iterates: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha: 10.0,
            beta: 1.0,
            gamma: GammaPolicy::Auto { safety: 1.0 },
            sigma: SigmaSchedule::Diminishing {
                sigma0: None,
                decay: 50.0,
            },
            sigma_scope: SigmaScope::Common,
            inner_eps: 1e-6,
            outer_tol: 1e-4,
            max_outer: 10_000,
            max_inner: 100_000,
            seed: 0,
            threads: 1,
            lipschitz_pairs: 200,
            lipschitz_radius: 1.0,
            lipschitz_safety: 2.0,
            record_iterates: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(GnepError::Config(format!("{what} must be positive and finite")))
            }
        };
        pos(self.alpha, "alpha")?;
        pos(self.beta, "beta")?;
        pos(self.inner_eps, "inner_eps")?;
        pos(self.outer_tol, "outer_tol")?;
        pos(self.lipschitz_radius, "lipschitz_radius")?;
        match self.gamma {
            GammaPolicy::Fixed(g) => pos(g, "gamma")?,
            GammaPolicy::Auto { safety } => {
                if !(safety >= 1.0) {
                    return Err(GnepError::Config("gamma safety factor must be >= 1".into()));
                }
            }
        }
        let sigma0 = match &self.sigma {
            SigmaSchedule::Constant { sigma0 } => sigma0,
            SigmaSchedule::Diminishing { sigma0, decay } => {
                pos(*decay, "sigma decay")?;
                sigma0
            }
        };
        if let Some(s) = sigma0 {
            pos(*s, "sigma0")?;
        }
        if !(self.lipschitz_safety >= 1.0) {
            return Err(GnepError::Config("lipschitz safety factor must be >= 1".into()));
        }
        if self.max_outer == 0 || self.max_inner == 0 || self.lipschitz_pairs == 0 {
            return Err(GnepError::Config("iteration caps and sample counts must be >= 1".into()));
        }
        Ok(())
    }

    pub fn parallel(&self) -> bool {
        self.threads != 1
    }
}
