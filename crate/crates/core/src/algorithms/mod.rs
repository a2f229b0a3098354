//! The Lévy-flight optimizers and the simulated annealing baseline.
//!
//! | name      | strategy                                                         |
//! |-----------|------------------------------------------------------------------|
//! | `lfo-b`   | generations of Lévy jumps around the best point; best survives  |
//! | `lfo-ls`  | as `lfo-b`, each jumped particle descends before selection      |
//! | `lfo-mls` | one particle: descend, jump, repeat (jump always accepted)      |
//! | `lfo-ils` | one particle: descend, retry jumps until one beats the optimum  |
//! | `sa`      | Metropolis annealing with a geometric cooling schedule          |
//! | `lfo-sa`  | `lfo-mls` for part of the budget, then `sa` from its best point  |
//!
//! All runners share [`Evaluator`]: one evaluation counter, one best-so-far
//! record and one checkpoint schedule per run. Runs are deterministic given
//! the [`RandomSource`] when budgets are evaluation counts.

mod lfo;
mod sa;

pub use lfo::{run_lfo_b, run_lfo_ils, run_lfo_ls, run_lfo_mls};
pub use sa::{phase_one_evals, run_lfo_sa, run_sa, sa_accept, sa_temperature};

use crate::error::{Error, Result};
use crate::evaluator::{ConvergenceTrace, Evaluator, StoppingCriteria};
use crate::levy::LevyParams;
use crate::local_search::LocalSearchConfig;
use crate::rng::RandomSource;
use crate::testbed::{EvaluatedPoint, Objective};

/// Default power index.
pub const DEFAULT_BETA: f64 = 1.5;
/// Default `l0` as a fraction of the space's largest extent.
pub const DEFAULT_L0_FRACTION: f64 = 0.05;
/// Jump cap as a fraction of the space's largest extent.
pub const JUMP_CAP_FRACTION: f64 = 0.5;

pub const ALGORITHM_NAMES: [&str; 6] = ["lfo-b", "lfo-ls", "lfo-mls", "lfo-ils", "sa", "lfo-sa"];

/// Step law for `objective`: `beta`, `l0` (default: 5% of the largest
/// extent) and a cap at half the largest extent.
pub fn default_levy(objective: &Objective, beta: f64, l0: Option<f64>) -> Result<LevyParams> {
    let extent = objective.space().max_extent();
    LevyParams::new(beta, l0.unwrap_or(DEFAULT_L0_FRACTION * extent))?
        .with_cap(JUMP_CAP_FRACTION * extent)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfoBConfig {
    pub levy: LevyParams,
    /// Jumps per generation.
    pub population: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfoLsConfig {
    pub levy: LevyParams,
    pub population: u32,
    pub ls: LocalSearchConfig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfoMlsConfig {
    pub levy: LevyParams,
    pub ls: LocalSearchConfig,
    /// Consecutive jumps without a new best before the run ends.
    pub non_improvement_jump_limit: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfoIlsConfig {
    pub levy: LevyParams,
    pub ls: LocalSearchConfig,
    /// Jumps tried from one local optimum before the last one is accepted anyway.
    pub inner_attempt_cap: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaConfig {
    /// Initial temperature as a fraction of `|f(start)|`.
    pub t0_fraction: f64,
    /// Final temperature.
    pub ts: f64,
    /// Largest proposal length as a fraction of the space's largest extent.
    pub move_scale: f64,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            t0_fraction: 0.1,
            ts: 1e-4,
            move_scale: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfoSaConfig {
    pub mls: LfoMlsConfig,
    pub sa: SaConfig,
    /// Share of the budget spent in the LFO-MLS phase.
    pub split_fraction: f64,
}

impl LfoBConfig {
    pub fn new(levy: LevyParams) -> Self {
        Self {
            levy,
            population: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive(self.population as u64, "population")
    }
}

impl LfoLsConfig {
    pub fn new(levy: LevyParams) -> Self {
        Self {
            levy,
            population: 100,
            ls: LocalSearchConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive(self.population as u64, "population")?;
        self.ls.validate()
    }
}

impl LfoMlsConfig {
    pub fn new(levy: LevyParams) -> Self {
        Self {
            levy,
            ls: LocalSearchConfig::default(),
            non_improvement_jump_limit: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive(
            self.non_improvement_jump_limit as u64,
            "non_improvement_jump_limit",
        )?;
        self.ls.validate()
    }
}

impl LfoIlsConfig {
    pub fn new(levy: LevyParams) -> Self {
        Self {
            levy,
            ls: LocalSearchConfig::default(),
            inner_attempt_cap: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive(self.inner_attempt_cap as u64, "inner_attempt_cap")?;
        self.ls.validate()
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ts > 0.0) {
            return Err(Error::config("SA final temperature must be positive"));
        }
        if !(self.t0_fraction > 0.0 && self.t0_fraction <= 1.0) {
            return Err(Error::config("SA t0_fraction must lie in (0, 1]"));
        }
        if !(self.move_scale > 0.0) {
            return Err(Error::config("SA move_scale must be positive"));
        }
        Ok(())
    }
}

impl LfoSaConfig {
    pub fn new(levy: LevyParams) -> Self {
        Self {
            mls: LfoMlsConfig::new(levy),
            sa: SaConfig::default(),
            split_fraction: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::config("split_fraction must lie in (0, 1)"));
        }
        self.mls.validate()?;
        self.sa.validate()
    }
}

fn positive(v: u64, what: &str) -> Result<()> {
    if v == 0 {
        Err(Error::config(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// Any of the six optimizers with its configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgorithmConfig {
    LfoB(LfoBConfig),
    LfoLs(LfoLsConfig),
    LfoMls(LfoMlsConfig),
    LfoIls(LfoIlsConfig),
    Sa(SaConfig),
    LfoSa(LfoSaConfig),
}

impl AlgorithmConfig {
    /// Registry lookup with default settings for the given step law.
    pub fn by_name(name: &str, levy: LevyParams) -> Result<Self> {
        Ok(match name {
            "lfo-b" => Self::LfoB(LfoBConfig::new(levy)),
            "lfo-ls" => Self::LfoLs(LfoLsConfig::new(levy)),
            "lfo-mls" => Self::LfoMls(LfoMlsConfig::new(levy)),
            "lfo-ils" => Self::LfoIls(LfoIlsConfig::new(levy)),
            "sa" => Self::Sa(SaConfig::default()),
            "lfo-sa" => Self::LfoSa(LfoSaConfig::new(levy)),
            _ => {
                return Err(Error::config(format!(
                    "unknown algorithm {name:?}; expected one of {}",
                    ALGORITHM_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::LfoB(_) => "lfo-b",
            Self::LfoLs(_) => "lfo-ls",
            Self::LfoMls(_) => "lfo-mls",
            Self::LfoIls(_) => "lfo-ils",
            Self::Sa(_) => "sa",
            Self::LfoSa(_) => "lfo-sa",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::LfoB(c) => c.validate(),
            Self::LfoLs(c) => c.validate(),
            Self::LfoMls(c) => c.validate(),
            Self::LfoIls(c) => c.validate(),
            Self::Sa(c) => c.validate(),
            Self::LfoSa(c) => c.validate(),
        }
    }

    pub fn run(
        &self,
        objective: &Objective,
        stop: &StoppingCriteria,
        rng: &mut RandomSource,
        schedule: &[u64],
    ) -> Result<ConvergenceTrace> {
        match self {
            Self::LfoB(c) => run_lfo_b(objective, c, stop, rng, schedule),
            Self::LfoLs(c) => run_lfo_ls(objective, c, stop, rng, schedule),
            Self::LfoMls(c) => run_lfo_mls(objective, c, stop, rng, schedule),
            Self::LfoIls(c) => run_lfo_ils(objective, c, stop, rng, schedule),
            Self::Sa(c) => run_sa(objective, c, stop, rng, schedule),
            Self::LfoSa(c) => run_lfo_sa(objective, c, stop, rng, schedule),
        }
    }
}

/// Evaluates a uniform random feasible starting point.
fn initial_point(ev: &mut Evaluator<'_>, rng: &mut RandomSource) -> Result<Option<EvaluatedPoint>> {
    let x = ev.objective().space().random_feasible_point(rng)?;
    Ok(ev.eval(x))
}

/// Counts consecutive rounds without a new best value.
#[derive(Debug)]
struct Stagnation {
    limit: Option<u64>,
    stale: u64,
    reference: f64,
}

impl Stagnation {
    fn new(limit: Option<u64>, reference: f64) -> Self {
        Self {
            limit,
            stale: 0,
            reference,
        }
    }

    /// Records the best value after a round; true when the limit is reached.
    fn update(&mut self, best: f64) -> bool {
        if best < self.reference {
            self.reference = best;
            self.stale = 0;
        } else {
            self.stale += 1;
        }
        self.limit.is_some_and(|l| self.stale >= l)
    }
}

fn min_limit(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}
