//! Compass (coordinate pattern) search.
//!
//! From the incumbent, probe `±h` along every axis, move to the best
//! strictly improving probe, and halve `h` (by `shrink`) when nothing
//! improves. Probes are truncated at the box; probes that do not move or
//! that break the constraint are skipped without an evaluation.

use crate::error::{Error, Result};
use crate::evaluator::Evaluator;
use crate::levy::UnitVector;
use crate::testbed::EvaluatedPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSearchConfig {
    /// Initial step as a fraction of the space's largest extent.
    pub h0_fraction: f64,
    pub shrink: f64,
    /// Terminate when the step falls below this fraction of the largest extent.
    pub h_min_fraction: f64,
    /// Evaluation budget of a single descent.
    pub max_evals: u64,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        Self {
            h0_fraction: 0.05,
            shrink: 0.5,
            h_min_fraction: 1e-8,
            max_evals: 200,
        }
    }
}

impl LocalSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h0_fraction > 0.0) || !(self.h_min_fraction > 0.0) {
            return Err(Error::config(
                "local search step fractions must be positive",
            ));
        }
        if !(self.h_min_fraction < self.h0_fraction) {
            return Err(Error::config("h_min_fraction must be below h0_fraction"));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::config("shrink must lie in (0, 1)"));
        }
        if self.max_evals == 0 {
            return Err(Error::config("local search max_evals must be positive"));
        }
        Ok(())
    }
}

/// Descends from `start` and returns the best point found, never worse than
/// `start`. Stops when the step is below resolution, `config.max_evals`
/// evaluations were spent, or the evaluator is exhausted.
pub fn local_search(
    start: EvaluatedPoint,
    config: &LocalSearchConfig,
    ev: &mut Evaluator<'_>,
) -> Result<EvaluatedPoint> {
    let space = ev.objective().space();
    if !space.is_feasible(start.point()) {
        return Err(Error::domain(
            "local search must start from a feasible point",
        ));
    }
    let dim = space.dim();
    let extent = space.max_extent();
    let h_min = config.h_min_fraction * extent;
    let mut h = config.h0_fraction * extent;
    let mut used = 0u64;
    let mut incumbent = start;

    let mut exhausted = false;
    while h >= h_min && !exhausted {
        let mut best_probe: Option<EvaluatedPoint> = None;
        'probes: for axis in 0..dim {
            for sign in [-1.0, 1.0] {
                let probe =
                    space.ray_clip(incumbent.point(), h, &UnitVector::axis(dim, axis, sign));
                if probe == incumbent.point() || !space.is_feasible(&probe) {
                    continue;
                }
                let next = if used < config.max_evals {
                    ev.eval(probe)
                } else {
                    None
                };
                let Some(p) = next else {
                    exhausted = true;
                    break 'probes;
                };
                used += 1;
                let threshold = best_probe.as_ref().map_or(incumbent.value(), |b| b.value());
                if p.value() < threshold {
                    best_probe = Some(p);
                }
            }
        }
        match best_probe {
            Some(p) => incumbent = p,
            None if !exhausted => h *= config.shrink,
            None => {}
        }
    }
    Ok(incumbent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::StoppingCriteria;
    use crate::testbed::{Objective, SearchSpace};

    fn quadratic() -> Objective {
        Objective::new(
            "q",
            SearchSpace::uniform_box(1, -10.0, 10.0).unwrap(),
            |x| x[0] * x[0],
        )
    }

    #[test]
    fn converges_on_a_quadratic() {
        let obj = quadratic();
        let mut ev = Evaluator::new(&obj, &StoppingCriteria::evals(100_000), &[]).unwrap();
        let start = ev.eval(vec![1.0]).unwrap();
        let cfg = LocalSearchConfig {
            max_evals: 100_000,
            ..Default::default()
        };
        let out = local_search(start, &cfg, &mut ev).unwrap();
        assert!(out.value() <= 1e-10, "{}", out.value());
    }

    #[test]
    fn zero_budget_returns_start() {
        let obj = quadratic();
        let mut ev = Evaluator::new(&obj, &StoppingCriteria::evals(1), &[]).unwrap();
        let start = ev.eval(vec![3.0]).unwrap();
        let out = local_search(start.clone(), &LocalSearchConfig::default(), &mut ev).unwrap();
        assert_eq!(out, start);
        assert_eq!(ev.evals(), 1);
    }

    #[test]
    fn improves_rosenbrock_from_origin() {
        let obj = Objective::by_name("f2", Some(2)).unwrap();
        let mut ev = Evaluator::new(&obj, &StoppingCriteria::evals(10_001), &[]).unwrap();
        let start = ev.eval(vec![0.0, 0.0]).unwrap();
        assert_eq!(start.value(), 1.0);
        let cfg = LocalSearchConfig {
            max_evals: 10_000,
            ..Default::default()
        };
        let out = local_search(start, &cfg, &mut ev).unwrap();
        assert!(out.value() < 1.0);
    }

    #[test]
    fn respects_its_own_budget() {
        let obj = Objective::by_name("f6", Some(5)).unwrap();
        let mut ev = Evaluator::new(&obj, &StoppingCriteria::evals(1_000_000), &[]).unwrap();
        let start = ev.eval(vec![2.3, -1.1, 0.7, 4.0, -3.3]).unwrap();
        let cfg = LocalSearchConfig {
            max_evals: 37,
            ..Default::default()
        };
        let before = ev.evals();
        let out = local_search(start.clone(), &cfg, &mut ev).unwrap();
        assert!(ev.evals() - before <= 37);
        assert!(out.value() <= start.value());
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let obj = Objective::by_name("bump", Some(2)).unwrap();
        let mut ev = Evaluator::new(&obj, &StoppingCriteria::evals(10), &[]).unwrap();
        let start = ev.eval(vec![0.5, 0.5]).unwrap();
        assert!(local_search(start, &LocalSearchConfig::default(), &mut ev).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(LocalSearchConfig::default().validate().is_ok());
        let bad = LocalSearchConfig {
            shrink: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = LocalSearchConfig {
            h_min_fraction: 0.1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
