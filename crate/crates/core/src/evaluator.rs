//! Budgeted objective evaluation with best-so-far tracking.
//!
//! Every objective call made by an optimizer, including those inside local
//! search, goes through one [`Evaluator`]. It owns the evaluation counter,
//! enforces the stopping criteria and records checkpoints of the
//! best-so-far value at fixed evaluation counts.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::testbed::{EvaluatedPoint, Objective};

/// Conditions that end a run. At least one of `max_evals` and `max_time`
/// must be set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StoppingCriteria {
    pub max_evals: Option<u64>,
    pub max_time: Option<Duration>,
    /// Stop once the best value is within `1e-12` of this target.
    pub target_value: Option<f64>,
    /// Consecutive jumps/generations/steps without a new best.
    pub non_improvement_limit: Option<u64>,
}

impl StoppingCriteria {
    pub fn evals(n: u64) -> Self {
        Self {
            max_evals: Some(n),
            ..Self::default()
        }
    }

    pub fn time(d: Duration) -> Self {
        Self {
            max_time: Some(d),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_evals.is_none() && self.max_time.is_none() {
            return Err(Error::config(
                "stopping criteria need max_evals or max_time",
            ));
        }
        if self.max_evals == Some(0) {
            return Err(Error::config("max_evals must be positive"));
        }
        if self.max_time == Some(Duration::ZERO) {
            return Err(Error::config("max_time must be positive"));
        }
        if self.non_improvement_limit == Some(0) {
            return Err(Error::config("non_improvement_limit must be positive"));
        }
        Ok(())
    }
}

/// Best-so-far value after `evals` objective calls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub evals: u64,
    pub elapsed_ms: u64,
    pub best_value: f64,
}

/// Result of one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub function: String,
    pub dim: usize,
    pub algorithm: String,
    pub replication: u64,
    pub seed: u64,
    /// One entry per schedule threshold. Thresholds the run never reached
    /// carry the final best value.
    pub checkpoints: Vec<Checkpoint>,
    pub final_best: EvaluatedPoint,
    pub evals_used: u64,
}

pub struct Evaluator<'a> {
    objective: &'a Objective,
    evals: u64,
    cap: Option<u64>,
    deadline: Option<Instant>,
    target: Option<f64>,
    start: Instant,
    best: Option<EvaluatedPoint>,
    schedule: Vec<u64>,
    next_checkpoint: usize,
    checkpoints: Vec<Checkpoint>,
}

impl<'a> Evaluator<'a> {
    /// `schedule` must be strictly increasing.
    pub fn new(
        objective: &'a Objective,
        stop: &StoppingCriteria,
        schedule: &[u64],
    ) -> Result<Self> {
        if schedule.windows(2).any(|w| w[0] >= w[1]) || schedule.first() == Some(&0) {
            return Err(Error::config(
                "checkpoint schedule must be positive and strictly increasing",
            ));
        }
        let start = Instant::now();
        Ok(Self {
            objective,
            evals: 0,
            cap: stop.max_evals,
            deadline: stop.max_time.map(|d| start + d),
            target: stop.target_value,
            start,
            best: None,
            schedule: schedule.to_vec(),
            next_checkpoint: 0,
            checkpoints: Vec::with_capacity(schedule.len()),
        })
    }

    pub fn objective(&self) -> &'a Objective {
        self.objective
    }

    pub fn evals(&self) -> u64 {
        self.evals
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn cap(&self) -> Option<u64> {
        self.cap
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    /// Replaces the evaluation cap; used to run phases of a composite run.
    pub fn set_cap(&mut self, cap: Option<u64>) {
        self.cap = cap;
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn best(&self) -> Option<&EvaluatedPoint> {
        self.best.as_ref()
    }

    pub fn best_value(&self) -> f64 {
        self.best
            .as_ref()
            .map_or(f64::INFINITY, EvaluatedPoint::value)
    }

    pub fn remaining(&self) -> Option<u64> {
        self.cap.map(|c| c.saturating_sub(self.evals))
    }

    pub fn exhausted(&self) -> bool {
        if self.cap.is_some_and(|c| self.evals >= c) {
            return true;
        }
        if let (Some(t), Some(b)) = (self.target, &self.best) {
            if b.value() <= t + 1e-12 {
                return true;
            }
        }
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Evaluates `x`, or returns `None` once a stopping criterion has fired.
    pub fn eval(&mut self, x: Vec<f64>) -> Option<EvaluatedPoint> {
        if self.exhausted() {
            return None;
        }
        let value = self.objective.value(&x);
        let p = EvaluatedPoint::new_unchecked(x, value);
        self.evals += 1;
        if value < self.best_value() {
            self.best = Some(p.clone());
        }
        while self.schedule.get(self.next_checkpoint) == Some(&self.evals) {
            self.checkpoints.push(Checkpoint {
                evals: self.evals,
                elapsed_ms: self.start.elapsed().as_millis() as u64,
                best_value: self.best_value(),
            });
            self.next_checkpoint += 1;
        }
        Some(p)
    }

    pub fn finish(mut self, algorithm: &str, seed: u64) -> Result<ConvergenceTrace> {
        let final_best = self
            .best
            .take()
            .ok_or_else(|| Error::config("run ended before any evaluation"))?;
        let elapsed_ms = self.start.elapsed().as_millis() as u64;
        for &evals in &self.schedule[self.next_checkpoint..] {
            self.checkpoints.push(Checkpoint {
                evals,
                elapsed_ms,
                best_value: final_best.value(),
            });
        }
        Ok(ConvergenceTrace {
            function: self.objective.name().to_string(),
            dim: self.objective.dim(),
            algorithm: algorithm.to_string(),
            replication: 0,
            seed,
            checkpoints: self.checkpoints,
            final_best,
            evals_used: self.evals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testbed::SearchSpace;

    fn line() -> Objective {
        Objective::new(
            "line",
            SearchSpace::uniform_box(1, -10.0, 10.0).unwrap(),
            |x| x[0],
        )
    }

    #[test]
    fn cap_is_enforced() {
        let obj = line();
        let mut ev = Evaluator::new(&obj, &StoppingCriteria::evals(3), &[]).unwrap();
        for i in 0..3 {
            assert!(ev.eval(vec![i as f64]).is_some());
        }
        assert!(ev.eval(vec![0.0]).is_none());
        assert_eq!(ev.evals(), 3);
    }

    #[test]
    fn checkpoints_record_best_so_far() {
        let obj = line();
        let mut ev = Evaluator::new(&obj, &StoppingCriteria::evals(10), &[1, 2, 4, 100]).unwrap();
        for v in [5.0, 3.0, 4.0, 1.0, 2.0] {
            ev.eval(vec![v]);
        }
        let t = ev.finish("x", 0).unwrap();
        let vals: Vec<(u64, f64)> = t
            .checkpoints
            .iter()
            .map(|c| (c.evals, c.best_value))
            .collect();
        assert_eq!(vals, vec![(1, 5.0), (2, 3.0), (4, 1.0), (100, 1.0)]);
        assert_eq!(t.evals_used, 5);
    }

    #[test]
    fn target_stops_the_run() {
        let obj = line();
        let stop = StoppingCriteria {
            target_value: Some(0.0),
            ..StoppingCriteria::evals(100)
        };
        let mut ev = Evaluator::new(&obj, &stop, &[]).unwrap();
        assert!(ev.eval(vec![1.0]).is_some());
        assert!(ev.eval(vec![0.0]).is_some());
        assert!(ev.eval(vec![-1.0]).is_none());
    }

    #[test]
    fn bad_schedule_and_criteria() {
        let obj = line();
        assert!(Evaluator::new(&obj, &StoppingCriteria::evals(5), &[3, 3]).is_err());
        assert!(Evaluator::new(&obj, &StoppingCriteria::evals(5), &[0, 3]).is_err());
        assert!(StoppingCriteria::default().validate().is_err());
        assert!(StoppingCriteria::evals(0).validate().is_err());
        assert!(StoppingCriteria::time(Duration::from_millis(5))
            .validate()
            .is_ok());
    }
}
