#![allow(dead_code)]

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use lfo::algorithms::{default_levy, AlgorithmConfig, DEFAULT_BETA};
use lfo::{ConvergenceTrace, Evaluator, Objective, RandomSource, StoppingCriteria};

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Wraps an objective so every call is counted and checked for feasibility.
pub struct Audited {
    pub objective: Objective,
    pub calls: Arc<AtomicU64>,
    pub infeasible: Arc<AtomicBool>,
}

pub fn audited(inner: &Objective) -> Audited {
    let calls = Arc::new(AtomicU64::new(0));
    let infeasible = Arc::new(AtomicBool::new(false));
    let probe = inner.clone();
    let (c, bad) = (calls.clone(), infeasible.clone());
    let objective = Objective::new(inner.name(), inner.space().clone(), move |x: &[f64]| {
        c.fetch_add(1, Ordering::Relaxed);
        if !probe.space().is_feasible(x) {
            bad.store(true, Ordering::Relaxed);
        }
        probe.value(x)
    });
    Audited {
        objective,
        calls,
        infeasible,
    }
}

pub fn constant(value: f64, dim: usize) -> Objective {
    Objective::new(
        "const",
        lfo::SearchSpace::uniform_box(dim, -5.0, 5.0).unwrap(),
        move |_| value,
    )
}

pub fn default_config(name: &str, objective: &Objective) -> AlgorithmConfig {
    AlgorithmConfig::by_name(name, default_levy(objective, DEFAULT_BETA, None).unwrap()).unwrap()
}

/// Final best values of `reps` replications of `algorithm`.
pub fn finals(objective: &Objective, algorithm: &str, reps: u64, budget: u64, at: u64) -> Vec<f64> {
    let cfg = default_config(algorithm, objective);
    let schedule = if at < budget {
        vec![at, budget]
    } else {
        vec![budget]
    };
    (0..reps)
        .map(|k| {
            let mut rng = RandomSource::for_replication(2004, 0, k);
            let t = cfg
                .run(
                    objective,
                    &StoppingCriteria::evals(budget),
                    &mut rng,
                    &schedule,
                )
                .unwrap();
            t.checkpoints[0].best_value
        })
        .collect()
}

/// Best value of `budget` uniform feasible samples, per replication.
pub fn random_search(objective: &Objective, reps: u64, budget: u64) -> Vec<f64> {
    (0..reps)
        .map(|k| {
            let mut rng = RandomSource::for_replication(2004, 99, k);
            let mut ev =
                Evaluator::new(objective, &StoppingCriteria::evals(budget), &[budget]).unwrap();
            while ev
                .eval(objective.space().random_feasible_point(&mut rng).unwrap())
                .is_some()
            {}
            ev.best_value()
        })
        .collect()
}

pub fn is_monotone(t: &ConvergenceTrace) -> bool {
    t.checkpoints
        .windows(2)
        .all(|w| w[1].best_value <= w[0].best_value && w[0].evals < w[1].evals)
}
