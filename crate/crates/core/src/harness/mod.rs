//! Replicated experiments over the benchmark suite.

mod output;

pub use output::{
    read_summary_csv, read_trace_csv, trace_rows, write_summary_csv, write_summary_jsonl,
    write_trace_csv, write_trace_jsonl, SummaryRow, TraceRow, SUMMARY_HEADER, TRACE_HEADER,
};

use std::time::Duration;

use rayon::prelude::*;

use crate::algorithms::{default_levy, AlgorithmConfig, ALGORITHM_NAMES, DEFAULT_BETA};
use crate::error::{Error, Result};
use crate::evaluator::{ConvergenceTrace, StoppingCriteria};
use crate::rng::RandomSource;
use crate::testbed::{BoundaryPolicy, Objective};

/// Evaluations per replication in the desk-scale suite.
pub const DEFAULT_BUDGET_EVALS: u64 = 200_000;
pub const DEFAULT_CHECKPOINTS: usize = 20;
pub const DEFAULT_MASTER_SEED: u64 = 2004;

/// An algorithm entry of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    /// Registry name; configured from the experiment's step-law settings.
    Named(String),
    Custom(AlgorithmConfig),
}

impl From<&str> for AlgorithmSpec {
    fn from(name: &str) -> Self {
        AlgorithmSpec::Named(name.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub function: String,
    /// `None` selects the function's default dimension.
    pub dim: Option<usize>,
    pub algorithms: Vec<AlgorithmSpec>,
    pub replications: u64,
    pub master_seed: u64,
    pub max_evals: Option<u64>,
    pub max_time: Option<Duration>,
    /// Strictly increasing evaluation counts; empty selects the default
    /// log-spaced schedule.
    pub checkpoints: Vec<u64>,
    pub boundary: BoundaryPolicy,
    pub beta: f64,
    /// `None` selects 5% of the largest extent.
    pub l0: Option<f64>,
}

impl ExperimentConfig {
    /// All six algorithms on `function` with default settings.
    pub fn new(function: &str) -> Self {
        Self {
            function: function.to_string(),
            dim: None,
            algorithms: ALGORITHM_NAMES.iter().map(|&n| n.into()).collect(),
            replications: 1,
            master_seed: DEFAULT_MASTER_SEED,
            max_evals: Some(DEFAULT_BUDGET_EVALS),
            max_time: None,
            checkpoints: Vec::new(),
            boundary: BoundaryPolicy::ClipToEdge,
            beta: DEFAULT_BETA,
            l0: None,
        }
    }

    pub fn objective(&self) -> Result<Objective> {
        Objective::by_name(&self.function, self.dim)?.with_boundary(self.boundary)
    }

    pub fn stopping(&self) -> StoppingCriteria {
        StoppingCriteria {
            max_evals: self.max_evals,
            max_time: self.max_time,
            ..StoppingCriteria::default()
        }
    }

    /// The checkpoint schedule in effect.
    pub fn schedule(&self) -> Vec<u64> {
        if !self.checkpoints.is_empty() {
            return self.checkpoints.clone();
        }
        log_checkpoints(self.max_evals.unwrap_or(100_000_000), DEFAULT_CHECKPOINTS)
    }

    pub fn resolve_algorithms(&self, objective: &Objective) -> Result<Vec<AlgorithmConfig>> {
        let levy = default_levy(objective, self.beta, self.l0)?;
        self.algorithms
            .iter()
            .map(|spec| {
                let cfg = match spec {
                    AlgorithmSpec::Named(name) => AlgorithmConfig::by_name(name, levy)?,
                    AlgorithmSpec::Custom(cfg) => *cfg,
                };
                cfg.validate()?;
                Ok(cfg)
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::config("replications must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("no algorithms selected"));
        }
        self.stopping().validate()?;
        let schedule = self.schedule();
        if schedule.first() == Some(&0) || schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(
                "checkpoints must be positive and strictly increasing",
            ));
        }
        if let (Some(last), Some(budget)) = (schedule.last(), self.max_evals) {
            if *last > budget {
                return Err(Error::config(format!(
                    "last checkpoint {last} exceeds the evaluation budget {budget}"
                )));
            }
        }
        Ok(())
    }
}

/// `count` roughly log-spaced evaluation counts from 100 (1 for budgets
/// below 100) to `budget`, strictly increasing and ending at `budget`.
pub fn log_checkpoints(budget: u64, count: usize) -> Vec<u64> {
    let budget = budget.max(1);
    let lo = if budget < 100 { 1.0 } else { 100.0 };
    let hi = budget as f64;
    let mut out: Vec<u64> = Vec::with_capacity(count);
    for i in 0..count {
        let frac = if count > 1 {
            i as f64 / (count - 1) as f64
        } else {
            1.0
        };
        let v = (lo * (hi / lo).powf(frac)).round() as u64;
        if out.last().is_none_or(|&last| v > last) {
            out.push(v);
        }
    }
    if out.last() != Some(&budget) {
        out.push(budget);
    }
    out
}

/// Runs every (algorithm, replication) pair on up to `parallelism` threads.
///
/// Replication `k` of the `a`-th algorithm draws from
/// `RandomSource::for_replication(master_seed, a, k)`, so the output does not
/// depend on `parallelism`. Traces are ordered by algorithm, then replication.
pub fn run_experiment(
    config: &ExperimentConfig,
    parallelism: usize,
) -> Result<Vec<ConvergenceTrace>> {
    config.validate()?;
    let objective = config.objective()?;
    let algorithms = config.resolve_algorithms(&objective)?;
    let stop = config.stopping();
    let schedule = config.schedule();
    let jobs: Vec<(usize, u64)> = (0..algorithms.len())
        .flat_map(|a| (0..config.replications).map(move |k| (a, k)))
        .collect();

    let run_one = |&(a, k): &(usize, u64)| -> Result<ConvergenceTrace> {
        let mut rng = RandomSource::for_replication(config.master_seed, a as u64, k);
        let mut trace = algorithms[a].run(&objective, &stop, &mut rng, &schedule)?;
        trace.replication = k;
        Ok(trace)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot build thread pool: {e}")))?;
    pool.install(|| jobs.par_iter().map(run_one).collect())
}

/// The five-function protocol: replication counts 100/100/100/20/10, all six
/// algorithms, a 2e5-evaluation budget per replication.
pub fn standard_suite() -> Vec<ExperimentConfig> {
    [
        ("f0", 4, 100),
        ("f2", 10, 100),
        ("f5", 2, 100),
        ("f6", 10, 20),
        ("bump", 50, 10),
    ]
    .into_iter()
    .map(|(name, dim, reps)| ExperimentConfig {
        dim: Some(dim),
        replications: reps,
        ..ExperimentConfig::new(name)
    })
    .collect()
}

/// Statistics of the best-so-far value at one checkpoint over replications.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointStats {
    pub function: String,
    pub algorithm: String,
    pub checkpoint_evals: u64,
    pub mean: f64,
    /// Population standard deviation (divides by `n`).
    pub std: f64,
    pub median: f64,
    pub min: f64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AggregateResult {
    /// Grouped by (function, algorithm) in first-seen order, then by checkpoint.
    pub rows: Vec<CheckpointStats>,
}

impl AggregateResult {
    pub fn series<'a>(
        &'a self,
        function: &'a str,
        algorithm: &'a str,
    ) -> impl Iterator<Item = &'a CheckpointStats> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.function == function && r.algorithm == algorithm)
    }

    pub fn at(&self, function: &str, algorithm: &str, evals: u64) -> Option<&CheckpointStats> {
        self.rows.iter().find(|r| {
            r.function == function && r.algorithm == algorithm && r.checkpoint_evals == evals
        })
    }
}

/// Mean, population std, median and min of best-so-far at each checkpoint,
/// per (function, algorithm) group. Traces in a group must share their
/// checkpoint schedule.
pub fn aggregate_traces(traces: &[ConvergenceTrace]) -> Result<AggregateResult> {
    let mut groups: Vec<((&str, &str), Vec<&ConvergenceTrace>)> = Vec::new();
    for t in traces {
        let key = (t.function.as_str(), t.algorithm.as_str());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(t),
            None => groups.push((key, vec![t])),
        }
    }
    let mut rows = Vec::new();
    for ((function, algorithm), members) in groups {
        let schedule: Vec<u64> = members[0].checkpoints.iter().map(|c| c.evals).collect();
        for m in &members[1..] {
            if !m
                .checkpoints
                .iter()
                .map(|c| c.evals)
                .eq(schedule.iter().copied())
            {
                return Err(Error::config(format!(
                    "traces of {function}/{algorithm} have mismatched checkpoint schedules"
                )));
            }
        }
        for (i, &evals) in schedule.iter().enumerate() {
            let mut values: Vec<f64> = members
                .iter()
                .map(|t| t.checkpoints[i].best_value)
                .collect();
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
            values.sort_by(f64::total_cmp);
            let mid = values.len() / 2;
            let median = if values.len() % 2 == 1 {
                values[mid]
            } else {
                0.5 * (values[mid - 1] + values[mid])
            };
            rows.push(CheckpointStats {
                function: function.to_string(),
                algorithm: algorithm.to_string(),
                checkpoint_evals: evals,
                mean,
                std,
                median,
                min: values[0],
                n: values.len() as u64,
            });
        }
    }
    Ok(AggregateResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::Checkpoint;
    use crate::testbed::Objective;

    fn trace(alg: &str, values: &[(u64, f64)]) -> ConvergenceTrace {
        let obj = Objective::by_name("f6", Some(1)).unwrap();
        ConvergenceTrace {
            function: "f6".into(),
            dim: 1,
            algorithm: alg.into(),
            replication: 0,
            seed: 0,
            checkpoints: values
                .iter()
                .map(|&(evals, best_value)| Checkpoint {
                    evals,
                    elapsed_ms: 0,
                    best_value,
                })
                .collect(),
            final_best: obj.evaluate(vec![0.0]).unwrap(),
            evals_used: values.last().map_or(0, |v| v.0),
        }
    }

    #[test]
    fn single_trace_stats() {
        let agg = aggregate_traces(&[trace("sa", &[(10, 4.0)])]).unwrap();
        let r = &agg.rows[0];
        assert_eq!(
            (r.mean, r.median, r.min, r.std, r.n),
            (4.0, 4.0, 4.0, 0.0, 1)
        );
    }

    #[test]
    fn two_trace_stats() {
        let agg =
            aggregate_traces(&[trace("sa", &[(10, 1.0)]), trace("sa", &[(10, 3.0)])]).unwrap();
        let r = &agg.rows[0];
        assert_eq!(
            (r.mean, r.median, r.min, r.std, r.n),
            (2.0, 2.0, 1.0, 1.0, 2)
        );
    }

    #[test]
    fn mismatched_schedules_are_rejected() {
        let err = aggregate_traces(&[trace("sa", &[(10, 1.0)]), trace("sa", &[(20, 3.0)])]);
        assert!(err.is_err());
        // different algorithms may use different schedules
        assert!(
            aggregate_traces(&[trace("sa", &[(10, 1.0)]), trace("lfo-b", &[(20, 3.0)])]).is_ok()
        );
    }

    #[test]
    fn aggregate_of_monotone_traces_is_monotone() {
        let traces = vec![
            trace("sa", &[(1, 5.0), (2, 4.0), (3, 1.0)]),
            trace("sa", &[(1, 9.0), (2, 2.0), (3, 2.0)]),
            trace("sa", &[(1, 3.0), (2, 3.0), (3, 0.5)]),
        ];
        let agg = aggregate_traces(&traces).unwrap();
        for w in agg.rows.windows(2) {
            assert!(w[1].mean <= w[0].mean && w[1].min <= w[0].min);
        }
    }

    #[test]
    fn log_schedule_shape() {
        let s = log_checkpoints(200_000, 20);
        assert_eq!(s.len(), 20);
        assert_eq!(s[0], 100);
        assert_eq!(*s.last().unwrap(), 200_000);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(log_checkpoints(5, 20), vec![1, 2, 3, 4, 5]);
        assert_eq!(log_checkpoints(1, 20), vec![1]);
    }

    #[test]
    fn suite_presets() {
        let suite = standard_suite();
        assert_eq!(suite.len(), 5);
        let shape: Vec<(&str, Option<usize>, u64)> = suite
            .iter()
            .map(|c| (c.function.as_str(), c.dim, c.replications))
            .collect();
        assert_eq!(
            shape,
            vec![
                ("f0", Some(4), 100),
                ("f2", Some(10), 100),
                ("f5", Some(2), 100),
                ("f6", Some(10), 20),
                ("bump", Some(50), 10)
            ]
        );
        for c in &suite {
            assert_eq!(c.algorithms.len(), 6);
            assert_eq!(c.max_evals, Some(200_000));
            assert_eq!(c.beta, 1.5);
            c.validate().unwrap();
        }
    }

    #[test]
    fn config_errors() {
        let mut c = ExperimentConfig::new("f2");
        c.replications = 0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new("f2");
        c.checkpoints = vec![10, 5];
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new("f2");
        c.checkpoints = vec![10, 300_000];
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new("nope");
        c.replications = 1;
        assert!(run_experiment(&c, 1).is_err());
        let mut c = ExperimentConfig::new("f2");
        c.algorithms = vec!["ga".into()];
        assert!(run_experiment(&c, 1).is_err());
    }
}
