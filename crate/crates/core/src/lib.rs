//! Global optimization with Lévy flights.
//!
//! The crate provides:
//!
//! - [`levy`]: the heavy-tailed step-length law `P(l) = beta / (l0 (1 + l/l0)^(1+beta))`,
//!   its CDF, an inverse-transform sampler and uniform random directions;
//! - [`testbed`]: five classic benchmark problems (Corana's f0, Rosenbrock,
//!   Shekel's foxholes, Rastrigin and Keane's bump) with box bounds,
//!   constraints and feasible-move policies;
//! - [`local_search`]: a deterministic compass search;
//! - [`algorithms`]: the Lévy-flight optimizers `lfo-b`, `lfo-ls`, `lfo-mls`,
//!   `lfo-ils`, the hybrid `lfo-sa`, and a simulated annealing baseline;
//! - [`harness`]: seeded, replicated experiments with checkpointed
//!   best-so-far traces, aggregation and CSV/JSONL output.
//!
//! ```
//! use lfo::algorithms::{default_levy, run_lfo_mls, LfoMlsConfig};
//! use lfo::{Objective, RandomSource, StoppingCriteria};
//!
//! let f6 = Objective::by_name("f6", Some(2)).unwrap();
//! let levy = default_levy(&f6, 1.5, None).unwrap();
//! let mut rng = RandomSource::from_seed(7);
//! let trace = run_lfo_mls(&f6, &LfoMlsConfig::new(levy), &StoppingCriteria::evals(5_000), &mut rng, &[1_000, 5_000])
//!     .unwrap();
//! assert!(trace.final_best.value() < 10.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod error;
pub mod evaluator;
pub mod harness;
pub mod levy;
pub mod local_search;
pub mod rng;
pub mod testbed;

pub use error::{Error, Result};
pub use evaluator::{Checkpoint, ConvergenceTrace, Evaluator, StoppingCriteria};
pub use levy::{levy_cdf, levy_pdf, sample_direction, sample_length, LevyParams, UnitVector};
pub use rng::RandomSource;
pub use testbed::{BoundaryPolicy, EvaluatedPoint, Objective, SearchSpace};
