use std::time::Instant;

use super::lfo::mls_body;
use super::{initial_point, LfoSaConfig, SaConfig, Stagnation};
use crate::error::{Error, Result};
use crate::evaluator::{ConvergenceTrace, Evaluator, StoppingCriteria};
use crate::levy::sample_direction;
use crate::rng::RandomSource;
use crate::testbed::{propose_move, EvaluatedPoint, Objective, StepLaw};

/// Lower bound on the initial temperature.
const T0_FLOOR: f64 = 1e-6;

/// Geometric cooling `T(t) = r^t * T0` with `r = exp(ln(Ts/T0) / t_m)`, so
/// that `T(0) = T0` and `T(t_m) = Ts`.
pub fn sa_temperature(t: f64, t_m: f64, t0: f64, ts: f64) -> Result<f64> {
    if !(t0 > 0.0) || !(ts > 0.0) {
        return Err(Error::domain("temperatures must be positive"));
    }
    if !(t_m > 0.0) {
        return Err(Error::domain("t_m must be positive"));
    }
    if !(0.0..=t_m).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [0, {t_m}]")));
    }
    let r = ((ts / t0).ln() / t_m).exp();
    Ok(r.powf(t) * t0)
}

/// Metropolis rule: improvements always pass; a worsening `delta` passes
/// with probability `exp(-delta / T)`, consuming one uniform draw.
pub fn sa_accept(delta: f64, temperature: f64, rng: &mut RandomSource) -> bool {
    if delta <= 0.0 {
        return true;
    }
    rng.uniform() < (-delta / temperature).exp()
}

/// How annealing time is measured for one SA phase.
enum Clock {
    Evals { start: u64, span: f64 },
    Time { start: Instant, span: f64 },
}

impl Clock {
    fn for_phase(ev: &Evaluator<'_>) -> Result<Self> {
        if let Some(cap) = ev.cap() {
            let start = ev.evals();
            let span = cap.saturating_sub(start).max(1) as f64;
            return Ok(Clock::Evals { start, span });
        }
        let deadline = ev
            .deadline()
            .ok_or_else(|| Error::config("SA needs an evaluation or time budget"))?;
        let start = Instant::now();
        let span = deadline
            .saturating_duration_since(start)
            .as_secs_f64()
            .max(1e-9);
        Ok(Clock::Time { start, span })
    }

    fn t_max(&self) -> f64 {
        match *self {
            Clock::Evals { span, .. } | Clock::Time { span, .. } => span,
        }
    }

    fn now(&self, ev: &Evaluator<'_>) -> f64 {
        let t = match *self {
            Clock::Evals { start, .. } => (ev.evals() - start) as f64,
            Clock::Time { start, .. } => start.elapsed().as_secs_f64(),
        };
        t.min(self.t_max())
    }
}

/// Anneals from `start` until the evaluator is exhausted. Best-so-far is
/// tracked by the evaluator, independently of the (possibly worse) incumbent.
fn anneal(
    ev: &mut Evaluator<'_>,
    start: EvaluatedPoint,
    config: &SaConfig,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
) -> Result<()> {
    let space = ev.objective().space();
    let t0 = (config.t0_fraction * start.value().abs()).max(T0_FLOOR);
    // never heat up when the start is already colder than the final temperature
    let ts = config.ts.min(t0);
    let law = StepLaw::Uniform {
        max: config.move_scale * space.max_extent(),
    };
    let clock = Clock::for_phase(ev)?;
    let mut stagnation = Stagnation::new(stop.non_improvement_limit, ev.best_value());
    let mut current = start;
    loop {
        let temperature = sa_temperature(clock.now(ev), clock.t_max(), t0, ts)?;
        let length = law.sample(rng);
        let dir = sample_direction(space.dim(), rng)?;
        let x = propose_move(current.point(), length, &dir, &law, space, rng)?;
        let Some(p) = ev.eval(x) else {
            break;
        };
        if sa_accept(p.value() - current.value(), temperature, rng) {
            current = p;
        }
        if stagnation.update(ev.best_value()) {
            break;
        }
    }
    Ok(())
}

/// Simulated annealing from a uniform random start.
///
/// `T0` is `t0_fraction * |f(start)|` (at least `1e-6`); the schedule cools
/// to `ts` over the evaluation budget, or over the time budget when no
/// evaluation cap is set. Proposals have uniform direction and a length
/// uniform on `(0, move_scale * max_extent]`.
pub fn run_sa(
    objective: &Objective,
    config: &SaConfig,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
    schedule: &[u64],
) -> Result<ConvergenceTrace> {
    config.validate()?;
    stop.validate()?;
    let mut ev = Evaluator::new(objective, stop, schedule)?;
    if let Some(start) = initial_point(&mut ev, rng)? {
        anneal(&mut ev, start, config, stop, rng)?;
    }
    ev.finish("sa", rng.seed())
}

/// LFO-MLS on the first `split_fraction` of the budget, then SA started at
/// the best point of that phase with the remainder.
///
/// The first phase draws from `rng` exactly as a standalone LFO-MLS run with
/// the reduced budget would, so the two traces agree up to the hand-over.
pub fn run_lfo_sa(
    objective: &Objective,
    config: &LfoSaConfig,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
    schedule: &[u64],
) -> Result<ConvergenceTrace> {
    config.validate()?;
    stop.validate()?;
    let mut ev = Evaluator::new(objective, stop, schedule)?;
    let full_cap = ev.cap();
    let full_deadline = ev.deadline();

    ev.set_cap(full_cap.map(|c| phase_one_evals(c, config.split_fraction)));
    ev.set_deadline(
        stop.max_time
            .zip(full_deadline)
            .map(|(total, end)| end - total + total.mul_f64(config.split_fraction)),
    );
    mls_body(&mut ev, &config.mls, stop, rng)?;

    ev.set_cap(full_cap);
    ev.set_deadline(full_deadline);
    if let Some(handover) = ev.best().cloned() {
        anneal(&mut ev, handover, &config.sa, stop, rng)?;
    }
    ev.finish("lfo-sa", rng.seed())
}

/// Evaluations granted to the LFO-MLS phase of an LFO-SA run.
pub fn phase_one_evals(total: u64, split_fraction: f64) -> u64 {
    ((total as f64 * split_fraction).floor() as u64).max(1)
}
