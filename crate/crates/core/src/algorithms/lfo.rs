use super::{
    initial_point, min_limit, LfoBConfig, LfoIlsConfig, LfoLsConfig, LfoMlsConfig, Stagnation,
};
use crate::error::Result;
use crate::evaluator::{ConvergenceTrace, Evaluator, StoppingCriteria};
use crate::levy::{sample_direction, sample_length, LevyParams};
use crate::local_search::{local_search, LocalSearchConfig};
use crate::rng::RandomSource;
use crate::testbed::{propose_move, EvaluatedPoint, Objective, StepLaw};

/// One Lévy jump from `from`, not yet evaluated.
fn levy_jump(
    from: &[f64],
    levy: &LevyParams,
    ev: &Evaluator<'_>,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    let l = sample_length(levy, rng);
    jump_at_distance(from, l, levy, ev, rng)
}

fn jump_at_distance(
    from: &[f64],
    l: f64,
    levy: &LevyParams,
    ev: &Evaluator<'_>,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    let space = ev.objective().space();
    let dir = sample_direction(space.dim(), rng)?;
    propose_move(from, l, &dir, &StepLaw::Levy(*levy), space, rng)
}

/// Generations of jumps around the best-known point; optionally each jumped
/// particle descends before selection.
fn generations(
    ev: &mut Evaluator<'_>,
    levy: &LevyParams,
    population: u32,
    ls: Option<&LocalSearchConfig>,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
) -> Result<()> {
    let Some(mut best) = initial_point(ev, rng)? else {
        return Ok(());
    };
    let mut stagnation = Stagnation::new(stop.non_improvement_limit, best.value());
    'run: loop {
        let mut generation_best: Option<EvaluatedPoint> = None;
        for _ in 0..population {
            let x = levy_jump(best.point(), levy, ev, rng)?;
            let Some(mut p) = ev.eval(x) else {
                break 'run;
            };
            if let Some(cfg) = ls {
                p = local_search(p, cfg, ev)?;
            }
            if generation_best
                .as_ref()
                .is_none_or(|g| p.value() < g.value())
            {
                generation_best = Some(p);
            }
            if ev.exhausted() {
                break 'run;
            }
        }
        // only the best of the generation survives, and only if it beats the
        // best-known position
        if let Some(g) = generation_best {
            if g.value() < best.value() {
                best = g;
            }
        }
        if stagnation.update(best.value()) {
            break;
        }
    }
    Ok(())
}

/// Basic Lévy-flight optimizer.
///
/// Each generation spawns `population` particles at independent Lévy
/// distances and directions from the best-known position; the best of the
/// generation replaces it when better. Consumes exactly `population`
/// evaluations per generation plus one for the starting point.
pub fn run_lfo_b(
    objective: &Objective,
    config: &LfoBConfig,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
    schedule: &[u64],
) -> Result<ConvergenceTrace> {
    config.validate()?;
    stop.validate()?;
    let mut ev = Evaluator::new(objective, stop, schedule)?;
    generations(&mut ev, &config.levy, config.population, None, stop, rng)?;
    ev.finish("lfo-b", rng.seed())
}

/// Lévy-flight generations where every particle runs a local search before
/// selection. Local-search evaluations count against the budget.
pub fn run_lfo_ls(
    objective: &Objective,
    config: &LfoLsConfig,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
    schedule: &[u64],
) -> Result<ConvergenceTrace> {
    config.validate()?;
    stop.validate()?;
    let mut ev = Evaluator::new(objective, stop, schedule)?;
    generations(
        &mut ev,
        &config.levy,
        config.population,
        Some(&config.ls),
        stop,
        rng,
    )?;
    ev.finish("lfo-ls", rng.seed())
}

/// Single-particle multistart: descend, then jump and accept the jump
/// unconditionally. Ends after `non_improvement_jump_limit` consecutive
/// rounds without a new best, or when a stopping criterion fires.
pub(super) fn mls_body(
    ev: &mut Evaluator<'_>,
    config: &LfoMlsConfig,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
) -> Result<()> {
    let Some(mut current) = initial_point(ev, rng)? else {
        return Ok(());
    };
    let limit = min_limit(
        Some(config.non_improvement_jump_limit as u64),
        stop.non_improvement_limit,
    );
    let mut stagnation = Stagnation::new(limit, f64::INFINITY);
    loop {
        current = local_search(current, &config.ls, ev)?;
        if stagnation.update(ev.best_value()) || ev.exhausted() {
            break;
        }
        let x = levy_jump(current.point(), &config.levy, ev, rng)?;
        let Some(p) = ev.eval(x) else {
            break;
        };
        current = p;
    }
    Ok(())
}

pub fn run_lfo_mls(
    objective: &Objective,
    config: &LfoMlsConfig,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
    schedule: &[u64],
) -> Result<ConvergenceTrace> {
    config.validate()?;
    stop.validate()?;
    let mut ev = Evaluator::new(objective, stop, schedule)?;
    mls_body(&mut ev, config, stop, rng)?;
    ev.finish("lfo-mls", rng.seed())
}

/// Iterated local search with Lévy perturbations.
///
/// After each descent one length `l` is drawn; jumps of that length in fresh
/// directions are tried from the local optimum until one lands on a strictly
/// better raw value. After `inner_attempt_cap` failures the last jump is
/// taken anyway. The accepted point then seeds the next descent.
pub fn run_lfo_ils(
    objective: &Objective,
    config: &LfoIlsConfig,
    stop: &StoppingCriteria,
    rng: &mut RandomSource,
    schedule: &[u64],
) -> Result<ConvergenceTrace> {
    config.validate()?;
    stop.validate()?;
    let mut ev = Evaluator::new(objective, stop, schedule)?;
    if let Some(start) = initial_point(&mut ev, rng)? {
        let mut current = local_search(start, &config.ls, &mut ev)?;
        let mut stagnation = Stagnation::new(stop.non_improvement_limit, ev.best_value());
        'run: while !ev.exhausted() {
            let l = sample_length(&config.levy, rng);
            let mut accepted = None;
            for _ in 0..config.inner_attempt_cap {
                let x = jump_at_distance(current.point(), l, &config.levy, &ev, rng)?;
                let Some(p) = ev.eval(x) else {
                    break 'run;
                };
                let better = p.value() < current.value();
                accepted = Some(p);
                if better {
                    break;
                }
            }
            let Some(next) = accepted else { break };
            current = local_search(next, &config.ls, &mut ev)?;
            if stagnation.update(ev.best_value()) {
                break;
            }
        }
    }
    ev.finish("lfo-ils", rng.seed())
}
