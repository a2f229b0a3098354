//! Benchmark objectives, search spaces and feasible moves.
//!
//! Five classic minimization problems are registered by name:
//!
//! | name   | function                         | dim        | box                |
//! |--------|----------------------------------|------------|--------------------|
//! | `f0`   | Corana's stepped quadratic wells | 4 (fixed)  | `[-1000, 1000]`    |
//! | `f2`   | Rosenbrock's saddle              | 10         | `[-2.048, 2.048]`  |
//! | `f5`   | Shekel's foxholes                | 2 (fixed)  | `[-65.536, 65.536]`|
//! | `f6`   | Rastrigin                        | 10         | `[-5.12, 5.12]`    |
//! | `bump` | Keane's bump (as `1 - bump`)     | 50         | `(0, 10)` + constraints |

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::levy::{length_from_uniform, sample_direction, LevyParams, UnitVector};
use crate::rng::RandomSource;

/// Attempts at redrawing only the direction when a clipped move breaks a constraint.
pub const CLIP_DIRECTION_RETRIES: usize = 100;

const MAX_INIT_ATTEMPTS: usize = 100_000;

/// What to do with a move that leaves the feasible region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Redraw length and direction up to `max_retries` times, then clip.
    Resample { max_retries: u32 },
    /// Stop the move where the ray leaves the bounding box.
    #[default]
    ClipToEdge,
}

pub type Constraint = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;
type ObjectiveFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Box bounds plus an optional constraint predicate.
#[derive(Clone)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
    constraint: Option<Constraint>,
    boundary: BoundaryPolicy,
}

impl fmt::Debug for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchSpace")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("constrained", &self.constraint.is_some())
            .field("boundary", &self.boundary)
            .finish()
    }
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::domain(
                "bounds must be non-empty and of equal length",
            ));
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] < upper[i])) {
            return Err(Error::domain(format!(
                "lower[{i}] = {} must be below upper[{i}] = {}",
                lower[i], upper[i]
            )));
        }
        Ok(Self {
            lower,
            upper,
            constraint: None,
            boundary: BoundaryPolicy::default(),
        })
    }

    /// Same bounds `[lo, hi]` in every dimension.
    pub fn uniform_box(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn with_constraint(mut self, c: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        self.constraint = Some(Arc::new(c));
        self
    }

    pub fn with_boundary(mut self, policy: BoundaryPolicy) -> Result<Self> {
        if let BoundaryPolicy::Resample { max_retries: 0 } = policy {
            return Err(Error::domain("resample policy needs max_retries >= 1"));
        }
        self.boundary = policy;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn boundary(&self) -> BoundaryPolicy {
        self.boundary
    }

    pub fn has_constraint(&self) -> bool {
        self.constraint.is_some()
    }

    /// Largest side of the bounding box.
    pub fn max_extent(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .fold(0.0, f64::max)
    }

    pub fn in_box(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.in_box(x) && self.constraint.as_ref().is_none_or(|c| c(x))
    }

    /// Uniform point in the box, rejection-sampled against the constraint.
    pub fn random_feasible_point(&self, rng: &mut RandomSource) -> Result<Vec<f64>> {
        for _ in 0..MAX_INIT_ATTEMPTS {
            let x: Vec<f64> = self
                .lower
                .iter()
                .zip(&self.upper)
                .map(|(l, u)| rng.uniform_in(*l, *u))
                .collect();
            if self.is_feasible(&x) {
                return Ok(x);
            }
        }
        Err(Error::domain("could not sample a feasible starting point"))
    }

    /// Moves from `from` along `dir` by up to `length`, stopping where the ray
    /// leaves the box.
    pub fn ray_clip(&self, from: &[f64], length: f64, dir: &UnitVector) -> Vec<f64> {
        let d = dir.components();
        let bounds = || self.lower.iter().zip(&self.upper);
        let mut t = 1.0f64;
        if length > 0.0 {
            for ((x, di), (lo, hi)) in from.iter().zip(d).zip(bounds()) {
                let step = length * di;
                let y = x + step;
                if y > *hi {
                    t = t.min((hi - x) / step);
                } else if y < *lo {
                    t = t.min((lo - x) / step);
                }
            }
        }
        let scale = t.max(0.0) * length;
        from.iter()
            .zip(d)
            .zip(bounds())
            .map(|((x, di), (lo, hi))| (x + scale * di).clamp(*lo, *hi))
            .collect()
    }
}

/// How step lengths are redrawn when the resample policy rejects a move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepLaw {
    Levy(LevyParams),
    /// Uniform on `(0, max]`.
    Uniform {
        max: f64,
    },
    Fixed(f64),
}

impl StepLaw {
    pub fn sample(&self, rng: &mut RandomSource) -> f64 {
        match *self {
            StepLaw::Levy(ref p) => length_from_uniform(rng.uniform_open(), p),
            StepLaw::Uniform { max } => (1.0 - rng.uniform()) * max,
            StepLaw::Fixed(l) => l,
        }
    }
}

/// Moves from a feasible point and always lands on a feasible one.
///
/// With [`BoundaryPolicy::ClipToEdge`] the ray is truncated at the box. If
/// the truncated point breaks the constraint, the direction alone is
/// redrawn up to [`CLIP_DIRECTION_RETRIES`] times, after which `from` is
/// returned. Without a constraint no random draws are consumed.
///
/// With [`BoundaryPolicy::Resample`] an infeasible candidate triggers up to
/// `max_retries` redraws of both length (from `law`) and direction; the
/// clipping rule is applied to the last draw if none succeeds.
pub fn propose_move(
    from: &[f64],
    length: f64,
    dir: &UnitVector,
    law: &StepLaw,
    space: &SearchSpace,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    if !space.is_feasible(from) {
        return Err(Error::domain("move must start from a feasible point"));
    }
    if dir.dim() != space.dim() {
        return Err(Error::domain(
            "direction dimension does not match the space",
        ));
    }
    if !(length >= 0.0) {
        return Err(Error::domain(format!(
            "move length must be non-negative, got {length}"
        )));
    }
    match space.boundary {
        BoundaryPolicy::ClipToEdge => clip_move(from, length, dir, space, rng),
        BoundaryPolicy::Resample { max_retries } => {
            let candidate = translate(from, length, dir);
            if space.is_feasible(&candidate) {
                return Ok(candidate);
            }
            let mut last = (length, dir.clone());
            for _ in 0..max_retries {
                let l = law.sample(rng);
                let d = sample_direction(space.dim(), rng)?;
                let candidate = translate(from, l, &d);
                if space.is_feasible(&candidate) {
                    return Ok(candidate);
                }
                last = (l, d);
            }
            clip_move(from, last.0, &last.1, space, rng)
        }
    }
}

fn translate(from: &[f64], length: f64, dir: &UnitVector) -> Vec<f64> {
    from.iter()
        .zip(dir.components())
        .map(|(x, d)| x + length * d)
        .collect()
}

fn clip_move(
    from: &[f64],
    length: f64,
    dir: &UnitVector,
    space: &SearchSpace,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    let clipped = space.ray_clip(from, length, dir);
    if space.is_feasible(&clipped) {
        return Ok(clipped);
    }
    for _ in 0..CLIP_DIRECTION_RETRIES {
        let d = sample_direction(space.dim(), rng)?;
        let clipped = space.ray_clip(from, length, &d);
        if space.is_feasible(&clipped) {
            return Ok(clipped);
        }
    }
    Ok(from.to_vec())
}

/// A point paired with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedPoint {
    point: Vec<f64>,
    value: f64,
}

impl EvaluatedPoint {
    pub(crate) fn new_unchecked(point: Vec<f64>, value: f64) -> Self {
        Self { point, value }
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn into_point(self) -> Vec<f64> {
        self.point
    }
}

/// A named objective over a search space.
#[derive(Clone)]
pub struct Objective {
    name: String,
    space: SearchSpace,
    known_best: Option<f64>,
    func: ObjectiveFn,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("known_best", &self.known_best)
            .finish()
    }
}

/// Registered benchmark names.
pub const OBJECTIVE_NAMES: [&str; 5] = ["f0", "f2", "f5", "f6", "bump"];

impl Objective {
    pub fn new(
        name: impl Into<String>,
        space: SearchSpace,
        func: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            space,
            known_best: None,
            func: Arc::new(func),
        }
    }

    pub fn with_known_best(mut self, v: f64) -> Self {
        self.known_best = Some(v);
        self
    }

    pub fn with_boundary(mut self, policy: BoundaryPolicy) -> Result<Self> {
        self.space = self.space.with_boundary(policy)?;
        Ok(self)
    }

    /// Looks up a benchmark; `dim = None` selects its default dimension.
    pub fn by_name(name: &str, dim: Option<usize>) -> Result<Self> {
        let check_fixed = |fixed: usize| match dim {
            Some(d) if d != fixed => Err(Error::config(format!(
                "{name} has fixed dimension {fixed}, got {d}"
            ))),
            _ => Ok(fixed),
        };
        let at_least = |min: usize, default: usize| match dim {
            Some(d) if d < min => Err(Error::config(format!(
                "{name} needs dimension >= {min}, got {d}"
            ))),
            Some(d) => Ok(d),
            None => Ok(default),
        };
        let obj = match name {
            "f0" => {
                let n = check_fixed(4)?;
                Objective::new(name, SearchSpace::uniform_box(n, -1000.0, 1000.0)?, f0)
                    .with_known_best(0.0)
            }
            "f2" => {
                let n = at_least(2, 10)?;
                Objective::new(name, SearchSpace::uniform_box(n, -2.048, 2.048)?, f2)
                    .with_known_best(0.0)
            }
            "f5" => {
                let n = check_fixed(2)?;
                Objective::new(name, SearchSpace::uniform_box(n, -65.536, 65.536)?, f5)
                    .with_known_best(f5(&[-32.0, -32.0]))
            }
            "f6" => {
                let n = at_least(1, 10)?;
                Objective::new(name, SearchSpace::uniform_box(n, -5.12, 5.12)?, f6)
                    .with_known_best(0.0)
            }
            "bump" => {
                let n = at_least(2, 50)?;
                let space =
                    SearchSpace::uniform_box(n, 0.0, 10.0)?.with_constraint(bump_constraint);
                Objective::new(name, space, bump)
            }
            _ => {
                return Err(Error::config(format!(
                    "unknown function {name:?}; expected one of {}",
                    OBJECTIVE_NAMES.join(", ")
                )))
            }
        };
        Ok(obj)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn known_best(&self) -> Option<f64> {
        self.known_best
    }

    /// Raw objective value; does not check feasibility.
    pub fn value(&self, x: &[f64]) -> f64 {
        (self.func)(x)
    }

    pub fn evaluate(&self, point: Vec<f64>) -> Result<EvaluatedPoint> {
        if point.len() != self.dim() {
            return Err(Error::domain(format!(
                "{} expects {} coordinates, got {}",
                self.name,
                self.dim(),
                point.len()
            )));
        }
        let value = self.value(&point);
        Ok(EvaluatedPoint { point, value })
    }
}

fn check_dim(x: &[f64], ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("{what}, got dimension {}", x.len())))
    }
}

// sgn with sgn(0) = 0
fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

const F0_D: [f64; 4] = [1.0, 1000.0, 10.0, 100.0];

fn f0(x: &[f64]) -> f64 {
    const S: f64 = 0.2;
    const T: f64 = 0.05;
    const C: f64 = 0.15;
    x.iter()
        .zip(F0_D)
        .map(|(&xi, d)| {
            let z = ((xi / S).abs() + 0.49999).floor() * sgn(xi) * S;
            if (xi - z).abs() < T {
                (T * sgn(z) + z).powi(2) * C * d
            } else {
                d * xi * xi
            }
        })
        .sum()
}

fn f2(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

const FOXHOLE_GRID: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];

fn f5(x: &[f64]) -> f64 {
    let mut sum = 0.0;
    for j in 0..25 {
        let a1 = FOXHOLE_GRID[j % 5];
        let a2 = FOXHOLE_GRID[j / 5];
        let dist = (x[0] - a1).powi(6) + (x[1] - a2).powi(6);
        sum += 1.0 / ((j + 1) as f64 + dist);
    }
    1.0 / (1.0 / 500.0 + sum)
}

fn f6(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|&v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

fn bump(x: &[f64]) -> f64 {
    let mut s4 = 0.0;
    let mut p2 = 1.0;
    let mut weighted = 0.0;
    for (i, &v) in x.iter().enumerate() {
        let c2 = v.cos().powi(2);
        s4 += c2 * c2;
        p2 *= c2;
        weighted += (i + 1) as f64 * v * v;
    }
    1.0 - (s4 - 2.0 * p2).abs() / weighted.sqrt()
}

fn bump_constraint(x: &[f64]) -> bool {
    let n = x.len() as f64;
    x.iter().all(|&v| v > 0.0 && v < 10.0)
        && x.iter().product::<f64>() > 0.75
        && x.iter().sum::<f64>() < 7.5 * n
}

/// Corana's f0 in four dimensions.
pub fn evaluate_f0(x: &[f64]) -> Result<f64> {
    check_dim(x, x.len() == 4, "f0 is 4-dimensional")?;
    Ok(f0(x))
}

/// Rosenbrock's saddle.
pub fn evaluate_f2(x: &[f64]) -> Result<f64> {
    check_dim(x, x.len() >= 2, "f2 needs at least 2 dimensions")?;
    Ok(f2(x))
}

/// Shekel's foxholes.
pub fn evaluate_f5(x: &[f64]) -> Result<f64> {
    check_dim(x, x.len() == 2, "f5 is 2-dimensional")?;
    Ok(f5(x))
}

/// Rastrigin.
pub fn evaluate_f6(x: &[f64]) -> Result<f64> {
    check_dim(x, !x.is_empty(), "f6 needs at least 1 dimension")?;
    Ok(f6(x))
}

/// Keane's bump, negated into a minimization problem. Defined on the whole
/// box; feasibility is a separate question.
pub fn evaluate_bump(x: &[f64]) -> Result<f64> {
    check_dim(x, x.len() >= 2, "bump needs at least 2 dimensions")?;
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::domain("bump is undefined at the origin"));
    }
    Ok(bump(x))
}

pub fn is_feasible(space: &SearchSpace, x: &[f64]) -> bool {
    space.is_feasible(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f0_anchors() {
        assert_eq!(evaluate_f0(&[0.0; 4]).unwrap(), 0.0);
        assert!((evaluate_f0(&[0.3, 0.0, 0.0, 0.0]).unwrap() - 0.09).abs() < 1e-12);
        assert!((evaluate_f0(&[1.0; 4]).unwrap() - 183.731625).abs() < 1e-9);
        assert!(evaluate_f0(&[0.0; 3]).is_err());
    }

    #[test]
    fn f2_anchors() {
        for n in 2..12 {
            assert_eq!(evaluate_f2(&vec![1.0; n]).unwrap(), 0.0);
        }
        assert_eq!(evaluate_f2(&[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(evaluate_f2(&[-1.0, 1.0]).unwrap(), 4.0);
        assert!(evaluate_f2(&[1.0]).is_err());
    }

    #[test]
    fn f5_anchors() {
        // mpmath reference values
        assert!((evaluate_f5(&[-32.0, -32.0]).unwrap() - 0.998_003_838_818_649).abs() < 1e-12);
        assert!((evaluate_f5(&[32.0, 32.0]).unwrap() - 23.809_436_615_621_9).abs() < 1e-9);
        assert!((evaluate_f5(&[0.0, 0.0]).unwrap() - 12.670_505_812_885_99).abs() < 1e-9);
        assert!(evaluate_f5(&[0.0; 3]).is_err());
    }

    #[test]
    fn f6_anchors() {
        assert_eq!(evaluate_f6(&[0.0; 10]).unwrap(), 0.0);
        assert!((evaluate_f6(&[0.5]).unwrap() - 20.25).abs() < 1e-12);
        assert!((evaluate_f6(&[1.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!(evaluate_f6(&[]).is_err());
    }

    #[test]
    fn bump_anchors() {
        for c in [1.0, 2.5, 7.3] {
            assert!((evaluate_bump(&[c, c]).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((evaluate_bump(&[1.0, 2.0]).unwrap() - 0.995_299_606_453_278).abs() < 1e-12);
        assert!(evaluate_bump(&[0.0, 0.0]).is_err());
        let space = Objective::by_name("bump", Some(50)).unwrap();
        assert!(space.space().is_feasible(&[5.0; 50]));
    }

    #[test]
    fn feasibility_examples() {
        let f2 = Objective::by_name("f2", None).unwrap();
        assert!(f2.space().is_feasible(&[0.0; 10]));
        let mut x = vec![0.0; 10];
        x[0] = 2.1;
        assert!(!f2.space().is_feasible(&x));
        let b = Objective::by_name("bump", Some(2)).unwrap();
        assert!(!b.space().is_feasible(&[0.5, 0.5]));
        assert!(b.space().is_feasible(&[1.0, 1.0]));
        // sum constraint: 15N/2 = 15 for N = 2
        assert!(!b.space().is_feasible(&[7.5, 7.5]));
    }

    #[test]
    fn registry_dims() {
        let dims: Vec<usize> = OBJECTIVE_NAMES
            .iter()
            .map(|n| Objective::by_name(n, None).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![4, 10, 2, 10, 50]);
        assert!(Objective::by_name("f5", Some(3)).is_err());
        assert!(Objective::by_name("f0", Some(5)).is_err());
        assert!(Objective::by_name("f2", Some(1)).is_err());
        assert!(Objective::by_name("nope", None).is_err());
        assert_eq!(Objective::by_name("f6", Some(3)).unwrap().dim(), 3);
    }

    #[test]
    fn known_best_metadata() {
        assert_eq!(
            Objective::by_name("f0", None).unwrap().known_best(),
            Some(0.0)
        );
        let f5 = Objective::by_name("f5", None).unwrap();
        assert!((f5.known_best().unwrap() - 0.998_003_838_818_649).abs() < 1e-12);
        assert_eq!(Objective::by_name("bump", None).unwrap().known_best(), None);
    }

    #[test]
    fn clip_stops_at_upper_bound() {
        let space = SearchSpace::uniform_box(1, 0.0, 10.0).unwrap();
        let mut rng = RandomSource::from_seed(0);
        let dir = UnitVector::axis(1, 0, 1.0);
        let x = propose_move(&[9.0], 5.0, &dir, &StepLaw::Fixed(5.0), &space, &mut rng).unwrap();
        assert_eq!(x, vec![10.0]);
    }

    #[test]
    fn interior_move_is_exact_under_both_policies() {
        for policy in [
            BoundaryPolicy::ClipToEdge,
            BoundaryPolicy::Resample { max_retries: 10 },
        ] {
            let space = SearchSpace::uniform_box(1, 0.0, 10.0)
                .unwrap()
                .with_boundary(policy)
                .unwrap();
            let mut rng = RandomSource::from_seed(0);
            let dir = UnitVector::axis(1, 0, -1.0);
            let x =
                propose_move(&[5.0], 2.0, &dir, &StepLaw::Fixed(2.0), &space, &mut rng).unwrap();
            assert_eq!(x, vec![3.0]);
        }
    }

    #[test]
    fn clip_preserves_direction() {
        let space = SearchSpace::uniform_box(2, 0.0, 10.0).unwrap();
        let mut rng = RandomSource::from_seed(0);
        let dir = UnitVector::new(vec![1.0, 1.0]).unwrap();
        let x = propose_move(
            &[8.0, 5.0],
            100.0,
            &dir,
            &StepLaw::Fixed(1.0),
            &space,
            &mut rng,
        )
        .unwrap();
        assert!((x[0] - 10.0).abs() < 1e-12);
        assert!((x[1] - 7.0).abs() < 1e-12);
    }

    #[test]
    fn clip_without_constraint_draws_nothing() {
        let space = SearchSpace::uniform_box(3, -1.0, 1.0).unwrap();
        let mut rng = RandomSource::from_seed(9);
        let mut reference = RandomSource::from_seed(9);
        let dir = UnitVector::new(vec![1.0, -2.0, 0.5]).unwrap();
        for len in [0.0, 0.1, 5.0, 1e9] {
            propose_move(&[0.0; 3], len, &dir, &StepLaw::Fixed(len), &space, &mut rng).unwrap();
        }
        assert_eq!(rng.uniform(), reference.uniform());
    }

    #[test]
    fn resample_falls_back_to_clip() {
        // every redraw is far outside a tiny box
        let space = SearchSpace::uniform_box(2, 0.0, 1e-3)
            .unwrap()
            .with_boundary(BoundaryPolicy::Resample { max_retries: 3 })
            .unwrap();
        let mut rng = RandomSource::from_seed(4);
        let dir = UnitVector::new(vec![1.0, 0.0]).unwrap();
        let x = propose_move(
            &[5e-4, 5e-4],
            10.0,
            &dir,
            &StepLaw::Fixed(10.0),
            &space,
            &mut rng,
        )
        .unwrap();
        assert!(space.is_feasible(&x));
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let space = SearchSpace::uniform_box(1, 0.0, 1.0).unwrap();
        let mut rng = RandomSource::from_seed(0);
        let dir = UnitVector::axis(1, 0, 1.0);
        assert!(propose_move(&[2.0], 0.1, &dir, &StepLaw::Fixed(0.1), &space, &mut rng).is_err());
    }

    #[test]
    fn bump_moves_stay_feasible() {
        let levy = LevyParams::new(1.5, 0.5).unwrap().with_cap(5.0).unwrap();
        for policy in [
            BoundaryPolicy::ClipToEdge,
            BoundaryPolicy::Resample { max_retries: 20 },
        ] {
            let obj = Objective::by_name("bump", Some(2))
                .unwrap()
                .with_boundary(policy)
                .unwrap();
            let mut rng = RandomSource::from_seed(77);
            let mut x = vec![1.0, 1.0];
            for _ in 0..10_000 {
                let l = StepLaw::Levy(levy).sample(&mut rng);
                let d = sample_direction(2, &mut rng).unwrap();
                x = propose_move(&x, l, &d, &StepLaw::Levy(levy), obj.space(), &mut rng).unwrap();
                assert!(obj.space().is_feasible(&x), "{x:?}");
            }
        }
    }

    #[test]
    fn foxholes_beat_their_surroundings() {
        // each hole beats every point of its Voronoi cell that is at least
        // 2 units from all holes
        let f5 = |a: f64, b: f64| evaluate_f5(&[a, b]).unwrap();
        let node = |j: usize| (FOXHOLE_GRID[j % 5], FOXHOLE_GRID[j / 5]);
        let steps = 525;
        let h = 2.0 * 65.536 / steps as f64;
        for ix in 0..=steps {
            for iy in 0..=steps {
                let (x, y) = (-65.536 + ix as f64 * h, -65.536 + iy as f64 * h);
                let (nearest, dist) = (0..25)
                    .map(|j| {
                        let (a, b) = node(j);
                        (j, ((x - a).powi(2) + (y - b).powi(2)).sqrt())
                    })
                    .min_by(|p, q| p.1.total_cmp(&q.1))
                    .unwrap();
                if dist >= 2.0 {
                    let (a, b) = node(nearest);
                    assert!(f5(a, b) < f5(x, y), "hole {nearest} vs ({x}, {y})");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn nonnegative_objectives(x in prop::collection::vec(-5.12f64..=5.12, 1..12)) {
            prop_assert!(evaluate_f6(&x).unwrap() >= -1e-9);
            if x.len() >= 2 {
                let y: Vec<f64> = x.iter().map(|v| v * 0.4).collect();
                prop_assert!(evaluate_f2(&y).unwrap() >= 0.0);
            }
        }

        #[test]
        fn f0_nonnegative(x in prop::array::uniform4(-1000.0f64..=1000.0)) {
            prop_assert!(evaluate_f0(&x).unwrap() >= 0.0);
        }

        #[test]
        fn bump_at_most_one(x in prop::collection::vec(0.01f64..10.0, 2..60)) {
            prop_assert!(evaluate_bump(&x).unwrap() <= 1.0);
        }

        #[test]
        fn moves_are_feasible(
            seed in any::<u64>(),
            from in prop::collection::vec(-2.0f64..=2.0, 3),
            len in 0.0f64..100.0,
            resample in any::<bool>(),
        ) {
            let policy = if resample { BoundaryPolicy::Resample { max_retries: 5 } } else { BoundaryPolicy::ClipToEdge };
            let space = SearchSpace::uniform_box(3, -2.0, 2.0).unwrap().with_boundary(policy).unwrap();
            let mut rng = RandomSource::from_seed(seed);
            let d = sample_direction(3, &mut rng).unwrap();
            let x = propose_move(&from, len, &d, &StepLaw::Uniform { max: 4.0 }, &space, &mut rng).unwrap();
            prop_assert!(space.is_feasible(&x));
        }
    }
}
