//! Heavy-tailed step-length law and random directions.
//!
//! Step lengths follow the normalized power law
//!
//! ```text
//! P(l) = beta / (l0 * (1 + l/l0)^(1 + beta)),   l >= 0
//! ```
//!
//! whose tail decays like `l^(-1-beta)`, the Lévy-flight signature. Lengths
//! are generated by inverting the CDF `F(l) = 1 - (1 + l/l0)^(-beta)`:
//! `l = l0 * (U^(-1/beta) - 1)` for `U` uniform.
//!
//! The physical Lévy range is `0 < beta <= 2`, but any positive `beta` is
//! accepted: larger values simply make long jumps rarer.

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Parameters of the step-length law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    beta: f64,
    l0: f64,
    l_max: Option<f64>,
}

impl LevyParams {
    pub fn new(beta: f64, l0: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        if !(l0 > 0.0 && l0.is_finite()) {
            return Err(Error::domain(format!("l0 must be positive, got {l0}")));
        }
        Ok(Self {
            beta,
            l0,
            l_max: None,
        })
    }

    /// Caps generated lengths at `l_max` (truncation, not rejection).
    pub fn with_cap(mut self, l_max: f64) -> Result<Self> {
        if !(l_max > 0.0) {
            return Err(Error::domain(format!(
                "l_max must be positive, got {l_max}"
            )));
        }
        self.l_max = Some(l_max);
        Ok(self)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn l_max(&self) -> Option<f64> {
        self.l_max
    }

    /// Same law without the cap.
    pub fn uncapped(mut self) -> Self {
        self.l_max = None;
        self
    }
}

/// Density of the uncapped step-length law.
pub fn levy_pdf(l: f64, params: &LevyParams) -> Result<f64> {
    if !(l >= 0.0) {
        return Err(Error::domain(format!(
            "length must be non-negative, got {l}"
        )));
    }
    let LevyParams { beta, l0, .. } = *params;
    Ok(beta / (l0 * (1.0 + l / l0).powf(1.0 + beta)))
}

/// Cumulative distribution of the uncapped step-length law.
pub fn levy_cdf(l: f64, params: &LevyParams) -> Result<f64> {
    if !(l >= 0.0) {
        return Err(Error::domain(format!(
            "length must be non-negative, got {l}"
        )));
    }
    let LevyParams { beta, l0, .. } = *params;
    Ok(1.0 - (1.0 + l / l0).powf(-beta))
}

/// Inverse-transform map from a uniform draw `u in (0, 1)` to a length,
/// including the cap when one is set.
pub fn length_from_uniform(u: f64, params: &LevyParams) -> f64 {
    let raw = params.l0 * (u.powf(-1.0 / params.beta) - 1.0);
    match params.l_max {
        Some(cap) => raw.min(cap),
        None => raw,
    }
}

/// Draws one step length. Consumes exactly one uniform; an exact zero from
/// the generator is redrawn since the inverse map diverges there.
pub fn sample_length(params: &LevyParams, rng: &mut RandomSource) -> f64 {
    length_from_uniform(rng.uniform_open(), params)
}

/// A direction on the unit hypersphere.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Normalizes `v`; fails on (near-)zero vectors.
    pub fn new(mut v: Vec<f64>) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm >= 1e-12) || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero vector"));
        }
        v.iter_mut().for_each(|x| *x /= norm);
        Ok(Self(v))
    }

    /// `sign * e_axis` in `dim` dimensions.
    pub fn axis(dim: usize, axis: usize, sign: f64) -> Self {
        let mut v = vec![0.0; dim];
        v[axis] = sign.signum();
        Self(v)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Uniform random direction in `dim` dimensions (normalized standard normals).
pub fn sample_direction(dim: usize, rng: &mut RandomSource) -> Result<UnitVector> {
    if dim == 0 {
        return Err(Error::domain("direction dimension must be at least 1"));
    }
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
        if let Ok(u) = UnitVector::new(v) {
            return Ok(u);
        }
    }
}
