//! The Homogeneity Index, its α-parametric form, and the value-validity
//! framework that scores a homogeneity measure over the (λ, μ) family.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divergence::{Polarization, PolarizationMeasure};
use crate::error::{OrdinalError, Result};
use crate::lorenz::concentration_index;
use crate::ordinal::{lambda_mu_dist, LambdaMuParams, OrdinalDistribution};

/// Number of grid points per axis used by [`loss_functional`].
pub const LOSS_GRID_POINTS: usize = 101;

/// Configuration of the homogeneity index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityConfig {
    /// Polarization sensitivity exponent in `(0, 1]`.
    pub alpha: f64,
    /// Polarization measure combined with CI.
    pub polarization: Polarization,
}

impl Default for HomogeneityConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            polarization: Polarization::Jsd,
        }
    }
}

impl HomogeneityConfig {
    /// Validated constructor.
    pub fn new(alpha: f64, polarization: Polarization) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(OrdinalError::ParamOutOfRange {
                name: "alpha",
                value: alpha,
                expected: "(0, 1]",
            });
        }
        Ok(Self { alpha, polarization })
    }
}

/// Homogeneity index with the configured measure:
/// `HI = (CI + P(U)^α − P(d)^α) / (1 + P(U)^α)`, where `U` is uniform.
///
/// Equals one for singletons and zero for the uniform distribution.
pub fn homogeneity_index(d: &OrdinalDistribution, cfg: &HomogeneityConfig) -> Result<f64> {
    homogeneity_index_with(d, cfg.alpha, &cfg.polarization)
}

/// Homogeneity index for an arbitrary polarization measure.
pub fn homogeneity_index_with(d: &OrdinalDistribution, alpha: f64, measure: &dyn PolarizationMeasure) -> Result<f64> {
    if d.n() < 3 {
        return Err(OrdinalError::TooFewCategories { n: d.n(), min: 3 });
    }
    let pu = measure.evaluate_uniform(d.n()).powf(alpha);
    let pd = measure.evaluate(d).powf(alpha);
    let ci = concentration_index(d);
    Ok(((ci + pu - pd) / (1.0 + pu)).clamp(0.0, 1.0))
}

/// Default homogeneity index (divergence measure, `α = 1`).
pub fn hi(d: &OrdinalDistribution) -> Result<f64> {
    homogeneity_index(d, &HomogeneityConfig::default())
}

/// HI of the distribution with equal mass `1/s` on the first `s` categories.
pub fn hi_equal_abundance(n: usize, s: usize) -> Result<f64> {
    hi(&OrdinalDistribution::equal_abundance(n, s)?)
}

/// The three homogeneity-group thresholds `HI(4), HI(5), HI(6)` for `n`.
pub fn group_thresholds(n: usize) -> Result<[f64; 3]> {
    Ok([hi_equal_abundance(n, 4)?, hi_equal_abundance(n, 5)?, hi_equal_abundance(n, 6)?])
}

fn trapezoid_weights(points: usize) -> Vec<f64> {
    let h = 1.0 / (points - 1) as f64;
    (0..points)
        .map(|i| if i == 0 || i == points - 1 { h / 2.0 } else { h })
        .collect()
}

/// `100 × (∬ (1 + μ)·f(λ, μ) dλ dμ − 0.5)` on a 101 × 101 trapezoid grid over
/// the unit square.
///
/// Rows are evaluated in parallel but summed in a fixed order, so the result
/// is bitwise identical to a sequential sweep.
pub fn loss_integral<F>(f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let points = LOSS_GRID_POINTS;
    let w = trapezoid_weights(points);
    let grid: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
    let rows: Vec<f64> = (0..points)
        .into_par_iter()
        .map(|a| {
            let lambda = grid[a];
            let mut row = 0.0;
            for b in 0..points {
                let mu = grid[b];
                row += w[b] * (1.0 + mu) * f(lambda, mu);
            }
            w[a] * row
        })
        .collect();
    let total: f64 = rows.iter().sum();
    100.0 * (total - 0.5)
}

/// Loss of a homogeneity evaluator over the (λ, μ) family for `n > 3`.
pub fn loss_functional<F>(measure: F, n: usize) -> Result<f64>
where
    F: Fn(&OrdinalDistribution) -> f64 + Sync,
{
    LambdaMuParams::new(n, 0.0, 0.0)?;
    Ok(loss_integral(|lambda, mu| {
        let d = lambda_mu_dist(LambdaMuParams { n, lambda, mu }).expect("grid parameters are in range");
        measure(&d)
    }))
}

/// The superior function `S(λ, μ) = (1 − λ)(1 − ((s − 1)/(n − 1)) μ)`.
pub fn superior_function(n: usize, s: f64, lambda: f64, mu: f64) -> f64 {
    (1.0 - lambda) * (1.0 - (s - 1.0) / (n as f64 - 1.0) * mu)
}

/// Loss of the superior function; requires `n >= 3` and
/// `s ∈ [(n+5)/4, (n+1)/2]`.
pub fn superior_loss(n: usize, s: f64) -> Result<f64> {
    if n < 3 {
        return Err(OrdinalError::TooFewCategories { n, min: 3 });
    }
    let lo = (n as f64 + 5.0) / 4.0;
    let hi = (n as f64 + 1.0) / 2.0;
    if !(lo - 1e-12..=hi + 1e-12).contains(&s) {
        return Err(OrdinalError::ParamOutOfRange {
            name: "s",
            value: s,
            expected: "[(n+5)/4, (n+1)/2]",
        });
    }
    Ok(loss_integral(|lambda, mu| superior_function(n, s, lambda, mu)))
}

/// Outcome of the value-validity check for one measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub measure: String,
    pub n: usize,
    pub s: f64,
    /// HI of the two-point extreme.
    pub hi_two_point: f64,
    /// `|P(ρ) − P(U)|`: polarization gap between the two-point extreme and uniform.
    pub delta_m_abs: f64,
    /// Loss of the HI built on this measure (percent).
    pub loss_hi: f64,
    /// Loss of the superior function (percent).
    pub loss_superior: f64,
    /// `loss_hi ≥ 0`.
    pub c1_pass: bool,
    /// `c1_pass ∧ loss_hi ≤ loss_superior`.
    pub value_validity_pass: bool,
}

/// Scores the HI built on `measure` (with `α = 1`) against the superior
/// function at diversity `s`.
pub fn value_validity(measure: &dyn PolarizationMeasure, n: usize, s: f64) -> Result<ValidityReport> {
    value_validity_alpha(measure, 1.0, n, s)
}

/// [`value_validity`] with an explicit α.
pub fn value_validity_alpha(measure: &dyn PolarizationMeasure, alpha: f64, n: usize, s: f64) -> Result<ValidityReport> {
    let loss_superior = superior_loss(n, s)?;
    let loss_hi = loss_functional(
        |d| homogeneity_index_with(d, alpha, measure).expect("n > 3 checked"),
        n,
    )?;
    let rho = OrdinalDistribution::two_point_extreme(n)?;
    let hi_two_point = homogeneity_index_with(&rho, alpha, measure)?;
    let delta_m_abs = (measure.evaluate(&rho) - measure.evaluate_uniform(n)).abs();
    let c1_pass = loss_hi >= 0.0;
    Ok(ValidityReport {
        measure: measure.name().to_string(),
        n,
        s,
        hi_two_point,
        delta_m_abs,
        loss_hi,
        loss_superior,
        c1_pass,
        value_validity_pass: c1_pass && loss_hi <= loss_superior,
    })
}
