//! Bin Concentration Function, Location Index, compactness deviation, mean
//! absolute deviation, and the comparison of centre measures.

use serde::{Deserialize, Serialize};

use crate::error::{OrdinalError, Result};
use crate::ordinal::{moments, OrdinalDistribution};

/// Relative tolerance used to detect ties in the BCF maximum.
const TIE_TOLERANCE: f64 = 1e-12;

/// Location of a distribution: the tied plateau of BCF maxima and the
/// resulting compactness measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationResult {
    /// Smallest 1-based category attaining the BCF maximum (the scalar LI).
    pub lambda1: usize,
    /// Largest 1-based category attaining the BCF maximum.
    pub lambda2: usize,
    /// BCF vector `γ_1..γ_n`.
    pub gamma: Vec<f64>,
    /// Peak value `γ(λ1)`, in `[(n+1)/2, n]`.
    pub c: f64,
    /// Bin compactness `(2c − n − 1)/(n − 1)`.
    pub c_norm: f64,
    /// Compactness deviation `1 − c_norm`.
    pub csd: f64,
}

/// BCF vector from the closed-form weights: category `i` contributes
/// `n − |i − j|` times its probability to `γ_j`.
///
/// For `j = 1` the weights are `n, n−1, …, 1`; for `j = n` they are
/// `1, 2, …, n`; interior `j` rise to `n` at `i = j` and fall on both sides.
pub fn bcf_vector(d: &OrdinalDistribution) -> Vec<f64> {
    let n = d.n();
    (1..=n)
        .map(|j| {
            d.probs()
                .iter()
                .enumerate()
                .map(|(idx, p)| {
                    let i = idx + 1;
                    let w = if i <= j { i + n - j } else { n - i + j };
                    w as f64 * p
                })
                .sum()
        })
        .collect()
}

/// Location Index: smallest and largest arg-max of the BCF, plus the peak
/// value and compactness measures.
pub fn location_index(d: &OrdinalDistribution) -> LocationResult {
    let n = d.n();
    let gamma = bcf_vector(d);
    let max = gamma.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tol = TIE_TOLERANCE * n as f64;
    let lambda1 = gamma.iter().position(|&g| g >= max - tol).expect("non-empty") + 1;
    let lambda2 = gamma.iter().rposition(|&g| g >= max - tol).expect("non-empty") + 1;
    let nf = n as f64;
    let c = max;
    let c_norm = ((2.0 * c - nf - 1.0) / (nf - 1.0)).clamp(0.0, 1.0);
    LocationResult {
        lambda1,
        lambda2,
        gamma,
        c,
        c_norm,
        csd: 1.0 - c_norm,
    }
}

/// Mean absolute deviation about a category.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mad {
    /// `Σ p_i |i − centre|`.
    pub raw: f64,
    /// `raw / ((n − 1)/2)`.
    pub normalized: f64,
}

/// Mean absolute deviation of `d` about the 1-based category `center`.
pub fn mad(d: &OrdinalDistribution, center: usize) -> Result<Mad> {
    let n = d.n();
    if center == 0 || center > n {
        return Err(OrdinalError::ParamOutOfRange {
            name: "center",
            value: center as f64,
            expected: "1..=n",
        });
    }
    let raw: f64 = d
        .probs()
        .iter()
        .enumerate()
        .map(|(i, p)| p * ((i + 1) as f64 - center as f64).abs())
        .sum();
    Ok(Mad {
        raw,
        normalized: raw / ((n as f64 - 1.0) / 2.0),
    })
}

/// Round-half-up of a positive value to the nearest integer category.
pub fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor().max(1.0) as usize
}

/// Deviations of the usual centre measures from the Location Index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterReport {
    pub mean: f64,
    pub rounded_mean: usize,
    /// Smallest index attaining the maximum probability.
    pub mode: usize,
    /// Whether more than one category attains the maximum probability.
    pub multimodal: bool,
    pub li: usize,
    pub pwavgs_decile: Option<usize>,
    pub err_mean: usize,
    pub err_mode: usize,
    pub err_pwavgs: Option<usize>,
}

/// Compares rounded mean, mode and (optionally) an external score decile
/// against the Location Index.
pub fn center_comparison(d: &OrdinalDistribution, external_score_decile: Option<usize>) -> CenterReport {
    let mean = moments(d).mean;
    let rounded_mean = round_half_up(mean).min(d.n());
    let max = d.probs().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let modes: Vec<usize> = d
        .probs()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p >= max - TIE_TOLERANCE)
        .map(|(i, _)| i + 1)
        .collect();
    let mode = modes[0];
    let li = location_index(d).lambda1;
    CenterReport {
        mean,
        rounded_mean,
        mode,
        multimodal: modes.len() > 1,
        li,
        pwavgs_decile: external_score_decile,
        err_mean: rounded_mean.abs_diff(li),
        err_mode: mode.abs_diff(li),
        err_pwavgs: external_score_decile.map(|x| x.abs_diff(li)),
    }
}
