//! Ordinal distributions, the λ and (λ, μ) parametric families, and basic
//! summary statistics on the category index scale `1..=n`.

use serde::{Deserialize, Serialize};

use crate::error::{OrdinalError, Result};

/// Tolerance used when checking that a probability vector sums to one.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Inputs whose sum is within this distance of one are treated as
/// probabilities and silently renormalized; anything further away is
/// treated as raw weights and flagged.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// Slack applied at skewness class boundaries so that values that are equal
/// to a threshold up to rounding fall into the less-skewed class.
const SKEW_BOUNDARY_SLACK: f64 = 1e-12;

/// A probability vector over `n >= 2` ordered categories.
///
/// Instances are immutable; every constructor guarantees that entries lie in
/// `[0, 1]` and sum to one within [`SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinalDistribution {
    p: Vec<f64>,
    /// `true` when the input was raw weights (sum far from one) and had to be
    /// rescaled.
    #[serde(default)]
    normalized_from_weights: bool,
}

impl OrdinalDistribution {
    /// Builds a distribution from non-negative weights; see [`make_distribution`].
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        make_distribution(weights)
    }

    /// Number of categories.
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Probabilities in category order `1..=n`.
    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    /// Probability of the 1-based category `i`.
    pub fn prob(&self, i: usize) -> f64 {
        self.p[i - 1]
    }

    /// Whether the input had to be rescaled from raw weights.
    pub fn was_rescaled(&self) -> bool {
        self.normalized_from_weights
    }

    /// Cumulative distribution `F_1..F_n` (the last entry is one).
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out: Vec<f64> = self
            .p
            .iter()
            .map(|&x| {
                acc += x;
                acc
            })
            .collect();
        if let Some(last) = out.last_mut() {
            *last = 1.0;
        }
        out
    }

    /// The same distribution with the category order reversed.
    pub fn reversed(&self) -> Self {
        let mut p = self.p.clone();
        p.reverse();
        Self {
            p,
            normalized_from_weights: self.normalized_from_weights,
        }
    }

    /// Whether all mass sits in one category.
    pub fn is_singleton(&self) -> bool {
        self.p.iter().any(|&x| (x - 1.0).abs() <= SUM_TOLERANCE)
    }

    /// Uniform distribution over `n` categories.
    pub fn uniform(n: usize) -> Result<Self> {
        check_n(n, 2)?;
        Ok(Self::trusted(vec![1.0 / n as f64; n]))
    }

    /// All mass in the 1-based category `j`.
    pub fn singleton(n: usize, j: usize) -> Result<Self> {
        check_n(n, 2)?;
        if j == 0 || j > n {
            return Err(OrdinalError::ParamOutOfRange {
                name: "j",
                value: j as f64,
                expected: "1..=n",
            });
        }
        let mut p = vec![0.0; n];
        p[j - 1] = 1.0;
        Ok(Self::trusted(p))
    }

    /// Half the mass in the first category and half in the last (the
    /// two-point extreme, maximal polarization).
    pub fn two_point_extreme(n: usize) -> Result<Self> {
        check_n(n, 2)?;
        let mut p = vec![0.0; n];
        p[0] = 0.5;
        p[n - 1] = 0.5;
        Ok(Self::trusted(p))
    }

    /// Equal mass `1/s` on the first `s` consecutive categories.
    pub fn equal_abundance(n: usize, s: usize) -> Result<Self> {
        check_n(n, 2)?;
        if s == 0 || s > n {
            return Err(OrdinalError::ParamOutOfRange {
                name: "s",
                value: s as f64,
                expected: "1..=n",
            });
        }
        let mut p = vec![0.0; n];
        for x in p.iter_mut().take(s) {
            *x = 1.0 / s as f64;
        }
        Ok(Self::trusted(p))
    }

    /// Wraps a vector produced by an internal constructor that is known to be
    /// a valid distribution up to rounding.
    pub(crate) fn trusted(p: Vec<f64>) -> Self {
        debug_assert!(p.len() >= 2);
        debug_assert!((p.iter().sum::<f64>() - 1.0).abs() <= SUM_TOLERANCE);
        Self {
            p,
            normalized_from_weights: false,
        }
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(OrdinalError::TooFewCategories { n, min })
    } else {
        Ok(())
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        Err(OrdinalError::ParamOutOfRange {
            name,
            value,
            expected: "[0, 1]",
        })
    } else {
        Ok(())
    }
}

/// Normalizes non-negative weights into a distribution.
///
/// Inputs that already sum to one within [`RENORMALIZE_TOLERANCE`] are
/// rescaled silently (exact probability vectors pass through unchanged);
/// anything else is treated as raw weights and the result is flagged via
/// [`OrdinalDistribution::was_rescaled`].
pub fn make_distribution(weights: &[f64]) -> Result<OrdinalDistribution> {
    if weights.len() < 2 {
        return Err(OrdinalError::EmptyInput {
            min: 2,
            got: weights.len(),
        });
    }
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(OrdinalError::NonFinite { index: index + 1 });
        }
        if w < 0.0 {
            return Err(OrdinalError::NegativeWeight {
                index: index + 1,
                value: w,
            });
        }
    }
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return Err(OrdinalError::ZeroSum);
    }
    let flagged = (sum - 1.0).abs() > RENORMALIZE_TOLERANCE;
    let p = if sum == 1.0 {
        weights.to_vec()
    } else {
        weights.iter().map(|w| w / sum).collect()
    };
    Ok(OrdinalDistribution {
        p,
        normalized_from_weights: flagged,
    })
}

/// The λ-distribution: a mixture of the singleton at category 1 (weight
/// `1 − λ`) and the uniform distribution (weight `λ`).
///
/// `p_1 = 1 − λ + λ/n`, `p_i = λ/n` for `i > 1`.
pub fn lambda_dist(n: usize, lambda: f64) -> Result<OrdinalDistribution> {
    check_n(n, 2)?;
    check_unit("lambda", lambda)?;
    let base = lambda / n as f64;
    let mut p = vec![base; n];
    p[0] = 1.0 - lambda + base;
    Ok(OrdinalDistribution::trusted(p))
}

/// Parameters of the two-parameter (λ, μ) family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaMuParams {
    /// Category count.
    pub n: usize,
    /// Evenness parameter in `[0, 1]`.
    pub lambda: f64,
    /// Polarization parameter in `[0, 1]`.
    pub mu: f64,
}

impl LambdaMuParams {
    /// Validated constructor: `n > 3`, `λ, μ ∈ [0, 1]`.
    pub fn new(n: usize, lambda: f64, mu: f64) -> Result<Self> {
        check_n(n, 4)?;
        check_unit("lambda", lambda)?;
        check_unit("mu", mu)?;
        Ok(Self { n, lambda, mu })
    }
}

/// The (λ, μ) distribution: the non-uniform mass `1 − λ` is split between
/// the first category (`1 − μ/2`) and the last (`μ/2`).
///
/// `p_1 = (1 − μ/2)(1 − λ) + λ/n`, `p_n = (μ/2)(1 − λ) + λ/n`, other cells `λ/n`.
pub fn lambda_mu_dist(params: LambdaMuParams) -> Result<OrdinalDistribution> {
    let LambdaMuParams { n, lambda, mu } = LambdaMuParams::new(params.n, params.lambda, params.mu)?;
    let base = lambda / n as f64;
    let mut p = vec![base; n];
    p[0] = (1.0 - mu / 2.0) * (1.0 - lambda) + base;
    p[n - 1] = (mu / 2.0) * (1.0 - lambda) + base;
    Ok(OrdinalDistribution::trusted(p))
}

/// The symmetric (λ, μ) distribution: the non-uniform mass `1 − λ` is split
/// between the two extreme categories (share `μ`) and the two central
/// categories (share `1 − μ`).
///
/// For `n = 10`: `d_1 = d_10 = (μ/2)(1 − λ) + λ/10`,
/// `d_5 = d_6 = (1 − λ)(1 − μ)/2 + λ/10`, remaining cells `λ/10`.
/// Any even `n >= 4` is accepted, with central cells `n/2` and `n/2 + 1`.
pub fn symmetric_lambda_mu_dist(params: LambdaMuParams) -> Result<OrdinalDistribution> {
    let LambdaMuParams { n, lambda, mu } = LambdaMuParams::new(params.n, params.lambda, params.mu)?;
    if n % 2 != 0 {
        return Err(OrdinalError::ParamOutOfRange {
            name: "n",
            value: n as f64,
            expected: "an even category count",
        });
    }
    let base = lambda / n as f64;
    let mut p = vec![base; n];
    let tail = (mu / 2.0) * (1.0 - lambda);
    let centre = (1.0 - lambda) * (1.0 - mu) / 2.0;
    p[0] += tail;
    p[n - 1] += tail;
    p[n / 2 - 1] += centre;
    p[n / 2] += centre;
    Ok(OrdinalDistribution::trusted(p))
}

/// Mean and variance on the category index scale `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Mean and variance of `d` with categories scored `1..=n`.
pub fn moments(d: &OrdinalDistribution) -> Moments {
    let mean: f64 = d
        .probs()
        .iter()
        .enumerate()
        .map(|(i, p)| p * (i + 1) as f64)
        .sum();
    let variance: f64 = d
        .probs()
        .iter()
        .enumerate()
        .map(|(i, p)| p * ((i + 1) as f64 - mean).powi(2))
        .sum();
    Moments { mean, variance }
}

/// Broad skewness class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SkewKind {
    /// Highly skewed: `|γ1| > 1`.
    HS,
    /// Moderately skewed: `0.5 < |γ1| ≤ 1`.
    MS,
    /// Approximately symmetric: `|γ1| ≤ 0.5`.
    AS,
}

impl std::fmt::Display for SkewKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SkewKind::HS => "HS",
            SkewKind::MS => "MS",
            SkewKind::AS => "AS",
        };
        f.write_str(s)
    }
}

/// Refinement of the approximately symmetric class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetrySub {
    /// `|γ1| ≤ 0.2`.
    HighlySymmetric,
    /// `0.2 < |γ1| ≤ 0.3`.
    ModeratelySymmetric,
    /// `0.3 < |γ1| ≤ 0.4`.
    MarginalSymmetric,
    /// `0.4 < |γ1| ≤ 0.5`.
    ApproximatelySkewed,
}

/// Direction of the skew.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SkewSign {
    Positive,
    Negative,
    /// `γ1` is zero up to rounding.
    Zero,
}

/// Pearson moment skewness and its class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewClass {
    pub gamma1: f64,
    pub class: SkewKind,
    pub sub: Option<SymmetrySub>,
    pub sign: SkewSign,
}

/// Pearson's moment coefficient of skewness `γ1 = μ3 / σ³` on the index
/// scale, classified with boundaries assigned to the less-skewed class.
pub fn skewness_class(d: &OrdinalDistribution) -> Result<SkewClass> {
    let Moments { mean, variance } = moments(d);
    if variance <= 1e-15 {
        return Err(OrdinalError::DegenerateDistribution);
    }
    let mu3: f64 = d
        .probs()
        .iter()
        .enumerate()
        .map(|(i, p)| p * ((i + 1) as f64 - mean).powi(3))
        .sum();
    let gamma1 = mu3 / variance.powf(1.5);
    let a = gamma1.abs() - SKEW_BOUNDARY_SLACK;
    let class = if a > 1.0 {
        SkewKind::HS
    } else if a > 0.5 {
        SkewKind::MS
    } else {
        SkewKind::AS
    };
    let sub = (class == SkewKind::AS).then(|| {
        if a > 0.4 {
            SymmetrySub::ApproximatelySkewed
        } else if a > 0.3 {
            SymmetrySub::MarginalSymmetric
        } else if a > 0.2 {
            SymmetrySub::ModeratelySymmetric
        } else {
            SymmetrySub::HighlySymmetric
        }
    });
    let sign = if gamma1.abs() <= SKEW_BOUNDARY_SLACK {
        SkewSign::Zero
    } else if gamma1 > 0.0 {
        SkewSign::Positive
    } else {
        SkewSign::Negative
    };
    Ok(SkewClass {
        gamma1,
        class,
        sub,
        sign,
    })
}

/// Entropy index `E = 1 − H` with `H` the Shannon entropy in base `n`
/// (`0 · log 0 = 0`): one for singletons, zero for the uniform distribution.
pub fn entropy_index(d: &OrdinalDistribution) -> f64 {
    let ln_n = (d.n() as f64).ln();
    let h: f64 = d
        .probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln() / ln_n)
        .sum();
    (1.0 - h).clamp(0.0, 1.0)
}
