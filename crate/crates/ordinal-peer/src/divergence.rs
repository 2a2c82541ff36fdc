//! Bilateral CDF, its autocorrelation, compactness, the Jensen–Shannon
//! divergence, the Divergence Index, and the alternative polarization
//! measures used when comparing homogeneity indices.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{OrdinalError, Result};
use crate::ordinal::{moments, OrdinalDistribution};

/// Tolerance on the analytic totals `Σ BCDF = n` and `Σ BCDFA = n²`.
const TOTAL_TOLERANCE: f64 = 1e-9;

/// Bilateral CDF: `F_1..F_n` followed by `1 − F_1..1 − F_{n−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bcdf {
    pub n: usize,
    /// `2n − 1` non-negative values summing to `n`.
    pub f: Vec<f64>,
}

/// Autocorrelation of a bilateral CDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Autocorrelation {
    pub n: usize,
    /// `4n − 3` non-negative values, symmetric about the 1-based index `2n − 1`.
    pub r: Vec<f64>,
    /// When `true` the values sum to one, otherwise to `n²`.
    pub normalized: bool,
}

impl Autocorrelation {
    /// Value at the 1-based centre index `2n − 1` (the maximum).
    pub fn centre(&self) -> f64 {
        self.r[2 * self.n - 2]
    }

    /// Divides by the analytic total `n²`.
    pub fn normalize(&self) -> Autocorrelation {
        if self.normalized {
            return self.clone();
        }
        let total = (self.n * self.n) as f64;
        debug_assert!((self.r.iter().sum::<f64>() - total).abs() <= TOTAL_TOLERANCE * total);
        Autocorrelation {
            n: self.n,
            r: self.r.iter().map(|x| x / total).collect(),
            normalized: true,
        }
    }

    /// Mean and variance of the normalized autocorrelation treated as a mass
    /// function on the index scale `1..=4n−3`.
    pub fn index_moments(&self) -> (f64, f64) {
        let total: f64 = if self.normalized { 1.0 } else { (self.n * self.n) as f64 };
        let mean: f64 = self
            .r
            .iter()
            .enumerate()
            .map(|(i, x)| x * (i + 1) as f64)
            .sum::<f64>()
            / total;
        let var: f64 = self
            .r
            .iter()
            .enumerate()
            .map(|(i, x)| x * ((i + 1) as f64 - mean).powi(2))
            .sum::<f64>()
            / total;
        (mean, var)
    }
}

/// Full discrete convolution of two sequences.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Bilateral CDF, computed as the convolution of `p` with `n` ones and
/// truncated to `2n − 1` terms.
pub fn bcdf(d: &OrdinalDistribution) -> Bcdf {
    let n = d.n();
    let mut f = convolve(d.probs(), &vec![1.0; n]);
    f.truncate(2 * n - 1);
    // Pin the exact values at the two ends of the plateau.
    f[n - 1] = 1.0;
    for x in f.iter_mut() {
        *x = x.clamp(0.0, 1.0);
    }
    Bcdf { n, f }
}

/// Autocorrelation `F ∗ reverse(F)` of the bilateral CDF (unnormalized, total `n²`).
pub fn bcdfa(d: &OrdinalDistribution) -> Autocorrelation {
    let b = bcdf(d);
    let mut rev = b.f.clone();
    rev.reverse();
    let r = convolve(&b.f, &rev);
    Autocorrelation {
        n: b.n,
        r,
        normalized: false,
    }
}

/// Autocorrelation of any singleton: a triangle `1, 2, …, n, …, 2, 1` on the
/// 1-based positions `n..=3n−2`, zero elsewhere.
pub fn singleton_bcdfa(n: usize) -> Autocorrelation {
    let mut r = vec![0.0; 4 * n - 3];
    for i in n..=3 * n - 2 {
        let v = if i <= 2 * n - 1 { i - n + 1 } else { 3 * n - 1 - i };
        r[i - 1] = v as f64;
    }
    Autocorrelation {
        n,
        r,
        normalized: false,
    }
}

/// Compactness `S = Σ_{i=n}^{3n−2} r_i / n²`: the share of autocorrelation
/// mass inside the singleton's support window.
pub fn compactness(d: &OrdinalDistribution) -> f64 {
    let a = bcdfa(d);
    let n = a.n;
    let window: f64 = a.r[n - 1..3 * n - 2].iter().sum();
    window / (n * n) as f64
}

fn kl_to_mixture(p: &[f64], m: &[f64]) -> f64 {
    p.iter()
        .zip(m)
        .filter(|(&x, _)| x > 0.0)
        .map(|(&x, &y)| x * (x / y).log2())
        .sum()
}

/// Jensen–Shannon divergence (base 2) between two normalized
/// autocorrelations of equal length.
pub fn jsd(p: &Autocorrelation, q: &Autocorrelation) -> Result<f64> {
    jsd_slices(&p.r, &q.r)
}

/// Jensen–Shannon divergence (base 2) between two probability vectors.
pub fn jsd_slices(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(OrdinalError::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    for v in [p, q] {
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(OrdinalError::NotNormalized { sum });
        }
    }
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    let js = 0.5 * kl_to_mixture(p, &m) + 0.5 * kl_to_mixture(q, &m);
    Ok(js.clamp(0.0, 1.0))
}

/// Divergence Index `DI = 2·JSD(P‖Q)` with `P` the normalized BCDFA of `d`
/// and `Q` the normalized singleton BCDFA. Zero exactly for singletons.
pub fn divergence_index(d: &OrdinalDistribution) -> f64 {
    let p = bcdfa(d).normalize();
    let q = singleton_bcdfa(d.n()).normalize();
    2.0 * jsd(&p, &q).expect("BCDFA vectors share length and are normalized")
}

/// Evaluates [`divergence_index`] over many distributions in parallel. The
/// result is identical to evaluating sequentially.
pub fn divergence_index_batch(ds: &[OrdinalDistribution]) -> Vec<f64> {
    ds.par_iter().map(divergence_index).collect()
}

/// `DI` of the uniform distribution over `n` categories, computed once per `n`.
pub fn divergence_index_uniform(n: usize) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache lock").get(&n) {
        return *v;
    }
    let v = divergence_index(&OrdinalDistribution::uniform(n).expect("n >= 2"));
    cache.lock().expect("cache lock").insert(n, v);
    v
}

/// Variance on the index scale divided by its maximum `((n − 1)/2)²`.
pub fn pi_variance(d: &OrdinalDistribution) -> f64 {
    let half = (d.n() as f64 - 1.0) / 2.0;
    (moments(d).variance / (half * half)).clamp(0.0, 1.0)
}

/// Linear order of variation `LOV = (2/(n−1)) Σ_{i=1}^{n−1} min(F_i, 1 − F_i)`.
pub fn pi_lov(d: &OrdinalDistribution) -> f64 {
    let n = d.n();
    let cdf = d.cdf();
    let s: f64 = cdf[..n - 1].iter().map(|&f| f.min(1.0 - f)).sum();
    (2.0 / (n as f64 - 1.0) * s).clamp(0.0, 1.0)
}

/// A polarization measure: zero for singletons, invariant under reversal of
/// the category order, valued in `[0, 1]`.
pub trait PolarizationMeasure: Send + Sync {
    /// Short identifier (`gjsd`, `gvar`, `glov`, `none`).
    fn name(&self) -> &str;
    /// Polarization of `d`.
    fn evaluate(&self, d: &OrdinalDistribution) -> f64;
    /// Polarization of the uniform distribution over `n` categories.
    fn evaluate_uniform(&self, n: usize) -> f64 {
        self.evaluate(&OrdinalDistribution::uniform(n).expect("n >= 2"))
    }
}

/// The built-in polarization measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Polarization {
    /// Divergence Index (twice the JSD of BCDF autocorrelations).
    #[default]
    Jsd,
    /// Normalized variance.
    Variance,
    /// Linear order of variation.
    Lov,
    /// Identically zero; turns the homogeneity index into CI.
    None,
}

impl Polarization {
    /// Parses `gjsd|jsd|di`, `gvar|var`, `glov|lov`, `none|ci`.
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gjsd" | "jsd" | "di" | "g-jsd" => Some(Self::Jsd),
            "gvar" | "var" | "g-var" => Some(Self::Variance),
            "glov" | "lov" | "g-lov" => Some(Self::Lov),
            "none" | "ci" => Some(Self::None),
            _ => None,
        }
    }
}

impl PolarizationMeasure for Polarization {
    fn name(&self) -> &str {
        match self {
            Polarization::Jsd => "gjsd",
            Polarization::Variance => "gvar",
            Polarization::Lov => "glov",
            Polarization::None => "none",
        }
    }

    fn evaluate(&self, d: &OrdinalDistribution) -> f64 {
        match self {
            Polarization::Jsd => divergence_index(d),
            Polarization::Variance => pi_variance(d),
            Polarization::Lov => pi_lov(d),
            Polarization::None => 0.0,
        }
    }

    fn evaluate_uniform(&self, n: usize) -> f64 {
        match self {
            Polarization::Jsd => divergence_index_uniform(n),
            other => other.evaluate(&OrdinalDistribution::uniform(n).expect("n >= 2")),
        }
    }
}
