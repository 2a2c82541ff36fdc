//! Lorenz curve, Lorenz zonoid, Concentration Index, the true-diversity
//! mapping, and the extremal CI bounds under a concentration specification.

use serde::{Deserialize, Serialize};

use crate::error::{OrdinalError, Result};
use crate::ordinal::OrdinalDistribution;

/// Tolerance used when locating a concentration value in a half-open bracket.
const BRACKET_TOLERANCE: f64 = 1e-12;

/// Lorenz curve `y_0..y_n` of the ascending-sorted probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzCurve {
    /// Cumulative fractions; `y[0] = 0`, `y[n] = 1`.
    pub y: Vec<f64>,
}

impl LorenzCurve {
    /// Category count.
    pub fn n(&self) -> usize {
        self.y.len() - 1
    }

    /// Interior ordinates `y_1..y_{n-1}`.
    pub fn interior(&self) -> &[f64] {
        &self.y[1..self.y.len() - 1]
    }
}

/// Sorts the probabilities ascending (stable) and cumulates them.
pub fn lorenz_curve(d: &OrdinalDistribution) -> LorenzCurve {
    let mut sorted = d.probs().to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut y = Vec::with_capacity(sorted.len() + 1);
    y.push(0.0);
    let mut acc = 0.0;
    for p in sorted {
        acc += p;
        y.push(acc);
    }
    let last = y.len() - 1;
    y[last] = 1.0;
    LorenzCurve { y }
}

/// Lorenz zonoid `LZ = 1 − (1/n)(1 + 2 Σ_{i=1}^{n−1} y_i)`, in `[0, (n−1)/n]`.
pub fn lorenz_zonoid(c: &LorenzCurve) -> f64 {
    let n = c.n() as f64;
    let s: f64 = c.interior().iter().sum();
    (1.0 - (1.0 + 2.0 * s) / n).max(0.0)
}

/// Concentration Index `CI = LZ · n/(n−1)`: zero for the uniform
/// distribution, one for a singleton.
pub fn concentration_index(d: &OrdinalDistribution) -> f64 {
    let n = d.n() as f64;
    (lorenz_zonoid(&lorenz_curve(d)) * n / (n - 1.0)).clamp(0.0, 1.0)
}

/// True diversity `s = n − (n−1)·CI`, the effective number of equally
/// abundant categories.
pub fn diversity_from_ci(n: usize, ci: f64) -> Result<f64> {
    if n < 2 {
        return Err(OrdinalError::TooFewCategories { n, min: 2 });
    }
    if !(0.0..=1.0).contains(&ci) {
        return Err(OrdinalError::ParamOutOfRange {
            name: "ci",
            value: ci,
            expected: "[0, 1]",
        });
    }
    Ok(n as f64 - (n as f64 - 1.0) * ci)
}

/// Inverse of [`diversity_from_ci`]: `CI = (n − s)/(n − 1)`.
pub fn ci_from_diversity(n: usize, s: f64) -> Result<f64> {
    if n < 2 {
        return Err(OrdinalError::TooFewCategories { n, min: 2 });
    }
    if !(1.0..=n as f64).contains(&s) {
        return Err(OrdinalError::ParamOutOfRange {
            name: "s",
            value: s,
            expected: "[1, n]",
        });
    }
    Ok((n as f64 - s) / (n as f64 - 1.0))
}

/// Requirement that the `k` most populated of `n` categories hold a
/// cumulative fraction `c` of the population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationSpec {
    pub n: usize,
    pub k: usize,
    pub c: f64,
}

/// An extremal CI value together with a distribution attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CisBound {
    pub value: f64,
    pub witness: OrdinalDistribution,
    /// The bracket index used by the upper bound (`None` for the lower bound).
    pub j: Option<usize>,
}

fn check_spec(spec: &ConcentrationSpec) -> Result<()> {
    if spec.n < 2 {
        return Err(OrdinalError::TooFewCategories { n: spec.n, min: 2 });
    }
    if spec.k == 0 || spec.k >= spec.n {
        return Err(OrdinalError::ParamOutOfRange {
            name: "k",
            value: spec.k as f64,
            expected: "1..=n-1",
        });
    }
    let floor = spec.k as f64 / spec.n as f64;
    if !spec.c.is_finite() || spec.c > 1.0 || spec.c < floor - BRACKET_TOLERANCE {
        return Err(OrdinalError::SpecInfeasible {
            n: spec.n,
            k: spec.k,
            c: spec.c,
        });
    }
    Ok(())
}

/// Smallest CI compatible with the spec: `(n/(n−1))·(C − k/n)`.
///
/// The witness spreads `1 − C` evenly over the first `n − k` categories and
/// `C` evenly over the last `k`.
pub fn cis_lower_bound(spec: ConcentrationSpec) -> Result<CisBound> {
    check_spec(&spec)?;
    let ConcentrationSpec { n, k, c } = spec;
    let c = c.max(k as f64 / n as f64);
    let nf = n as f64;
    let value = (nf / (nf - 1.0) * (c - k as f64 / nf)).clamp(0.0, 1.0);
    let mut p = vec![(1.0 - c) / (n - k) as f64; n];
    for x in p.iter_mut().skip(n - k) {
        *x = c / k as f64;
    }
    Ok(CisBound {
        value,
        witness: OrdinalDistribution::trusted(p),
        j: None,
    })
}

/// Largest CI compatible with the spec:
/// `1 − (1 − C)(k + j − 1)(k + j) / (j (n − 1))`, where `j ∈ {1..n−k}` is the
/// unique index with `k/(k+j) ≤ C < k/(k+j−1)`.
///
/// The witness has zeros on the first `n − k − j` categories, `(1 − C)/j` on
/// the next `k + j − 1`, and the remainder in the last category. `C = 1` is
/// accepted as the closed end of the `j = 1` bracket (the singleton).
pub fn cis_upper_bound(spec: ConcentrationSpec) -> Result<CisBound> {
    check_spec(&spec)?;
    let ConcentrationSpec { n, k, c } = spec;
    let kf = k as f64;
    let j = (1..=n - k)
        .find(|&j| {
            let lo = kf / (kf + j as f64);
            let hi = kf / (kf + j as f64 - 1.0);
            c >= lo - BRACKET_TOLERANCE && (c < hi - BRACKET_TOLERANCE || (j == 1 && c <= 1.0))
        })
        .ok_or(OrdinalError::SpecInfeasible { n, k, c })?;
    let jf = j as f64;
    let value = (1.0 - (1.0 - c) * (kf + jf - 1.0) * (kf + jf) / (jf * (n as f64 - 1.0))).clamp(0.0, 1.0);
    let step = (1.0 - c) / jf;
    let mut p = vec![0.0; n];
    for x in p.iter_mut().take(n - 1).skip(n - k - j) {
        *x = step;
    }
    p[n - 1] = 1.0 - (kf + jf - 1.0) * step;
    Ok(CisBound {
        value,
        witness: OrdinalDistribution::trusted(p),
        j: Some(j),
    })
}

/// Sharp maximum of CI under the spec, found by enumerating the vertices of
/// the feasible region.
///
/// The bracket rule in [`cis_upper_bound`] picks the smallest
/// feasible `j`, which is not always the maximizer (for example `n = 4`,
/// `k = 1`, `C = 0.3` admits `(0.3, 0.3, 0.1, 0)` with a larger CI than the
/// bracket witness). This function scans every vertex instead: the
/// witnesses `(1 − C)/j` for all feasible `j`, and the capped fill in which
/// every non-top category holds at most `C/k`.
pub fn cis_upper_bound_exact(spec: ConcentrationSpec) -> Result<CisBound> {
    check_spec(&spec)?;
    let ConcentrationSpec { n, k, c } = spec;
    let kf = k as f64;
    let cap = c / kf;
    let mut candidates: Vec<(Vec<f64>, Option<usize>)> = Vec::new();
    for j in 1..=n - k {
        let step = (1.0 - c) / j as f64;
        if step > cap + BRACKET_TOLERANCE {
            continue;
        }
        let mut p = vec![0.0; n];
        for x in p.iter_mut().take(n - 1).skip(n - k - j) {
            *x = step;
        }
        p[n - 1] = 1.0 - (kf + j as f64 - 1.0) * step;
        candidates.push((p, Some(j)));
    }
    if cap > 0.0 {
        let mut rest = vec![0.0; n - k];
        let mut left = 1.0 - c;
        for x in rest.iter_mut().rev() {
            let take = left.min(cap);
            *x = take;
            left -= take;
        }
        if left <= BRACKET_TOLERANCE {
            let mut p = rest;
            p.extend(std::iter::repeat(cap).take(k));
            candidates.push((p, None));
        }
    }
    candidates
        .into_iter()
        .map(|(p, j)| {
            let witness = OrdinalDistribution::trusted(p);
            CisBound {
                value: concentration_index(&witness),
                witness,
                j,
            }
        })
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or(OrdinalError::SpecInfeasible { n, k, c })
}
