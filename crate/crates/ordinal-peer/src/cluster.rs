//! Three-term region dissimilarity, distance matrices, PAM k-medoids,
//! silhouette widths and the choice of the number of clusters.
//!
//! The dissimilarity between two regions combines
//!
//! * a **size** term: Sørensen dissimilarity of the per-category population
//!   counts,
//! * a **shape** term: L1 (total-variation) distance of the distributions,
//! * a **location** term: L1 distance of the CDFs over the `n − 1` interior
//!   cuts, divided by `n − 1`, which is sensitive to category order.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::RegionProfile;
use crate::error::{OrdinalError, Result};
use crate::ordinal::OrdinalDistribution;

/// Tolerance for validating weights and for improvement tests in SWAP.
const EPS: f64 = 1e-12;

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(OrdinalError::LengthMismatch { left: a, right: b })
    } else {
        Ok(())
    }
}

/// Sørensen dissimilarity `1 − 2Σmin(a_i, b_i)/(Σa_i + Σb_i)` of two count histograms.
pub fn sorensen(a: &[f64], b: &[f64]) -> Result<f64> {
    check_len(a.len(), b.len())?;
    for (index, &value) in a.iter().chain(b.iter()).enumerate() {
        if !value.is_finite() {
            return Err(OrdinalError::NonFinite { index: index % a.len() });
        }
        if value < 0.0 {
            return Err(OrdinalError::NegativeWeight {
                index: index % a.len(),
                value,
            });
        }
    }
    let total: f64 = a.iter().sum::<f64>() + b.iter().sum::<f64>();
    if total <= 0.0 {
        return Err(OrdinalError::BothEmpty);
    }
    let shared: f64 = a.iter().zip(b).map(|(x, y)| x.min(*y)).sum();
    Ok((1.0 - 2.0 * shared / total).clamp(0.0, 1.0))
}

/// Half the L1 distance between two distributions.
pub fn l1_shape(a: &OrdinalDistribution, b: &OrdinalDistribution) -> Result<f64> {
    check_len(a.n(), b.n())?;
    let s: f64 = a.probs().iter().zip(b.probs()).map(|(x, y)| (x - y).abs()).sum();
    Ok((s / 2.0).clamp(0.0, 1.0))
}

/// `(1/(n−1)) Σ_{i<n} |F_a(i) − F_b(i)|`.
pub fn location_distance(a: &OrdinalDistribution, b: &OrdinalDistribution) -> Result<f64> {
    check_len(a.n(), b.n())?;
    let n = a.n();
    if n < 2 {
        return Ok(0.0);
    }
    let (fa, fb) = (a.cdf(), b.cdf());
    let s: f64 = fa[..n - 1].iter().zip(&fb[..n - 1]).map(|(x, y)| (x - y).abs()).sum();
    Ok((s / (n - 1) as f64).clamp(0.0, 1.0))
}

/// Weights of the size, shape and location terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceParams {
    pub w_size: f64,
    pub w_shape: f64,
    pub w_location: f64,
}

impl Default for DistanceParams {
    fn default() -> Self {
        Self {
            w_size: 1.0 / 3.0,
            w_shape: 1.0 / 3.0,
            w_location: 1.0 / 3.0,
        }
    }
}

impl DistanceParams {
    /// Validated constructor: weights non-negative and summing to one.
    pub fn new(w_size: f64, w_shape: f64, w_location: f64) -> Result<Self> {
        let w = [w_size, w_shape, w_location];
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(OrdinalError::BadWeights(format!("weights must be non-negative, got {w:?}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(OrdinalError::BadWeights(format!("weights must sum to 1, got {sum}")));
        }
        Ok(Self {
            w_size,
            w_shape,
            w_location,
        })
    }

    /// Parses `w1,w2,w3`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(OrdinalError::BadWeights(format!("expected three comma-separated weights, got {s:?}")));
        }
        let mut w = [0.0; 3];
        for (slot, p) in w.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| OrdinalError::BadWeights(format!("not a number: {p:?}")))?;
        }
        Self::new(w[0], w[1], w[2])
    }
}

/// The three dissimilarity terms and their weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceTerms {
    pub size: f64,
    pub shape: f64,
    pub location: f64,
    pub total: f64,
}

/// Per-category population counts of a profile.
pub fn count_histogram(p: &RegionProfile) -> Vec<f64> {
    p.distribution.probs().iter().map(|x| x * p.population).collect()
}

/// All three terms of the dissimilarity between two regions.
pub fn distance_terms(a: &RegionProfile, b: &RegionProfile, params: &DistanceParams) -> Result<DistanceTerms> {
    check_len(a.distribution.n(), b.distribution.n())?;
    let size = sorensen(&count_histogram(a), &count_histogram(b))?;
    let shape = l1_shape(&a.distribution, &b.distribution)?;
    let location = location_distance(&a.distribution, &b.distribution)?;
    let total = (params.w_size * size + params.w_shape * shape + params.w_location * location).clamp(0.0, 1.0);
    Ok(DistanceTerms {
        size,
        shape,
        location,
        total,
    })
}

/// Weighted dissimilarity in `[0, 1]`.
pub fn dissimilarity(a: &RegionProfile, b: &RegionProfile, params: &DistanceParams) -> Result<f64> {
    Ok(distance_terms(a, b, params)?.total)
}

/// Symmetric matrix of pairwise dissimilarities with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub ids: Vec<String>,
    /// Row-major `len × len` entries.
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds the matrix from profiles; the upper triangle is filled in parallel.
    pub fn from_profiles(profiles: &[RegionProfile], params: &DistanceParams) -> Result<Self> {
        let m = profiles.len();
        let rows: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|i| {
                (i + 1..m)
                    .map(|j| dissimilarity(&profiles[i], &profiles[j], params))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let mut d = vec![0.0; m * m];
        for (i, row) in rows.iter().enumerate() {
            for (off, &v) in row.iter().enumerate() {
                let j = i + 1 + off;
                d[i * m + j] = v;
                d[j * m + i] = v;
            }
        }
        Ok(Self {
            ids: profiles.iter().map(|p| p.id.clone()).collect(),
            d,
        })
    }

    /// Builds a matrix from explicit rows, validating shape, symmetry, zero
    /// diagonal and range.
    pub fn from_rows(ids: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = ids.len();
        check_len(rows.len(), m)?;
        let mut d = Vec::with_capacity(m * m);
        for row in &rows {
            check_len(row.len(), m)?;
            d.extend_from_slice(row);
        }
        for i in 0..m {
            if d[i * m + i] != 0.0 {
                return Err(OrdinalError::BadWeights(format!("diagonal entry {i} is not zero")));
            }
            for j in 0..m {
                let v = d[i * m + j];
                if !(0.0..=1.0).contains(&v) || (v - d[j * m + i]).abs() > EPS {
                    return Err(OrdinalError::BadWeights(format!("entry ({i},{j}) = {v} is invalid")));
                }
            }
        }
        Ok(Self { ids, d })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.len();
        &self.d[i * m..(i + 1) * m]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Other regions ordered by distance from `id` (ties by id), ascending or
    /// descending, optionally truncated.
    pub fn neighbours(&self, id: &str, ascending: bool, limit: Option<usize>) -> Result<Vec<(String, f64)>> {
        let i = self.index_of(id).ok_or_else(|| OrdinalError::UnknownRegion(id.to_string()))?;
        let mut v: Vec<(String, f64)> = (0..self.len())
            .filter(|&j| j != i)
            .map(|j| (self.ids[j].clone(), self.get(i, j)))
            .collect();
        v.sort_by(|a, b| {
            let ord = a.1.total_cmp(&b.1);
            let ord = if ascending { ord } else { ord.reverse() };
            ord.then_with(|| a.0.cmp(&b.0))
        });
        if let Some(l) = limit {
            v.truncate(l);
        }
        Ok(v)
    }
}

/// Result of PAM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub k: usize,
    /// Medoid row indices, in cluster order.
    pub medoids: Vec<usize>,
    pub medoid_ids: Vec<String>,
    /// Cluster index (into `medoids`) of each region.
    pub assignment: Vec<usize>,
    /// Sum of distances from each region to its medoid.
    pub cost: f64,
    /// Average silhouette width (`None` when `k = 1`).
    pub silhouette: Option<f64>,
    /// Seed recorded for reproducibility bookkeeping.
    pub seed: u64,
    /// Number of improving swaps applied.
    pub swaps: usize,
}

fn cost_of(m: &DistanceMatrix, medoids: &[usize]) -> f64 {
    (0..m.len())
        .map(|i| medoids.iter().map(|&j| m.get(i, j)).fold(f64::INFINITY, f64::min))
        .sum()
}

fn assign(m: &DistanceMatrix, medoids: &[usize]) -> Vec<usize> {
    (0..m.len())
        .map(|i| {
            if let Some(own) = medoids.iter().position(|&med| med == i) {
                return own;
            }
            let mut best = 0;
            for (c, &med) in medoids.iter().enumerate() {
                let (dc, db) = (m.get(i, med), m.get(i, medoids[best]));
                if dc < db || (dc == db && med < medoids[best]) {
                    best = c;
                }
            }
            best
        })
        .collect()
}

/// Largest region count for which [`pam`] restarts BUILD from every possible
/// first medoid.
pub const RESTART_LIMIT: usize = 64;

/// Greedy BUILD; `first` forces the initial medoid instead of the
/// cost-minimizing one.
fn build(m: &DistanceMatrix, k: usize, first: Option<usize>) -> Vec<usize> {
    let r = m.len();
    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    let mut nearest = vec![f64::INFINITY; r];
    for step in 0..k {
        let chosen = match (step, first) {
            (0, Some(f)) => f,
            _ => {
                let mut best: Option<(usize, f64)> = None;
                for cand in (0..r).filter(|c| !medoids.contains(c)) {
                    let cost: f64 = (0..r).map(|i| nearest[i].min(m.get(i, cand))).sum();
                    if best.is_none_or(|(_, b)| cost < b - EPS) {
                        best = Some((cand, cost));
                    }
                }
                best.expect("k <= r leaves a candidate").0
            }
        };
        medoids.push(chosen);
        for (i, slot) in nearest.iter_mut().enumerate() {
            *slot = slot.min(m.get(i, chosen));
        }
    }
    medoids
}

/// SWAP phase: applies the single best improving exchange until none is left.
fn swap(m: &DistanceMatrix, medoids: &mut [usize]) -> (f64, usize) {
    let r = m.len();
    let k = medoids.len();
    let mut cost = cost_of(m, medoids);
    let mut swaps = 0;
    loop {
        let candidates: Vec<(usize, usize)> = (0..k)
            .flat_map(|slot| (0..r).map(move |o| (slot, o)))
            .filter(|(_, o)| !medoids.contains(o))
            .collect();
        let current = medoids.to_vec();
        let evaluated: Vec<(usize, usize, f64)> = candidates
            .par_iter()
            .map(|&(slot, o)| {
                let mut trial = current.clone();
                trial[slot] = o;
                (slot, o, cost_of(m, &trial))
            })
            .collect();
        let best = evaluated
            .iter()
            .fold(None::<(usize, usize, f64)>, |acc, &(s, o, c)| match acc {
                Some((_, _, bc)) if c >= bc - EPS => acc,
                _ => Some((s, o, c)),
            });
        match best {
            Some((slot, o, c)) if c < cost - EPS => {
                medoids[slot] = o;
                cost = c;
                swaps += 1;
            }
            _ => return (cost, swaps),
        }
    }
}

/// PAM k-medoids: greedy BUILD followed by SWAP until no swap lowers the cost.
///
/// Each SWAP iteration evaluates every (medoid, non-medoid) exchange in
/// parallel and applies the single best one; ties go to the lowest
/// (medoid index, candidate index). For up to [`RESTART_LIMIT`] regions the
/// search is repeated with BUILD started from every region in turn and the
/// cheapest result is kept (the standard start wins ties). The algorithm is
/// fully deterministic; the seed is recorded in the result but does not
/// influence it.
pub fn pam(m: &DistanceMatrix, k: usize, seed: u64) -> Result<Clustering> {
    let r = m.len();
    if k == 0 || k > r {
        return Err(OrdinalError::KTooLarge { k, items: r });
    }
    let mut starts: Vec<Option<usize>> = vec![None];
    if r <= RESTART_LIMIT && k < r {
        starts.extend((0..r).map(Some));
    }
    let mut best: Option<(Vec<usize>, f64, usize)> = None;
    for first in starts {
        let mut medoids = build(m, k, first);
        let (cost, swaps) = swap(m, &mut medoids);
        if best.as_ref().is_none_or(|(_, b, _)| cost < b - EPS) {
            best = Some((medoids, cost, swaps));
        }
    }
    let (medoids, cost, swaps) = best.expect("at least one start");
    let assignment = assign(m, &medoids);
    let mut clustering = Clustering {
        k,
        medoid_ids: medoids.iter().map(|&i| m.ids[i].clone()).collect(),
        medoids,
        assignment,
        cost,
        silhouette: None,
        seed,
        swaps,
    };
    if k >= 2 {
        clustering.silhouette = Some(silhouette(m, &clustering)?);
    }
    Ok(clustering)
}

/// Per-region silhouette widths `(b − a)/max(a, b)`; members of singleton
/// clusters and points with `a = b = 0` score zero.
pub fn silhouette_widths(m: &DistanceMatrix, c: &Clustering) -> Result<Vec<f64>> {
    if c.k < 2 {
        return Err(OrdinalError::SingleCluster);
    }
    check_len(c.assignment.len(), m.len())?;
    let mut sizes = vec![0usize; c.k];
    for &a in &c.assignment {
        sizes[a] += 1;
    }
    if sizes.iter().any(|&s| s == 0) {
        return Err(OrdinalError::BadPartition("empty cluster".into()));
    }
    Ok((0..m.len())
        .map(|i| {
            let own = c.assignment[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; c.k];
            for j in 0..m.len() {
                if j != i {
                    sums[c.assignment[j]] += m.get(i, j);
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..c.k)
                .filter(|&x| x != own)
                .map(|x| sums[x] / sizes[x] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom <= 0.0 {
                0.0
            } else {
                (b - a) / denom
            }
        })
        .collect())
}

/// Average silhouette width in `[−1, 1]`.
pub fn silhouette(m: &DistanceMatrix, c: &Clustering) -> Result<f64> {
    let w = silhouette_widths(m, c)?;
    Ok(w.iter().sum::<f64>() / w.len() as f64)
}

/// Outcome of a k sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSelection {
    pub best_k: usize,
    /// `(k, average silhouette)` in candidate order.
    pub silhouettes: Vec<(usize, f64)>,
    pub clusterings: Vec<Clustering>,
}

/// Runs PAM for every candidate and picks the largest average silhouette
/// (ties go to the smaller k).
pub fn choose_k(m: &DistanceMatrix, candidates: &[usize], seed: u64) -> Result<KSelection> {
    if candidates.is_empty() {
        return Err(OrdinalError::BadPartition("no candidate k".into()));
    }
    let mut clusterings = Vec::with_capacity(candidates.len());
    let mut silhouettes = Vec::with_capacity(candidates.len());
    for &k in candidates {
        if k < 2 {
            return Err(OrdinalError::SingleCluster);
        }
        let c = pam(m, k, seed)?;
        silhouettes.push((k, c.silhouette.expect("k >= 2")));
        clusterings.push(c);
    }
    let mut best = silhouettes[0];
    for &(k, s) in &silhouettes[1..] {
        if s > best.1 + EPS || ((s - best.1).abs() <= EPS && k < best.0) {
            best = (k, s);
        }
    }
    Ok(KSelection {
        best_k: best.0,
        silhouettes,
        clusterings,
    })
}

/// Writes every unordered region pair as a distance-database CSV with
/// columns `region_1, state_1, region_2, state_2, pop_1, pop_2, hi_1, hi_2,
/// li_1, li_2, distance`. `states` maps region id to its parent area.
pub fn write_distance_db<W: Write>(
    out: W,
    profiles: &[RegionProfile],
    matrix: &DistanceMatrix,
    states: &HashMap<String, String>,
) -> Result<()> {
    check_len(profiles.len(), matrix.len())?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| OrdinalError::UnreadableFile(e.to_string());
    w.write_record([
        "region_1", "state_1", "region_2", "state_2", "pop_1", "pop_2", "hi_1", "hi_2", "li_1", "li_2", "distance",
    ])
    .map_err(io)?;
    let state = |id: &str| states.get(id).cloned().unwrap_or_default();
    for i in 0..profiles.len() {
        for j in 0..profiles.len() {
            if i == j {
                continue;
            }
            let (a, b) = (&profiles[i], &profiles[j]);
            w.write_record([
                a.id.clone(),
                state(&a.id),
                b.id.clone(),
                state(&b.id),
                format!("{:.0}", a.population),
                format!("{:.0}", b.population),
                format!("{:.2}", a.hi * 100.0),
                format!("{:.2}", b.hi * 100.0),
                a.li.to_string(),
                b.li.to_string(),
                format!("{:.2}", matrix.get(i, j) * 100.0),
            ])
            .map_err(io)?;
        }
    }
    w.flush().map_err(|e| OrdinalError::UnreadableFile(e.to_string()))?;
    Ok(())
}
