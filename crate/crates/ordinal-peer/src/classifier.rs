//! Equivalence-class tables, the four-step class assignment, homogeneity
//! groups, benchmark partitions, concentration matrices and region profiles.
//!
//! Three tables are provided:
//!
//! * the **diversity table** (`n(n−1)/2` cells `[i, k]`, any `n ≥ 3`): mass
//!   `c_i = (n−i)/(n−i+1)` split evenly over the first `k` categories and the
//!   rest in category `k + 1`;
//! * the **skewed table** (`n = 10`): non-polarised cells are λ-distributions
//!   with `λ = ((12−i)k − (10−i)) / (9(11−i))`, polarised cells move mass from
//!   the middle class to the two extreme deciles in 5% steps;
//! * the **symmetric table** (`n = 10`): the same grid built from the symmetric
//!   (λ, μ) family.
//!
//! Columns are indexed by the diversity band `j` (`j = 1` for `s ≤ 2`,
//! otherwise `j < s ≤ j + 1`). Within a column, non-polarised cells `[i, j]`
//! (`i = 1..=10−j`) have strictly decreasing HI as `i` grows, and polarised
//! cells `[11−j, k]` (`k = j+1..=9`) have strictly decreasing HI as `k` grows,
//! all below the column threshold `T_j`, the HI of cell `[10−j, j]` (uniform
//! over `j + 1` categories in the skewed table).

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::divergence::divergence_index;
use crate::error::{OrdinalError, Result};
use crate::homogeneity::{group_thresholds, hi};
use crate::location::location_index;
use crate::lorenz::{concentration_index, diversity_from_ci};
use crate::ordinal::{
    entropy_index, lambda_dist, make_distribution, moments, skewness_class, symmetric_lambda_mu_dist, LambdaMuParams,
    OrdinalDistribution, SkewClass, SkewKind,
};

/// Category count of the skewed and symmetric tables.
pub const TABLE_N: usize = 10;

/// Tolerance used when placing a diversity value in its column band.
const BAND_EPS: f64 = 1e-9;

/// Which classification table a class belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Diversity,
    Skewed,
    Symmetric,
}

/// Polarised / not-polarised typology of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Typology {
    Polarised,
    NotPolarised,
}

/// A cell `[i, k]` of a classification table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EquivalenceClass {
    pub i: usize,
    pub k: usize,
    /// Diversity band (column) the class belongs to.
    pub column: usize,
    pub table: TableKind,
    pub typology: Typology,
}

impl std::fmt::Display for EquivalenceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.i, self.k)
    }
}

/// One cell of the diversity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityCell {
    pub i: usize,
    pub k: usize,
    /// Mass on the first `k` categories.
    pub c: f64,
    pub ci: f64,
    pub s: f64,
    pub distribution: OrdinalDistribution,
}

/// The diversity table for `n ≥ 3`: cells `[i, k]` with `k = 1..n−1` and
/// `i = 1..=n−k`.
pub fn diversity_table(n: usize) -> Result<Vec<DiversityCell>> {
    if n < 3 {
        return Err(OrdinalError::TooFewCategories { n, min: 3 });
    }
    let mut cells = Vec::with_capacity(n * (n - 1) / 2);
    for k in 1..n {
        for i in 1..=n - k {
            let c = (n - i) as f64 / (n - i + 1) as f64;
            let mut p = vec![0.0; n];
            for x in p.iter_mut().take(k) {
                *x = c / k as f64;
            }
            p[k] = 1.0 - c;
            let distribution = make_distribution(&p)?;
            let ci = concentration_index(&distribution);
            let s = diversity_from_ci(n, ci)?;
            cells.push(DiversityCell {
                i,
                k,
                c,
                ci,
                s,
                distribution,
            });
        }
    }
    Ok(cells)
}

/// One cell of the skewed or symmetric table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCell {
    pub class: EquivalenceClass,
    pub distribution: OrdinalDistribution,
    pub ci: f64,
    pub s: f64,
    pub hi: f64,
}

/// A complete classification table for `n = 10`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassTable {
    pub kind: TableKind,
    pub cells: Vec<ClassCell>,
    /// `thresholds[j − 1]` is the typology threshold `T_j` of column `j`
    /// (`None` when the table has no cells in that column).
    pub thresholds: Vec<Option<f64>>,
}

impl ClassTable {
    /// Non-polarised cells of column `j`, ordered by `i` (HI decreasing).
    pub fn plain_column(&self, j: usize) -> Vec<&ClassCell> {
        let mut v: Vec<&ClassCell> = self
            .cells
            .iter()
            .filter(|c| c.class.column == j && c.class.typology == Typology::NotPolarised)
            .collect();
        v.sort_by_key(|c| c.class.i);
        v
    }

    /// Polarised cells of column `j`, ordered by `k` (HI decreasing).
    pub fn polarised_column(&self, j: usize) -> Vec<&ClassCell> {
        let mut v: Vec<&ClassCell> = self
            .cells
            .iter()
            .filter(|c| c.class.column == j && c.class.typology == Typology::Polarised)
            .collect();
        v.sort_by_key(|c| c.class.k);
        v
    }

    /// Looks up cell `[i, k]`.
    pub fn cell(&self, i: usize, k: usize) -> Option<&ClassCell> {
        self.cells.iter().find(|c| c.class.i == i && c.class.k == k)
    }

    /// Assigns `d` to a class of this table (steps 1, 2 and 4 of the
    /// procedure, with the typology test of step 3).
    pub fn classify(&self, d: &OrdinalDistribution) -> Result<EquivalenceClass> {
        require_table_n(d)?;
        let ci = concentration_index(d);
        let s = diversity_from_ci(TABLE_N, ci)?;
        let h = hi(d)?;
        let mut j = diversity_column(s);
        while self.thresholds[j - 1].is_none() {
            j += 1;
        }
        let threshold = self.thresholds[j - 1].expect("checked above");
        let polarised = self.polarised_column(j);
        if h < threshold && !polarised.is_empty() {
            let found = polarised
                .iter()
                .find(|c| h >= c.hi)
                .unwrap_or_else(|| polarised.last().expect("non-empty"));
            return Ok(found.class);
        }
        let plain = self.plain_column(j);
        let found = plain
            .iter()
            .find(|c| h >= c.hi)
            .unwrap_or_else(|| plain.last().expect("every column has plain cells"));
        Ok(found.class)
    }
}

fn require_table_n(d: &OrdinalDistribution) -> Result<()> {
    if d.n() != TABLE_N {
        Err(OrdinalError::UnsupportedCategoryCount {
            n: d.n(),
            expected: TABLE_N,
        })
    } else {
        Ok(())
    }
}

/// Diversity band of `s` for `n = 10`: `1` when `s ≤ 2`, otherwise the `k`
/// with `k < s ≤ k + 1` (capped at 9).
pub fn diversity_column(s: f64) -> usize {
    if s <= 2.0 + BAND_EPS {
        1
    } else {
        ((s - BAND_EPS).ceil() as usize - 1).clamp(1, TABLE_N - 1)
    }
}

/// `λ` of the non-polarised skewed cell `[i, k]`.
pub fn skewed_lambda(i: usize, k: usize) -> f64 {
    let (i, k) = (i as f64, k as f64);
    ((12.0 - i) * k - (10.0 - i)) / (9.0 * (11.0 - i))
}

fn make_cell(class: EquivalenceClass, distribution: OrdinalDistribution) -> Result<ClassCell> {
    let ci = concentration_index(&distribution);
    let s = diversity_from_ci(TABLE_N, ci)?;
    let hi = hi(&distribution)?;
    Ok(ClassCell {
        class,
        distribution,
        ci,
        s,
        hi,
    })
}

fn thresholds_of(cells: &[ClassCell]) -> Vec<Option<f64>> {
    (1..TABLE_N)
        .map(|j| {
            cells
                .iter()
                .find(|c| c.class.typology == Typology::NotPolarised && c.class.column == j && c.class.i == TABLE_N - j)
                .map(|c| c.hi)
        })
        .collect()
}

fn build_skewed() -> Result<ClassTable> {
    let mut cells = Vec::new();
    for k in 1..TABLE_N {
        for i in 1..=TABLE_N - k {
            let class = EquivalenceClass {
                i,
                k,
                column: k,
                table: TableKind::Skewed,
                typology: Typology::NotPolarised,
            };
            cells.push(make_cell(class, lambda_dist(TABLE_N, skewed_lambda(i, k))?)?);
        }
    }
    for i in 2..=TABLE_N {
        for k in (12 - i).max(2)..TABLE_N {
            let middle = (10 - i) as f64 / 10.0;
            let last = (i + k - 9) as f64 / 20.0;
            let mut p = vec![middle / 8.0; TABLE_N];
            p[TABLE_N - 1] = last;
            p[0] = 1.0 - middle - last;
            let class = EquivalenceClass {
                i,
                k,
                column: 11 - i,
                table: TableKind::Skewed,
                typology: Typology::Polarised,
            };
            cells.push(make_cell(class, make_distribution(&p)?)?);
        }
    }
    let thresholds = thresholds_of(&cells);
    Ok(ClassTable {
        kind: TableKind::Skewed,
        cells,
        thresholds,
    })
}

/// Polarization parameter of the polarised symmetric cell `[11−j, k]`.
pub fn symmetric_polarised_mu(j: usize, k: usize) -> f64 {
    0.75 + 0.25 * (k - j) as f64 / (9 - j) as f64
}

/// `λ` that keeps the symmetric (λ, μ) distribution at diversity `s`.
///
/// With `m = min(μ, 1 − μ)`, the symmetric family has `s = 2 + 8λ + 4m(1 − λ)`.
pub fn symmetric_lambda_for(s: f64, mu: f64) -> f64 {
    let m = mu.min(1.0 - mu);
    ((s - 2.0 - 4.0 * m) / (8.0 - 4.0 * m)).clamp(0.0, 1.0)
}

fn build_symmetric() -> Result<ClassTable> {
    let mut cells = Vec::new();
    for k in 2..TABLE_N {
        for i in 1..=TABLE_N - k {
            let s = 1.0 + 9.0 * skewed_lambda(i, k);
            let lambda = symmetric_lambda_for(s, 0.0);
            let class = EquivalenceClass {
                i,
                k,
                column: k,
                table: TableKind::Symmetric,
                typology: Typology::NotPolarised,
            };
            let d = symmetric_lambda_mu_dist(LambdaMuParams {
                n: TABLE_N,
                lambda,
                mu: 0.0,
            })?;
            cells.push(make_cell(class, d)?);
        }
    }
    for j in 2..TABLE_N - 1 {
        for k in j + 1..TABLE_N {
            let mu = symmetric_polarised_mu(j, k);
            let lambda = symmetric_lambda_for((j + 1) as f64, mu);
            let class = EquivalenceClass {
                i: 11 - j,
                k,
                column: j,
                table: TableKind::Symmetric,
                typology: Typology::Polarised,
            };
            let d = symmetric_lambda_mu_dist(LambdaMuParams {
                n: TABLE_N,
                lambda,
                mu,
            })?;
            cells.push(make_cell(class, d)?);
        }
    }
    let thresholds = thresholds_of(&cells);
    Ok(ClassTable {
        kind: TableKind::Symmetric,
        cells,
        thresholds,
    })
}

/// The skewed (λ-distribution) table; built once and cached.
pub fn skewed_table() -> &'static ClassTable {
    static TABLE: OnceLock<ClassTable> = OnceLock::new();
    TABLE.get_or_init(|| build_skewed().expect("table parameters are valid"))
}

/// The symmetric table; built once and cached.
pub fn symmetric_table() -> &'static ClassTable {
    static TABLE: OnceLock<ClassTable> = OnceLock::new();
    TABLE.get_or_init(|| build_symmetric().expect("table parameters are valid"))
}

/// Chooses the table for `d`: approximately symmetric distributions with
/// diversity above two go to the symmetric table, everything else to the
/// skewed table.
pub fn route_table(d: &OrdinalDistribution) -> Result<TableKind> {
    require_table_n(d)?;
    let s = diversity_from_ci(TABLE_N, concentration_index(d))?;
    let symmetric = matches!(skewness_class(d), Ok(SkewClass { class: SkewKind::AS, .. }));
    Ok(if symmetric && diversity_column(s) >= 2 {
        TableKind::Symmetric
    } else {
        TableKind::Skewed
    })
}

/// Full assignment procedure: route, then classify within the routed table.
pub fn classify_equivalence(d: &OrdinalDistribution) -> Result<EquivalenceClass> {
    match route_table(d)? {
        TableKind::Symmetric => symmetric_table().classify(d),
        _ => skewed_table().classify(d),
    }
}

/// Homogeneity group label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupLabel {
    A,
    B,
    C,
    D,
}

impl std::fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GroupLabel::A => "A",
            GroupLabel::B => "B",
            GroupLabel::C => "C",
            GroupLabel::D => "D",
        };
        f.write_str(s)
    }
}

/// Homogeneity group and the thresholds `HI(4), HI(5), HI(6)` used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityGroup {
    pub label: GroupLabel,
    pub thresholds: [f64; 3],
}

/// Group A: `HI ≥ HI(4)`; B: `HI(5) ≤ HI < HI(4)`; C: `HI(6) ≤ HI < HI(5)`; D otherwise.
pub fn homogeneity_group(hi_value: f64, n: usize) -> Result<HomogeneityGroup> {
    if !(0.0..=1.0).contains(&hi_value) {
        return Err(OrdinalError::ParamOutOfRange {
            name: "hi",
            value: hi_value,
            expected: "[0, 1]",
        });
    }
    if n < 6 {
        return Err(OrdinalError::TooFewCategories { n, min: 6 });
    }
    let thresholds = group_thresholds(n)?;
    let label = if hi_value >= thresholds[0] {
        GroupLabel::A
    } else if hi_value >= thresholds[1] {
        GroupLabel::B
    } else if hi_value >= thresholds[2] {
        GroupLabel::C
    } else {
        GroupLabel::D
    };
    Ok(HomogeneityGroup { label, thresholds })
}

/// One row of the homogeneity-group table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub label: GroupLabel,
    /// Inclusive lower HI bound (`0` for group D).
    pub lower: f64,
    /// Exclusive upper HI bound (`None` for group A, which is closed at one).
    pub upper: Option<f64>,
    pub guidance: String,
}

/// The four homogeneity groups with their computed bounds for `n` categories.
pub fn group_table(n: usize) -> Result<Vec<GroupRow>> {
    if n < 6 {
        return Err(OrdinalError::TooFewCategories { n, min: 6 });
    }
    let [t4, t5, t6] = group_thresholds(n)?;
    let row = |label, lower, upper, guidance: &str| GroupRow {
        label,
        lower,
        upper,
        guidance: guidance.to_string(),
    };
    Ok(vec![
        row(GroupLabel::A, t4, None, "acceptably homogeneous"),
        row(GroupLabel::B, t5, Some(t4), "marginal heterogeneity; reassignment of some units may be beneficial"),
        row(GroupLabel::C, t6, Some(t5), "heterogeneous; consider refining the region"),
        row(GroupLabel::D, 0.0, Some(t6), "highly heterogeneous; re-zoning recommended"),
    ])
}

/// Benchmark category label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BenchmarkLabel {
    /// High disadvantage: the low partition holds at least the HD cutoff.
    HD,
    /// Medium disadvantage: the middle partition holds at least the MD cutoff.
    MD,
    /// Low disadvantage: the high partition holds at least the LD cutoff.
    LD,
    None,
}

impl std::fmt::Display for BenchmarkLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BenchmarkLabel::HD => "HD",
            BenchmarkLabel::MD => "MD",
            BenchmarkLabel::LD => "LD",
            BenchmarkLabel::None => "none",
        };
        f.write_str(s)
    }
}

/// Three contiguous category ranges (1-based, inclusive) and their cutoffs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkPartition {
    pub low: (usize, usize),
    pub mid: (usize, usize),
    pub high: (usize, usize),
    pub hd_cutoff: f64,
    pub md_cutoff: f64,
    pub ld_cutoff: f64,
}

/// Named benchmark presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchmarkPreset {
    /// Bottom 30% / middle 40% / top 30% of categories (deciles 1–3, 4–7, 8–10).
    Thesis,
    /// Bottom 40% / middle 40% / top 20% (deciles 1–4, 5–8, 9–10).
    FilmerPritchett,
}

impl BenchmarkPreset {
    /// Parses `thesis` or `filmer-pritchett`.
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "thesis" => Some(Self::Thesis),
            "filmer-pritchett" | "filmer_pritchett" | "40-40-20" => Some(Self::FilmerPritchett),
            _ => None,
        }
    }
}

impl BenchmarkPartition {
    /// Builds a preset for `n` categories by rounding the preset shares.
    pub fn preset(preset: BenchmarkPreset, n: usize) -> Result<Self> {
        let (low_share, mid_share) = match preset {
            BenchmarkPreset::Thesis => (0.3, 0.4),
            BenchmarkPreset::FilmerPritchett => (0.4, 0.4),
        };
        let low_end = ((n as f64 * low_share).round() as usize).max(1);
        let mid_end = low_end + ((n as f64 * mid_share).round() as usize).max(1);
        let p = Self {
            low: (1, low_end),
            mid: (low_end + 1, mid_end),
            high: (mid_end + 1, n),
            hd_cutoff: 0.70,
            md_cutoff: 0.90,
            ld_cutoff: 0.70,
        };
        p.validate(n)?;
        Ok(p)
    }

    /// The default partition (deciles 1–3, 4–7, 8–10 for `n = 10`).
    pub fn thesis(n: usize) -> Result<Self> {
        Self::preset(BenchmarkPreset::Thesis, n)
    }

    /// Checks that the ranges are non-empty, ordered, disjoint and within `1..=n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let ranges = [self.low, self.mid, self.high];
        for (a, b) in ranges {
            if a == 0 || a > b || b > n {
                return Err(OrdinalError::BadPartition(format!("range {a}..={b} invalid for n = {n}")));
            }
        }
        if self.low.1 >= self.mid.0 || self.mid.1 >= self.high.0 {
            return Err(OrdinalError::BadPartition("ranges overlap or are out of order".into()));
        }
        for c in [self.hd_cutoff, self.md_cutoff, self.ld_cutoff] {
            if !(0.0..=1.0).contains(&c) {
                return Err(OrdinalError::BadPartition(format!("cutoff {c} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Cumulative shares per partition and the resulting label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkCategory {
    pub label: BenchmarkLabel,
    pub low: f64,
    pub mid: f64,
    pub high: f64,
    pub partition: BenchmarkPartition,
}

fn range_mass(d: &OrdinalDistribution, (a, b): (usize, usize)) -> f64 {
    d.probs()[a - 1..b].iter().sum()
}

/// Benchmark category of `d` under `partition`.
pub fn benchmark_category(d: &OrdinalDistribution, partition: &BenchmarkPartition) -> Result<BenchmarkCategory> {
    partition.validate(d.n())?;
    let low = range_mass(d, partition.low);
    let mid = range_mass(d, partition.mid);
    let high = range_mass(d, partition.high);
    let tol = 1e-12;
    let label = if low >= partition.hd_cutoff - tol {
        BenchmarkLabel::HD
    } else if high >= partition.ld_cutoff - tol {
        BenchmarkLabel::LD
    } else if mid >= partition.md_cutoff - tol {
        BenchmarkLabel::MD
    } else {
        BenchmarkLabel::None
    };
    Ok(BenchmarkCategory {
        label,
        low,
        mid,
        high,
        partition: *partition,
    })
}

/// Which partition range a concentration matrix measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionPart {
    Low,
    Mid,
    High,
}

/// Counts of regions per 10% concentration band (rows) and LI (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationMatrix {
    /// Row labels, `"0 to 10"` … `"90 to 100"`.
    pub bands: Vec<String>,
    /// `counts[band][li − 1]`.
    pub counts: Vec<Vec<usize>>,
    pub row_totals: Vec<usize>,
    pub col_totals: Vec<usize>,
    pub total: usize,
}

/// Band index (0..=9) of a fraction; the top band is closed at 100%.
pub fn concentration_band(fraction: f64) -> usize {
    ((fraction * 10.0 + 1e-9).floor() as usize).min(9)
}

/// Concentration matrix of `regions` for one partition range.
pub fn concentration_matrix(
    regions: &[RegionProfile],
    partition: &BenchmarkPartition,
    part: PartitionPart,
    n: usize,
) -> Result<ConcentrationMatrix> {
    partition.validate(n)?;
    let mut counts = vec![vec![0usize; n]; 10];
    for r in regions {
        if r.distribution.n() != n {
            return Err(OrdinalError::LengthMismatch {
                left: r.distribution.n(),
                right: n,
            });
        }
        let range = match part {
            PartitionPart::Low => partition.low,
            PartitionPart::Mid => partition.mid,
            PartitionPart::High => partition.high,
        };
        let band = concentration_band(range_mass(&r.distribution, range));
        counts[band][r.li - 1] += 1;
    }
    let row_totals: Vec<usize> = counts.iter().map(|row| row.iter().sum()).collect();
    let col_totals: Vec<usize> = (0..n).map(|c| counts.iter().map(|row| row[c]).sum()).collect();
    Ok(ConcentrationMatrix {
        bands: (0..10).map(|b| format!("{} to {}", b * 10, b * 10 + 10)).collect(),
        total: row_totals.iter().sum(),
        counts,
        row_totals,
        col_totals,
    })
}

/// Population-weighted score summary attached to a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub score: f64,
    pub zscore: f64,
    pub standardized: f64,
    pub rank: usize,
    pub decile: usize,
}

/// Every statistic of one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionProfile {
    pub id: String,
    pub population: f64,
    pub excluded_fraction: f64,
    pub distribution: OrdinalDistribution,
    pub mean: f64,
    pub ci: f64,
    pub di: f64,
    pub hi: f64,
    pub s: f64,
    pub entropy: f64,
    /// Scalar Location Index (smallest BCF arg-max).
    pub li: usize,
    pub li_upper: usize,
    pub csd: f64,
    /// `None` for zero-variance (singleton) distributions.
    pub skew: Option<SkewClass>,
    /// `None` unless `n = 10`.
    pub equivalence: Option<EquivalenceClass>,
    /// `None` when `n < 6`.
    pub group: Option<GroupLabel>,
    pub benchmark: BenchmarkCategory,
    pub pwavgs: Option<ScoreSummary>,
}

/// Computes a full profile with the default benchmark partition.
pub fn region_profile(
    id: &str,
    d: &OrdinalDistribution,
    population: f64,
    excluded_fraction: f64,
    pwavgs: Option<ScoreSummary>,
) -> Result<RegionProfile> {
    let partition = BenchmarkPartition::thesis(d.n())?;
    region_profile_with(id, d, population, excluded_fraction, pwavgs, &partition)
}

/// Computes a full profile with an explicit benchmark partition.
pub fn region_profile_with(
    id: &str,
    d: &OrdinalDistribution,
    population: f64,
    excluded_fraction: f64,
    pwavgs: Option<ScoreSummary>,
    partition: &BenchmarkPartition,
) -> Result<RegionProfile> {
    let n = d.n();
    let ci = concentration_index(d);
    let hi_value = hi(d)?;
    let loc = location_index(d);
    Ok(RegionProfile {
        id: id.to_string(),
        population,
        excluded_fraction,
        distribution: d.clone(),
        mean: moments(d).mean,
        ci,
        di: divergence_index(d),
        hi: hi_value,
        s: diversity_from_ci(n, ci)?,
        entropy: entropy_index(d),
        li: loc.lambda1,
        li_upper: loc.lambda2,
        csd: loc.csd,
        skew: skewness_class(d).ok(),
        equivalence: if n == TABLE_N { Some(classify_equivalence(d)?) } else { None },
        group: if n >= 6 { Some(homogeneity_group(hi_value, n)?.label) } else { None },
        benchmark: benchmark_category(d, partition)?,
        pwavgs,
    })
}
