//! Subunit CSV parsing, aggregation to region distributions with exclusion
//! accounting, and population-weighted average scores.
//!
//! Input schema (header required, comma-delimited, UTF-8):
//! `subunit_id,region_id,population,category[,score]`. An empty or
//! out-of-range category marks the subunit as excluded; a malformed or
//! negative population rejects the row.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classifier::ScoreSummary;
use crate::error::{OrdinalError, Result};
use crate::ordinal::{make_distribution, OrdinalDistribution};

/// Required input columns.
pub const REQUIRED_COLUMNS: [&str; 4] = ["subunit_id", "region_id", "population", "category"];

/// Lower bounds of score deciles 2..=10; deciles are half-open `[lo, hi)`.
/// Scores below the first bound fall in decile 1, scores at or above the
/// last bound in decile 10.
pub const DECILE_LOWER_BOUNDS: [f64; 9] = [874.0, 931.0, 968.0, 997.0, 1020.0, 1041.0, 1061.0, 1081.0, 1104.0];

/// One subunit row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubunitRecord {
    pub subunit_id: String,
    pub region_id: String,
    pub population: u64,
    /// 1-based category, `None` when excluded.
    pub category: Option<usize>,
    pub score: Option<f64>,
}

/// Severity of a parse issue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    /// Row kept, subunit marked as excluded.
    Excluded,
    /// Row dropped.
    Rejected,
    /// Row kept with a field ignored.
    Warning,
}

/// One entry of the parse issue log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    /// 1-based line number in the file (the header is line 1).
    pub line: usize,
    pub kind: IssueKind,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            IssueKind::Excluded => "excluded",
            IssueKind::Rejected => "rejected",
            IssueKind::Warning => "warning",
        };
        write!(f, "line {}: {}: {}", self.line, kind, self.message)
    }
}

/// Parsed records plus the issue log.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ParseOutcome {
    pub records: Vec<SubunitRecord>,
    pub issues: Vec<Issue>,
}

fn parse_population(raw: &str) -> Option<u64> {
    if let Ok(v) = raw.parse::<u64>() {
        return Some(v);
    }
    let f: f64 = raw.parse().ok()?;
    (f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64).then_some(f as u64)
}

/// Parses a subunit CSV stream for `n` categories.
pub fn parse_subunit_csv<R: Read>(input: R, n: usize) -> Result<ParseOutcome> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| OrdinalError::UnreadableFile(e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.trim_start_matches('\u{feff}') == name);
    let mut idx = [0usize; 4];
    for (slot, name) in idx.iter_mut().zip(REQUIRED_COLUMNS) {
        *slot = col(name).ok_or_else(|| OrdinalError::MissingColumn(name.to_string()))?;
    }
    let score_col = col("score");
    let mut out = ParseOutcome::default();
    for (row, rec) in reader.records().enumerate() {
        let line = row + 2;
        let rec = match rec {
            Ok(r) => r,
            Err(e) => {
                out.issues.push(Issue {
                    line,
                    kind: IssueKind::Rejected,
                    message: format!("unreadable row: {e}"),
                });
                continue;
            }
        };
        let field = |i: usize| rec.get(i).unwrap_or("");
        let (subunit_id, region_id) = (field(idx[0]).to_string(), field(idx[1]).to_string());
        if region_id.is_empty() {
            out.issues.push(Issue {
                line,
                kind: IssueKind::Rejected,
                message: "empty region_id".into(),
            });
            continue;
        }
        let Some(population) = parse_population(field(idx[2])) else {
            out.issues.push(Issue {
                line,
                kind: IssueKind::Rejected,
                message: format!("invalid population {:?}", field(idx[2])),
            });
            continue;
        };
        let raw_cat = field(idx[3]);
        let category = match raw_cat.parse::<usize>() {
            Ok(c) if (1..=n).contains(&c) => Some(c),
            _ => {
                let why = if raw_cat.is_empty() {
                    "empty category".to_string()
                } else {
                    format!("category {raw_cat:?} outside 1..={n}")
                };
                out.issues.push(Issue {
                    line,
                    kind: IssueKind::Excluded,
                    message: format!("subunit {subunit_id}: {why}"),
                });
                None
            }
        };
        let score = match score_col.map(field) {
            None | Some("") => None,
            Some(s) => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Some(v),
                _ => {
                    out.issues.push(Issue {
                        line,
                        kind: IssueKind::Warning,
                        message: format!("subunit {subunit_id}: invalid score {s:?} ignored"),
                    });
                    None
                }
            },
        };
        out.records.push(SubunitRecord {
            subunit_id,
            region_id,
            population,
            category,
            score,
        });
    }
    Ok(out)
}

/// Opens and parses a subunit CSV file.
pub fn parse_subunit_file(path: impl AsRef<Path>, n: usize) -> Result<ParseOutcome> {
    let path = path.as_ref();
    let file =
        std::fs::File::open(path).map_err(|e| OrdinalError::UnreadableFile(format!("{}: {e}", path.display())))?;
    parse_subunit_csv(std::io::BufReader::new(file), n)
}

/// Aggregated populations of one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionData {
    pub total_population: u64,
    /// Population per category, in category order.
    pub category_populations: Vec<u64>,
    pub excluded_population: u64,
    pub subunit_count: usize,
    /// `Σ score · population` over included, scored subunits.
    pub weighted_score_sum: f64,
    pub scored_population: u64,
}

impl RegionData {
    pub fn included_population(&self) -> u64 {
        self.category_populations.iter().sum()
    }

    /// Excluded population over total population.
    pub fn excluded_fraction(&self) -> f64 {
        if self.total_population == 0 {
            0.0
        } else {
            self.excluded_population as f64 / self.total_population as f64
        }
    }

    /// Category populations normalized over the included population.
    pub fn distribution(&self) -> Result<OrdinalDistribution> {
        let w: Vec<f64> = self.category_populations.iter().map(|&x| x as f64).collect();
        make_distribution(&w)
    }

    /// Population-weighted average score, if any included subunit was scored.
    pub fn raw_score(&self) -> Option<f64> {
        (self.scored_population > 0).then(|| self.weighted_score_sum / self.scored_population as f64)
    }
}

/// Regions keyed by id (sorted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionDataset {
    pub n: usize,
    pub regions: BTreeMap<String, RegionData>,
}

/// Aggregates records to regions. Fails if any region has no included
/// population.
pub fn aggregate(records: &[SubunitRecord], n: usize) -> Result<RegionDataset> {
    if records.is_empty() {
        return Err(OrdinalError::NoRecords);
    }
    let mut regions: BTreeMap<String, RegionData> = BTreeMap::new();
    for r in records {
        let e = regions.entry(r.region_id.clone()).or_insert_with(|| RegionData {
            total_population: 0,
            category_populations: vec![0; n],
            excluded_population: 0,
            subunit_count: 0,
            weighted_score_sum: 0.0,
            scored_population: 0,
        });
        e.total_population += r.population;
        e.subunit_count += 1;
        match r.category {
            Some(c) if (1..=n).contains(&c) => {
                e.category_populations[c - 1] += r.population;
                if let Some(s) = r.score {
                    e.weighted_score_sum += s * r.population as f64;
                    e.scored_population += r.population;
                }
            }
            _ => e.excluded_population += r.population,
        }
    }
    if let Some((id, _)) = regions.iter().find(|(_, d)| d.included_population() == 0) {
        return Err(OrdinalError::RegionAllExcluded(id.clone()));
    }
    Ok(RegionDataset { n, regions })
}

/// Decile of a standardized score under the half-open decile table.
pub fn score_decile(score: f64) -> usize {
    1 + DECILE_LOWER_BOUNDS.iter().filter(|&&lo| score >= lo).count()
}

/// Computes per-region scores, z-scores, standardized scores
/// (`1000 + 100 z`), ascending ranks and deciles.
///
/// The mean and standard deviation are taken over the scored regions
/// (unweighted, population form) unless `reference` supplies them.
pub fn pwavgs(dataset: &RegionDataset, reference: Option<(f64, f64)>) -> Result<BTreeMap<String, ScoreSummary>> {
    let raw: Vec<(&String, f64)> = dataset
        .regions
        .iter()
        .filter_map(|(id, r)| r.raw_score().map(|s| (id, s)))
        .collect();
    if raw.is_empty() {
        return Err(OrdinalError::NoScores);
    }
    let (mu, sigma) = match reference {
        Some(p) => p,
        None => {
            let m = raw.len() as f64;
            let mu = raw.iter().map(|(_, s)| s).sum::<f64>() / m;
            let var = raw.iter().map(|(_, s)| (s - mu).powi(2)).sum::<f64>() / m;
            (mu, var.sqrt())
        }
    };
    if !(sigma.is_finite() && sigma > 1e-12) {
        return Err(OrdinalError::ZeroVariance);
    }
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[a].1.total_cmp(&raw[b].1).then_with(|| raw[a].0.cmp(raw[b].0)));
    let mut rank = vec![0; raw.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    Ok(raw
        .iter()
        .enumerate()
        .map(|(i, (id, score))| {
            let zscore = (score - mu) / sigma;
            let standardized = 1000.0 + 100.0 * zscore;
            (
                (*id).clone(),
                ScoreSummary {
                    score: *score,
                    zscore,
                    standardized,
                    rank: rank[i],
                    decile: score_decile(standardized),
                },
            )
        })
        .collect())
}

/// Writes records back to the input CSV schema.
pub fn write_subunit_csv<W: std::io::Write>(out: W, records: &[SubunitRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| OrdinalError::UnreadableFile(e.to_string());
    w.write_record(["subunit_id", "region_id", "population", "category", "score"])
        .map_err(err)?;
    for r in records {
        w.write_record([
            r.subunit_id.clone(),
            r.region_id.clone(),
            r.population.to_string(),
            r.category.map(|c| c.to_string()).unwrap_or_default(),
            r.score.map(|s| format!("{s}")).unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| OrdinalError::UnreadableFile(e.to_string()))?;
    Ok(())
}
