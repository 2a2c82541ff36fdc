//! Python bindings: ordinal distributions with their concentration,
//! divergence, homogeneity and location statistics, the classification
//! tables, and datasets with peer clustering.
//!
//! Structured results (profiles, classes, clusterings) are returned as plain
//! Python dicts and lists with the same field names as the JSON service.

use ordinal_peer::classifier::{
    benchmark_category, classify_equivalence, diversity_table as diversity_cells, group_table as group_rows,
    homogeneity_group, region_profile_with, skewed_table, symmetric_table, BenchmarkPartition, BenchmarkPreset,
    RegionProfile,
};
use ordinal_peer::cluster::{choose_k, distance_terms, pam, DistanceMatrix, DistanceParams};
use ordinal_peer::divergence::{bcdf, bcdfa, divergence_index};
use ordinal_peer::homogeneity::{
    group_thresholds as thresholds, hi_equal_abundance as hi_ea, homogeneity_index, value_validity_alpha,
    HomogeneityConfig,
};
use ordinal_peer::ingest::{aggregate, parse_subunit_csv, pwavgs};
use ordinal_peer::location::{bcf_vector, location_index};
use ordinal_peer::lorenz::{concentration_index, diversity_from_ci, lorenz_curve};
use ordinal_peer::ordinal::{moments, OrdinalDistribution};
use ordinal_peer::{OrdinalError, Polarization};
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: OrdinalError) -> PyErr {
    match e {
        OrdinalError::UnknownRegion(id) => PyKeyError::new_err(id),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Converts any serializable value into the equivalent Python object.
fn to_py<'py, T: Serialize + ?Sized>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn polarization(name: &str) -> PyResult<Polarization> {
    Polarization::parse(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown measure `{name}`; expected gjsd, gvar, glov or none")))
}

fn partition(preset: &str, n: usize) -> PyResult<BenchmarkPartition> {
    let p = BenchmarkPreset::parse(preset)
        .ok_or_else(|| PyValueError::new_err(format!("unknown preset `{preset}`; expected thesis or filmer-pritchett")))?;
    BenchmarkPartition::preset(p, n).map_err(err)
}

/// A probability vector over `n` ordered categories.
#[pyclass(name = "Distribution", module = "ordinal_peer", frozen)]
pub struct PyDistribution {
    inner: OrdinalDistribution,
}

#[pymethods]
impl PyDistribution {
    /// Normalizes non-negative weights (at least two categories).
    #[new]
    fn new(weights: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: OrdinalDistribution::from_weights(&weights).map_err(err)?,
        })
    }

    #[staticmethod]
    fn uniform(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: OrdinalDistribution::uniform(n).map_err(err)?,
        })
    }

    /// All mass on category `j` (1-based).
    #[staticmethod]
    fn singleton(n: usize, j: usize) -> PyResult<Self> {
        Ok(Self {
            inner: OrdinalDistribution::singleton(n, j).map_err(err)?,
        })
    }

    /// Half the mass on the first category and half on the last.
    #[staticmethod]
    fn two_point_extreme(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: OrdinalDistribution::two_point_extreme(n).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        let p: Vec<String> = self.inner.probs().iter().map(|x| format!("{x:.4}")).collect();
        format!("Distribution([{}])", p.join(", "))
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> bool {
        self.inner == other.inner
    }

    fn cdf(&self) -> Vec<f64> {
        self.inner.cdf()
    }

    fn mean(&self) -> f64 {
        moments(&self.inner).mean
    }

    fn variance(&self) -> f64 {
        moments(&self.inner).variance
    }

    /// Concentration index in `[0, 1]`.
    fn ci(&self) -> f64 {
        concentration_index(&self.inner)
    }

    /// Effective number of equally abundant categories.
    fn diversity(&self) -> PyResult<f64> {
        diversity_from_ci(self.inner.n(), concentration_index(&self.inner)).map_err(err)
    }

    /// Divergence (polarization) index.
    fn di(&self) -> f64 {
        divergence_index(&self.inner)
    }

    /// Homogeneity index with divergence weight `alpha` and the chosen
    /// polarization measure.
    #[pyo3(signature = (alpha = 1.0, measure = "gjsd"))]
    fn hi(&self, alpha: f64, measure: &str) -> PyResult<f64> {
        let cfg = HomogeneityConfig::new(alpha, polarization(measure)?).map_err(err)?;
        homogeneity_index(&self.inner, &cfg).map_err(err)
    }

    /// Location index (smallest category with maximal bin concentration).
    fn li(&self) -> usize {
        location_index(&self.inner).lambda1
    }

    /// Full location result: both arg-max ends, BCF vector, maximum and deviation.
    fn location<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &location_index(&self.inner))
    }

    fn lorenz(&self) -> Vec<f64> {
        lorenz_curve(&self.inner).y
    }

    fn bcdf(&self) -> Vec<f64> {
        bcdf(&self.inner).f
    }

    fn bcdfa(&self) -> Vec<f64> {
        bcdfa(&self.inner).r
    }

    fn bcf(&self) -> Vec<f64> {
        bcf_vector(&self.inner)
    }

    /// Equivalence class (`n = 10` only) as a dict with `i`, `k`, `column`,
    /// `table` and `typology`.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify_equivalence(&self.inner).map_err(err)?)
    }

    /// Homogeneity group label `A`–`D` (`n ≥ 6`).
    fn group(&self) -> PyResult<String> {
        let h = homogeneity_index(&self.inner, &HomogeneityConfig::default()).map_err(err)?;
        Ok(homogeneity_group(h, self.inner.n()).map_err(err)?.label.to_string())
    }

    /// Benchmark shares and label for a partition preset.
    #[pyo3(signature = (preset = "thesis"))]
    fn benchmark<'py>(&self, py: Python<'py>, preset: &str) -> PyResult<Bound<'py, PyAny>> {
        let p = partition(preset, self.inner.n())?;
        to_py(py, &benchmark_category(&self.inner, &p).map_err(err)?)
    }

    /// Every statistic in one dict, as served for a region.
    #[pyo3(signature = (id = "region", population = 0.0, preset = "thesis"))]
    fn profile<'py>(&self, py: Python<'py>, id: &str, population: f64, preset: &str) -> PyResult<Bound<'py, PyAny>> {
        let p = partition(preset, self.inner.n())?;
        to_py(py, &region_profile_with(id, &self.inner, population, 0.0, None, &p).map_err(err)?)
    }
}

/// Profiled regions of a subunit CSV with their pairwise dissimilarities.
#[pyclass(name = "Dataset", module = "ordinal_peer", frozen)]
pub struct PyDataset {
    profiles: Vec<RegionProfile>,
    issues: Vec<String>,
    matrix: DistanceMatrix,
    params: DistanceParams,
}

impl PyDataset {
    fn build(text: &[u8], n: usize, weights: Option<&str>, preset: &str) -> PyResult<Self> {
        let params = match weights {
            Some(w) => DistanceParams::parse(w).map_err(err)?,
            None => DistanceParams::default(),
        };
        let part = partition(preset, n)?;
        let parsed = parse_subunit_csv(text, n).map_err(err)?;
        let ds = aggregate(&parsed.records, n).map_err(err)?;
        let scores = match pwavgs(&ds, None) {
            Ok(s) => s,
            Err(OrdinalError::NoScores | OrdinalError::ZeroVariance) => Default::default(),
            Err(e) => return Err(err(e)),
        };
        let profiles = ds
            .regions
            .iter()
            .map(|(id, r)| {
                region_profile_with(
                    id,
                    &r.distribution()?,
                    r.total_population as f64,
                    r.excluded_fraction(),
                    scores.get(id).copied(),
                    &part,
                )
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let matrix = DistanceMatrix::from_profiles(&profiles, &params).map_err(err)?;
        Ok(Self {
            profiles,
            issues: parsed.issues.iter().map(|i| i.to_string()).collect(),
            matrix,
            params,
        })
    }

    fn find(&self, id: &str) -> PyResult<&RegionProfile> {
        self.profiles
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| PyKeyError::new_err(id.to_string()))
    }

    fn cluster_dict<'py>(&self, py: Python<'py>, c: &ordinal_peer::cluster::Clustering) -> PyResult<Bound<'py, PyAny>> {
        let mut members = vec![Vec::new(); c.k];
        for (i, &a) in c.assignment.iter().enumerate() {
            members[a].push(self.profiles[i].id.clone());
        }
        let out = to_py(py, c)?;
        out.set_item("members", members)?;
        Ok(out)
    }
}

#[pymethods]
impl PyDataset {
    /// Reads a subunit CSV file (`subunit_id, region_id, population, category[, score]`).
    #[staticmethod]
    #[pyo3(signature = (path, n = 10, weights = None, preset = "thesis"))]
    fn from_csv(path: std::path::PathBuf, n: usize, weights: Option<&str>, preset: &str) -> PyResult<Self> {
        let bytes = std::fs::read(&path)
            .map_err(|e| err(OrdinalError::UnreadableFile(format!("{}: {e}", path.display()))))?;
        Self::build(&bytes, n, weights, preset)
    }

    /// Parses subunit CSV text.
    #[staticmethod]
    #[pyo3(signature = (text, n = 10, weights = None, preset = "thesis"))]
    fn from_csv_text(text: &str, n: usize, weights: Option<&str>, preset: &str) -> PyResult<Self> {
        Self::build(text.as_bytes(), n, weights, preset)
    }

    fn __len__(&self) -> usize {
        self.profiles.len()
    }

    fn __repr__(&self) -> String {
        format!("Dataset({} regions)", self.profiles.len())
    }

    /// Row-level issues found while parsing (excluded or rejected subunits).
    #[getter]
    fn issues(&self) -> Vec<String> {
        self.issues.clone()
    }

    fn region_ids(&self) -> Vec<String> {
        self.profiles.iter().map(|p| p.id.clone()).collect()
    }

    fn profile<'py>(&self, py: Python<'py>, id: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, self.find(id)?)
    }

    fn profiles<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.profiles)
    }

    fn distribution(&self, id: &str) -> PyResult<PyDistribution> {
        Ok(PyDistribution {
            inner: self.find(id)?.distribution.clone(),
        })
    }

    /// Size, shape and location terms and their weighted total.
    fn compare<'py>(&self, py: Python<'py>, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &distance_terms(self.find(a)?, self.find(b)?, &self.params).map_err(err)?)
    }

    fn distance(&self, a: &str, b: &str) -> PyResult<f64> {
        let i = self.matrix.index_of(a).ok_or_else(|| PyKeyError::new_err(a.to_string()))?;
        let j = self.matrix.index_of(b).ok_or_else(|| PyKeyError::new_err(b.to_string()))?;
        Ok(self.matrix.get(i, j))
    }

    /// Other regions ordered by distance (ties by id).
    #[pyo3(signature = (id, ascending = true, limit = None))]
    fn neighbours(&self, id: &str, ascending: bool, limit: Option<usize>) -> PyResult<Vec<(String, f64)>> {
        self.matrix.neighbours(id, ascending, limit).map_err(err)
    }

    /// PAM clustering into `k` peer groups.
    #[pyo3(signature = (k, seed = 0))]
    fn cluster<'py>(&self, py: Python<'py>, k: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let c = py.detach(|| pam(&self.matrix, k, seed)).map_err(err)?;
        self.cluster_dict(py, &c)
    }

    /// Runs PAM for every candidate `k` and keeps the best average silhouette.
    #[pyo3(signature = (candidates, seed = 0))]
    fn choose_k<'py>(&self, py: Python<'py>, candidates: Vec<usize>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let sel = py.detach(|| choose_k(&self.matrix, &candidates, seed)).map_err(err)?;
        let best = sel.clusterings.iter().find(|c| c.k == sel.best_k).expect("best k is a candidate");
        let out = pyo3::types::PyDict::new(py);
        out.set_item("best_k", sel.best_k)?;
        out.set_item("silhouettes", sel.silhouettes.clone())?;
        out.set_item("clustering", self.cluster_dict(py, best)?)?;
        Ok(out.into_any())
    }
}

/// HI of `s` equally abundant categories out of `n`.
#[pyfunction]
fn hi_equal_abundance(n: usize, s: usize) -> PyResult<f64> {
    hi_ea(n, s).map_err(err)
}

/// Homogeneity-group thresholds `(HI(4), HI(5), HI(6))`.
#[pyfunction]
fn group_thresholds(n: usize) -> PyResult<(f64, f64, f64)> {
    let [a, b, c] = thresholds(n).map_err(err)?;
    Ok((a, b, c))
}

/// Value-validity report for a polarization measure.
#[pyfunction]
#[pyo3(signature = (measure, n, s, alpha = 1.0))]
fn value_validity<'py>(py: Python<'py>, measure: &str, n: usize, s: f64, alpha: f64) -> PyResult<Bound<'py, PyAny>> {
    let m = polarization(measure)?;
    let r = py.detach(|| value_validity_alpha(&m, alpha, n, s)).map_err(err)?;
    to_py(py, &r)
}

/// Classification table: 2 (diversity, any `n`), 3 (skewed), 4 (symmetric)
/// or 5 (homogeneity groups).
#[pyfunction]
#[pyo3(signature = (which, n = 10))]
fn table<'py>(py: Python<'py>, which: u8, n: usize) -> PyResult<Bound<'py, PyAny>> {
    match which {
        2 => to_py(py, &diversity_cells(n).map_err(err)?),
        3 | 4 if n != 10 => Err(err(OrdinalError::UnsupportedCategoryCount { n, expected: 10 })),
        3 => to_py(py, skewed_table()),
        4 => to_py(py, symmetric_table()),
        5 => to_py(py, &group_rows(n).map_err(err)?),
        other => Err(PyValueError::new_err(format!("unknown table {other}; expected 2, 3, 4 or 5"))),
    }
}

#[pymodule(name = "ordinal_peer")]
fn init_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDistribution>()?;
    m.add_class::<PyDataset>()?;
    m.add_function(wrap_pyfunction!(hi_equal_abundance, m)?)?;
    m.add_function(wrap_pyfunction!(group_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(value_validity, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
