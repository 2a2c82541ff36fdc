//! Command-line front end over the `ordinal-peer` library and service.
//!
//! Every command writes deterministic output: tabular and CSV renderings use
//! two decimals for percentages and four for other reals, JSON carries full
//! double precision. Errors map onto exit codes through [`CliError::exit_code`].

use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordinal_peer::classifier::{
    diversity_table, group_table, homogeneity_group, region_profile_with, skewed_table, symmetric_table,
    BenchmarkPartition, BenchmarkPreset, ClassTable, RegionProfile,
};
use ordinal_peer::cluster::{choose_k, distance_terms, pam, silhouette_widths, DistanceMatrix, DistanceParams};
use ordinal_peer::homogeneity::{homogeneity_index, value_validity_alpha, HomogeneityConfig};
use ordinal_peer::ingest::{aggregate, parse_subunit_file, pwavgs, Issue};
use ordinal_peer::{OrdinalError, Polarization};
use ordinal_peer_service::{AppState, ServiceConfig, ServiceError};
use serde::Serialize;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for environment failures (busy port, broken output stream).
pub const EXIT_ENVIRONMENT: i32 = 1;
/// Exit code for bad input data or arguments.
pub const EXIT_INPUT: i32 = 2;

/// A command failure, classified by who has to fix it.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Environment(String),
    /// The reader of our output went away (e.g. `| head`); exits quietly.
    #[error("output closed")]
    OutputClosed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Environment(_) | CliError::OutputClosed => EXIT_ENVIRONMENT,
        }
    }
}

impl From<OrdinalError> for CliError {
    fn from(e: OrdinalError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ServiceError> for CliError {
    fn from(e: ServiceError) -> Self {
        match e {
            ServiceError::PortInUse(_) | ServiceError::Io(_) => CliError::Environment(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::OutputClosed;
        }
        CliError::Environment(format!("output error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => io.into(),
            other => CliError::Environment(format!("output error: {other:?}")),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        match e.io_error_kind() {
            Some(std::io::ErrorKind::BrokenPipe) => CliError::OutputClosed,
            _ => CliError::Environment(format!("output error: {e}")),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Output rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Benchmark partition preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Thesis,
    FilmerPritchett,
}

impl From<Preset> for BenchmarkPreset {
    fn from(p: Preset) -> Self {
        match p {
            Preset::Thesis => BenchmarkPreset::Thesis,
            Preset::FilmerPritchett => BenchmarkPreset::FilmerPritchett,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ordinal-peer", version, about = "Concentration, homogeneity and peer-group analysis of ordinal distributions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command.
#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Number of ordered categories.
    #[arg(long, global = true, default_value_t = 10)]
    pub n: usize,
    /// Weight of the divergence term in the homogeneity index.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub alpha: f64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Distance weights `w_size,w_shape,w_location` (summing to one).
    #[arg(long, global = true)]
    pub weights: Option<String>,
    /// Seed recorded with every clustering.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Benchmark partition preset.
    #[arg(long, global = true, value_enum, default_value_t = Preset::Thesis)]
    pub preset: Preset,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Profile every region of a subunit CSV.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Side-by-side profile of two regions plus their dissimilarity.
    Compare {
        #[arg(long)]
        input: PathBuf,
        a: String,
        b: String,
    },
    /// Render a classification table (2 diversity, 3 skewed, 4 symmetric, 5 groups).
    Tables { which: u8 },
    /// Value-validity check of a homogeneity measure (gjsd, gvar, glov, none).
    Validate {
        measure: String,
        #[arg(value_name = "N")]
        categories: usize,
        #[arg(value_name = "S")]
        s: f64,
    },
    /// Peer-group clustering; several `--k` values select by silhouette.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        k: Vec<usize>,
    },
    /// Run the JSON service.
    Serve {
        /// Dataset to preload.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Restrict CORS to this origin instead of allowing any.
        #[arg(long)]
        cors_origin: Option<String>,
        /// Maximum accepted dataset upload, in bytes.
        #[arg(long, default_value_t = ordinal_peer_service::DEFAULT_MAX_BODY_BYTES)]
        max_body_bytes: usize,
    },
}

/// Validated global configuration.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub n: usize,
    pub alpha: f64,
    pub preset: BenchmarkPreset,
    pub params: DistanceParams,
    pub format: Format,
    pub seed: u64,
}

impl CliConfig {
    pub fn from_opts(o: &GlobalOpts) -> CliResult<Self> {
        if o.n < 2 {
            return Err(OrdinalError::EmptyInput { min: 2, got: o.n }.into());
        }
        HomogeneityConfig::new(o.alpha, Polarization::Jsd)?;
        let params = match &o.weights {
            Some(w) => DistanceParams::parse(w)?,
            None => DistanceParams::default(),
        };
        Ok(Self {
            n: o.n,
            alpha: o.alpha,
            preset: o.preset.into(),
            params,
            format: o.format,
            seed: o.seed,
        })
    }

    fn partition(&self) -> CliResult<BenchmarkPartition> {
        Ok(BenchmarkPartition::preset(self.preset, self.n)?)
    }
}

/// Parses, validates and runs one invocation, writing results to `out` and
/// diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let cfg = CliConfig::from_opts(&cli.global)?;
    match cli.command {
        Command::Classify { input } => cmd_classify(&cfg, &input, out, err),
        Command::Compare { input, a, b } => cmd_compare(&cfg, &input, &a, &b, out, err),
        Command::Tables { which } => cmd_tables(&cfg, which, out),
        Command::Validate { measure, categories, s } => cmd_validate(&cfg, &measure, categories, s, out),
        Command::Cluster { input, k } => cmd_cluster(&cfg, &input, &k, out, err),
        Command::Serve {
            input,
            port,
            host,
            cors_origin,
            max_body_bytes,
        } => cmd_serve(&cfg, input.as_deref(), SocketAddr::new(host, port), cors_origin, max_body_bytes),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Help and usage errors are reported as input errors.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Input(e.to_string()))?;
    run(cli, out, err)
}

// ---------------------------------------------------------------------------
// Rendering

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

fn real(x: f64) -> String {
    format!("{x:.4}")
}

/// The serialized (snake_case) name of a unit enum variant.
fn label<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

/// A header plus rows of pre-formatted cells.
struct Grid {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Grid {
    fn new(headers: Vec<&'static str>) -> Self {
        Self { headers, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> CliResult<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
            _ => {
                let mut width: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
                for r in &self.rows {
                    for (w, c) in width.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| {
                    let mut s = String::new();
                    for (i, (c, w)) in cells.iter().zip(&width).enumerate() {
                        let pad = w - c.chars().count();
                        if i > 0 {
                            s.push_str("  ");
                        }
                        // Numbers right-aligned, text left-aligned.
                        if i > 0 && c.parse::<f64>().is_ok() {
                            s.push_str(&" ".repeat(pad));
                            s.push_str(c);
                        } else {
                            s.push_str(c);
                            s.push_str(&" ".repeat(pad));
                        }
                    }
                    s.trim_end().to_string()
                };
                writeln!(out, "{}", line(self.headers.clone()))?;
                for r in &self.rows {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
            }
        }
        Ok(())
    }
}

fn write_json<T: Serialize + ?Sized>(value: &T, out: &mut dyn Write) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Loading

/// Parses a subunit CSV and profiles every region. Row-level issues are
/// written to `err`; structural failures abort with an input error.
pub fn load_profiles(cfg: &CliConfig, input: &Path, err: &mut dyn Write) -> CliResult<Vec<RegionProfile>> {
    let parsed = parse_subunit_file(input, cfg.n)?;
    report_issues(&parsed.issues, err)?;
    let ds = aggregate(&parsed.records, cfg.n)?;
    let scores = match pwavgs(&ds, None) {
        Ok(s) => s,
        Err(OrdinalError::NoScores | OrdinalError::ZeroVariance) => Default::default(),
        Err(e) => return Err(e.into()),
    };
    let partition = cfg.partition()?;
    let hcfg = HomogeneityConfig::new(cfg.alpha, Polarization::Jsd)?;
    let mut profiles = Vec::with_capacity(ds.regions.len());
    for (id, r) in &ds.regions {
        let d = r.distribution()?;
        let mut p = region_profile_with(
            id,
            &d,
            r.total_population as f64,
            r.excluded_fraction(),
            scores.get(id).copied(),
            &partition,
        )?;
        if cfg.alpha != 1.0 {
            p.hi = homogeneity_index(&d, &hcfg)?;
            p.group = if cfg.n >= 6 { Some(homogeneity_group(p.hi, cfg.n)?.label) } else { None };
        }
        profiles.push(p);
    }
    Ok(profiles)
}

fn report_issues(issues: &[Issue], err: &mut dyn Write) -> CliResult<()> {
    for i in issues {
        writeln!(err, "{i}")?;
    }
    Ok(())
}

fn find<'a>(profiles: &'a [RegionProfile], id: &str) -> CliResult<&'a RegionProfile> {
    profiles
        .iter()
        .find(|p| p.id == id)
        .ok_or_else(|| OrdinalError::UnknownRegion(id.to_string()).into())
}

// ---------------------------------------------------------------------------
// Commands

pub fn cmd_classify(cfg: &CliConfig, input: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let profiles = load_profiles(cfg, input, err)?;
    if cfg.format == Format::Json {
        return write_json(&profiles, out);
    }
    let mut g = Grid::new(vec![
        "region", "population", "excluded_pct", "ci_pct", "di_pct", "hi_pct", "s", "li", "csd_pct", "group", "class",
        "typology", "benchmark", "low_pct", "mid_pct", "high_pct", "pwavgs", "decile",
    ]);
    for p in &profiles {
        g.push(vec![
            p.id.clone(),
            format!("{:.0}", p.population),
            pct(p.excluded_fraction),
            pct(p.ci),
            pct(p.di),
            pct(p.hi),
            real(p.s),
            p.li.to_string(),
            pct(p.csd),
            opt(p.group),
            opt(p.equivalence.map(|e| e.to_string())),
            opt(p.equivalence.map(|e| label(&e.typology))),
            p.benchmark.label.to_string(),
            pct(p.benchmark.low),
            pct(p.benchmark.mid),
            pct(p.benchmark.high),
            opt(p.pwavgs.map(|s| format!("{:.2}", s.standardized))),
            opt(p.pwavgs.map(|s| s.decile)),
        ]);
    }
    g.write(cfg.format, out)
}

pub fn cmd_compare(
    cfg: &CliConfig,
    input: &Path,
    a: &str,
    b: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let profiles = load_profiles(cfg, input, err)?;
    let (pa, pb) = (find(&profiles, a)?, find(&profiles, b)?);
    let terms = distance_terms(pa, pb, &cfg.params)?;
    if cfg.format == Format::Json {
        return write_json(
            &serde_json::json!({ "profiles": [pa, pb], "distance_terms": terms, "total_distance": terms.total }),
            out,
        );
    }
    let mut g = Grid::new(vec!["statistic", "a", "b"]);
    let mut row = |name: &str, f: &dyn Fn(&RegionProfile) -> String| g.push(vec![name.to_string(), f(pa), f(pb)]);
    row("region", &|p| p.id.clone());
    row("population", &|p| format!("{:.0}", p.population));
    row("ci_pct", &|p| pct(p.ci));
    row("di_pct", &|p| pct(p.di));
    row("hi_pct", &|p| pct(p.hi));
    row("li", &|p| p.li.to_string());
    row("s", &|p| real(p.s));
    row("group", &|p| opt(p.group));
    row("class", &|p| opt(p.equivalence.map(|e| e.to_string())));
    row("benchmark", &|p| p.benchmark.label.to_string());
    g.write(cfg.format, out)?;
    if cfg.format == Format::Table {
        writeln!(out)?;
    }
    let mut d = Grid::new(vec!["term", "distance"]);
    d.push(vec!["size".into(), real(terms.size)]);
    d.push(vec!["shape".into(), real(terms.shape)]);
    d.push(vec!["location".into(), real(terms.location)]);
    d.push(vec!["total".into(), real(terms.total)]);
    d.write(cfg.format, out)
}

fn class_table_grid(t: &ClassTable) -> Grid {
    let mut g = Grid::new(vec!["class", "column", "typology", "ci_pct", "s", "hi_pct", "distribution"]);
    for c in &t.cells {
        g.push(vec![
            c.class.to_string(),
            c.class.column.to_string(),
            label(&c.class.typology),
            pct(c.ci),
            real(c.s),
            pct(c.hi),
            c.distribution.probs().iter().map(|&x| real(x)).collect::<Vec<_>>().join(" "),
        ]);
    }
    g
}

pub fn cmd_tables(cfg: &CliConfig, which: u8, out: &mut dyn Write) -> CliResult<()> {
    let n = cfg.n;
    let need_ten = || -> CliResult<()> {
        if n != 10 {
            return Err(OrdinalError::UnsupportedCategoryCount { n, expected: 10 }.into());
        }
        Ok(())
    };
    let json = cfg.format == Format::Json;
    match which {
        2 => {
            let cells = diversity_table(n)?;
            if json {
                return write_json(&cells, out);
            }
            let mut g = Grid::new(vec!["class", "i", "k", "c_pct", "ci_pct", "s"]);
            for c in &cells {
                g.push(vec![
                    format!("[{},{}]", c.i, c.k),
                    c.i.to_string(),
                    c.k.to_string(),
                    pct(c.c),
                    pct(c.ci),
                    real(c.s),
                ]);
            }
            g.write(cfg.format, out)
        }
        3 | 4 => {
            need_ten()?;
            let t = if which == 3 { skewed_table() } else { symmetric_table() };
            if json {
                return write_json(t, out);
            }
            class_table_grid(t).write(cfg.format, out)
        }
        5 => {
            let rows = group_table(n)?;
            if json {
                return write_json(&rows, out);
            }
            let mut g = Grid::new(vec!["group", "hi_lower_pct", "hi_upper_pct", "guidance"]);
            for r in &rows {
                g.push(vec![
                    r.label.to_string(),
                    pct(r.lower),
                    r.upper.map(pct).unwrap_or_else(|| pct(1.0)),
                    r.guidance.clone(),
                ]);
            }
            g.write(cfg.format, out)
        }
        other => Err(CliError::Input(format!("unknown table {other}; expected 2, 3, 4 or 5"))),
    }
}

pub fn cmd_validate(cfg: &CliConfig, measure: &str, n: usize, s: f64, out: &mut dyn Write) -> CliResult<()> {
    let m = Polarization::parse(measure)
        .ok_or_else(|| CliError::Input(format!("unknown measure `{measure}`; expected gjsd, gvar, glov or none")))?;
    let r = value_validity_alpha(&m, cfg.alpha, n, s)?;
    if cfg.format == Format::Json {
        return write_json(&r, out);
    }
    let yes = |b: bool| if b { "YES" } else { "NO" }.to_string();
    let mut g = Grid::new(vec![
        "measure", "n", "s", "hi_two_point", "delta_m", "loss_hi", "loss_superior", "c1", "value_validity",
    ]);
    g.push(vec![
        r.measure.clone(),
        r.n.to_string(),
        real(r.s),
        real(r.hi_two_point),
        real(r.delta_m_abs),
        format!("{:.2}", r.loss_hi),
        format!("{:.2}", r.loss_superior),
        yes(r.c1_pass),
        yes(r.value_validity_pass),
    ]);
    g.write(cfg.format, out)
}

#[derive(Serialize)]
struct ClusterOutput<'a> {
    best_k: usize,
    silhouettes: Vec<(usize, Option<f64>)>,
    clustering: &'a ordinal_peer::cluster::Clustering,
    members: Vec<Vec<String>>,
    widths: Vec<f64>,
}

pub fn cmd_cluster(
    cfg: &CliConfig,
    input: &Path,
    ks: &[usize],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let profiles = load_profiles(cfg, input, err)?;
    let m = DistanceMatrix::from_profiles(&profiles, &cfg.params)?;
    let (chosen, silhouettes) = match ks {
        [] => return Err(CliError::Input("at least one --k is required".into())),
        [k] => {
            let c = pam(&m, *k, cfg.seed)?;
            let s = vec![(*k, c.silhouette)];
            (c, s)
        }
        _ => {
            let sel = choose_k(&m, ks, cfg.seed)?;
            let s = sel.silhouettes.iter().map(|&(k, s)| (k, Some(s))).collect();
            let c = sel
                .clusterings
                .into_iter()
                .find(|c| c.k == sel.best_k)
                .expect("best k is a candidate");
            (c, s)
        }
    };
    let widths = if chosen.k >= 2 { silhouette_widths(&m, &chosen)? } else { vec![0.0; m.len()] };
    let mut members = vec![Vec::new(); chosen.k];
    for (i, &a) in chosen.assignment.iter().enumerate() {
        members[a].push(profiles[i].id.clone());
    }
    if cfg.format == Format::Json {
        return write_json(
            &ClusterOutput {
                best_k: chosen.k,
                silhouettes,
                clustering: &chosen,
                members,
                widths,
            },
            out,
        );
    }
    if cfg.format == Format::Table {
        for (k, s) in &silhouettes {
            let mark = if *k == chosen.k { " *" } else { "" };
            writeln!(out, "k={k} silhouette={}{mark}", s.map(real).unwrap_or_else(|| "-".into()))?;
        }
        writeln!(out, "cost={} swaps={} seed={}", real(chosen.cost), chosen.swaps, chosen.seed)?;
        writeln!(out)?;
    }
    let mut g = Grid::new(vec!["region", "cluster", "medoid", "silhouette"]);
    for (i, p) in profiles.iter().enumerate() {
        let c = chosen.assignment[i];
        g.push(vec![p.id.clone(), (c + 1).to_string(), chosen.medoid_ids[c].clone(), real(widths[i])]);
    }
    g.write(cfg.format, out)
}

pub fn cmd_serve(
    cfg: &CliConfig,
    input: Option<&Path>,
    addr: SocketAddr,
    cors_origin: Option<String>,
    max_body_bytes: usize,
) -> CliResult<()> {
    let scfg = ServiceConfig {
        n: cfg.n,
        params: cfg.params,
        partition: cfg.partition()?,
        max_body_bytes,
        cors_origin,
    };
    scfg.validate()?;
    let state = match input {
        Some(path) => {
            let bytes = std::fs::read(path)
                .map_err(|e| OrdinalError::UnreadableFile(format!("{}: {e}", path.display())))?;
            AppState::with_dataset(scfg, &bytes)?
        }
        None => AppState::new(scfg),
    };
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::Environment(format!("cannot start runtime: {e}")))?;
    tracing::info!(%addr, "serving");
    rt.block_on(ordinal_peer_service::serve(addr, state))?;
    Ok(())
}
