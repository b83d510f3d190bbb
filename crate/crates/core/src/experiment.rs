//! Exact μ on the full data and on sketches, against the sketched bounds,
//! over a grid of sketch sizes and seeds.
//!
//! Cells run on a rayon pool sized by `MUKIT_THREADS` and are emitted in
//! `(n', seed)` order. `wall_ms` is written as 0 unless timing is requested,
//! which keeps reruns byte-identical.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{standardize, DataMatrix, LabelVector, SignedData};
use crate::datagen::{balanced_subsample, format_real, gen_synthetic, load_csv, CsvSchema, SyntheticSpec};
use crate::error::{MuError, Result};
use crate::mu_exact::compute_mu_exact_signed;
use crate::mu_sketch::{approx_mu_bounds_signed, sketched_signed, MuBounds, SignSearch, SketchConfig};

pub const CSV_HEADER: &str = "method,n_prime,seed,mu_value,wall_ms";
pub const UPPER_CAVEAT: &str =
    "upper bound is the lower bound times d*ln(d/delta); the guarantee holds only up to a constant factor";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DataSource {
    Synthetic(SyntheticSpec),
    Csv {
        path: PathBuf,
        schema: CsvSchema,
        /// Balanced subsample size, if any.
        subsample: Option<usize>,
        subsample_seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: DataSource,
    pub sketch_sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub delta: f64,
    pub exact_full: bool,
    pub exact_sketched: bool,
    pub search: SignSearch,
    pub upper_factor: Option<f64>,
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn synthetic(spec: SyntheticSpec, sketch_sizes: Vec<usize>, seeds: Vec<u64>) -> Self {
        Self {
            source: DataSource::Synthetic(spec),
            sketch_sizes,
            seeds,
            delta: 0.1,
            exact_full: true,
            exact_sketched: true,
            search: SignSearch::Auto,
            upper_factor: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sketch_sizes.is_empty() || self.seeds.is_empty() {
            return Err(MuError::InvalidInput("need at least one sketch size and one seed".into()));
        }
        Ok(())
    }

    pub fn sketch_config(&self, n_prime: usize, seed: u64) -> SketchConfig {
        SketchConfig {
            search: self.search,
            upper_factor: self.upper_factor,
            ..SketchConfig::new(n_prime, self.delta, seed)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ExactFull,
    ExactSketched,
    ApprSketchedLower,
    ApprSketchedUpper,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactFull => "ExactFull",
            Method::ExactSketched => "ExactSketched",
            Method::ApprSketchedLower => "ApprSketchedLower",
            Method::ApprSketchedUpper => "ApprSketchedUpper",
        })
    }
}

/// One output line. `mu_value` is `None` when the computation failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: Method,
    /// Row count used; the full `n` for `ExactFull`.
    pub n_prime: usize,
    /// Sketch seed; absent for `ExactFull`.
    pub seed: Option<u64>,
    #[serde(serialize_with = "ser_mu", deserialize_with = "de_mu")]
    pub mu_value: Option<f64>,
    pub wall_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// `inf`, a 17-digit real, or `failed`.
pub fn mu_token(v: Option<f64>) -> String {
    match v {
        None => "failed".into(),
        Some(x) if x == f64::INFINITY => "inf".into(),
        Some(x) => format_real(x),
    }
}

pub fn parse_mu_token(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "failed" => None,
        other => other.parse().ok(),
    }
}

fn ser_mu<S: serde::Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) if x.is_finite() => s.serialize_f64(*x),
        other => s.serialize_str(&mu_token(*other)),
    }
}

fn de_mu<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    Ok(match Raw::deserialize(d)? {
        Raw::Num(x) => Some(x),
        Raw::Text(t) => parse_mu_token(&t),
    })
}

impl ResultRow {
    pub fn succeeded(&self) -> bool {
        self.mu_value.is_some()
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.method,
            self.n_prime,
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            mu_token(self.mu_value),
            self.wall_ms
        )
    }
}

/// Per-cell diagnostics of the sketched bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDetail {
    pub n_prime: usize,
    pub seed: u64,
    pub bounds: Option<MuBounds>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub upper_factor: f64,
    pub caveat: String,
    pub search: SignSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub metadata: Metadata,
    pub rows: Vec<ResultRow>,
    pub cells: Vec<CellDetail>,
}

impl ExperimentOutput {
    pub fn all_succeeded(&self) -> bool {
        self.rows.iter().all(ResultRow::succeeded)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(w, "{}", r.csv_line())?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| MuError::InvalidInput(e.to_string()))
    }

    pub fn values(&self, method: Method) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(move |r| r.method == method)
    }
}

pub fn load_source(source: &DataSource) -> Result<(DataMatrix, LabelVector)> {
    match source {
        DataSource::Synthetic(spec) => gen_synthetic(spec).map(|(x, y, _)| (x, y)),
        DataSource::Csv {
            path,
            schema,
            subsample,
            subsample_seed,
        } => {
            let (x, y) = load_csv(path, schema)?;
            match subsample {
                Some(m) => balanced_subsample(&x, &y, *m, *subsample_seed),
                None => Ok((x, y)),
            }
        }
    }
}

/// Thread count from `MUKIT_THREADS`, else the hardware count.
pub fn thread_count() -> usize {
    std::env::var("MUKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    (out, ms)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let (x, y) = load_source(&cfg.source)?;
    let a = standardize(&x, &y)?;
    run_experiment_on(cfg, &a)
}

/// Runs the grid on already-standardized data; `cfg.source` is ignored.
pub fn run_experiment_on(cfg: &ExperimentConfig, a: &SignedData) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let (n, d) = (a.nrows(), a.ncols());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| MuError::InvalidInput(format!("thread pool: {e}")))?;

    let mut rows = Vec::new();
    if cfg.exact_full {
        let (res, ms) = timed(cfg.timing, || compute_mu_exact_signed(a, 1.0));
        rows.push(row(Method::ExactFull, n, None, res.map(|r| r.mu), ms));
    }

    let grid: Vec<(usize, u64)> = cfg
        .sketch_sizes
        .iter()
        .flat_map(|&np| cfg.seeds.iter().map(move |&s| (np, s)))
        .collect();
    let cells: Vec<(Vec<ResultRow>, CellDetail)> = pool.install(|| {
        grid.par_iter()
            .map(|&(np, seed)| run_cell(cfg, a, np, seed))
            .collect()
    });
    let mut details = Vec::with_capacity(cells.len());
    for (r, detail) in cells {
        rows.extend(r);
        details.push(detail);
    }
    Ok(ExperimentOutput {
        metadata: Metadata {
            n,
            d,
            delta: cfg.delta,
            upper_factor: cfg.sketch_config(d.max(1), 0).factor(d),
            caveat: UPPER_CAVEAT.into(),
            search: cfg.search,
        },
        rows,
        cells: details,
    })
}

fn row(method: Method, n_prime: usize, seed: Option<u64>, res: Result<f64>, wall_ms: u64) -> ResultRow {
    let (mu_value, error) = match res {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    ResultRow {
        method,
        n_prime,
        seed,
        mu_value,
        wall_ms,
        error,
    }
}

fn run_cell(cfg: &ExperimentConfig, a: &SignedData, n_prime: usize, seed: u64) -> (Vec<ResultRow>, CellDetail) {
    let sk = cfg.sketch_config(n_prime, seed);
    let mut rows = Vec::with_capacity(3);
    if cfg.exact_sketched {
        let (res, ms) = timed(cfg.timing, || {
            sketched_signed(a, &sk).and_then(|s| compute_mu_exact_signed(&s, 1.0)).map(|r| r.mu)
        });
        rows.push(row(Method::ExactSketched, n_prime, Some(seed), res, ms));
    }
    let (bounds, ms) = timed(cfg.timing, || approx_mu_bounds_signed(a, &sk));
    let (lower, upper) = match &bounds {
        Ok(b) => (Ok(b.lower), Ok(b.upper)),
        Err(e) => (
            Err(MuError::InvalidInput(e.to_string())),
            Err(MuError::InvalidInput(e.to_string())),
        ),
    };
    rows.push(row(Method::ApprSketchedLower, n_prime, Some(seed), lower, ms));
    rows.push(row(Method::ApprSketchedUpper, n_prime, Some(seed), upper, ms));
    (
        rows,
        CellDetail {
            n_prime,
            seed,
            bounds: bounds.ok(),
        },
    )
}

/// Log-scale line chart of the per-`n'` mean of each method.
pub fn render_svg(out: &ExperimentOutput) -> String {
    let (w, h, pad) = (640.0, 400.0, 60.0);
    let mut sizes: Vec<usize> = out.cells.iter().map(|c| c.n_prime).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let methods = [
        (Method::ExactFull, "#000000"),
        (Method::ExactSketched, "#1f77b4"),
        (Method::ApprSketchedLower, "#2ca02c"),
        (Method::ApprSketchedUpper, "#d62728"),
    ];
    let mean_at = |m: Method, np: usize| -> Option<f64> {
        let vals: Vec<f64> = out
            .values(m)
            .filter(|r| m == Method::ExactFull || r.n_prime == np)
            .filter_map(|r| r.mu_value)
            .filter(|v| v.is_finite() && *v > 0.0)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    };
    let series: Vec<(Method, &str, Vec<(usize, f64)>)> = methods
        .iter()
        .map(|&(m, color)| (m, color, sizes.iter().filter_map(|&np| mean_at(m, np).map(|v| (np, v))).collect()))
        .collect();
    let all: Vec<f64> = series.iter().flat_map(|s| s.2.iter().map(|p| p.1.log10())).collect();
    let (lo, hi) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let (lo, hi) = if all.is_empty() { (0.0, 1.0) } else { (lo.floor(), hi.ceil().max(lo.floor() + 1.0)) };
    let xs = |i: usize| pad + (w - 2.0 * pad) * if sizes.len() > 1 { i as f64 / (sizes.len() - 1) as f64 } else { 0.5 };
    let ys = |v: f64| h - pad - (h - 2.0 * pad) * (v.log10() - lo) / (hi - lo);

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    s += &format!(
        "<rect x=\"{pad}\" y=\"{pad}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    for e in (lo as i32)..=(hi as i32) {
        let y = ys(10f64.powi(e));
        s += &format!("<text x=\"{}\" y=\"{y:.1}\" text-anchor=\"end\">1e{e}</text>\n", pad - 6.0);
    }
    for (i, np) in sizes.iter().enumerate() {
        s += &format!("<text x=\"{:.1}\" y=\"{}\" text-anchor=\"middle\">{np}</text>\n", xs(i), h - pad + 18.0);
    }
    s += &format!("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">n'</text>\n", w / 2.0, h - 12.0);
    for (k, (m, color, pts)) in series.iter().enumerate() {
        let coords: Vec<String> = pts
            .iter()
            .map(|(np, v)| {
                let i = sizes.iter().position(|s| s == np).unwrap_or(0);
                format!("{:.1},{:.1}", xs(i), ys(*v))
            })
            .collect();
        if !coords.is_empty() {
            s += &format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
                coords.join(" ")
            );
        }
        s += &format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{m}</text>\n",
            w - pad - 130.0,
            pad + 16.0 + 16.0 * k as f64
        );
    }
    s += "</svg>\n";
    s
}

/// Flat key-value configuration file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatConfig {
    pub input: Option<PathBuf>,
    pub label_column: Option<String>,
    pub positive_label: Option<String>,
    pub negative_label: Option<String>,
    pub delimiter: Option<char>,
    pub no_header: Option<bool>,
    pub numeric_only: Option<bool>,
    pub subsample: Option<usize>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub noise_std: Option<f64>,
    pub data_seed: Option<u64>,
    pub seed: Option<u64>,
    pub sketch_sizes: Option<Vec<usize>>,
    pub n_prime: Option<usize>,
    pub seeds: Option<Vec<u64>>,
    pub num_seeds: Option<u64>,
    pub delta: Option<f64>,
    pub exact_full: Option<bool>,
    pub exact_sketched: Option<bool>,
    pub search: Option<String>,
    pub starts: Option<usize>,
    pub upper_factor: Option<f64>,
    pub timing: Option<bool>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub svg: Option<PathBuf>,
}

impl FlatConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| MuError::InvalidInput(format!("config: {e}")))
    }
}

/// Parses `auto`, `milp`, `orthants` or `descent` (with `starts`).
pub fn parse_search(name: &str, starts: Option<usize>) -> Result<SignSearch> {
    match name {
        "auto" => Ok(SignSearch::Auto),
        "milp" => Ok(SignSearch::Milp),
        "orthants" => Ok(SignSearch::Orthants),
        "descent" => Ok(SignSearch::Descent {
            starts: starts.unwrap_or(crate::mu_sketch::DEFAULT_STARTS),
        }),
        other => Err(MuError::InvalidInput(format!("unknown sign search {other:?}"))),
    }
}
