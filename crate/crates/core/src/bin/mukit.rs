use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mukit::data::{DataMatrix, LabelVector, ParamVector};
use mukit::datagen::{format_real, gen_synthetic, load_csv, write_csv_to, ColumnRef, CsvSchema, FeatureSelect, SyntheticSpec};
use mukit::error::{MuError, Result};
use mukit::experiment::{
    mu_token, parse_search, render_svg, run_experiment, DataSource, ExperimentConfig, FlatConfig, Method, ResultRow,
    CSV_HEADER,
};
use mukit::lowrank::{additive_bound, loss_gap, truncated_svd};
use mukit::mu_exact::compute_mu_exact;
use mukit::mu_oracle::mu_bruteforce;
use mukit::mu_sketch::{approx_mu_bounds, SketchConfig};
use mukit::verify::{verify_all, VerifyConfig};

#[derive(Parser)]
#[command(name = "mukit", version, about = "Compute and bound the mu-complexity of labelled data")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact mu through the linear program.
    MuExact {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lower and upper bounds from a Cauchy sketch.
    MuApprox {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        n_prime: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// auto, milp, orthants or descent.
        #[arg(long, default_value = "auto")]
        search: String,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        upper_factor: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Brute-force mu for tiny inputs.
    MuOracle {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Truncated SVD and the additive loss bound for a parameter vector.
    Lowrank {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        rank: usize,
        /// Comma-separated parameter vector; defaults to all ones.
        #[arg(long)]
        beta: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Numerical checks of the hardness constructions.
    VerifyConstructions {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        instances: u64,
        #[arg(long, default_value_t = 1000)]
        probes: usize,
        #[arg(long, default_value_t = 256)]
        index_n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Synthetic logistic data as CSV.
    GenData {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        noise_std: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact and sketched mu over a grid of sketch sizes and seeds.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    input: PathBuf,
    /// Header name, or a zero-based index with --no-header.
    #[arg(long, default_value = "label")]
    label_column: String,
    #[arg(long, default_value = "1")]
    positive_label: String,
    #[arg(long, default_value = "-1")]
    negative_label: String,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    #[arg(long)]
    no_header: bool,
    /// Drop columns that do not parse as numbers.
    #[arg(long)]
    numeric_only: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat JSON file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long)]
    subsample: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Seed of the synthetic data and of the subsample.
    #[arg(long)]
    data_seed: Option<u64>,
    /// First sketch seed; `--num-seeds` consecutive seeds are used.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    num_seeds: Option<u64>,
    /// Sketch size; repeat for several.
    #[arg(long)]
    n_prime: Vec<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    search: Option<String>,
    #[arg(long)]
    no_exact_full: bool,
    #[arg(long)]
    no_exact_sketched: bool,
    /// Record wall-clock milliseconds instead of 0.
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn schema_from(label: &str, pos: &str, neg: &str, delimiter: char, has_header: bool, numeric: bool) -> Result<CsvSchema> {
    if !delimiter.is_ascii() {
        return Err(MuError::InvalidInput(format!("delimiter {delimiter:?} is not ASCII")));
    }
    let label_column = match (has_header, label.parse::<usize>()) {
        (false, Ok(i)) => ColumnRef::Index(i),
        (false, Err(_)) => return Err(MuError::InvalidInput("without a header the label column must be an index".into())),
        (true, _) => ColumnRef::Name(label.into()),
    };
    Ok(CsvSchema {
        label_column,
        positive_label: pos.into(),
        negative_label: neg.into(),
        delimiter: delimiter as u8,
        has_header,
        features: if numeric { FeatureSelect::Numeric } else { FeatureSelect::All },
    })
}

impl DataArgs {
    fn load(&self) -> Result<(DataMatrix, LabelVector)> {
        let schema = schema_from(
            &self.label_column,
            &self.positive_label,
            &self.negative_label,
            self.delimiter,
            !self.no_header,
            self.numeric_only,
        )?;
        load_csv(&self.input, &schema)
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_pairs(out: &OutArgs, pairs: &[(&str, String)], json: serde_json::Value) -> Result<()> {
    let text = match out.format {
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in pairs {
                s += &format!("{k},{v}\n");
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&json).expect("json value") + "\n",
    };
    emit(out.output.as_deref(), &text)
}

fn beta_token(beta: &ParamVector) -> String {
    beta.as_slice().iter().map(|v| format_real(*v)).collect::<Vec<_>>().join(";")
}

fn finite_or_token(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(mu_token(Some(v)))
    }
}

fn experiment_config(args: &ExperimentArgs) -> Result<(ExperimentConfig, Format, Option<PathBuf>, Option<PathBuf>)> {
    let flat = match &args.config {
        Some(p) => FlatConfig::from_json(&fs::read_to_string(p)?)?,
        None => FlatConfig::default(),
    };
    let data_seed = args.data_seed.or(flat.data_seed).unwrap_or(0);
    let source = match args.input.clone().or(flat.input.clone()) {
        Some(path) => DataSource::Csv {
            path,
            schema: schema_from(
                args.label_column.as_deref().or(flat.label_column.as_deref()).unwrap_or("label"),
                flat.positive_label.as_deref().unwrap_or("1"),
                flat.negative_label.as_deref().unwrap_or("-1"),
                flat.delimiter.unwrap_or(','),
                !flat.no_header.unwrap_or(false),
                flat.numeric_only.unwrap_or(false),
            )?,
            subsample: args.subsample.or(flat.subsample),
            subsample_seed: data_seed,
        },
        None => {
            let n = args.n.or(flat.n).unwrap_or(2000);
            let d = args.d.or(flat.d).unwrap_or(20);
            DataSource::Synthetic(SyntheticSpec::new(n, d, data_seed).with_noise(flat.noise_std.unwrap_or(1.0)))
        }
    };
    let sketch_sizes = if !args.n_prime.is_empty() {
        args.n_prime.clone()
    } else if let Some(v) = flat.sketch_sizes.clone() {
        v
    } else {
        flat.n_prime.map(|v| vec![v]).unwrap_or_else(|| vec![128, 256, 512])
    };
    let seeds = match (args.seed.or(flat.seed), args.num_seeds.or(flat.num_seeds), &flat.seeds) {
        (None, None, Some(list)) => list.clone(),
        (first, count, _) => {
            let first = first.unwrap_or(0);
            (first..first + count.unwrap_or(20)).collect()
        }
    };
    let search = match args.search.as_deref().or(flat.search.as_deref()) {
        Some(name) => parse_search(name, flat.starts)?,
        None => mukit::mu_sketch::SignSearch::Auto,
    };
    let cfg = ExperimentConfig {
        source,
        sketch_sizes,
        seeds,
        delta: args.delta.or(flat.delta).unwrap_or(0.1),
        exact_full: !args.no_exact_full && flat.exact_full.unwrap_or(true),
        exact_sketched: !args.no_exact_sketched && flat.exact_sketched.unwrap_or(true),
        search,
        upper_factor: flat.upper_factor,
        timing: args.timing || flat.timing.unwrap_or(false),
    };
    let format = match args.format {
        Some(f) => f,
        None => match flat.format.as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(MuError::InvalidInput(format!("unknown format {other:?}"))),
        },
    };
    Ok((cfg, format, args.output.clone().or(flat.output), args.svg.clone().or(flat.svg)))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::MuExact { data, out } => {
            let (x, y) = data.load()?;
            let r = compute_mu_exact(&x, &y, 1.0)?;
            let row = ResultRow {
                method: Method::ExactFull,
                n_prime: x.nrows(),
                seed: None,
                mu_value: Some(r.mu),
                wall_ms: 0,
                error: None,
            };
            let text = match out.format {
                Format::Csv => format!("{CSV_HEADER}\n{}\n", row.csv_line()),
                Format::Json => {
                    serde_json::to_string_pretty(&json!({
                        "mu": finite_or_token(r.mu),
                        "beta_star": r.beta_star.as_slice(),
                        "positive_mass": r.masses.pos,
                        "negative_mass": r.masses.neg,
                    }))
                    .expect("json value")
                        + "\n"
                }
            };
            emit(out.output.as_deref(), &text)?;
        }
        Cmd::MuApprox {
            data,
            n_prime,
            delta,
            seed,
            search,
            starts,
            upper_factor,
            out,
        } => {
            let (x, y) = data.load()?;
            let cfg = SketchConfig {
                search: parse_search(&search, starts)?,
                upper_factor,
                ..SketchConfig::new(n_prime, delta, seed)
            };
            let b = approx_mu_bounds(&x, &y, &cfg)?;
            let text = match out.format {
                Format::Csv => {
                    let rows = [(Method::ApprSketchedLower, b.lower), (Method::ApprSketchedUpper, b.upper)];
                    let mut s = format!("{CSV_HEADER}\n");
                    for (method, v) in rows {
                        let row = ResultRow {
                            method,
                            n_prime,
                            seed: Some(seed),
                            mu_value: Some(v),
                            wall_ms: 0,
                            error: None,
                        };
                        s += &format!("{}\n", row.csv_line());
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&json!({
                    "lower": finite_or_token(b.lower),
                    "upper": finite_or_token(b.upper),
                    "t": b.t,
                    "upper_factor": b.upper_factor,
                    "alpha": b.alpha,
                    "beta_bound": b.beta_bound,
                    "certified": b.certified,
                    "nodes": b.nodes,
                    "sketch_seed": b.sketch_seed,
                    "caveat": mukit::experiment::UPPER_CAVEAT,
                }))
                .expect("json value")
                    + "\n",
            };
            emit(out.output.as_deref(), &text)?;
        }
        Cmd::MuOracle { data, out } => {
            let (x, y) = data.load()?;
            let r = mu_bruteforce(&x, &y)?;
            emit_pairs(
                &out,
                &[("mu", mu_token(Some(r.mu))), ("beta", beta_token(&r.beta_star))],
                json!({ "mu": finite_or_token(r.mu), "beta_star": r.beta_star.as_slice() }),
            )?;
        }
        Cmd::Lowrank { data, rank, beta, out } => {
            let (x, _) = data.load()?;
            let beta = match beta {
                Some(s) => ParamVector::new(
                    s.split(',')
                        .map(|t| t.trim().parse::<f64>().map_err(|e| MuError::InvalidInput(format!("beta entry {t:?}: {e}"))))
                        .collect::<Result<Vec<_>>>()?,
                )?,
                None => ParamVector::new(vec![1.0; x.ncols()])?,
            };
            let a = truncated_svd(&x, rank)?;
            let gap = loss_gap(&x, &a.x_tilde, &beta)?;
            let bound = additive_bound(&x, &a.x_tilde, &beta)?;
            emit_pairs(
                &out,
                &[
                    ("rank", rank.to_string()),
                    ("spectral_error", format_real(a.spectral_error)),
                    ("loss_gap", format_real(gap)),
                    ("bound", format_real(bound)),
                ],
                json!({
                    "rank": rank,
                    "spectral_error": a.spectral_error,
                    "singular_values": a.singular_values,
                    "loss_gap": gap,
                    "bound": bound,
                }),
            )?;
        }
        Cmd::VerifyConstructions {
            seed,
            instances,
            probes,
            index_n,
            out,
        } => {
            let cfg = VerifyConfig {
                seed,
                instances,
                probes,
                index_n,
                ..VerifyConfig::default()
            };
            let suites = verify_all(&cfg)?;
            let text = match out.format {
                Format::Csv => {
                    let mut s = String::from("suite,passed,checks,failures,worst\n");
                    for r in &suites {
                        s += &format!("{},{},{},{},{}\n", r.name, r.passed, r.checks, r.failures, format_real(r.worst));
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&suites).expect("json value") + "\n",
            };
            for r in &suites {
                eprintln!("{}", r.line());
            }
            emit(out.output.as_deref(), &text)?;
            return Ok(suites.iter().all(|r| r.passed));
        }
        Cmd::GenData {
            n,
            d,
            seed,
            noise_std,
            output,
        } => {
            let (x, y, _) = gen_synthetic(&SyntheticSpec::new(n, d, seed).with_noise(noise_std))?;
            let mut buf = Vec::new();
            write_csv_to(&mut buf, &x, &y)?;
            emit(output.as_deref(), &String::from_utf8(buf).expect("ascii csv"))?;
        }
        Cmd::Experiment(args) => {
            let (cfg, format, output, svg) = experiment_config(&args)?;
            let result = run_experiment(&cfg)?;
            let text = match format {
                Format::Csv => result.to_csv_string(),
                Format::Json => result.to_json()? + "\n",
            };
            emit(output.as_deref(), &text)?;
            if let Some(p) = svg {
                fs::write(p, render_svg(&result))?;
            }
            for r in result.rows.iter().filter(|r| !r.succeeded()) {
                eprintln!(
                    "failed: {} n'={} seed={:?}: {}",
                    r.method,
                    r.n_prime,
                    r.seed,
                    r.error.as_deref().unwrap_or("")
                );
            }
            return Ok(result.all_succeeded());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
