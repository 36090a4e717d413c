//! `cet` — batch frontend for the copula-entropy toolkit.
//!
//! Every subcommand reads a CSV, delegates to the library, and emits one
//! report (JSON or CSV) on stdout or into `--output`. The CLI itself never
//! computes anything, so its numbers equal direct library calls bit for bit.
//!
//! Exit codes: 0 success, 2 usage error (bad flags, bad column addressing,
//! out-of-range lags), 3 data error (unreadable file, parse failure,
//! degenerate ties without --jitter). Diagnostics are a single stderr line
//! starting with `error[usage]:` or `error[data]:`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndarray::s;

use cet_core::{
    ci, jitter_average, jittered_copent, lag_scan, rank_features, transent, ColumnSelector,
    ConfigEcho, EstimatorConfig, IngestOptions, InputEcho, JitterEcho, JitterPolicy, LoadedCsv,
    NaPolicy, Norm, Payload, Report, ReportFormat, SampleMatrix, SeriesPair, DIRECTION_Y_TO_X,
};

/// Relative `--input` paths that do not exist in the working directory are
/// retried against this directory.
const DATA_DIR_ENV: &str = "CET_DATA_DIR";

#[derive(Parser)]
#[command(
    name = "cet",
    version,
    about = "Nonparametric dependence estimation over CSV data",
    long_about = "Nonparametric dependence estimation over CSV data: copula entropy \
                  (mutual information), conditional-independence strength, transfer \
                  entropy, and dependence-ranked variable selection.\n\n\
                  Columns are addressed by 1-based index or by header name. Relative \
                  --input paths fall back to $CET_DATA_DIR when not found locally."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joint dependence (negative copula entropy) of two or more columns
    Copent(CopentArgs),
    /// Conditional dependence of x and y given one or more z columns (0 = independent)
    Ci(CiArgs),
    /// Transfer entropy from candidate cause --y to --x at one lag
    Transent(TransentArgs),
    /// Transfer entropy from --y to --x over every lag 1..=max-lag
    Lagscan(LagscanArgs),
    /// Rank feature columns by dependence with a target and select a subset
    Select(SelectArgs),
}

#[derive(Args)]
struct CommonOpts {
    /// Input CSV path (relative paths also resolve against $CET_DATA_DIR)
    #[arg(long, value_name = "FILE")]
    input: PathBuf,

    /// Neighbor order of the entropy estimator
    #[arg(long, default_value_t = 3)]
    k: usize,

    /// Distance norm for neighbor search
    #[arg(long, value_enum, default_value_t = NormArg::Max)]
    norm: NormArg,

    /// Field delimiter (single ASCII character)
    #[arg(long, default_value_t = ',')]
    delimiter: char,

    /// Treat the first row as data instead of a header; columns are then
    /// addressed as c1..cN or by index
    #[arg(long)]
    no_header: bool,

    /// Token treated as a missing value (repeatable; default: "NA" and empty)
    #[arg(long = "na-token", value_name = "TOKEN")]
    na_tokens: Vec<String>,

    /// What to do with rows containing missing values
    #[arg(long, value_enum, default_value_t = NaPolicyArg::Drop)]
    na_policy: NaPolicyArg,

    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct JitterOpts {
    /// Average over tiny seeded perturbations of the data; resolves
    /// degenerate ties in discrete columns
    #[arg(long)]
    jitter: bool,

    /// Number of perturbed replicates to average
    #[arg(long, default_value_t = 50)]
    repeats: usize,

    /// Perturbation amplitude relative to each column's magnitude
    #[arg(long, default_value_t = 1e-6)]
    scale: f64,

    /// RNG seed for the perturbations
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct CopentArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    jitter: JitterOpts,
    /// Columns to use (two or more, comma separated)
    #[arg(long, value_delimiter = ',', value_name = "COL,COL,...", required = true)]
    cols: Vec<String>,
}

#[derive(Args)]
struct CiArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    jitter: JitterOpts,
    /// First variable
    #[arg(long, value_name = "COL")]
    x: String,
    /// Second variable
    #[arg(long, value_name = "COL")]
    y: String,
    /// Conditioning column(s), comma separated
    #[arg(long, value_delimiter = ',', value_name = "COL,...", required = true)]
    z: Vec<String>,
}

#[derive(Args)]
struct TransentArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    jitter: JitterOpts,
    /// Effect series
    #[arg(long, value_name = "COL")]
    x: String,
    /// Candidate cause series (direction is y→x)
    #[arg(long, value_name = "COL")]
    y: String,
    /// Time lag in rows (≥ 1)
    #[arg(long)]
    lag: usize,
}

#[derive(Args)]
struct LagscanArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    jitter: JitterOpts,
    /// Effect series
    #[arg(long, value_name = "COL")]
    x: String,
    /// Candidate cause series (direction is y→x)
    #[arg(long, value_name = "COL")]
    y: String,
    /// Scan lags 1..=max-lag
    #[arg(long = "max-lag")]
    max_lag: usize,
}

#[derive(Args)]
#[command(group(
    clap::ArgGroup::new("cut").required(true).args(["threshold_feature", "top"])
))]
struct SelectArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Target column; with --cols it is resolved inside the projection, so
    /// prefer names over indices there
    #[arg(long, value_name = "COL")]
    target: String,
    /// Restrict candidates to these columns (must include the target);
    /// default: every column in the file
    #[arg(long, value_delimiter = ',', value_name = "COL,...")]
    cols: Option<Vec<String>>,
    /// Select every feature scoring at least as high as this one
    #[arg(long = "threshold-feature", value_name = "COL")]
    threshold_feature: Option<String>,
    /// Select the q highest-scoring features
    #[arg(long, value_name = "Q")]
    top: Option<usize>,
    /// Number of perturbed replicates per score (scores are always jittered;
    /// clinical-style integer codes are tie-heavy)
    #[arg(long, default_value_t = 50)]
    repeats: usize,
    /// Perturbation amplitude relative to each column's magnitude
    #[arg(long, default_value_t = 1e-6)]
    scale: f64,
    /// RNG seed for the perturbations
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    Max,
    Euclidean,
}

impl From<NormArg> for Norm {
    fn from(v: NormArg) -> Norm {
        match v {
            NormArg::Max => Norm::MaxNorm,
            NormArg::Euclidean => Norm::Euclidean,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NaPolicyArg {
    Drop,
    Fail,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

enum CliError {
    Usage(String),
    Data(String),
    Core(cet_core::Error),
}

impl From<cet_core::Error> for CliError {
    fn from(e: cet_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Core(e) => {
                if e.is_data_error() {
                    3
                } else {
                    2
                }
            }
        }
    }

    fn prefix(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(_) => "data",
            CliError::Core(e) => {
                if e.is_data_error() {
                    "data"
                } else {
                    "usage"
                }
            }
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    let first = e.to_string();
                    let first = first.lines().next().unwrap_or("invalid arguments");
                    let stripped = first.strip_prefix("error: ").unwrap_or(first);
                    eprintln!("error[usage]: {stripped} (run with --help for usage)");
                    std::process::exit(2);
                }
            }
        }
    };

    if let Err(e) = run(cli.command) {
        eprintln!("error[{}]: {}", e.prefix(), e);
        std::process::exit(e.exit_code());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Copent(args) => run_copent(args),
        Command::Ci(args) => run_ci(args),
        Command::Transent(args) => run_transent(args),
        Command::Lagscan(args) => run_lagscan(args),
        Command::Select(args) => run_select(args),
    }
}

/// Relative inputs missing from the working directory are retried against
/// $CET_DATA_DIR, so fixture-heavy scripts can set it once.
fn resolve_input(path: &Path) -> PathBuf {
    if path.is_absolute() || path.exists() {
        return path.to_path_buf();
    }
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        if !dir.is_empty() {
            let joined = PathBuf::from(dir).join(path);
            if joined.exists() {
                return joined;
            }
        }
    }
    path.to_path_buf()
}

fn ingest_options(
    common: &CommonOpts,
    columns: Option<Vec<ColumnSelector>>,
) -> Result<IngestOptions, CliError> {
    if !common.delimiter.is_ascii() {
        return Err(CliError::usage(format!(
            "delimiter {:?} is not a single ASCII character",
            common.delimiter
        )));
    }
    let defaults = IngestOptions::default();
    Ok(IngestOptions {
        delimiter: common.delimiter as u8,
        has_header: !common.no_header,
        na_tokens: if common.na_tokens.is_empty() {
            defaults.na_tokens
        } else {
            common.na_tokens.clone()
        },
        na_policy: match common.na_policy {
            NaPolicyArg::Drop => NaPolicy::DropRows,
            NaPolicyArg::Fail => NaPolicy::Fail,
        },
        columns,
    })
}

fn load(common: &CommonOpts, columns: Option<Vec<ColumnSelector>>) -> Result<(LoadedCsv, PathBuf), CliError> {
    let path = resolve_input(&common.input);
    // the csv reader folds open() failures into its own error type, so name
    // the file ourselves while we still know which path was meant
    if let Err(io) = std::fs::metadata(&path) {
        return Err(CliError::Data(format!("cannot read {}: {io}", path.display())));
    }
    let options = ingest_options(common, columns)?;
    let loaded = cet_core::load_csv(&path, &options)?;
    Ok((loaded, path))
}

fn selectors(tokens: &[String]) -> Vec<ColumnSelector> {
    tokens.iter().map(|t| t.parse().expect("selector parsing is infallible")).collect()
}

fn estimator_config(common: &CommonOpts) -> EstimatorConfig {
    EstimatorConfig { k: common.k, norm: common.norm.into() }
}

fn jitter_policy(j: &JitterOpts) -> JitterPolicy {
    JitterPolicy { repeats: j.repeats, scale: j.scale, seed: j.seed }
}

fn config_echo(common: &CommonOpts, jitter: Option<&JitterPolicy>) -> ConfigEcho {
    ConfigEcho {
        k: common.k,
        norm: Norm::from(common.norm).to_string(),
        seed: jitter.map(|p| p.seed),
        jitter: jitter.map(|p| JitterEcho { repeats: p.repeats, scale: p.scale }),
    }
}

fn input_echo(loaded: &LoadedCsv, path: &Path) -> InputEcho {
    let names = loaded
        .matrix
        .column_names()
        .map(|n| n.to_vec())
        .unwrap_or_else(|| (1..=loaded.matrix.ncols()).map(|i| format!("c{i}")).collect());
    InputEcho {
        source: path.display().to_string(),
        rows: loaded.matrix.nrows(),
        cols: loaded.matrix.ncols(),
        dropped_rows: loaded.dropped_rows,
        columns: names,
    }
}

fn emit(report: &Report, common: &CommonOpts) -> Result<(), CliError> {
    let format = match common.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
    };
    match &common.output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(cet_core::Error::from)?;
            let mut writer = std::io::BufWriter::new(file);
            cet_core::write_report(report, format, &mut writer)?;
            writer.flush().map_err(cet_core::Error::from)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            cet_core::write_report(report, format, &mut lock)?;
            lock.flush().map_err(cet_core::Error::from)?;
        }
    }
    Ok(())
}

fn run_copent(args: CopentArgs) -> Result<(), CliError> {
    if args.cols.len() < 2 {
        return Err(CliError::usage(format!(
            "copent needs at least two columns, got {}",
            args.cols.len()
        )));
    }
    let (loaded, path) = load(&args.common, Some(selectors(&args.cols)))?;
    let config = estimator_config(&args.common);
    let (value, policy) = if args.jitter.jitter {
        let policy = jitter_policy(&args.jitter);
        (jittered_copent(&loaded.matrix, &policy, &config)?, Some(policy))
    } else {
        (cet_core::copent(&loaded.matrix, &config)?, None)
    };
    let report = Report {
        operation: "copent".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config_echo(&args.common, policy.as_ref()),
        input: input_echo(&loaded, &path),
        result: Payload::Scalar { value },
    };
    emit(&report, &args.common)
}

fn run_ci(args: CiArgs) -> Result<(), CliError> {
    // column order in the loaded matrix: x, y, then the conditioning set
    let mut cols = vec![args.x.clone(), args.y.clone()];
    cols.extend(args.z.iter().cloned());
    let (loaded, path) = load(&args.common, Some(selectors(&cols)))?;
    let config = estimator_config(&args.common);

    let ci_of = |m: &SampleMatrix, c: &EstimatorConfig| {
        let x = m.column(0).to_vec();
        let y = m.column(1).to_vec();
        ci(&x, &y, m.values().slice(s![.., 2..]), c)
    };
    let (value, policy) = if args.jitter.jitter {
        let policy = jitter_policy(&args.jitter);
        (jitter_average(&loaded.matrix, &policy, &config, ci_of)?, Some(policy))
    } else {
        (ci_of(&loaded.matrix, &config)?, None)
    };
    let report = Report {
        operation: "ci".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config_echo(&args.common, policy.as_ref()),
        input: input_echo(&loaded, &path),
        result: Payload::Scalar { value },
    };
    emit(&report, &args.common)
}

fn run_transent(args: TransentArgs) -> Result<(), CliError> {
    let (loaded, path) = load(&args.common, Some(selectors(&[args.x.clone(), args.y.clone()])))?;
    let config = estimator_config(&args.common);
    let lag = args.lag;

    let te_of = |m: &SampleMatrix, c: &EstimatorConfig| {
        transent(&m.column(0).to_vec(), &m.column(1).to_vec(), lag, c)
    };
    let (value, policy) = if args.jitter.jitter {
        let policy = jitter_policy(&args.jitter);
        (jitter_average(&loaded.matrix, &policy, &config, te_of)?, Some(policy))
    } else {
        (te_of(&loaded.matrix, &config)?, None)
    };
    let report = Report {
        operation: "transent".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config_echo(&args.common, policy.as_ref()),
        input: input_echo(&loaded, &path),
        result: Payload::Scalar { value },
    };
    emit(&report, &args.common)
}

fn run_lagscan(args: LagscanArgs) -> Result<(), CliError> {
    let (loaded, path) = load(&args.common, Some(selectors(&[args.x.clone(), args.y.clone()])))?;
    let config = estimator_config(&args.common);
    let t = loaded.matrix.nrows();

    let (lags, values, policy) = if args.jitter.jitter {
        let policy = jitter_policy(&args.jitter);
        // same bound rule as the unjittered scan, checked up front
        if args.max_lag == 0 || args.max_lag >= t || t - args.max_lag < config.k + 1 {
            return Err(cet_core::Error::LagTooLarge { lag: args.max_lag, t, k: config.k }.into());
        }
        let mut values = Vec::with_capacity(args.max_lag);
        for lag in 1..=args.max_lag {
            let te_of = |m: &SampleMatrix, c: &EstimatorConfig| {
                transent(&m.column(0).to_vec(), &m.column(1).to_vec(), lag, c)
            };
            values.push(jitter_average(&loaded.matrix, &policy, &config, te_of)?);
        }
        ((1..=args.max_lag).collect(), values, Some(policy))
    } else {
        let pair = SeriesPair::new(
            loaded.matrix.column(0).to_vec(),
            loaded.matrix.column(1).to_vec(),
        )?;
        let scan = lag_scan(&pair, args.max_lag, &config)?;
        (scan.lags, scan.te_values, None)
    };

    let report = Report {
        operation: "lagscan".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config_echo(&args.common, policy.as_ref()),
        input: input_echo(&loaded, &path),
        result: Payload::LagScan { direction: DIRECTION_Y_TO_X.into(), lags, values },
    };
    emit(&report, &args.common)
}

/// Resolves one selector against the loaded matrix, returning a 0-based
/// column index.
fn resolve_one(sel: &ColumnSelector, matrix: &SampleMatrix) -> Result<usize, CliError> {
    match sel {
        ColumnSelector::Index(i) => {
            if *i < 1 || *i > matrix.ncols() {
                Err(cet_core::Error::ColumnIndexOutOfRange { index: *i, ncols: matrix.ncols() }
                    .into())
            } else {
                Ok(*i - 1)
            }
        }
        ColumnSelector::Name(name) => matrix
            .column_names()
            .and_then(|ns| ns.iter().position(|n| n == name))
            .ok_or_else(|| cet_core::Error::ColumnNotFound { name: name.clone() }.into()),
    }
}

fn run_select(args: SelectArgs) -> Result<(), CliError> {
    let columns = args.cols.as_ref().map(|c| selectors(c));
    let (loaded, path) = load(&args.common, columns)?;
    let matrix = &loaded.matrix;

    let target_sel: ColumnSelector = args.target.parse().expect("infallible");
    let target = resolve_one(&target_sel, matrix)?;

    let policy = JitterPolicy { repeats: args.repeats, scale: args.scale, seed: args.seed };
    let config = estimator_config(&args.common);
    let ranking = rank_features(matrix, target, &policy, &config)?;

    let selected: Vec<usize> = if let Some(q) = args.top {
        if q == 0 {
            return Err(CliError::usage("--top must be at least 1"));
        }
        ranking.top(q).to_vec()
    } else {
        let sel: ColumnSelector =
            args.threshold_feature.as_ref().expect("clap group guarantees one").parse().unwrap();
        let anchor = resolve_one(&sel, matrix)?;
        if anchor == target {
            return Err(CliError::usage("--threshold-feature must differ from --target"));
        }
        ranking.select_at_least(anchor)?
    };

    let name_of = |id: usize| -> String {
        matrix
            .column_names()
            .map(|ns| ns[id].clone())
            .unwrap_or_else(|| format!("c{}", id + 1))
    };
    let score_of = |id: usize| -> f64 {
        let pos = ranking.feature_ids.iter().position(|&f| f == id).expect("selected from ranking");
        ranking.scores[pos]
    };
    let report = Report {
        operation: "select".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config_echo(&args.common, Some(&policy)),
        input: input_echo(&loaded, &path),
        result: Payload::Ranking {
            target: name_of(target),
            features: selected.iter().map(|&id| name_of(id)).collect(),
            scores: selected.iter().map(|&id| score_of(id)).collect(),
        },
    };
    emit(&report, &args.common)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn norm_mapping() {
        assert_eq!(Norm::from(NormArg::Max), Norm::MaxNorm);
        assert_eq!(Norm::from(NormArg::Euclidean), Norm::Euclidean);
    }
}
