//! The `valuerank` command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error (including
//! unreadable files), 3 runtime error such as all-zero weights or a port
//! that is already taken. Every error is reported as one `error: ...` line
//! on standard error.

use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{
    check_permutation, load_catalog, load_profile, validate_catalog, Catalog, StakeholderProfile,
};
use crate::error::Error;
use crate::evaluation::{evaluate, EvaluationPlan, DEFAULT_K};
use crate::service::{self, RankResponse};
use crate::valuation::{
    rank, Method, UsageMode, ValuationConfig, WeightVector, DEFAULT_DECLINE_RATE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    ValidationFailure = 1,
    UsageError = 2,
    RuntimeError = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "valuerank",
    version,
    about = "Personalized dataset ranking and NDCG evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a catalog (and optionally profiles) for rule violations
    Validate {
        #[command(flatten)]
        catalog: CatalogArgs,
        /// Stakeholder profile JSON (repeatable)
        #[arg(long = "profile")]
        profiles: Vec<PathBuf>,
    },
    /// Rank every dataset by its personalized data value
    Rank(RankArgs),
    /// Compare method rankings to each profile's ideal ranking
    Evaluate(EvaluateArgs),
    /// Same as `evaluate --format markdown`
    Report(EvaluateArgs),
    /// Serve the HTTP API for a catalog
    Serve {
        #[command(flatten)]
        catalog: CatalogArgs,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory of static files served at `/`
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CatalogArgs {
    /// Catalog file (.json, or .csv with --usage)
    #[arg(value_name = "CATALOG")]
    path: Option<PathBuf>,
    #[arg(long = "catalog", value_name = "PATH", conflicts_with = "path")]
    flag_path: Option<PathBuf>,
    /// Companion usage CSV (id,month,count) for a CSV catalog
    #[arg(long)]
    usage: Option<PathBuf>,
    /// Date used as "now" for dataset age (YYYY-MM-DD)
    #[arg(long, env = "VALUERANK_AS_OF")]
    as_of: Option<NaiveDate>,
}

#[derive(Debug, Args)]
struct ValuationArgs {
    #[arg(long, value_enum, default_value_t = UsageModeArg::Total)]
    usage_mode: UsageModeArg,
    /// Utility source label (defaults to "avg" when present)
    #[arg(long)]
    utility_source: Option<String>,
    /// Yearly currency decline rate
    #[arg(long, default_value_t = DEFAULT_DECLINE_RATE)]
    decline_rate: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UsageModeArg {
    Total,
    Average,
}

impl From<UsageModeArg> for UsageMode {
    fn from(m: UsageModeArg) -> Self {
        match m {
            UsageModeArg::Total => UsageMode::Total,
            UsageModeArg::Average => UsageMode::Average,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[command(flatten)]
    catalog: CatalogArgs,
    /// Profile whose weights are used (the first one if repeated)
    #[arg(long = "profile", conflicts_with = "weights")]
    profiles: Vec<PathBuf>,
    /// Inline slider weights in the order utility,creation_date,n_objects,usage
    #[arg(long, value_name = "U,C,O,S")]
    weights: Option<String>,
    /// weighted | simple | univariate:<utility|creation_date|n_objects|usage>
    #[arg(long, default_value = "weighted")]
    method: String,
    #[command(flatten)]
    valuation: ValuationArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    catalog: CatalogArgs,
    #[arg(long = "profile", required = true)]
    profiles: Vec<PathBuf>,
    /// Truncation depth for NDCG@k
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    #[arg(long)]
    decline_rate: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

struct Failure {
    status: ExitStatus,
    message: String,
}

impl Failure {
    fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

/// Status for an error raised while reading inputs.
fn input_failure(path: &Path, e: Error) -> Failure {
    match e {
        Error::Io(io) => Failure::new(
            ExitStatus::UsageError,
            format!("cannot read {}: {io}", path.display()),
        ),
        other => Failure::new(
            ExitStatus::ValidationFailure,
            format!("{}: {}", path.display(), one_line(&other.to_string())),
        ),
    }
}

fn runtime_failure(e: Error) -> Failure {
    let status = match e {
        Error::NotPermutation(_) | Error::Validation(_) => ExitStatus::ValidationFailure,
        Error::Io(_) => ExitStatus::UsageError,
        _ => ExitStatus::RuntimeError,
    };
    Failure::new(status, one_line(&e.to_string()))
}

fn one_line(s: &str) -> String {
    s.lines().collect::<Vec<_>>().join(" ")
}

type CmdResult = Result<ExitStatus, Failure>;

/// Runs the command line with the given arguments (including the program
/// name) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(stdout, "{}", e.render());
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                    ExitStatus::UsageError
                } else {
                    ExitStatus::Success
                };
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(stderr, "error: {msg} (see --help)");
            return ExitStatus::UsageError;
        }
    };
    let result = match cli.command {
        Command::Validate { catalog, profiles } => cmd_validate(&catalog, &profiles, stderr),
        Command::Rank(args) => cmd_rank(&args, stdout),
        Command::Evaluate(args) => cmd_evaluate(&args, Format::Csv, stdout, stderr),
        Command::Report(args) => cmd_evaluate(&args, Format::Markdown, stdout, stderr),
        Command::Serve {
            catalog,
            port,
            host,
            static_dir,
        } => cmd_serve(&catalog, SocketAddr::new(host, port), static_dir, stderr),
    };
    match result {
        Ok(status) => status,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.status
        }
    }
}

fn catalog_path(args: &CatalogArgs) -> Result<&Path, Failure> {
    args.path
        .as_deref()
        .or(args.flag_path.as_deref())
        .ok_or_else(|| Failure::new(ExitStatus::UsageError, "a catalog path is required"))
}

fn read_catalog(args: &CatalogArgs) -> Result<Catalog, Failure> {
    let path = catalog_path(args)?;
    load_catalog(path, args.usage.as_deref(), args.as_of).map_err(|e| input_failure(path, e))
}

fn read_profiles(paths: &[PathBuf]) -> Result<Vec<StakeholderProfile>, Failure> {
    paths
        .iter()
        .map(|p| load_profile(p).map_err(|e| input_failure(p, e)))
        .collect()
}

fn cmd_validate(args: &CatalogArgs, profiles: &[PathBuf], stderr: &mut dyn Write) -> CmdResult {
    let path = catalog_path(args)?;
    let mut failed = false;
    let catalog = match load_catalog(path, args.usage.as_deref(), args.as_of) {
        Ok(c) => {
            for v in validate_catalog(&c) {
                let _ = writeln!(stderr, "{v}");
            }
            Some(c)
        }
        Err(Error::Validation(violations)) => {
            for v in violations {
                failed |= v.is_error();
                let _ = writeln!(stderr, "{v}");
            }
            None
        }
        Err(e) => return Err(input_failure(path, e)),
    };
    for p in profiles {
        let profile = match load_profile(p) {
            Ok(profile) => profile,
            Err(e @ Error::Io(_)) => return Err(input_failure(p, e)),
            Err(e) => {
                failed = true;
                let _ = writeln!(
                    stderr,
                    "error: {}: {}",
                    p.display(),
                    one_line(&e.to_string())
                );
                continue;
            }
        };
        if let (Some(catalog), Some(ideal)) = (&catalog, &profile.ideal_ranking) {
            if let Err(e) = check_permutation(ideal, catalog) {
                failed = true;
                let _ = writeln!(stderr, "error: {}: ideal_ranking: {e}", profile.id);
            }
        }
    }
    Ok(if failed {
        ExitStatus::ValidationFailure
    } else {
        ExitStatus::Success
    })
}

fn cmd_rank(args: &RankArgs, stdout: &mut dyn Write) -> CmdResult {
    let method: Method = args
        .method
        .parse()
        .map_err(|e: String| Failure::new(ExitStatus::UsageError, e))?;
    if args.format == Format::Markdown {
        return Err(Failure::new(
            ExitStatus::UsageError,
            "rank supports --format csv or json",
        ));
    }
    let catalog = read_catalog(&args.catalog)?;
    let weights = match (&args.weights, args.profiles.first()) {
        (Some(w), _) => Some(
            w.parse::<WeightVector>()
                .map_err(|e| Failure::new(ExitStatus::UsageError, e.to_string()))?,
        ),
        (None, Some(p)) => Some(load_profile(p).map_err(|e| input_failure(p, e))?.weights),
        (None, None) => None,
    };
    let weights = match (method, weights) {
        (Method::Weighted, None) => {
            return Err(Failure::new(
                ExitStatus::UsageError,
                "the weighted method needs --weights or --profile",
            ))
        }
        (Method::Weighted, Some(w)) => w,
        (m, w) => m.weights(&w.unwrap_or_else(WeightVector::equal)),
    };
    let config = ValuationConfig {
        decline_rate: args.valuation.decline_rate,
        usage_mode: args.valuation.usage_mode.into(),
        utility_source: args.valuation.utility_source.clone(),
        as_of: None,
    };
    let ranked = rank(&catalog, &weights, &config).map_err(runtime_failure)?;
    let out = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&RankResponse::new(&catalog, ranked))
                .expect("response serializes");
            s.push('\n');
            s
        }
        _ => ranked.to_csv(),
    };
    stdout
        .write_all(out.as_bytes())
        .map_err(|e| runtime_failure(e.into()))?;
    Ok(ExitStatus::Success)
}

fn cmd_evaluate(
    args: &EvaluateArgs,
    default_format: Format,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CmdResult {
    let catalog = read_catalog(&args.catalog)?;
    let profiles = read_profiles(&args.profiles)?;
    if profiles.iter().all(|p| p.ideal_ranking.is_none()) {
        return Err(Failure::new(
            ExitStatus::ValidationFailure,
            "no profile has an ideal ranking",
        ));
    }
    let plan = EvaluationPlan {
        k: args.k,
        config: ValuationConfig {
            decline_rate: args.decline_rate.unwrap_or(DEFAULT_DECLINE_RATE),
            ..ValuationConfig::default()
        },
        ..EvaluationPlan::default()
    };
    let report = evaluate(&catalog, &profiles, &plan).map_err(runtime_failure)?;
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let out = match args.format.unwrap_or(default_format) {
        Format::Csv => report.to_csv(),
        Format::Markdown => report.to_markdown(),
        Format::Json => report.to_json() + "\n",
    };
    stdout
        .write_all(out.as_bytes())
        .map_err(|e| runtime_failure(e.into()))?;
    Ok(ExitStatus::Success)
}

fn cmd_serve(
    args: &CatalogArgs,
    addr: SocketAddr,
    static_dir: Option<PathBuf>,
    stderr: &mut dyn Write,
) -> CmdResult {
    let catalog = read_catalog(args)?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| {
        Failure::new(
            ExitStatus::RuntimeError,
            format!("cannot start runtime: {e}"),
        )
    })?;
    runtime.block_on(async {
        let listener = service::bind(addr).await.map_err(|e| {
            Failure::new(ExitStatus::RuntimeError, format!("cannot bind {addr}: {e}"))
        })?;
        let local = listener.local_addr().unwrap_or(addr);
        let _ = writeln!(stderr, "listening on http://{local}");
        let app = service::router(catalog, static_dir);
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        service::serve(listener, app, shutdown)
            .await
            .map_err(|e| Failure::new(ExitStatus::RuntimeError, format!("server error: {e}")))?;
        Ok(ExitStatus::Success)
    })
}
