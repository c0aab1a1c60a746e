//! Command-line front end: expression evaluation, verification suites and
//! defect/sweep/scaling reports.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage or configuration error, 3 I/O error.

pub mod config;
pub mod expr;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use berezin_core::conformal::{defect_sweep, witt_defect};
use berezin_core::quantize::{hbar_scaling, product_defect, Probe};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use config::{parse_pairs, parse_symbol, parse_weight_list, Format, RunConfig, Suite};
use report::{defect_json, emit, scaling_json, sweep_csv, sweep_json, symbol_json, to_pretty, truncation_csv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("I/O: {0}")]
    Io(String),
    #[error(transparent)]
    Parse(#[from] expr::ParseError),
    #[error(transparent)]
    Core(#[from] berezin_core::Error),
    #[error(transparent)]
    Scalar(#[from] berezin_core::exact_scalar::ScalarError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "berezin", version, about = "Exact checks of Berezin and q_R-conformal operator identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Truncation size / partial-sum horizon.
    #[arg(long = "N", default_value_t = 64)]
    pub n: usize,
    /// Scan horizon for operator-norm bounds.
    #[arg(long, default_value_t = 64)]
    pub scan: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        h: String,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
    /// Witt defect report for a single pair "(m,n)".
    Defect {
        #[arg(long)]
        h: String,
        #[arg(long)]
        pairs: String,
        #[command(flatten)]
        common: Common,
    },
    /// Witt defect measurements over a grid of weights and pairs.
    Sweep {
        #[arg(long = "h-list")]
        h_list: String,
        #[arg(long)]
        pairs: String,
        #[command(flatten)]
        common: Common,
    },
    /// Product defect Op(f)Op(g) - Op(fg) for symbols given as JSON.
    QuantizeDefect {
        #[arg(long)]
        h: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// hbar scaling of the product defect of f and g.
    Scaling {
        #[arg(long = "h-list")]
        h_list: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate an operator expression; CSV output is the N x N monomial truncation.
    Eval {
        #[arg(long)]
        h: String,
        expr: String,
        #[command(flatten)]
        common: Common,
    },
}

fn config(h: &str, common: &Common, suite: Suite) -> Result<RunConfig, CliError> {
    RunConfig::new(h, common.n, common.scan, common.format, common.out.clone(), suite)
}

fn json_only(cfg: &RunConfig, what: &str) -> Result<(), CliError> {
    if cfg.format == Format::Csv {
        return Err(CliError::Usage(format!("{what} only writes JSON")));
    }
    Ok(())
}

/// Runs one parsed command, writing its report; returns the exit code.
pub fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify { h, suite, common } => {
            let cfg = config(&h, &common, suite)?;
            json_only(&cfg, "verify")?;
            let report = suite::run_suite(&cfg)?;
            eprint!("{}", report.summary());
            emit(&to_pretty(&report.to_json()), cfg.out.as_deref())?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Defect { h, pairs, common } => {
            let cfg = config(&h, &common, Suite::Witt)?;
            json_only(&cfg, "defect")?;
            let [(m, n)] = parse_pairs(&pairs)?[..] else {
                return Err(CliError::Usage("defect takes exactly one pair; use sweep for several".into()));
            };
            let d = witt_defect(m, n, &cfg.weight, cfg.n)?;
            let mut obj = serde_json::Map::new();
            obj.insert("m".into(), json!(m));
            obj.insert("n".into(), json!(n));
            obj.extend(defect_json(&d.defect, &d.report));
            emit(&to_pretty(&Value::Object(obj)), cfg.out.as_deref())?;
            Ok(0)
        }
        Command::Sweep { h_list, pairs, common } => {
            let weights = parse_weight_list(&h_list)?;
            let pairs = parse_pairs(&pairs)?;
            if common.n < 2 {
                return Err(CliError::Config(format!("N must be at least 2, got {}", common.n)));
            }
            let rows = defect_sweep(&pairs, &weights, common.n)?;
            let text = match common.format {
                Format::Csv => sweep_csv(&rows),
                Format::Json => to_pretty(&sweep_json(&rows)),
            };
            emit(&text, common.out.as_deref())?;
            Ok(0)
        }
        Command::QuantizeDefect { h, f, g, common } => {
            let cfg = config(&h, &common, Suite::Quantize)?;
            json_only(&cfg, "quantize-defect")?;
            let (f, g) = (parse_symbol(&f)?, parse_symbol(&g)?);
            let d = product_defect(&f, &g, &cfg.weight, cfg.n)?;
            let mut obj = serde_json::Map::new();
            obj.insert("f".into(), symbol_json(&f));
            obj.insert("g".into(), symbol_json(&g));
            obj.extend(defect_json(&d.operator, &d.report));
            emit(&to_pretty(&Value::Object(obj)), cfg.out.as_deref())?;
            Ok(0)
        }
        Command::Scaling { h_list, f, g, common } => {
            if common.format == Format::Csv {
                return Err(CliError::Usage("scaling only writes JSON".into()));
            }
            let weights = parse_weight_list(&h_list)?;
            let (f, g) = (parse_symbol(&f)?, parse_symbol(&g)?);
            let result = hbar_scaling(&Probe::Product(f.clone(), g.clone()), &weights, common.n)?;
            let mut v = scaling_json(&result);
            v["f"] = symbol_json(&f);
            v["g"] = symbol_json(&g);
            emit(&to_pretty(&v), common.out.as_deref())?;
            Ok(0)
        }
        Command::Eval { h, expr, common } => {
            let cfg = config(&h, &common, Suite::All)?;
            let e = expr::parse_expr(&expr)?;
            let op = expr::eval_expr(&e, &cfg.weight)?;
            let text = match cfg.format {
                Format::Csv => truncation_csv(&op, cfg.n),
                Format::Json => {
                    let report = op.hs_report(cfg.n)?;
                    let mut obj = serde_json::Map::new();
                    obj.insert("expr".into(), json!(e.to_string()));
                    obj.extend(defect_json(&op, &report));
                    to_pretty(&Value::Object(obj))
                }
            };
            emit(&text, cfg.out.as_deref())?;
            Ok(0)
        }
    }
}

/// Full entry point: argument parsing, execution and error reporting.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
