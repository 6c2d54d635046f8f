use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use picky_core::matrix::Classical;
use picky_core::report::{self, RowStatus};
use picky_core::{Budget, CharacterTable, Config, Error, GroupSpec, Mode, Perm, SylowContext, Verdict};

/// Picky ℓ-elements, character tables and certificates for the Picky,
/// Picky+ and Strong Picky conditions.
#[derive(Parser)]
#[command(name = "picky", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict and count picky ℓ-elements.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        ell: u64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Emit one certificate per picky class.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value = "strong", value_parser = parse_mode)]
        mode: Mode,
        /// Verify only the class of this element, given as a JSON image array.
        #[arg(long)]
        element: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reproduce the reference table rows within budget.
    Table {
        /// Tables to report (1, 2, 3); all by default.
        #[arg(long = "table", value_parser = clap::value_parser!(u8).range(1..=3))]
        tables: Vec<u8>,
        /// Attempt rows that need the extended budget.
        #[arg(long)]
        extended: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compute and serialize a character table.
    Chartab {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Class indices to include in CSV output.
        #[arg(long, value_delimiter = ',')]
        columns: Option<Vec<usize>>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupArgs {
    /// A standard classical group, e.g. `--classical SU 3 3`.
    #[arg(long, num_args = 3, value_names = ["FAMILY", "N", "Q"])]
    classical: Option<Vec<String>>,
    /// A group specification file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    budget_order: Option<u64>,
    #[arg(long)]
    budget_classes: Option<usize>,
    #[arg(long)]
    budget_degree: Option<usize>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Everything that determines an output, recorded alongside it.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunConfig {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    budget: Budget,
    seed: u64,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

impl RunArgs {
    fn config(&self) -> Result<Config> {
        let mut config = Config::with_seed(self.seed);
        let b = &mut config.budget;
        if let Some(v) = self.budget_order {
            b.max_order = v;
        }
        if let Some(v) = self.budget_classes {
            b.max_classes = v;
        }
        if let Some(v) = self.budget_degree {
            b.max_degree = v;
        }
        if b.max_order == 0 || b.max_classes == 0 || b.max_degree == 0 {
            bail!(Usage("budgets must be positive".into()));
        }
        if let Some(k) = self.workers {
            if k == 0 {
                bail!(Usage("--workers must be positive".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
                .context("configuring the worker pool")?;
        }
        Ok(config)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

impl GroupArgs {
    fn spec(&self) -> Result<GroupSpec> {
        if let Some(path) = &self.spec {
            return GroupSpec::from_path(path).with_context(|| format!("reading {}", path.display()));
        }
        let [family, n, q] = self.classical.as_deref().unwrap_or_default() else {
            bail!(Usage("--classical takes FAMILY N Q".into()));
        };
        let family: Classical = family.parse()?;
        let n = n.parse().map_err(|_| Usage(format!("N must be a positive integer, got {n:?}")))?;
        let q = q.parse().map_err(|_| Usage(format!("Q must be a prime power, got {q:?}")))?;
        Ok(GroupSpec::classical(family, n, q))
    }
}

/// A usage error detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn json<T: Serialize>(config: &RunConfig, body: T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { config, body })?;
    s.push('\n');
    Ok(s)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify { group, ell, run } => {
            let config = run.config()?;
            let spec = group.spec()?;
            let report = report::classify(&spec, ell, config)?;
            eprintln!("{report}");
            let rc = RunConfig { command: "classify", group: Some(spec.to_string()), ell: Some(ell), mode: None, budget: config.budget, seed: run.seed };
            run.emit(&json(&rc, &report)?)?;
            Ok(if report.consistent == Some(false) { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Verify { group, ell, mode, element, run } => {
            let config = run.config()?;
            let spec = group.spec()?;
            let label = spec.to_string();
            let g = spec.build(config)?;
            let ctx = SylowContext::new(&g, ell)?;
            let certificates = match element {
                Some(text) => {
                    let images: Vec<u32> = serde_json::from_str(&text)
                        .map_err(|e| Usage(format!("--element must be a JSON image array: {e}")))?;
                    vec![report::verify_element(&ctx, &label, &Perm::from_images(images)?, mode)?]
                }
                None => report::verify_all(&ctx, &label, mode)?,
            };
            for c in &certificates {
                eprintln!(
                    "{label}, ℓ = {ell}, class of order {} with |C(x)| = {}: {:?} ({} pairs)",
                    c.class.order,
                    c.class.centralizer,
                    c.verdict,
                    c.pairs.len()
                );
            }
            if certificates.is_empty() {
                eprintln!("{label}, ℓ = {ell}: no picky classes");
            }
            let rc = RunConfig { command: "verify", group: Some(label), ell: Some(ell), mode: Some(mode), budget: config.budget, seed: run.seed };
            #[derive(Serialize)]
            struct Body<'a> {
                certificates: &'a [picky_core::Certificate],
            }
            run.emit(&json(&rc, Body { certificates: &certificates })?)?;
            let all_hold = certificates.iter().all(|c| c.verdict == Verdict::Holds);
            Ok(if all_hold { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Table { mut tables, extended, format, run } => {
            let config = run.config()?;
            if tables.is_empty() {
                tables = vec![1, 2, 3];
            }
            let rows = report::table_report(&tables, extended, config)?;
            for r in &rows {
                eprintln!("table {} {}: {} ({})", r.table, r.group, r.status, r.detail);
            }
            let text = match format {
                Format::Json => {
                    let rc = RunConfig { command: "table", group: None, ell: None, mode: None, budget: config.budget, seed: run.seed };
                    #[derive(Serialize)]
                    struct Body<'a> {
                        extended: bool,
                        rows: &'a [report::RowReport],
                    }
                    json(&rc, Body { extended, rows: &rows })?
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["table", "group", "ell", "status", "expected", "detail"])?;
                    for r in &rows {
                        w.write_record([
                            r.table.to_string(),
                            r.group.clone(),
                            r.ell.to_string(),
                            r.status.to_string(),
                            r.expected.clone(),
                            r.detail.clone(),
                        ])?;
                    }
                    String::from_utf8(w.into_inner()?)?
                }
            };
            run.emit(&text)?;
            let has = |s| rows.iter().any(|r| r.status == s);
            Ok(if has(RowStatus::Mismatch) {
                ExitCode::from(1)
            } else if has(RowStatus::BudgetExceeded) {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Chartab { group, format, columns, run } => {
            let config = run.config()?;
            let spec = group.spec()?;
            let g = spec.build(config)?;
            let table = CharacterTable::compute(&g)?;
            if let Some(cols) = &columns {
                if let Some(&bad) = cols.iter().find(|&&c| c >= table.len()) {
                    bail!(Usage(format!("column {bad} out of range (the table has {} classes)", table.len())));
                }
            }
            let text = match format {
                Format::Json => {
                    let rc = RunConfig { command: "chartab", group: Some(spec.to_string()), ell: None, mode: None, budget: config.budget, seed: run.seed };
                    #[derive(Serialize)]
                    struct Body {
                        table: serde_json::Value,
                    }
                    json(&rc, Body { table: table.to_json() })?
                }
                Format::Csv => table.to_csv(columns.as_deref()),
            };
            eprintln!("{spec}: {} classes, degrees {:?}", table.len(), table.degrees());
            run.emit(&text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// 2 for usage errors, 3 for budget overruns, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded(_)) => 3,
        Some(
            Error::NotPicky { .. }
            | Error::NotEllElement { .. }
            | Error::CharacteristicClash { .. }
            | Error::Unsupported(_)
            | Error::InvalidField(_)
            | Error::InvalidPerm(_)
            | Error::NotMember
            | Error::NotPrime(_)
            | Error::Malformed(_)
            | Error::SingularMatrix(_)
            | Error::DegreeMismatch { .. }
            | Error::Json(_)
            | Error::Io(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
