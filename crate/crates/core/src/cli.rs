//! The `torelli-screen` command line.
//!
//! Exit codes: 0 on success, 2 for usage or input validation errors, 1 for
//! I/O errors and internal assertion failures.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cover::{CoverDatum, RawDatum};
use crate::hodge::galois_orbits;
use crate::report::{Analysis, ReportRow};
use crate::screen::{self, batch_screen_chunked, enumerate_data, EnumerationRange, ScreenConfig};

/// Environment variable capping batch parallelism.
pub const THREADS_ENV: &str = "TORELLI_SCREEN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "torelli-screen", version, about = "Invariants and Shimura-curve screening for cyclic covers of curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Genus, eigenspace dimensions, fiber degrees, flat-rank bounds and orbits.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Screen data against the exclusion theorems and print the verdict trace.
    Screen {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Stream canonical data within the given ranges.
    Enumerate {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Galois orbits of the characters 1..n-1.
    Orbits {
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Enumerate and screen in batch.
    Table {
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        config: ConfigArgs,
        /// Worker threads (overrides TORELLI_SCREEN_THREADS).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Degree of the cyclic group.
    #[arg(long)]
    n: Option<i64>,
    /// Genus of the base curve.
    #[arg(long)]
    s: Option<i64>,
    /// Comma-separated branch multiplicities (empty for an unramified cover).
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// File of JSON lines, one {"n", "s", "u"} record per line.
    #[arg(long, conflicts_with_all = ["n", "s", "u"])]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    #[arg(long, default_value_t = screen::DEFAULT_GENUS_THRESHOLD)]
    genus_threshold: i64,
    /// Asserted prime bound for base genus s, as `s=B`. Repeatable.
    #[arg(long = "bound", value_parser = parse_bound)]
    bounds: Vec<(i64, i64)>,
}

#[derive(Debug, Args)]
struct RangeArgs {
    /// Degree or inclusive degree range `a..b`.
    #[arg(long, value_parser = parse_range)]
    n: (i64, i64),
    #[arg(long)]
    s: i64,
    /// Branch point count or inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    r: (i64, i64),
    #[arg(long)]
    g_max: i64,
}

fn parse_bound(s: &str) -> Result<(i64, i64), String> {
    let (genus, bound) = s
        .split_once('=')
        .ok_or_else(|| format!("expected s=B, got {s:?}"))?;
    let genus = genus.trim().parse().map_err(|e| format!("bad genus in {s:?}: {e}"))?;
    let bound = bound.trim().parse().map_err(|e| format!("bad bound in {s:?}: {e}"))?;
    Ok((genus, bound))
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("bad range {s:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?)),
        None => {
            let v = parse(s)?;
            Ok((v, v))
        }
    }
}

fn parse_multiplicities(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse()
                .map_err(|e| CliError::Input(format!("bad multiplicity {x:?}: {e}")))
        })
        .collect()
}

#[derive(Debug)]
enum CliError {
    /// Invalid input or usage; exit code 2.
    Input(String),
    /// Output failure; exit code 1.
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Error from reading a JSON-lines datum file.
#[derive(Debug, thiserror::Error)]
pub enum DatumFileError {
    #[error("{path}: {source}")]
    Open {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: malformed JSON: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: crate::Error },
}

/// Reads validated data from JSON lines; blank lines are skipped.
pub fn parse_datum_lines<R: BufRead>(reader: R) -> Result<Vec<CoverDatum>, DatumFileError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| DatumFileError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawDatum = serde_json::from_str(&line).map_err(|e| DatumFileError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        let datum = CoverDatum::try_from(raw).map_err(|source| DatumFileError::Invalid {
            line: line_no,
            source,
        })?;
        out.push(datum);
    }
    Ok(out)
}

pub fn parse_datum_file(path: &Path) -> Result<Vec<CoverDatum>, DatumFileError> {
    let file = File::open(path).map_err(|source| DatumFileError::Open {
        path: path.display().to_string(),
        source,
    })?;
    parse_datum_lines(BufReader::new(file))
}

/// Data source resolved from the flags, plus whether it was a file.
fn load_input(input: &InputArgs) -> Result<(Vec<CoverDatum>, bool), CliError> {
    if let Some(path) = &input.input {
        let data = parse_datum_file(path).map_err(|e| CliError::Input(e.to_string()))?;
        return Ok((data, true));
    }
    match (input.n, input.s) {
        (Some(n), Some(s)) => {
            let u = parse_multiplicities(input.u.as_deref().unwrap_or(""))?;
            Ok((vec![crate::cover::validate(n, s, &u)?], false))
        }
        _ => Err(CliError::Input(
            "provide either --n, --s and --u, or --input FILE".to_string(),
        )),
    }
}

fn build_config(args: &ConfigArgs) -> Result<ScreenConfig, CliError> {
    let mut bounds = BTreeMap::new();
    for &(s, b) in &args.bounds {
        if bounds.insert(s, b).is_some() {
            return Err(CliError::Input(format!("bound for s = {s} given twice")));
        }
    }
    Ok(ScreenConfig::new(bounds, args.genus_threshold)?)
}

fn build_range(args: &RangeArgs) -> Result<EnumerationRange, CliError> {
    let (r_lo, r_hi) = args.r;
    if r_lo < 0 || r_hi < 0 {
        return Err(CliError::Input("branch point counts must be non-negative".into()));
    }
    if args.s < 0 {
        return Err(CliError::Input(format!("NegativeGenus: base genus {} is negative", args.s)));
    }
    if args.g_max < 0 {
        return Err(CliError::Input("--g-max must be non-negative".into()));
    }
    Ok(EnumerationRange {
        n: args.n.0..=args.n.1,
        s: args.s,
        r: r_lo as usize..=r_hi as usize,
        g_max: args.g_max,
    })
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(t) = flag {
        return Ok(t.max(1));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|t| t.max(1))
            .map_err(|e| CliError::Input(format!("{THREADS_ENV}={v:?}: {e}"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn write_analysis_text(out: &mut dyn Write, a: &Analysis) -> std::io::Result<()> {
    let n = a.datum.n();
    writeln!(out, "datum              {}", a.datum)?;
    writeln!(out, "genus              {}", a.genus)?;
    writeln!(out, "totally ramified   {}", a.totally_ramified)?;
    writeln!(out, "unit branch        {}", a.unit_branch)?;
    writeln!(out, "points over P_k    {}", join(&a.points_over_branch, " "))?;
    writeln!(out, "h_0..h_{:<11}{}", n - 1, join(&a.hodge, " "))?;
    writeln!(out, "deg L^(0..{:<8}{}", format!("{})", n - 1), a.fiber_degrees.join(" "))?;
    writeln!(
        out,
        "flat bounds        per_char[1..{}] = {}; total = {}{}",
        n - 1,
        join(&a.flat_bounds.per_char, " "),
        a.flat_bounds.total,
        if a.flat_bounds.prime_refinement_applied {
            " (prime refinement)"
        } else {
            ""
        }
    )?;
    let orbits = galois_orbits(n).expect("degree >= 2");
    writeln!(out, "galois orbits      {orbits}")
}

fn write_verdict_text(out: &mut dyn Write, row: &ReportRow) -> std::io::Result<()> {
    let v = &row.verdict;
    writeln!(out, "datum    {}", row.datum)?;
    writeln!(out, "verdict  {} [{}]", v.status, v.theorem)?;
    for e in &v.trace {
        writeln!(
            out,
            "  [{}] {}: {}",
            if e.pass { "pass" } else { "FAIL" },
            e.hypothesis,
            e.value
        )?;
    }
    writeln!(out, "parameters")?;
    for (k, val) in &v.parameters {
        writeln!(out, "  {k} = {val}")?;
    }
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().from_writer(out)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { input, format } => {
            let (data, from_file) = load_input(&input)?;
            let analyses: Vec<Analysis> = data.iter().map(Analysis::new).collect();
            match format {
                Format::Text => {
                    for (k, a) in analyses.iter().enumerate() {
                        if k > 0 {
                            writeln!(out)?;
                        }
                        write_analysis_text(out, a)?;
                    }
                }
                Format::Json => write_json_docs(out, &analyses, from_file)?,
                Format::Csv => {
                    let mut w = csv_writer(out);
                    w.write_record(["n", "s", "u", "genus", "hodge", "flat_total"])?;
                    for a in &analyses {
                        w.write_record([
                            a.datum.n().to_string(),
                            a.datum.s().to_string(),
                            join(a.datum.u(), " "),
                            a.genus.to_string(),
                            join(&a.hodge, " "),
                            a.flat_bounds.total.to_string(),
                        ])?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Screen {
            input,
            config,
            format,
        } => {
            let cfg = build_config(&config)?;
            let (data, from_file) = load_input(&input)?;
            let rows: Vec<ReportRow> = data
                .iter()
                .map(|d| ReportRow::new(d, screen::screen(d, &cfg)))
                .collect();
            match format {
                Format::Text => {
                    for (k, row) in rows.iter().enumerate() {
                        if k > 0 {
                            writeln!(out)?;
                        }
                        write_verdict_text(out, row)?;
                    }
                }
                Format::Json => write_json_docs(out, &rows, from_file)?,
                Format::Csv => write_rows_csv(out, &rows, true)?,
            }
        }
        Command::Enumerate { range, format } => {
            let range = build_range(&range)?;
            let data = enumerate_data(&range);
            match format {
                Format::Csv => {
                    let mut w = csv_writer(out);
                    w.write_record(["n", "s", "u"])?;
                    for d in data {
                        w.write_record([d.n().to_string(), d.s().to_string(), join(d.u(), " ")])?;
                    }
                    w.flush()?;
                }
                Format::Text => {
                    for d in data {
                        writeln!(out, "{d}")?;
                    }
                }
                Format::Json => {
                    for d in data {
                        writeln!(out, "{}", serde_json::to_string(&d)?)?;
                    }
                }
            }
        }
        Command::Orbits { n, format } => {
            let orbits = galois_orbits(n)?;
            match format {
                Format::Text => writeln!(out, "{orbits}")?,
                Format::Json => writeln!(out, "{}", serde_json::to_string(&orbits)?)?,
                Format::Csv => {
                    let mut w = csv_writer(out);
                    w.write_record(["orbit", "members"])?;
                    for (k, o) in orbits.orbits.iter().enumerate() {
                        w.write_record([(k + 1).to_string(), join(o, " ")])?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Table {
            range,
            config,
            threads,
            format,
        } => {
            let cfg = build_config(&config)?;
            let range = build_range(&range)?;
            let threads = resolve_threads(threads)?;
            let mut first = true;
            let mut failure: Option<CliError> = None;
            if format == Format::Text {
                writeln!(
                    out,
                    "{:>4} {:>3} {:<24} {:>5} {:>6}  {:<22} theorem",
                    "n", "s", "u", "genus", "flat", "status"
                )?;
            }
            batch_screen_chunked(&range, &cfg, threads, 4096, |rows| {
                if failure.is_some() {
                    return;
                }
                let res = match format {
                    Format::Text => rows.iter().try_for_each(|row| {
                        writeln!(
                            out,
                            "{:>4} {:>3} {:<24} {:>5} {:>6}  {:<22} {}",
                            row.datum.n(),
                            row.datum.s(),
                            format!("[{}]", join(row.datum.u(), ",")),
                            row.genus,
                            row.flat_bounds.total,
                            row.verdict.status.to_string(),
                            row.verdict.theorem
                        )
                        .map_err(CliError::from)
                    }),
                    Format::Json => rows.iter().try_for_each(|row| {
                        let line = serde_json::to_string(row)?;
                        writeln!(out, "{line}").map_err(CliError::from)
                    }),
                    Format::Csv => {
                        let header = first;
                        write_rows_csv(out, &rows, header)
                    }
                };
                first = false;
                if let Err(e) = res {
                    failure = Some(e);
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            if first && format == Format::Csv {
                write_rows_csv(out, &[], true)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// A single JSON document for inline input, JSON lines for file input.
fn write_json_docs<T: serde::Serialize>(
    out: &mut dyn Write,
    items: &[T],
    as_lines: bool,
) -> Result<(), CliError> {
    if as_lines {
        for item in items {
            writeln!(out, "{}", serde_json::to_string(item)?)?;
        }
    } else {
        let item = items.first().expect("inline input yields one datum");
        writeln!(out, "{}", serde_json::to_string_pretty(item)?)?;
    }
    Ok(())
}

fn write_rows_csv(out: &mut dyn Write, rows: &[ReportRow], header: bool) -> Result<(), CliError> {
    let mut w = csv_writer(out);
    if header {
        w.write_record(["n", "s", "u", "genus", "flat_total", "status", "theorem"])?;
    }
    for row in rows {
        w.write_record([
            row.datum.n().to_string(),
            row.datum.s().to_string(),
            join(row.datum.u(), " "),
            row.genus.to_string(),
            row.flat_bounds.total.to_string(),
            row.verdict.status.to_string(),
            row.verdict.theorem.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the command line on `argv` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| execute(cli, out))) {
        Ok(Ok(())) => 0,
        Ok(Err(CliError::Input(msg))) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Ok(Err(CliError::Io(e))) => {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                return 0;
            }
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".to_string());
            let _ = writeln!(err, "internal assertion failure: {msg}");
            1
        }
    }
}
