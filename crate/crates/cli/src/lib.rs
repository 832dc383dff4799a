//! Command-line front end: argument parsing and dispatch to the library,
//! with output written to caller-supplied streams so it can be driven in
//! process.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use permcycle::bounds::BoundReport;
use permcycle::cycle_graph::{encode, toric_class};
use permcycle::diameter::{sort_two_permutation, verify_diameter_family, TwoPermutation};
use permcycle::oracle::{
    bfs, memory_estimate, table1_row, table1_tsv, table2_row, table2_tsv, DistanceTable,
    SearchOptions, DEFAULT_CAP,
};
use permcycle::verify::{run_suite, VerifyOptions};
use permcycle::{Error, FamilyTag, Permutation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Cycle-graph bounds and exact distances for permutation sorting.
///
/// Permutations are given in one-line notation, e.g. "4 1 6 2 5 7 3".
/// Generators act on positions: applying g to π gives π∘g.
#[derive(Debug, Parser)]
#[command(name = "permcycle", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,

    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "PERMCYCLE_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Raise the exhaustive-search cap (default 10, at most 12).
    #[arg(long, global = true)]
    pub cap_override: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the cycles of the encoding π̄.
    Encode {
        permutation: String,
        /// Include 1-cycles.
        #[arg(long)]
        fixed_points: bool,
    },
    /// Print every bound for a permutation.
    Bounds { permutation: String },
    /// Exact distances by exhaustive search.
    Exact {
        #[arg(required = true)]
        permutations: Vec<String>,
        #[arg(long, default_value = "ptd")]
        family: String,
        /// Write the distance table to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Read the distance table from this file instead of searching.
        #[arg(long)]
        load: Option<PathBuf>,
    },
    /// Tight-count table for the prefix transposition lower bounds.
    Table1 {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Gap histogram between the cycle-graph bound and the exact distance.
    Table2 {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Check the extremal family for 3 <= n <= max-n.
    Diameter {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// Sort a 2-permutation optimally with prefix transpositions.
    Sort2 {
        permutation: String,
        /// Also print the permutation after each move.
        #[arg(long)]
        intermediates: bool,
    },
    /// List the toric class of a permutation.
    Toric { permutation: String },
    /// Run the full property suite.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 10_000)]
        random: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Errors that should end the run, tagged with the exit code they map to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::NotAPermutation(_)
            | Error::InvalidIndices(_)
            | Error::NotTwoPermutation
            | Error::TooSmall(_)
            | Error::SizeMismatch { .. }
            | Error::BadDump(_)
            | Error::WrongFamily { .. } => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_FAILURE, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: EXIT_FAILURE, message: e.to_string() }
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn parse_perm(s: &str) -> Result<Permutation, Failure> {
    Ok(s.parse::<Permutation>()?)
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn announce_memory(err: &mut dyn Write, n: usize) -> Result<(), Failure> {
    if let Some(bytes) = memory_estimate(n) {
        writeln!(err, "distance table for n = {n}: {bytes} bytes")?;
    }
    Ok(())
}

fn search_options(cli: &Cli) -> SearchOptions {
    SearchOptions::with_cap(cli.cap_override.unwrap_or(DEFAULT_CAP))
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    if cli.threads > 0 {
        // The global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[derive(Serialize)]
struct EncodeReport {
    permutation: String,
    encoding: String,
    cycle_type: Vec<usize>,
}

#[derive(Serialize)]
struct ExactRow {
    permutation: String,
    family: FamilyTag,
    distance: u8,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    checks: &'a [permcycle::verify::CheckOutcome],
    passed: bool,
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let opts = search_options(cli);
    match &cli.command {
        Command::Encode { permutation, fixed_points } => {
            let p = parse_perm(permutation)?;
            let e = encode(&p);
            let text = e.alt_cycles().notation(*fixed_points);
            match cli.format {
                Format::Tsv => writeln!(out, "{text}")?,
                Format::Json => json_line(
                    out,
                    &EncodeReport {
                        permutation: p.to_string(),
                        encoding: text,
                        cycle_type: e.bijection().cycle_type(),
                    },
                )?,
            }
        }
        Command::Bounds { permutation } => {
            let p = parse_perm(permutation)?;
            let report = BoundReport::new(&p);
            match cli.format {
                Format::Tsv => {
                    let value = serde_json::to_value(&report)?;
                    for key in ["ptb", "dm_lb", "cs_lb", "new_lb", "bid_lb", "td_lb", "td_ub", "pexc"] {
                        writeln!(out, "{key}\t{}", value[key])?;
                    }
                }
                Format::Json => json_line(out, &report)?,
            }
        }
        Command::Exact { permutations, family, dump, load } => {
            let tag: FamilyTag = family.parse()?;
            let perms = permutations.iter().map(|s| parse_perm(s)).collect::<Result<Vec<_>, _>>()?;
            let n = perms[0].len();
            let table = match load {
                Some(path) => {
                    let table = DistanceTable::read_from(BufReader::new(File::open(path)?))?;
                    if table.family() != tag {
                        return Err(Error::WrongFamily { expected: tag, found: table.family() }.into());
                    }
                    table
                }
                None => {
                    announce_memory(err, n)?;
                    bfs(n, tag, &opts)?
                }
            };
            if let Some(path) = dump {
                table.write_to(BufWriter::new(File::create(path)?))?;
            }
            let rows = perms
                .iter()
                .map(|p| {
                    Ok(ExactRow { permutation: p.to_string(), family: tag, distance: table.distance(p)? })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            match cli.format {
                Format::Tsv => {
                    for r in &rows {
                        writeln!(out, "{}\t{}", r.permutation, r.distance)?;
                    }
                }
                Format::Json => json_line(out, &rows)?,
            }
        }
        Command::Table1 { max_n } | Command::Table2 { max_n } => {
            let first = matches!(cli.command, Command::Table1 { .. });
            opts.check(*max_n)?;
            announce_memory(err, *max_n)?;
            let mut rows1 = Vec::new();
            let mut rows2 = Vec::new();
            for n in 1..=*max_n {
                let table = bfs(n, FamilyTag::Ptd, &opts)?;
                if first {
                    rows1.push(table1_row(&table)?);
                } else {
                    rows2.push(table2_row(&table)?);
                }
            }
            match (cli.format, first) {
                (Format::Tsv, true) => write!(out, "{}", table1_tsv(&rows1))?,
                (Format::Tsv, false) => write!(out, "{}", table2_tsv(&rows2))?,
                (Format::Json, true) => json_line(out, &rows1)?,
                (Format::Json, false) => json_line(out, &rows2)?,
            }
        }
        Command::Diameter { max_n } => {
            announce_memory(err, (*max_n).min(opts.cap))?;
            let report = verify_diameter_family(*max_n, &opts)?;
            match cli.format {
                Format::Tsv => {
                    writeln!(out, "n\tpermutation\tfloor_3n_4\tnew_lb\texact_ptd\tsorter_len\tholds")?;
                    for r in &report.rows {
                        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
                        writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            r.n,
                            r.permutation,
                            r.floor_three_quarters,
                            r.new_lb,
                            opt(r.exact_ptd.map(usize::from)),
                            opt(r.sorter_len),
                            r.holds
                        )?;
                    }
                }
                Format::Json => json_line(out, &report)?,
            }
            if !report.holds {
                return Ok(EXIT_FAILURE);
            }
        }
        Command::Sort2 { permutation, intermediates } => {
            let p = TwoPermutation::new(parse_perm(permutation)?)?;
            let seq = sort_two_permutation(&p)?;
            match cli.format {
                Format::Tsv => {
                    writeln!(out, "{seq}")?;
                    if *intermediates {
                        for q in seq.intermediates() {
                            writeln!(out, "{q}")?;
                        }
                    }
                }
                Format::Json => json_line(out, &seq.report(*intermediates))?,
            }
        }
        Command::Toric { permutation } => {
            let p = parse_perm(permutation)?;
            let class: Vec<String> = toric_class(&p).iter().map(|q| q.to_string()).collect();
            match cli.format {
                Format::Tsv => {
                    for q in &class {
                        writeln!(out, "{q}")?;
                    }
                }
                Format::Json => json_line(out, &class)?,
            }
        }
        Command::Verify { max_n, random, seed } => {
            let vopts = VerifyOptions { max_n: *max_n, search: opts, random_instances: *random, seed: *seed };
            let checks = run_suite(&vopts)?;
            let passed = checks.iter().all(|c| c.passed());
            match cli.format {
                Format::Tsv => {
                    for c in &checks {
                        let verdict = if c.passed() { "PASS" } else { "FAIL" };
                        writeln!(out, "{verdict}\t{}\t{}\t{}", c.name, c.checked, c.failures)?;
                    }
                }
                Format::Json => json_line(out, &VerifyReport { checks: &checks, passed })?,
            }
            if !passed {
                return Ok(EXIT_FAILURE);
            }
        }
    }
    Ok(EXIT_OK)
}
