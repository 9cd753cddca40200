//! Command-line front end for `cycpat`.
//!
//! [`Cli`] is the clap definition, [`RunConfig::from_cli`] validates it, and
//! [`execute`] produces the text to print plus the process exit code.

pub mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cycpat::enumerate::DEFAULT_CAP;
use cycpat::formulas::pair_count;
use cycpat::harness::{check_triple_formula, INSERTION_PATTERNS, SINGLE_PATTERNS, TABLE_ONE_FAST_MAX};
use cycpat::layered::{enumerate_good_triples, permutation_of_triple, TripleError};
use cycpat::oeis::{bfile, ExportError, Sequence};
use cycpat::{
    ClaimId, CountTable, EnumerationError, FormulaError, Harness, HarnessError, Oracle, PairFormulaId, Pattern,
    PatternError, PatternSet, Provenance, VerificationReport,
};
use serde::Serialize;
use thiserror::Error;

pub use cache::CountCache;

/// Largest oracle size allowed without `--extended`.
pub const BASE_CAP: usize = 11;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_EVIDENCE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "cycpat", version, about = "Cyclic permutations avoiding patterns of length three")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; the default depends on the subcommand.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for the oracle.
    #[arg(long, global = true, env = "CYCPAT_WORKERS")]
    pub workers: Option<usize>,

    /// Largest n the oracle may run at.
    #[arg(long, global = true, env = "CYCPAT_CAP")]
    pub cap: Option<usize>,

    /// JSON-lines file memoizing oracle counts.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Allow oracle runs above n = 11 (up to the cap).
    #[arg(long, global = true)]
    pub extended: bool,

    /// Suppress warnings.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    /// Oracle progress on standard error.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Oracle counts of (cyclic) avoiders.
    Count {
        #[command(flatten)]
        range: RangeArgs,
        /// Pattern to avoid; repeat for a set.
        #[arg(long = "avoid", required = true)]
        avoid: Vec<String>,
        /// Count all avoiders, not only cyclic ones.
        #[arg(long)]
        all: bool,
    },
    /// Closed-form counts for a pattern pair.
    Formula {
        #[command(flatten)]
        range: RangeArgs,
        /// Pair written "q1,q2" in either order.
        #[arg(long, required_unless_present = "avoid")]
        pair: Option<String>,
        /// Alternative to --pair: give both patterns separately.
        #[arg(long = "avoid", conflicts_with = "pair")]
        avoid: Vec<String>,
    },
    /// Check one claim over a range of n.
    Verify {
        #[arg(long, value_enum)]
        claim: Claim,
        #[arg(long)]
        n_max: Option<u64>,
        /// Pair for formula-vs-oracle; all supported pairs when omitted.
        #[arg(long)]
        pair: Option<String>,
        /// Patterns for the per-pattern claims; defaults depend on the claim.
        #[arg(long = "avoid")]
        avoid: Vec<String>,
    },
    /// Good triples (a,b,c) for n, or for a range.
    Triples {
        #[command(flatten)]
        range: RangeArgs,
        /// Attach the permutation built from each triple.
        #[arg(long)]
        with_perm: bool,
    },
    /// Write an OEIS b-file.
    Export {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        offset: u64,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every conjecture and theorem check on the single-pattern data.
    Conjectures {
        #[arg(long)]
        n_max: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct RangeArgs {
    /// Single n, or the start of the range when --n-max is also given.
    #[arg(long)]
    pub n: Option<u64>,
    /// End of the range (inclusive); starts at 1 unless --n is given.
    #[arg(long)]
    pub n_max: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
    Json,
    Bfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    #[value(name = "table1", alias = "table-one")]
    TableOne,
    FormulaVsOracle,
    #[value(alias = "chain")]
    ChainConjecture,
    #[value(alias = "growth")]
    GrowthBounds,
    #[value(alias = "insertion")]
    InsertionTheorem,
    #[value(name = "k-minus-one", alias = "k-minus-one-question")]
    KMinusOneQuestion,
    TripleFormula,
}

impl Claim {
    pub fn id(self) -> ClaimId {
        match self {
            Claim::TableOne => ClaimId::TableOne,
            Claim::FormulaVsOracle => ClaimId::FormulaVsOracle,
            Claim::ChainConjecture => ClaimId::ChainConjecture,
            Claim::GrowthBounds => ClaimId::GrowthBounds,
            Claim::InsertionTheorem => ClaimId::InsertionTheorem,
            Claim::KMinusOneQuestion => ClaimId::KMinusOneQuestion,
            Claim::TripleFormula => ClaimId::TripleFormula,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_FAILURE,
        }
    }
}

impl From<EnumerationError> for CliError {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::LimitExceeded { n, cap } if n <= DEFAULT_CAP && cap < n => {
                CliError::Usage(format!("{e}; pass --extended to allow n = {n}"))
            }
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<PatternError> for CliError {
    fn from(e: PatternError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::InternalInconsistency(_) => CliError::Internal(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<TripleError> for CliError {
    fn from(e: TripleError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Enumeration(e) => e.into(),
            HarnessError::Formula(e) => e.into(),
            HarnessError::PreconditionViolated(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::Enumeration(e) => e.into(),
            ExportError::Formula(e) => e.into(),
            e => CliError::Usage(e.to_string()),
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub workers: usize,
    /// Cap requested by flag, environment, or default.
    pub cap: usize,
    pub extended: bool,
    pub cache: Option<PathBuf>,
    pub quiet: bool,
    pub verbose: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let workers = cli.workers.unwrap_or(1);
        let cap = cli.cap.unwrap_or(DEFAULT_CAP);
        if workers == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        if cap == 0 {
            return Err(CliError::Usage("--cap must be positive".into()));
        }
        let format = match (&cli.command, cli.format) {
            (cmd, Some(f)) => {
                if !format_allowed(cmd, f) {
                    return Err(CliError::Usage(format!(
                        "--format {} is not available for {}",
                        format_name(f),
                        command_name(cmd)
                    )));
                }
                f
            }
            (Command::Verify { .. } | Command::Conjectures { .. }, None) => Format::Text,
            (Command::Export { .. }, None) => Format::Bfile,
            (_, None) => Format::Tsv,
        };
        Ok(RunConfig {
            command: cli.command,
            format,
            workers,
            cap,
            extended: cli.extended,
            cache: cli.cache,
            quiet: cli.quiet,
            verbose: cli.verbose,
        })
    }

    /// The oracle cap actually in force.
    pub fn effective_cap(&self) -> usize {
        if self.extended {
            self.cap
        } else {
            self.cap.min(BASE_CAP)
        }
    }

    /// Warnings to show before running.
    pub fn warnings(&self) -> Vec<String> {
        if self.extended && self.cap > BASE_CAP {
            vec![format!(
                "extended mode: oracle runs up to n = {} may take minutes",
                self.effective_cap()
            )]
        } else {
            Vec::new()
        }
    }

    pub fn oracle(&self) -> Oracle {
        let mut oracle = Oracle::default().with_cap(self.effective_cap()).with_workers(self.workers);
        oracle.verbose = self.verbose;
        oracle
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Count { .. } => "count",
        Command::Formula { .. } => "formula",
        Command::Verify { .. } => "verify",
        Command::Triples { .. } => "triples",
        Command::Export { .. } => "export",
        Command::Conjectures { .. } => "conjectures",
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Tsv => "tsv",
        Format::Json => "json",
        Format::Bfile => "bfile",
    }
}

/// b-files only come from commands that yield a single sequence.
pub fn format_allowed(cmd: &Command, f: Format) -> bool {
    match cmd {
        Command::Count { .. } | Command::Formula { .. } => true,
        Command::Triples { .. } => f != Format::Bfile,
        Command::Verify { .. } | Command::Conjectures { .. } => matches!(f, Format::Text | Format::Json),
        Command::Export { .. } => f == Format::Bfile,
    }
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            exit_code: EXIT_OK,
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cache = match &cfg.cache {
        Some(path) => CountCache::open(path, cfg.oracle())
            .map_err(|e| CliError::Internal(format!("cannot read cache {}: {e}", path.display())))?,
        None => CountCache::disabled(cfg.oracle()),
    };
    let out = match &cfg.command {
        Command::Count { range, avoid, all } => {
            let qs = PatternSet::parse(avoid)?;
            let table = cmd_count(&cache, &qs, !*all, range_of(*range)?)?;
            Outcome::ok(render_table(&table, cfg.format))
        }
        Command::Formula { range, pair, avoid } => {
            let id = pair_id(pair.as_deref(), avoid)?;
            let table = cmd_formula(id, range_of(*range)?)?;
            Outcome::ok(render_table(&table, cfg.format))
        }
        Command::Verify {
            claim,
            n_max,
            pair,
            avoid,
        } => {
            let reports = cmd_verify(&cache, *claim, *n_max, pair.as_deref(), avoid)?;
            render_reports(&reports, cfg.format)
        }
        Command::Conjectures { n_max } => {
            let reports = cmd_conjectures(&cache, n_max.unwrap_or(TABLE_ONE_FAST_MAX))?;
            render_reports(&reports, cfg.format)
        }
        Command::Triples { range, with_perm } => {
            let rows = cmd_triples(range_of(*range)?, *with_perm)?;
            Outcome::ok(render_triples(&rows, cfg.format))
        }
        Command::Export {
            seq,
            n_max,
            offset,
            out,
        } => {
            let seq: Sequence = seq.parse()?;
            let text = bfile(seq, *offset, *n_max, &cache)?;
            match out {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
                    Outcome::ok(String::new())
                }
                None => Outcome::ok(text),
            }
        }
    };
    Ok(out)
}

fn range_of(r: RangeArgs) -> Result<Vec<u64>, CliError> {
    let (lo, hi) = match (r.n, r.n_max) {
        (Some(n), None) => (n, n),
        (None, Some(m)) => (1, m),
        (Some(n), Some(m)) => (n, m),
        (None, None) => return Err(CliError::Usage("give --n or --n-max".into())),
    };
    if lo == 0 || lo > hi {
        return Err(CliError::Usage(format!("empty or invalid range {lo}..={hi}")));
    }
    Ok((lo..=hi).collect())
}

fn pair_id(pair: Option<&str>, avoid: &[String]) -> Result<PairFormulaId, CliError> {
    match pair {
        Some(p) => Ok(p.parse::<PairFormulaId>()?),
        None if avoid.len() == 2 => Ok(PairFormulaId::from_patterns(&PatternSet::parse(avoid)?)?),
        None => Err(CliError::Usage("give --pair q1,q2 or two --avoid patterns".into())),
    }
}

/// Column label of an oracle count.
pub fn count_label(qs: &PatternSet, cyclic: bool) -> String {
    if cyclic {
        qs.label()
    } else {
        format!("all:{}", qs.label())
    }
}

pub fn cmd_count(cache: &CountCache, qs: &PatternSet, cyclic: bool, ns: Vec<u64>) -> Result<CountTable, CliError> {
    let label = count_label(qs, cyclic);
    let mut table = CountTable::new();
    for n in ns {
        let count = cache.count(n as usize, qs, cyclic)?;
        table.insert(n, label.clone(), count, Provenance::Oracle);
    }
    Ok(table)
}

pub fn cmd_formula(id: PairFormulaId, ns: Vec<u64>) -> Result<CountTable, CliError> {
    let mut table = CountTable::new();
    for n in ns {
        table.insert(n, id.label(), pair_count(id, n)?, Provenance::Formula);
    }
    Ok(table)
}

fn patterns_or(avoid: &[String], default: &[&str]) -> Result<Vec<Pattern>, CliError> {
    if avoid.is_empty() {
        Ok(default.iter().map(|s| s.parse().expect("valid built-in pattern")).collect())
    } else {
        Ok(PatternSet::parse(avoid)?.patterns().to_vec())
    }
}

/// Patterns used by the `(k-1)` question when none are given.
pub const K_MINUS_ONE_DEFAULTS: [&str; 10] = [
    "123", "132", "213", "231", "312", "321", "4321", "4231", "3412", "1432",
];

pub fn cmd_verify(
    cache: &CountCache,
    claim: Claim,
    n_max: Option<u64>,
    pair: Option<&str>,
    avoid: &[String],
) -> Result<Vec<VerificationReport>, CliError> {
    let harness = Harness::new(cache);
    let n_max = n_max.unwrap_or(match claim {
        Claim::TripleFormula => 60,
        _ => TABLE_ONE_FAST_MAX,
    });
    let reports = match claim {
        Claim::TableOne => vec![harness.check_table_one(n_max)?],
        Claim::TripleFormula => vec![check_triple_formula(n_max)?],
        Claim::ChainConjecture => vec![harness.check_chain_conjecture(n_max)?],
        Claim::FormulaVsOracle => {
            let ids = match pair {
                Some(p) => vec![p.parse::<PairFormulaId>()?],
                None => PairFormulaId::ALL.to_vec(),
            };
            ids.into_iter()
                .map(|id| harness.check_formula_vs_oracle(id, n_max))
                .collect::<Result<_, _>>()?
        }
        Claim::GrowthBounds => patterns_or(avoid, &SINGLE_PATTERNS)?
            .iter()
            .map(|q| harness.check_growth_bounds(q, n_max))
            .collect::<Result<_, _>>()?,
        Claim::InsertionTheorem => patterns_or(avoid, &INSERTION_PATTERNS)?
            .iter()
            .map(|q| harness.check_insertion_theorem(q, n_max))
            .collect::<Result<_, _>>()?,
        Claim::KMinusOneQuestion => patterns_or(avoid, &K_MINUS_ONE_DEFAULTS)?
            .iter()
            .map(|q| harness.check_k_minus_one_question(q, n_max))
            .collect::<Result<_, _>>()?,
    };
    Ok(reports)
}

pub fn cmd_conjectures(cache: &CountCache, n_max: u64) -> Result<Vec<VerificationReport>, CliError> {
    let mut reports = cmd_verify(cache, Claim::ChainConjecture, Some(n_max), None, &[])?;
    for claim in [Claim::GrowthBounds, Claim::InsertionTheorem, Claim::KMinusOneQuestion] {
        reports.extend(cmd_verify(cache, claim, Some(n_max), None, &[])?);
    }
    Ok(reports)
}

/// The worst exit code over a batch of reports.
pub fn reports_exit_code(reports: &[VerificationReport]) -> i32 {
    let codes: Vec<i32> = reports.iter().map(VerificationReport::exit_code).collect();
    if codes.contains(&EXIT_FAILURE) {
        EXIT_FAILURE
    } else if codes.contains(&EXIT_EVIDENCE) {
        EXIT_EVIDENCE
    } else {
        EXIT_OK
    }
}

fn render_reports(reports: &[VerificationReport], format: Format) -> Outcome {
    let stdout = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            s
        }
        _ => reports.iter().map(VerificationReport::to_text).collect(),
    };
    Outcome {
        stdout,
        exit_code: reports_exit_code(reports),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleRow {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<String>,
}

pub fn cmd_triples(ns: Vec<u64>, with_perm: bool) -> Result<Vec<TripleRow>, CliError> {
    let mut rows = Vec::new();
    for n in ns {
        let n = u32::try_from(n).map_err(|_| CliError::Usage(format!("n = {n} is too large")))?;
        for t in enumerate_good_triples(n)? {
            rows.push(TripleRow {
                n,
                a: t.a(),
                b: t.b(),
                c: t.c(),
                permutation: with_perm.then(|| permutation_of_triple(t).to_string()),
            });
        }
    }
    Ok(rows)
}

fn render_triples(rows: &[TripleRow], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Text => rows.iter().fold(String::new(), |mut s, r| {
            write!(s, "n={} ({},{},{})", r.n, r.a, r.b, r.c).unwrap();
            if let Some(p) = &r.permutation {
                write!(s, "  {p}").unwrap();
            }
            s.push('\n');
            s
        }),
        _ => {
            let with_perm = rows.first().is_some_and(|r| r.permutation.is_some());
            let mut s = String::from(if with_perm { "n\ta\tb\tc\tpermutation\n" } else { "n\ta\tb\tc\n" });
            for r in rows {
                write!(s, "{}\t{}\t{}\t{}", r.n, r.a, r.b, r.c).unwrap();
                if let Some(p) = &r.permutation {
                    write!(s, "\t{p}").unwrap();
                }
                s.push('\n');
            }
            s
        }
    }
}

/// Renders a table; `bfile` uses its single column.
pub fn render_table(table: &CountTable, format: Format) -> String {
    match format {
        Format::Tsv => table.to_tsv(),
        Format::Text => table.to_text(),
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        Format::Bfile => {
            let col = table.columns().into_iter().next().unwrap_or_default();
            let terms: Vec<(u64, u64)> = table
                .ns()
                .filter_map(|n| table.count(n, &col).map(|v| (n, v)))
                .collect();
            cycpat::oeis::render_bfile(&terms)
        }
    }
}

/// Parses arguments, runs, and returns the exit code; output goes to the
/// standard streams.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        if !cfg.quiet {
            for w in cfg.warnings() {
                eprintln!("warning: {w}");
            }
        }
        execute(&cfg)
    });
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
