//! Subcommand definitions and handlers.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ducci::arith::is_prime;
use ducci::closure::classify_fast_with_budget;
use ducci::coeff::{row_binomial_exact, row_iterative, row_polypow, triple_fast};
use ducci::graph::{component, to_dot, DEFAULT_MAX_NODES};
use ducci::identities::{coefficient_identities, IdentityConfig, IdentityResult, EVEN_PRIME_PAIRS};
use ducci::oracle::classify_oracle;
use ducci::printed::PrintedTable;
use ducci::scan::{scan_conjectures, Family, ScanRanges, ScanRow};
use ducci::verify::{
    check_theorem2_params, verify_theorem1, verify_theorem2, Theorem1Case, VerificationRecord,
};
use ducci::{RingParams, Tuple};
use serde_json::json;

use crate::error::{CliError, CliResult, EXIT_OK, EXIT_RESOURCE, EXIT_VERIFY_FAILED};
use crate::expect::{compare, printed_expectations, read_expect_csv};
use crate::render::{render_report, render_table, Format};
use crate::sweep::{grid, run_sweep, ShapeFilter, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "ducci", version, about = "Ducci dynamics over Z_m^n")]
pub struct Cli {
    /// Step budget for cycle detection.
    #[arg(
        long,
        global = true,
        env = "DUCCI_MAX_STEPS",
        default_value_t = 100_000_000
    )]
    pub max_steps: u64,
    /// State budget for exhaustive enumeration.
    #[arg(
        long,
        global = true,
        env = "DUCCI_MAX_STATES",
        default_value_t = 2_000_000
    )]
    pub max_states: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one space by its basic sequence.
    Classify(ClassifyArgs),
    /// Classify many spaces, resuming from a cache.
    Table(TableArgs),
    /// Check the closure theorems or the coefficient identities.
    Verify(VerifyArgs),
    /// Write the transition graph component of a tuple as DOT.
    Graph(GraphArgs),
    /// Classify by enumerating every state.
    Oracle(OracleArgs),
    /// Print a coefficient row of D^r.
    Coeff(CoeffArgs),
    /// Check a conjectured family of closed spaces.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Explicit pairs, `n:m,n:m,...`.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pub pairs: Vec<(usize, u64)>,
    /// Include the rows of a printed table (closed, weak, neither) and compare against it.
    #[arg(long, value_delimiter = ',', value_parser = parse_printed)]
    pub printed: Vec<PrintedTable>,
    /// Range of n for a generated grid, `lo-hi`.
    #[arg(long, value_parser = parse_range, requires = "m_range")]
    pub n_range: Option<(u64, u64)>,
    /// Range of m for a generated grid, `lo-hi`.
    #[arg(long, value_parser = parse_range, requires = "n_range")]
    pub m_range: Option<(u64, u64)>,
    /// Grid filter: all, prime-minus-one, prime, even-n.
    #[arg(long, default_value = "all")]
    pub filter: String,
    /// CSV of expected rows (`n,m,classification,alpha,beta`).
    #[arg(long)]
    pub expect: Option<PathBuf>,
    /// JSON Lines cache; rows found here are not recomputed.
    #[arg(long, env = "DUCCI_CACHE")]
    pub cache: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Selector {
    #[value(name = "1.1")]
    PowerOfTwo,
    #[value(name = "1.2")]
    Prime,
    #[value(name = "1.3")]
    TwoPowerTimesPrime,
    #[value(name = "2")]
    EvenPrime,
    #[value(name = "coeff-identities")]
    CoeffIdentities,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub theorem: Selector,
    /// Smallest l (1.1, 1.3).
    #[arg(long, default_value_t = 1)]
    pub l_min: u32,
    /// Largest l (1.1 default 12, 1.3 default 6).
    #[arg(long)]
    pub l_max: Option<u32>,
    /// Largest prime m (1.2).
    #[arg(long, default_value_t = 1000)]
    pub m_max: u64,
    /// Primes p for 1.3.
    #[arg(long, value_delimiter = ',', default_values_t = [5u64, 11, 17, 23, 29])]
    pub primes: Vec<u64>,
    /// Pairs for 2, `n:m,...`.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pub pairs: Vec<(usize, u64)>,
    /// Seed for the randomized identity samples.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: u64,
    /// Seed tuple, `x1,x2,...,xn`.
    #[arg(long)]
    pub start: String,
    /// DOT file to write; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffMode {
    Iterative,
    Polypow,
    Exact,
    Triple,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long)]
    pub n: usize,
    /// Modulus; not needed for `--mode exact`.
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub r: u64,
    #[arg(long, value_enum, default_value_t = CoeffMode::Polypow)]
    pub mode: CoeffMode,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 6, 8])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub p_max: u64,
    /// Largest exponent of the odd primes.
    #[arg(long, default_value_t = 2)]
    pub exp_max: u32,
    /// Largest exponent of 2 in m.
    #[arg(long, default_value_t = 2)]
    pub two_exp_max: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub m_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn parse_pair(s: &str) -> Result<(usize, u64), String> {
    let (n, m) = s
        .split_once(':')
        .ok_or_else(|| format!("expected n:m, got `{s}`"))?;
    let n = n.trim().parse().map_err(|_| format!("bad n in `{s}`"))?;
    let m = m.trim().parse().map_err(|_| format!("bad m in `{s}`"))?;
    Ok((n, m))
}

fn parse_printed(s: &str) -> Result<PrintedTable, String> {
    s.parse().map_err(|e: ducci::DucciError| e.to_string())
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = match s.split_once('-') {
        Some((lo, hi)) => (lo, hi),
        None => (s, s),
    };
    let lo: u64 = lo.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

/// Output sinks for a command. Timing and progress go to `err` only.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Io<'_> {
    fn print(&mut self, text: &str) -> CliResult<()> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e))
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(self.err, "{text}");
    }
}

/// Runs a parsed command, returning its exit code.
pub fn run(cli: &Cli, io: &mut Io) -> CliResult<u8> {
    match &cli.command {
        Command::Classify(a) => classify(cli, a, io),
        Command::Table(a) => table(cli, a, io),
        Command::Verify(a) => verify(a, io),
        Command::Graph(a) => graph(a, io),
        Command::Oracle(a) => oracle(cli, a, io),
        Command::Coeff(a) => coeff(a, io),
        Command::Scan(a) => scan(cli, a, io),
    }
}

fn classify(cli: &Cli, a: &ClassifyArgs, io: &mut Io) -> CliResult<u8> {
    let params = RingParams::new(a.n, a.m)?;
    let report = classify_fast_with_budget(params, cli.max_steps)?;
    io.print(&render_report(&report, a.format))?;
    Ok(EXIT_OK)
}

fn table(cli: &Cli, a: &TableArgs, io: &mut Io) -> CliResult<u8> {
    let filter: ShapeFilter = a.filter.parse()?;
    let mut pairs = a.pairs.clone();
    let mut expectations = Vec::new();
    let explicit = !a.pairs.is_empty() || a.n_range.is_some();
    let tables: Vec<PrintedTable> = if a.printed.is_empty() && !explicit && a.expect.is_none() {
        PrintedTable::ALL.to_vec()
    } else {
        a.printed.clone()
    };
    for &t in &tables {
        let exps = printed_expectations(t);
        pairs.extend(exps.iter().map(|e| (e.n, e.m)));
        expectations.extend(exps);
    }
    if let (Some(ns), Some(ms)) = (a.n_range, a.m_range) {
        let n_hi =
            usize::try_from(ns.1).map_err(|_| CliError::Invalid("n range too large".into()))?;
        pairs.extend(grid((ns.0 as usize, n_hi), ms, filter));
    }
    if let Some(path) = &a.expect {
        let exps = read_expect_csv(path)?;
        if !explicit && a.printed.is_empty() {
            pairs.extend(exps.iter().map(|e| (e.n, e.m)));
        }
        expectations.extend(exps);
    }
    if pairs.is_empty() {
        return Err(CliError::Invalid("the sweep selects no pairs".into()));
    }
    let jobs = a
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let spec = SweepSpec::new(pairs, jobs, cli.max_steps);
    let outcome = run_sweep(&spec, a.cache.as_deref())?;
    let agreement = compare(&expectations, &outcome.rows);
    io.print(&render_table(&outcome.rows, &agreement, a.format))?;

    let disagree = agreement
        .iter()
        .filter(|x| x.status.as_str() == "disagree")
        .count();
    io.note(&format!(
        "{} pairs: {} computed ({} steps), {} from cache, {} unresolved, {} disagreements; {} ms",
        outcome.rows.len(),
        outcome.computed,
        outcome.steps,
        outcome.from_cache,
        outcome.unresolved(),
        disagree,
        outcome.wall_ms
    ));
    Ok(if outcome.unresolved() > 0 {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    })
}

fn theorem1_cases(a: &VerifyArgs) -> CliResult<Vec<Theorem1Case>> {
    Ok(match a.theorem {
        Selector::PowerOfTwo => (a.l_min..=a.l_max.unwrap_or(12))
            .map(|l| Theorem1Case::PowerOfTwo { l })
            .collect(),
        Selector::Prime => (5..=a.m_max)
            .filter(|&m| is_prime(m) && m % 6 == 5)
            .map(|m| Theorem1Case::Prime { m })
            .collect(),
        Selector::TwoPowerTimesPrime => {
            let mut cases = Vec::new();
            for l in a.l_min..=a.l_max.unwrap_or(6) {
                for &p in &a.primes {
                    cases.push(Theorem1Case::TwoPowerTimesPrime { l, p });
                }
            }
            cases
        }
        _ => unreachable!("theorem 1 selectors only"),
    })
}

fn verify(a: &VerifyArgs, io: &mut Io) -> CliResult<u8> {
    if a.theorem == Selector::CoeffIdentities {
        let mut cfg = IdentityConfig::default();
        if let Some(seed) = a.seed {
            cfg.seed = seed;
        }
        let results = coefficient_identities(&cfg)?;
        io.print(&render_identities(&results, a.format))?;
        return Ok(if results.iter().all(|r| r.pass) {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        });
    }
    let records: Vec<VerificationRecord> = if a.theorem == Selector::EvenPrime {
        let pairs = if a.pairs.is_empty() {
            EVEN_PRIME_PAIRS.to_vec()
        } else {
            a.pairs.clone()
        };
        for &(n, m) in &pairs {
            check_theorem2_params(n, m)?;
        }
        pairs
            .iter()
            .map(|&(n, m)| verify_theorem2(n, m))
            .collect::<Result<_, _>>()?
    } else {
        let cases = theorem1_cases(a)?;
        if cases.is_empty() {
            return Err(CliError::Invalid("the range selects no cases".into()));
        }
        cases
            .into_iter()
            .map(verify_theorem1)
            .collect::<Result<_, _>>()?
    };
    io.print(&render_records(&records, a.format))?;
    Ok(if records.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render_records(records: &[VerificationRecord], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(records).expect("records serialize") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "name",
                "n",
                "m",
                "check",
                "expected",
                "observed",
                "pass",
                "informational",
            ])
            .expect("write to memory");
            for r in records {
                for c in &r.checks {
                    w.write_record([
                        r.name.clone(),
                        r.n.to_string(),
                        r.m.to_string(),
                        c.label.clone(),
                        c.expected.clone(),
                        c.observed.clone(),
                        c.pass.to_string(),
                        c.informational.to_string(),
                    ])
                    .expect("write to memory");
                }
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => {
            let mut out = String::new();
            for r in records {
                out += &format!("{} {}\n", verdict(r.pass), r.name);
                for c in &r.checks {
                    let tag = match (c.informational, c.pass) {
                        (true, _) => "note",
                        (false, true) => "ok",
                        (false, false) => "FAIL",
                    };
                    out += &format!(
                        "  {tag:<4} {}: expected {}, observed {}\n",
                        c.label, c.expected, c.observed
                    );
                }
            }
            let passed = records.iter().filter(|r| r.pass).count();
            out += &format!("{passed} of {} passed\n", records.len());
            out
        }
    }
}

fn render_identities(results: &[IdentityResult], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(results).expect("results serialize") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "cases", "failures", "pass"])
                .expect("write to memory");
            for r in results {
                w.write_record([
                    r.name.clone(),
                    r.cases.to_string(),
                    r.failure_count.to_string(),
                    r.pass.to_string(),
                ])
                .expect("write to memory");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => {
            let mut out = String::new();
            for r in results {
                out += &format!("{} {} ({} cases)\n", verdict(r.pass), r.name, r.cases);
                for f in &r.failures {
                    out += &format!("  failed at {f}\n");
                }
            }
            out
        }
    }
}

fn graph(a: &GraphArgs, io: &mut Io) -> CliResult<u8> {
    let params = RingParams::new(a.n, a.m)?;
    let start = Tuple::parse(params, &a.start)?;
    let g = component(&start, a.max_nodes)?;
    let dot = to_dot(&g);
    let summary = format!(
        "nodes={} edges={} cycle={} tail_depth={}",
        g.nodes.len(),
        g.edges.len(),
        g.cycle_nodes.len(),
        g.tail_depth
    );
    match &a.output {
        Some(path) => {
            std::fs::write(path, dot).map_err(|e| CliError::io(path, e))?;
            io.print(&(summary + "\n"))?;
        }
        None => {
            io.print(&dot)?;
            io.note(&summary);
        }
    }
    Ok(EXIT_OK)
}

fn oracle(cli: &Cli, a: &OracleArgs, io: &mut Io) -> CliResult<u8> {
    let params = RingParams::new(a.n, a.m)?;
    let report = classify_oracle(params, cli.max_states)?;
    let text = match a.format {
        Format::Json => serde_json::to_string(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let betas: Vec<String> = report.universal_betas.iter().map(u64::to_string).collect();
            format!(
                "n,m,component_count,universal_betas,per_state_weak,classification,states_visited\n{},{},{},{},{},{},{}\n",
                report.n,
                report.m,
                report.component_count,
                betas.join(";"),
                report.per_state_weak,
                report.classification,
                report.states_visited
            )
        }
        Format::Text => format!(
            "{} {}\n  components: {}\n  universal betas: {:?}\n  every state weakly closed: {}\n  states: {}\n",
            params,
            report.classification,
            report.component_count,
            report.universal_betas,
            report.per_state_weak,
            report.states_visited
        ),
    };
    io.print(&text)?;
    Ok(EXIT_OK)
}

fn coeff(a: &CoeffArgs, io: &mut Io) -> CliResult<u8> {
    let modulus = || {
        a.m.ok_or_else(|| CliError::Invalid(format!("--m is required for mode {:?}", a.mode)))
    };
    let (values, m_field): (Vec<String>, serde_json::Value) = match a.mode {
        CoeffMode::Exact => {
            if a.n == 0 {
                return Err(CliError::Invalid("n must be at least 1".into()));
            }
            let row = row_binomial_exact(a.r, a.n)?;
            match a.m {
                Some(m) => {
                    RingParams::new(a.n, m)?;
                    let red = row.reduce(m);
                    (red.values.iter().map(u64::to_string).collect(), json!(m))
                }
                None => (
                    row.values.iter().map(|v| v.to_string()).collect(),
                    json!("exact"),
                ),
            }
        }
        CoeffMode::Triple => {
            if a.n != 3 {
                return Err(CliError::Invalid("mode triple needs n = 3".into()));
            }
            let m = modulus()?;
            let t = triple_fast(a.r, m)?;
            (
                vec![t.a.to_string(), t.b.to_string(), t.c.to_string()],
                json!(m),
            )
        }
        CoeffMode::Iterative | CoeffMode::Polypow => {
            let params = RingParams::new(a.n, modulus()?)?;
            let row = if a.mode == CoeffMode::Iterative {
                row_iterative(a.r, params)
            } else {
                row_polypow(a.r, params)
            };
            (
                row.values.iter().map(u64::to_string).collect(),
                json!(row.m),
            )
        }
    };
    let text = match a.format {
        Format::Json => {
            let as_numbers = m_field.is_number();
            let vals: Vec<serde_json::Value> = values
                .iter()
                .map(|v| {
                    if as_numbers {
                        json!(v.parse::<u64>().expect("reduced value"))
                    } else {
                        json!(v)
                    }
                })
                .collect();
            json!({"r": a.r, "n": a.n, "m": m_field, "values": vals}).to_string() + "\n"
        }
        Format::Csv => {
            let header: Vec<String> = (1..=values.len()).map(|s| format!("a{s}")).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
        Format::Text => values.join(",") + "\n",
    };
    io.print(&text)?;
    Ok(EXIT_OK)
}

const SCAN_COLUMNS: [&str; 11] = [
    "family",
    "n",
    "m",
    "predicted_alpha",
    "predicted_beta",
    "relation_holds",
    "classification",
    "alpha",
    "beta_canonical",
    "agrees",
    "error",
];

fn scan_fields(r: &ScanRow) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    let rep = r.report.as_ref();
    vec![
        r.family.to_string(),
        r.n.to_string(),
        r.m.to_string(),
        opt(r.predicted.map(|p| p.0.to_string())),
        opt(r.predicted.map(|p| p.1.to_string())),
        opt(r.relation_holds.map(|b| b.to_string())),
        opt(rep.map(|x| x.classification.to_string())),
        opt(rep.and_then(|x| x.alpha_min).map(|v| v.to_string())),
        opt(rep.and_then(|x| x.beta_canonical).map(|v| v.to_string())),
        r.agrees.to_string(),
        opt(r.error.clone()),
    ]
}

fn scan(cli: &Cli, a: &ScanArgs, io: &mut Io) -> CliResult<u8> {
    let family: Family = a.family.parse()?;
    let ranges = ScanRanges {
        ns: a.n.clone(),
        p_max: a.p_max,
        exp_max: a.exp_max,
        two_exp_max: a.two_exp_max,
        m_max: a.m_max,
        max_steps: cli.max_steps,
    };
    let rows = scan_conjectures(family, &ranges);
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv | Format::Text => {
            let sep = if a.format == Format::Csv { "," } else { "  " };
            let mut w = csv::WriterBuilder::new()
                .delimiter(sep.as_bytes()[0])
                .from_writer(Vec::new());
            w.write_record(SCAN_COLUMNS).expect("write to memory");
            for r in &rows {
                w.write_record(scan_fields(r)).expect("write to memory");
            }
            let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
            let agree = rows.iter().filter(|r| r.agrees).count();
            if a.format == Format::Text {
                format!("{body}{agree} of {} agree\n", rows.len())
            } else {
                body
            }
        }
    };
    io.print(&text)?;
    io.note(&format!(
        "{} of {} rows agree",
        rows.iter().filter(|r| r.agrees).count(),
        rows.len()
    ));
    Ok(EXIT_OK)
}
