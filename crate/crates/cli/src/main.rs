//! `symcut` command-line front end.
//!
//! Exit status: 0 on success, 1 on invalid input or infeasible requests, 2 when
//! a property checked by the run does not hold.

mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symcut::embed::{combined_distance, default_scale1, phi1_distance, phi2_distance, phi_combined_with_margin, CombinedRecord, InteriorMargin};
use symcut::experiments::{
    cube_audit, distortion_audit, drift_walk, AuditConfig, AuditMode, CubeConfig, DriftConfig, Proxy, StepSet, VERSION,
};
use symcut::{synthesize, DistanceTable, FormulaBreakdown, FormulaEvaluator, Permutation, DEFAULT_BFS_LIMIT};

use output::{Format, Sink};

/// Distortion ceiling checked by `audit` in exact mode.
const DISTORTION_CEILING: f64 = 1000.0;

#[derive(Parser)]
#[command(name = "symcut", version, about = "Word metric, synthesis and L1 embeddings of Sym_n under {t, c}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Breadth-first word lengths of every element of Sym_n.
    Oracle(OracleArgs),
    /// Closed-form word-length estimate, of one permutation or between two.
    Formula(FormulaArgs),
    /// Explicit generator word for a permutation.
    Synth(SynthArgs),
    /// Coordinates of the combined embedding, or distances between two points.
    Embed(EmbedArgs),
    /// Distortion certificate of the combined embedding.
    Audit(AuditArgs),
    /// Hamming-cube embedding audit.
    Cube(CubeArgs),
    /// Random-walk drift series.
    Drift(DriftArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Output path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Clone)]
struct Guard {
    /// Largest degree for which the breadth-first table is built.
    #[arg(long, default_value_t = DEFAULT_BFS_LIMIT)]
    limit: usize,
    /// Lift the breadth-first degree guard.
    #[arg(long)]
    force: bool,
}

impl Guard {
    fn limit(&self) -> usize {
        if self.force {
            usize::MAX
        } else {
            self.limit
        }
    }
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    guard: Guard,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FormulaArgs {
    /// Permutation in one-line notation, e.g. `1,2,3,0`.
    #[arg(long)]
    perm: Permutation,
    /// Second permutation; the output is then the distance estimate.
    #[arg(long)]
    other: Option<Permutation>,
    /// Expected degree, checked against the input.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    perm: Permutation,
    #[arg(long)]
    n: Option<usize>,
    /// Verify the word: evaluation, certified bound and, when the degree is
    /// within the guard, the breadth-first length floor.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    guard: Guard,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    perm: Permutation,
    #[arg(long)]
    other: Option<Permutation>,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct EmbeddingArgs {
    /// Weight of the exponential-sum part; defaults to 1/(4π).
    #[arg(long)]
    scale1: Option<f64>,
    /// Interval interior margin of the interval embedding.
    #[arg(long, default_value_t = InteriorMargin::default().0)]
    interior_margin: usize,
}

impl EmbeddingArgs {
    fn scale1(&self) -> f64 {
        self.scale1.unwrap_or_else(default_scale1)
    }
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Sampled pairs; 0 checks every unordered pair.
    #[arg(long, default_value_t = 0)]
    sample_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[command(flatten)]
    guard: Guard,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CubeArgs {
    /// Cube dimension; the group degree is 4n².
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    sample_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    guard: Guard,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DriftArgs {
    #[arg(long)]
    n: usize,
    /// Walk length; defaults to n/4.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "formula")]
    proxy: ProxyArg,
    #[arg(long, value_enum, default_value = "uniform3")]
    steps: StepsArg,
    #[command(flatten)]
    guard: Guard,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Envelope,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProxyArg {
    Formula,
    Bfs,
}

#[derive(Clone, Copy, ValueEnum)]
enum StepsArg {
    Uniform3,
    TDoubled,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Property(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Run = Result<(), Failure>;

fn check_degree(p: &Permutation, n: Option<usize>) -> Run {
    match n {
        Some(n) if n != p.n() => Err(Failure::Invalid(format!(
            "--n {n} does not match the degree {} of the permutation",
            p.n()
        ))),
        _ => Ok(()),
    }
}

fn oracle(args: &OracleArgs) -> Run {
    #[derive(Serialize)]
    struct Row {
        rank: usize,
        perm: String,
        length: usize,
    }
    #[derive(Serialize)]
    struct Report {
        version: &'static str,
        n: usize,
        diameter: usize,
        wall_time_ms: u64,
        entries: Vec<Row>,
    }
    let started = Instant::now();
    let table = DistanceTable::build_with_limit(args.n, args.guard.limit())?;
    let entries: Vec<Row> = table
        .iter()
        .enumerate()
        .map(|(rank, (p, length))| Row { rank, perm: p.to_string(), length })
        .collect();
    let sink = Sink::new(&args.common.out, args.common.format, Format::Csv);
    match sink.format() {
        Format::Csv => sink.csv(&entries)?,
        Format::Json => sink.json(&Report {
            version: VERSION,
            n: args.n,
            diameter: table.diameter(),
            wall_time_ms: started.elapsed().as_millis() as u64,
            entries,
        })?,
    }
    Ok(())
}

fn formula(args: &FormulaArgs) -> Run {
    #[derive(Serialize)]
    struct Report<'a> {
        version: &'static str,
        #[serde(flatten)]
        breakdown: &'a FormulaBreakdown,
        t1: usize,
        t2: usize,
        upper_value: usize,
    }
    check_degree(&args.perm, args.n)?;
    let mut eval = FormulaEvaluator::new(args.perm.n());
    let b = match &args.other {
        Some(q) => eval.distance(&args.perm, q)?,
        None => eval.length(&args.perm),
    };
    let sink = Sink::new(&args.common.out, args.common.format, Format::Json);
    match sink.format() {
        Format::Csv => sink.csv(&b.per_shift)?,
        Format::Json => sink.json(&Report {
            version: VERSION,
            breakdown: &b,
            t1: b.t1(),
            t2: b.t2(),
            upper_value: b.upper_value(),
        })?,
    }
    Ok(())
}

fn synth(args: &SynthArgs) -> Run {
    #[derive(Serialize)]
    struct Report {
        version: &'static str,
        target: String,
        word: String,
        length: usize,
        certified_bound: usize,
        l_star: usize,
        bfs_length: Option<usize>,
        checked: bool,
    }
    check_degree(&args.perm, args.n)?;
    let certified = synthesize(&args.perm);
    let n = args.perm.n();
    let mut problems = Vec::new();
    let mut bfs_length = None;
    if args.check {
        if certified.word.eval() != args.perm {
            problems.push("word does not evaluate to the target".to_string());
        }
        if certified.length() > certified.certified_bound {
            problems.push(format!(
                "length {} exceeds the certified bound {}",
                certified.length(),
                certified.certified_bound
            ));
        }
        if n <= args.guard.limit() {
            let d = DistanceTable::build_with_limit(n, args.guard.limit())?.length(&args.perm);
            if certified.length() < d {
                problems.push(format!("length {} is below the word length {d}", certified.length()));
            }
            bfs_length = Some(d);
        }
    }
    let report = Report {
        version: VERSION,
        target: args.perm.to_string(),
        word: certified.word.to_string(),
        length: certified.length(),
        certified_bound: certified.certified_bound,
        l_star: certified.shift_used,
        bfs_length,
        checked: args.check,
    };
    let sink = Sink::new(&args.common.out, args.common.format, Format::Json);
    match sink.format() {
        Format::Csv => sink.csv(std::slice::from_ref(&report))?,
        Format::Json => sink.json(&report)?,
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(problems.join("; ")))
    }
}

fn embed(args: &EmbedArgs) -> Run {
    #[derive(Serialize)]
    struct Distances {
        version: &'static str,
        p: String,
        q: String,
        phi1: f64,
        phi2: f64,
        scale1: f64,
        combined: f64,
        interior_margin: usize,
    }
    #[derive(Serialize)]
    struct Coordinates {
        version: &'static str,
        perm: String,
        interior_margin: usize,
        #[serde(flatten)]
        record: CombinedRecord<f64>,
    }
    #[derive(Serialize)]
    struct CoordinateRow {
        part: &'static str,
        key: String,
        value: f64,
    }
    check_degree(&args.perm, args.n)?;
    let margin = InteriorMargin(args.embedding.interior_margin);
    let scale1 = args.embedding.scale1();
    let a = phi_combined_with_margin::<f64>(&args.perm, scale1, margin)?;
    let sink = Sink::new(&args.common.out, args.common.format, Format::Json);
    if let Some(other) = &args.other {
        let b = phi_combined_with_margin::<f64>(other, scale1, margin)?;
        let report = Distances {
            version: VERSION,
            p: args.perm.to_string(),
            q: other.to_string(),
            phi1: phi1_distance(&a.grid, &b.grid)?,
            phi2: phi2_distance(&a.sparse, &b.sparse),
            scale1,
            combined: combined_distance(&a, &b)?,
            interior_margin: margin.0,
        };
        match sink.format() {
            Format::Csv => sink.csv(std::slice::from_ref(&report))?,
            Format::Json => sink.json(&report)?,
        }
        return Ok(());
    }
    let record = CombinedRecord::from(&a);
    match sink.format() {
        Format::Csv => {
            let n = args.perm.n();
            let mut rows: Vec<CoordinateRow> = record
                .phi1
                .angles
                .iter()
                .enumerate()
                .map(|(i, &value)| CoordinateRow {
                    part: "phi1",
                    key: format!("{}:{}", i / n, i % n),
                    value,
                })
                .collect();
            rows.extend(record.phi2.iter().map(|r| CoordinateRow {
                part: "phi2",
                key: r
                    .values
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
                value: r.coeff,
            }));
            sink.csv(&rows)?
        }
        Format::Json => sink.json(&Coordinates {
            version: VERSION,
            perm: args.perm.to_string(),
            interior_margin: margin.0,
            record,
        })?,
    }
    Ok(())
}

fn audit(args: &AuditArgs) -> Run {
    let mode = match args.mode {
        ModeArg::Exact => AuditMode::Exact,
        ModeArg::Envelope => AuditMode::Envelope,
    };
    let sink = Sink::new(&args.common.out, args.common.format, Format::Json);
    let mut config = AuditConfig::<f64>::new(args.n, mode);
    config.sample_size = args.sample_size;
    config.seed = args.seed;
    config.scale1 = args.embedding.scale1();
    config.margin = InteriorMargin(args.embedding.interior_margin);
    config.bfs_limit = args.guard.limit();
    config.collect_pairs = sink.format() == Format::Csv;
    let outcome = distortion_audit(&config)?;
    match sink.format() {
        Format::Csv => sink.csv(&outcome.pairs)?,
        Format::Json => sink.json(&outcome.report)?,
    }
    let r = &outcome.report;
    if !r.envelope_consistent {
        return Err(Failure::Property("lower envelope exceeds upper envelope".into()));
    }
    // NaN and infinity both fail
    let within = r.distortion <= DISTORTION_CEILING;
    if mode == AuditMode::Exact && !within {
        return Err(Failure::Property(format!(
            "distortion {} exceeds {DISTORTION_CEILING}",
            r.distortion
        )));
    }
    Ok(())
}

fn cube(args: &CubeArgs) -> Run {
    let sink = Sink::new(&args.common.out, args.common.format, Format::Json);
    let mut config = CubeConfig::new(args.n);
    config.sample_size = args.sample_size;
    config.seed = args.seed;
    config.bfs_limit = args.guard.limit();
    config.collect_pairs = sink.format() == Format::Csv;
    let outcome = cube_audit::<f64>(&config)?;
    match sink.format() {
        Format::Csv => sink.csv(&outcome.pairs)?,
        Format::Json => sink.json(&outcome.report)?,
    }
    let r = &outcome.report;
    let mut problems = Vec::new();
    if !r.minimizer_at_zero {
        problems.push(format!("sum term not uniquely minimized at 0 on {} pairs", r.minimizer_failures));
    }
    if !r.envelope_consistent {
        problems.push("lower envelope exceeds upper envelope".to_string());
    }
    if r.exact.as_ref().is_some_and(|e| !e.sandwich_holds) {
        problems.push("exact distance escapes the envelope".to_string());
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(problems.join("; ")))
    }
}

fn drift(args: &DriftArgs) -> Run {
    let mut config = DriftConfig::new(args.n, args.horizon.unwrap_or(args.n / 4), args.trials);
    config.seed = args.seed;
    config.proxy = match args.proxy {
        ProxyArg::Formula => Proxy::Formula,
        ProxyArg::Bfs => Proxy::Bfs,
    };
    config.steps = match args.steps {
        StepsArg::Uniform3 => StepSet::Uniform3,
        StepsArg::TDoubled => StepSet::TDoubled,
    };
    config.bfs_limit = args.guard.limit();
    let series = drift_walk::<f64>(&config)?;
    let sink = Sink::new(&args.common.out, args.common.format, Format::Json);
    match sink.format() {
        Format::Csv => sink.csv(&series.series)?,
        Format::Json => sink.json(&series)?,
    }
    let escaped: Vec<usize> = series
        .series
        .iter()
        .filter(|p| p.mean > p.t as f64)
        .map(|p| p.t)
        .collect();
    if escaped.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(format!("mean exceeds t at steps {escaped:?}")))
    }
}

fn threads(command: &Command) -> Option<usize> {
    let common = match command {
        Command::Oracle(a) => &a.common,
        Command::Formula(a) => &a.common,
        Command::Synth(a) => &a.common,
        Command::Embed(a) => &a.common,
        Command::Audit(a) => &a.common,
        Command::Cube(a) => &a.common,
        Command::Drift(a) => &a.common,
    };
    common.threads
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = threads(&cli.command) {
        if k == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Oracle(a) => oracle(a),
        Command::Formula(a) => formula(a),
        Command::Synth(a) => synth(a),
        Command::Embed(a) => embed(a),
        Command::Audit(a) => audit(a),
        Command::Cube(a) => cube(a),
        Command::Drift(a) => drift(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Property(msg)) => {
            eprintln!("property failed: {msg}");
            ExitCode::from(2)
        }
    }
}
