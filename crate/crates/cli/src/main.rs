//! `gambit`: disambiguate author aliases from the command line.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gambit_core::io::{
    extract_from_log, read_aliases, read_partition, write_aliases_to, write_pairs,
    write_partition_to,
};
use gambit_core::{
    disambiguate, evaluate, sweep, triage, Alias, MatcherConfig, Measure, Method, StopWords,
};

#[derive(Parser, Debug)]
#[command(
    name = "gambit",
    version,
    about = "Merge author aliases (name + email) into unique identities"
)]
struct Cli {
    /// Worker threads for pair scoring [default: all cores]
    #[arg(long, global = true, env = "GAMBIT_THREADS")]
    threads: Option<usize>,

    /// Suppress progress messages on stderr
    #[arg(short, long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cluster an alias file and write a partition file
    Disambiguate(DisambiguateArgs),
    /// Score a predicted partition against ground truth
    Evaluate(EvaluateArgs),
    /// Evaluate methods over a grid of thresholds
    Sweep(SweepArgs),
    /// Pre-sort alias pairs for manual labelling
    Triage(TriageArgs),
    /// Build an alias file from `name<TAB>email` log lines
    Extract(ExtractArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Gambit,
    Bird,
    Simple,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Gambit => Method::Gambit,
            MethodArg::Bird => Method::Bird,
            MethodArg::Simple => Method::Simple,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MeasureArg {
    /// Normalised Levenshtein
    Lev,
    /// Jaro-Winkler
    Jw,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Lev => Measure::Levenshtein,
            MeasureArg::Jw => Measure::JaroWinkler,
        }
    }
}

#[derive(Args, Debug)]
struct StopWordArgs {
    /// Stop-word file, one token per line (replaces the built-in list)
    #[arg(long, value_name = "FILE")]
    stop_words: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DisambiguateArgs {
    /// Alias CSV with header `id,name,email`
    input: PathBuf,
    /// Output partition CSV [default: stdout]
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "gambit")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "lev")]
    measure: MeasureArg,
    /// Similarity threshold in [0, 1] [default: 0.95]
    #[arg(short, long)]
    threshold: Option<f64>,
    /// Strings shorter than this never count as similar
    #[arg(long, default_value_t = gambit_core::rules::DEFAULT_MIN_LEN)]
    min_len: usize,
    #[command(flatten)]
    stop_words: StopWordArgs,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Predicted partition CSV
    #[arg(long)]
    pred: PathBuf,
    /// Ground-truth partition CSV
    #[arg(long)]
    truth: PathBuf,
    /// Also write the report as JSON
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Alias CSV with header `id,name,email`
    aliases: PathBuf,
    /// Ground-truth partition CSV
    #[arg(long)]
    truth: PathBuf,
    /// Threshold grid as start:stop:step, both ends inclusive
    #[arg(long, default_value = "0.5:1.0:0.05", value_parser = parse_grid)]
    thresholds: Grid,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "gambit,bird,simple"
    )]
    methods: Vec<MethodArg>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "lev,jw")]
    measures: Vec<MeasureArg>,
    #[arg(long, default_value_t = gambit_core::rules::DEFAULT_MIN_LEN)]
    min_len: usize,
    /// Output CSV, one row per run [default: stdout]
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write a wide precision/recall/F1 table keyed by threshold
    #[arg(long, value_name = "FILE")]
    pr_table: Option<PathBuf>,
    #[command(flatten)]
    stop_words: StopWordArgs,
}

#[derive(Args, Debug)]
struct TriageArgs {
    /// Alias CSV with header `id,name,email`
    aliases: PathBuf,
    /// Pairs below this similarity on both name and email are auto-differ
    #[arg(long, default_value_t = 0.5)]
    cutoff: f64,
    /// Directory for auto_match.csv, auto_differ.csv and undecided.csv
    #[arg(long)]
    out_dir: PathBuf,
    #[command(flatten)]
    stop_words: StopWordArgs,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    /// Log file with one `name<TAB>email` per line [default: stdin]
    input: Option<PathBuf>,
    /// Output alias CSV [default: stdout]
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<f64>, String>>()?;
    let grid = match nums[..] {
        [t] => vec![t],
        [start, stop, step] => {
            // Written so that NaN fails too.
            let ordered = step > 0.0 && start <= stop;
            if !ordered {
                return Err("expected start <= stop and step > 0".into());
            }
            // Tolerance keeps `stop` when step divides the range up to rounding.
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=n)
                .map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9)
                .collect()
        }
        _ => return Err("expected start:stop:step or a single value".into()),
    };
    if let Some(t) = grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(format!("threshold {t} is outside [0, 1]"));
    }
    Ok(Grid(grid))
}

enum Failure {
    Usage(String),
    Core(gambit_core::Error),
}

impl From<gambit_core::Error> for Failure {
    fn from(e: gambit_core::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    quiet: bool,
}

impl Ctx {
    fn progress(&self, msg: std::fmt::Arguments) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |source| {
        Failure::Core(gambit_core::Error::Io {
            path: path.into(),
            source,
        })
    }
}

/// Opens `path` for writing, or stdout when absent.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => Ok(Box::new(BufWriter::new(
            File::create(p).map_err(io_err(p))?,
        ))),
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn sink_name(path: Option<&Path>) -> &Path {
    path.unwrap_or(Path::new("<stdout>"))
}

fn load_aliases(path: &Path, stop_words: &StopWordArgs) -> Result<Vec<Alias>, Failure> {
    let sw = match &stop_words.stop_words {
        Some(p) => StopWords::load(p)?,
        None => StopWords::default(),
    };
    let raws = read_aliases(path)?;
    Ok(raws.iter().map(|r| Alias::from_raw(r, &sw)).collect())
}

fn run_disambiguate(ctx: &Ctx, args: DisambiguateArgs) -> Outcome {
    let method = Method::from(args.method);
    if args.threshold.is_some() && !method.uses_threshold() {
        eprintln!("warning: --threshold has no effect with --method {method}");
    }
    let cfg = MatcherConfig::new(
        args.threshold
            .unwrap_or(gambit_core::rules::DEFAULT_THRESHOLD),
        args.measure.into(),
        args.min_len,
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let aliases = load_aliases(&args.input, &args.stop_words)?;
    let start = Instant::now();
    let partition = disambiguate(&aliases, method, &cfg)?;
    if partition.len() != aliases.len() {
        return Err(Failure::Core(gambit_core::Error::Invariant(format!(
            "partition covers {} of {} aliases",
            partition.len(),
            aliases.len()
        ))));
    }
    ctx.progress(format_args!(
        "{method}: {} aliases -> {} authors in {} ms",
        aliases.len(),
        partition.num_authors(),
        start.elapsed().as_millis()
    ));
    let out_path = args.output.as_deref();
    let mut out = sink(out_path)?;
    write_partition_to(&mut out, &partition)
        .and_then(|_| out.flush())
        .map_err(io_err(sink_name(out_path)))
}

fn run_evaluate(args: EvaluateArgs) -> Outcome {
    let pred = read_partition(&args.pred)?;
    let truth = read_partition(&args.truth)?;
    let report = evaluate(&pred, &truth)?;
    println!(
        "tp={} fp={} fn={} precision={:.6} recall={:.6} f1={:.6}",
        report.tp, report.fp, report.fn_, report.precision, report.recall, report.f1
    );
    if let Some(path) = &args.output {
        let mut json = serde_json::to_string_pretty(&report)
            .map_err(|e| Failure::Core(gambit_core::Error::Invariant(e.to_string())))?;
        json.push('\n');
        fs::write(path, json).map_err(io_err(path))?;
    }
    Ok(())
}

fn run_sweep(ctx: &Ctx, args: SweepArgs) -> Outcome {
    let aliases = load_aliases(&args.aliases, &args.stop_words)?;
    let truth = read_partition(&args.truth)?;
    let methods: Vec<Method> = args.methods.iter().map(|&m| m.into()).collect();
    let measures: Vec<Measure> = args.measures.iter().map(|&m| m.into()).collect();
    ctx.progress(format_args!(
        "sweeping {} thresholds over {} aliases",
        args.thresholds.0.len(),
        aliases.len()
    ));
    let result = sweep(
        &aliases,
        &truth,
        &methods,
        &measures,
        &args.thresholds.0,
        args.min_len,
    )?;
    for row in &result.rows {
        ctx.progress(format_args!(
            "  {} {} {}: f1={:.4} ({} ms)",
            row.method,
            row.measure.map_or("-".into(), |m| m.to_string()),
            row.threshold.map_or("-".into(), |t| t.to_string()),
            row.report.f1,
            row.wall_time_ms
        ));
    }
    let out_path = args.output.as_deref();
    let mut out = sink(out_path)?;
    result.write_csv(&mut out)?;
    out.flush().map_err(io_err(sink_name(out_path)))?;
    if let Some(path) = &args.pr_table {
        let mut out = BufWriter::new(File::create(path).map_err(io_err(path))?);
        result.write_pr_table(&mut out)?;
        out.flush().map_err(io_err(path))?;
    }
    Ok(())
}

fn run_triage(ctx: &Ctx, args: TriageArgs) -> Outcome {
    if !(0.0..=1.0).contains(&args.cutoff) {
        return Err(Failure::Usage(format!(
            "--cutoff {} is outside [0, 1]",
            args.cutoff
        )));
    }
    let aliases = load_aliases(&args.aliases, &args.stop_words)?;
    let result = triage(&aliases, args.cutoff);
    fs::create_dir_all(&args.out_dir).map_err(io_err(&args.out_dir))?;
    for (name, pairs) in [
        ("auto_match.csv", &result.auto_match),
        ("auto_differ.csv", &result.auto_differ),
        ("undecided.csv", &result.undecided),
    ] {
        write_pairs(args.out_dir.join(name), pairs)?;
    }
    ctx.progress(format_args!(
        "{} pairs: {} auto-match, {} auto-differ, {} undecided",
        result.total(),
        result.auto_match.len(),
        result.auto_differ.len(),
        result.undecided.len()
    ));
    Ok(())
}

fn run_extract(ctx: &Ctx, args: ExtractArgs) -> Outcome {
    let extracted = match args.input.as_deref() {
        Some(p) if p != Path::new("-") => {
            let file = File::open(p).map_err(io_err(p))?;
            extract_from_log(BufReader::new(file)).map_err(io_err(p))?
        }
        _ => extract_from_log(io::stdin().lock()).map_err(io_err(Path::new("<stdin>")))?,
    };
    ctx.progress(format_args!(
        "{} distinct aliases, {} lines skipped (no tab)",
        extracted.aliases.len(),
        extracted.skipped
    ));
    let out_path = args.output.as_deref();
    let mut out = sink(out_path)?;
    write_aliases_to(&mut out, &extracted.aliases)
        .and_then(|_| out.flush())
        .map_err(io_err(sink_name(out_path)))
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { quiet: cli.quiet };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::Core(gambit_core::Error::Invariant(e.to_string())))?;
    pool.install(|| match cli.command {
        Command::Disambiguate(a) => run_disambiguate(&ctx, a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Sweep(a) => run_sweep(&ctx, a),
        Command::Triage(a) => run_triage(&ctx, a),
        Command::Extract(a) => run_extract(&ctx, a),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
