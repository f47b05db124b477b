//! `cochange` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cochange_core::eval::{evaluate_detailed, ProjectEvaluation};
use cochange_core::prep::prepare;
use cochange_core::rules::Recommender;
use cochange_core::stats::compare_algorithms;
use cochange_core::{generate_rules, Algorithm, AssociationRule, MiningParams, TransactionDatabase};

use crate::error::{Error, Result};
use crate::format::parse_date_arg;
use crate::history::{extract_history, to_transactions, write_records, ExtractionConfig};
use crate::jsonl::{read_transactions, write_transactions};
use crate::parallel::sweep_parallel;
use crate::report::{self, MetricsRow};
use crate::synth::{synthesize, SynthConfig};
use crate::timing::{time_mining, TimingResult};

pub const DEFAULT_SUPPORTS: [f64; 4] = [0.05, 0.1, 0.2, 0.4];
pub const DEFAULT_CONFIDENCES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[derive(Debug, Parser)]
#[command(name = "cochange", version, about = "Recommend files that change together, mined from Git history")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract change records and per-commit transactions from a Git repository.
    Extract(ExtractArgs),
    /// Filter transactions and split them chronologically into train and test.
    Prepare(PrepareArgs),
    /// Mine frequent itemsets.
    Mine(MineArgs),
    /// Mine and generate association rules.
    Rules(RulesArgs),
    /// Recommend files for one changed file.
    Recommend(RecommendArgs),
    /// Score rules learned on train against the test transactions.
    Evaluate(EvaluateArgs),
    /// Evaluate over a grid of support and confidence thresholds.
    Sweep(SweepArgs),
    /// Time mining plus rule generation per algorithm.
    Bench(BenchArgs),
    /// Compare algorithms pairwise (Wilcoxon, Holm, Cliff's delta).
    Compare(CompareArgs),
    /// Generate a seeded synthetic transaction database.
    Synth(SynthArgs),
    /// extract, prepare, rules, evaluate and bench in one go.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Apriori,
    Fpgrowth,
    Eclat,
    Relim,
    All,
}

impl AlgoArg {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgoArg::Apriori => vec![Algorithm::Apriori],
            AlgoArg::Fpgrowth => vec![Algorithm::FpGrowth],
            AlgoArg::Eclat => vec![Algorithm::Eclat],
            AlgoArg::Relim => vec![Algorithm::Relim],
            AlgoArg::All => Algorithm::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
struct Thresholds {
    /// Minimum relative support.
    #[arg(long, default_value_t = MiningParams::DEFAULT_SUPPORT)]
    support: f64,
    /// Minimum confidence.
    #[arg(long, default_value_t = MiningParams::DEFAULT_CONFIDENCE)]
    confidence: f64,
}

impl Thresholds {
    fn params(&self) -> Result<MiningParams> {
        Ok(MiningParams::new(self.support, self.confidence)?)
    }
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long)]
    repo: PathBuf,
    #[arg(long, default_value = ".java")]
    ext: String,
    /// Earliest commit date, YYYY-MM-DD or YYYY-MM-DDThh:mm:ssZ.
    #[arg(long)]
    since: Option<String>,
    #[arg(long)]
    until: Option<String>,
    /// transactions.jsonl
    #[arg(long)]
    out: PathBuf,
    /// records.csv
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PrepareArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Split summary CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "fpgrowth")]
    algo: AlgoArg,
    #[arg(long, default_value_t = MiningParams::DEFAULT_SUPPORT)]
    support: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RulesArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "fpgrowth")]
    algo: AlgoArg,
    #[command(flatten)]
    thresholds: Thresholds,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RecommendArgs {
    #[arg(long)]
    rules: PathBuf,
    /// The changed file.
    #[arg(long)]
    file: String,
    #[arg(long)]
    limit: Option<NonZeroUsize>,
    /// Training transactions; without it, files named in the rules are the
    /// known universe.
    #[arg(long)]
    train: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    algo: AlgoArg,
    #[command(flatten)]
    thresholds: Thresholds,
    /// metrics.csv
    #[arg(long)]
    out: PathBuf,
    /// Directory for per-query CSVs, one `queries_<algorithm>.csv` each.
    #[arg(long)]
    queries_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    algo: AlgoArg,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SUPPORTS)]
    supports: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_CONFIDENCES)]
    confidences: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    algo: AlgoArg,
    #[command(flatten)]
    thresholds: Thresholds,
    #[arg(long, default_value = "3")]
    repetitions: NonZeroUsize,
    /// timing.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// metrics.csv or sweep output.
    #[arg(long)]
    metrics: PathBuf,
    /// compare.csv
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    markdown: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    items: usize,
    #[arg(long, default_value_t = 1000)]
    transactions: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long)]
    repo: PathBuf,
    #[arg(long, default_value = ".java")]
    ext: String,
    #[arg(long, value_enum, default_value = "all")]
    algo: AlgoArg,
    #[command(flatten)]
    thresholds: Thresholds,
    #[arg(long, default_value = "1")]
    repetitions: NonZeroUsize,
    #[arg(long, default_value = "cochange-out")]
    out_dir: PathBuf,
}

fn init_logging() {
    let filter = std::env::var("COCHANGE_LOG").unwrap_or_else(|_| "error".into());
    let _ = env_logger::Builder::new().parse_filters(&filter).format_timestamp(None).try_init();
}

/// Parses `argv` (program name first), runs the subcommand and maps the
/// outcome to an exit status: 0 success, 1 user error, 2 internal error.
pub fn run<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Extract(a) => extract(a),
        Command::Prepare(a) => prepare_cmd(a),
        Command::Mine(a) => mine(a),
        Command::Rules(a) => rules(a),
        Command::Recommend(a) => recommend(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Sweep(a) => sweep(a),
        Command::Bench(a) => bench(a),
        Command::Compare(a) => compare(a),
        Command::Synth(a) => synth(a),
        Command::Pipeline(a) => pipeline(a),
    }
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::Usage(format!("input file not found: {}", path.display())))
    }
}

fn require_output(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(Error::Usage(format!("output directory does not exist: {}", dir.display())))
        }
        _ => Ok(()),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn extraction_config(repo: &Path, ext: &str, since: Option<&str>, until: Option<&str>) -> Result<ExtractionConfig> {
    let date = |s: Option<&str>| {
        s.map(|s| parse_date_arg(s).ok_or_else(|| Error::Usage(format!("invalid date `{s}`")))).transpose()
    };
    if ext.is_empty() {
        return Err(Error::Usage("--ext must not be empty".into()));
    }
    Ok(ExtractionConfig { since: date(since)?, until: date(until)?, ..ExtractionConfig::new(repo).with_extension(ext) })
}

fn extract(a: ExtractArgs) -> Result<()> {
    let config = extraction_config(&a.repo, &a.ext, a.since.as_deref(), a.until.as_deref())?;
    require_output(&a.out)?;
    if let Some(r) = &a.records {
        require_output(r)?;
    }
    let records = extract_history(&config)?;
    let db = to_transactions(&records);
    log::info!("{} records in {} transactions", records.len(), db.len());
    write_transactions(&db, &a.out)?;
    if let Some(path) = &a.records {
        write_records(&records, path)?;
    }
    Ok(())
}

fn prepare_cmd(a: PrepareArgs) -> Result<()> {
    require_file(&a.input)?;
    for out in [Some(&a.train), Some(&a.test), a.summary.as_ref()].into_iter().flatten() {
        require_output(out)?;
    }
    let db = read_transactions(&a.input)?;
    let split = prepare(&db)?;
    write_transactions(&split.train, &a.train)?;
    write_transactions(&split.test, &a.test)?;
    if let Some(path) = &a.summary {
        report::write_split_summary_to(&split, create(path)?)?;
    }
    Ok(())
}

/// Rules from every selected algorithm; they must agree.
fn agreed_rules(
    train: &TransactionDatabase,
    algorithms: &[Algorithm],
    params: &MiningParams,
) -> Result<Vec<AssociationRule>> {
    let mut agreed: Option<(Algorithm, Vec<AssociationRule>)> = None;
    for &algorithm in algorithms {
        let rules = generate_rules(&algorithm.mine(train, params), params)?;
        match &agreed {
            Some((first, expected)) if *expected != rules => {
                return Err(Error::Invariant(format!("{algorithm} and {first} produced different rule sets")));
            }
            Some(_) => {}
            None => agreed = Some((algorithm, rules)),
        }
    }
    Ok(agreed.map(|(_, r)| r).unwrap_or_default())
}

fn mine(a: MineArgs) -> Result<()> {
    require_file(&a.input)?;
    require_output(&a.out)?;
    let params = MiningParams::new(a.support, 1.0)?;
    let db = read_transactions(&a.input)?;
    let mut result = None;
    for algorithm in a.algo.algorithms() {
        let fis = algorithm.mine(&db, &params);
        if let Some(previous) = &result {
            if *previous != fis {
                return Err(Error::Invariant(format!("{algorithm} disagrees on the frequent itemsets")));
            }
        } else {
            result = Some(fis);
        }
    }
    let fis = result.expect("at least one algorithm");
    report::write_itemsets_to(&fis, db.interner(), create(&a.out)?)
}

fn rules(a: RulesArgs) -> Result<()> {
    require_file(&a.input)?;
    require_output(&a.out)?;
    let params = a.thresholds.params()?;
    let db = read_transactions(&a.input)?;
    let rules = agreed_rules(&db, &a.algo.algorithms(), &params)?;
    report::write_rules_to(&rules, db.interner(), create(&a.out)?)
}

fn recommend(a: RecommendArgs) -> Result<()> {
    require_file(&a.rules)?;
    if let Some(t) = &a.train {
        require_file(t)?;
    }
    let mut file = report::read_rules(&a.rules)?;
    let known: Vec<_> = match &a.train {
        Some(path) => {
            let train = read_transactions(path)?;
            let present = train.present_items();
            present.iter().map(|&i| file.interner.intern(train.interner().resolve(i))).collect()
        }
        None => (0..file.interner.len() as u32).map(cochange_core::ItemId).collect(),
    };
    let recommender = Recommender::new(&file.rules, &file.interner, known);
    let rec = recommender.recommend(&a.file, a.limit.map(NonZeroUsize::get))?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for path in rec.paths() {
        writeln!(out, "{path}").map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

fn evaluation_row(algorithm: Algorithm, params: &MiningParams, evaluation: &ProjectEvaluation) -> MetricsRow {
    let metrics = evaluation.aggregate().map_err(|e| {
        log::warn!("{algorithm}: {e}");
        e.to_string()
    });
    MetricsRow { algorithm, min_support: params.min_support(), min_confidence: params.min_confidence(), metrics }
}

fn queries_file(dir: &Path, algorithm: Algorithm) -> PathBuf {
    dir.join(format!("queries_{}.csv", algorithm.key()))
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    require_file(&a.train)?;
    require_file(&a.test)?;
    require_output(&a.out)?;
    if let Some(dir) = &a.queries_dir {
        if !dir.is_dir() {
            return Err(Error::Usage(format!("output directory does not exist: {}", dir.display())));
        }
    }
    let params = a.thresholds.params()?;
    let train = read_transactions(&a.train)?;
    let test = read_transactions(&a.test)?;
    let mut rows = Vec::new();
    for algorithm in a.algo.algorithms() {
        let rules = generate_rules(&algorithm.mine(&train, &params), &params)?;
        let evaluation = evaluate_detailed(&rules, &train, &test);
        if let Some(dir) = &a.queries_dir {
            report::write_queries_to(&evaluation, create(&queries_file(dir, algorithm))?)?;
        }
        rows.push(evaluation_row(algorithm, &params, &evaluation));
    }
    report::write_metrics_to(&rows, create(&a.out)?)
}

fn sweep(a: SweepArgs) -> Result<()> {
    require_file(&a.train)?;
    require_file(&a.test)?;
    require_output(&a.out)?;
    let train = read_transactions(&a.train)?;
    let test = read_transactions(&a.test)?;
    let grids = a
        .algo
        .algorithms()
        .into_iter()
        .map(|algorithm| sweep_parallel(&train, &test, algorithm, &a.supports, &a.confidences, a.jobs))
        .collect::<Result<Vec<_>>>()?;
    report::write_sweep_to(&grids, create(&a.out)?)
}

fn run_bench(
    db: &TransactionDatabase,
    algorithms: &[Algorithm],
    params: &MiningParams,
    repetitions: NonZeroUsize,
) -> Result<Vec<TimingResult>> {
    algorithms.iter().map(|&algorithm| time_mining(algorithm, db, params, repetitions)).collect()
}

fn bench(a: BenchArgs) -> Result<()> {
    require_file(&a.input)?;
    require_output(&a.out)?;
    let params = a.thresholds.params()?;
    let db = read_transactions(&a.input)?;
    let results = run_bench(&db, &a.algo.algorithms(), &params, a.repetitions)?;
    report::write_timing_to(&results, create(&a.out)?)
}

fn compare(a: CompareArgs) -> Result<()> {
    require_file(&a.metrics)?;
    require_output(&a.out)?;
    if let Some(md) = &a.markdown {
        require_output(md)?;
    }
    let file = File::open(&a.metrics).map_err(|e| Error::io(&a.metrics, e))?;
    let series = report::read_metric_series_from(file, &a.metrics)?;
    let report = compare_algorithms(&series)?;
    report::write_compare_to(&report, create(&a.out)?)?;
    if let Some(md) = &a.markdown {
        std::fs::write(md, report::compare_markdown(&report)).map_err(|e| Error::io(md, e))?;
    }
    Ok(())
}

fn synth(a: SynthArgs) -> Result<()> {
    require_output(&a.out)?;
    if !(0.0..=1.0).contains(&a.density) {
        return Err(Error::Usage(format!("--density must be in [0, 1], got {}", a.density)));
    }
    if a.items == 0 {
        return Err(Error::Usage("--items must be positive".into()));
    }
    let config =
        SynthConfig { items: a.items, transactions: a.transactions, density: a.density, ..SynthConfig::new(a.seed) };
    write_transactions(&synthesize(&config), &a.out)
}

fn pipeline(a: PipelineArgs) -> Result<()> {
    let config = extraction_config(&a.repo, &a.ext, None, None)?;
    let params = a.thresholds.params()?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    let out = |name: &str| a.out_dir.join(name);

    let records = extract_history(&config)?;
    let db = to_transactions(&records);
    write_transactions(&db, &out("transactions.jsonl"))?;
    write_records(&records, &out("records.csv"))?;

    let split = prepare(&db)?;
    write_transactions(&split.train, &out("train.jsonl"))?;
    write_transactions(&split.test, &out("test.jsonl"))?;
    report::write_split_summary_to(&split, create(&out("split.csv"))?)?;
    log::info!("train {} / test {} transactions", split.counts.train, split.counts.test);

    let algorithms = a.algo.algorithms();
    let rules = agreed_rules(&split.train, &algorithms, &params)?;
    report::write_rules_to(&rules, split.train.interner(), create(&out("rules.csv"))?)?;

    let mut rows = Vec::new();
    for &algorithm in &algorithms {
        let own = generate_rules(&algorithm.mine(&split.train, &params), &params)?;
        let evaluation = evaluate_detailed(&own, &split.train, &split.test);
        report::write_queries_to(&evaluation, create(&queries_file(&a.out_dir, algorithm))?)?;
        rows.push(evaluation_row(algorithm, &params, &evaluation));
    }
    report::write_metrics_to(&rows, create(&out("metrics.csv"))?)?;

    let timings = run_bench(&split.train, &algorithms, &params, a.repetitions)?;
    report::write_timing_to(&timings, create(&out("timing.csv"))?)
}
