//! `taskdoc` — mine task-based API usage scenarios from forum thread dumps.
//!
//! Four subcommands: `mine` runs the full pipeline, `eval` scores label
//! files, `render` turns a scenario document into a static site, and
//! `dump-parse` shows the snippet parser's view of one file.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use taskdoc_core::catalog::load_catalog;
use taskdoc_core::config::MinerConfig;
use taskdoc_core::corpus::{load_corpus, CorpusFormat};
use taskdoc_core::emit::{emit_predictions, emit_scenarios, load_scenarios};
use taskdoc_core::eval::{evaluate, load_labels, EvalTask};
use taskdoc_core::linker::LinkMode;
use taskdoc_core::opinion::SentimentLexicon;
use taskdoc_core::pipeline::mine;
use taskdoc_core::render::render_site;
use taskdoc_core::snippet::{parse_hybrid, SnippetRef};

#[derive(Parser)]
#[command(
    name = "taskdoc",
    version,
    about = "Mine task-based API usage scenarios from developer forum threads"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine a thread dump into a scenario document
    Mine(MineArgs),
    /// Score a prediction file against gold labels
    Eval(EvalArgs),
    /// Render a scenario document as a static HTML site
    Render(RenderArgs),
    /// Parse one snippet file and print the parser's output as JSON
    DumpParse(DumpParseArgs),
}

#[derive(Args)]
struct MineArgs {
    /// Thread dump: a JSONL file, or a directory holding Posts.xml
    #[arg(long)]
    corpus: PathBuf,
    /// API catalog: a JSON array of API records
    #[arg(long)]
    catalog: PathBuf,
    /// Sentiment lexicon TSV; the built-in list is used when absent
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Negation word list, one per line; needs --lexicon
    #[arg(long, requires = "lexicon")]
    negations: Option<PathBuf>,
    /// TOML file with pipeline tunables
    #[arg(long)]
    config: Option<PathBuf>,
    /// Where the scenario JSON document is written
    #[arg(long)]
    out: PathBuf,
    /// Also write per-snippet labels as JSONL (the `eval --pred` format)
    #[arg(long)]
    predictions: Option<PathBuf>,
    /// Override the linking mode from the config
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Override the worker count from the config
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    /// Predicted labels (JSONL of {"snippet_id", "label"})
    #[arg(long)]
    pred: PathBuf,
    /// Gold labels in the same format
    #[arg(long)]
    gold: PathBuf,
    /// Which labels to compare
    #[arg(long, value_enum)]
    task: TaskArg,
}

#[derive(Args)]
struct RenderArgs {
    /// Scenario document produced by `mine --out`
    #[arg(long)]
    scenarios: PathBuf,
    /// Directory for the generated pages (created if missing)
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DumpParseArgs {
    /// File holding one code snippet
    file: PathBuf,
    /// Parsed-line error ratio above which the snippet is rejected
    #[arg(long, default_value_t = 0.5)]
    max_error_ratio: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Partial,
}

impl From<ModeArg> for LinkMode {
    fn from(mode: ModeArg) -> LinkMode {
        match mode {
            ModeArg::Full => LinkMode::Full,
            ModeArg::Partial => LinkMode::Partial,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Link,
    Validity,
    Summary,
    Reactions,
}

impl From<TaskArg> for EvalTask {
    fn from(task: TaskArg) -> EvalTask {
        match task {
            TaskArg::Link => EvalTask::Link,
            TaskArg::Validity => EvalTask::Validity,
            TaskArg::Summary => EvalTask::Summary,
            TaskArg::Reactions => EvalTask::Reactions,
        }
    }
}

/// Failures split by who can fix them: bad inputs exit 2, everything that
/// points at a bug or the machine exits 3. Usage errors never reach here —
/// clap reports those and `main` exits 1.
enum CliError {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

fn input(err: impl Into<anyhow::Error>) -> CliError {
    CliError::Input(err.into())
}

fn internal(err: impl Into<anyhow::Error>) -> CliError {
    CliError::Internal(err.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too; they print to stdout and
            // must exit 0, unlike genuine usage mistakes.
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Mine(args) => run_mine(args),
        Command::Eval(args) => run_eval(args),
        Command::Render(args) => run_render(args),
        Command::DumpParse(args) => run_dump_parse(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(err)) => {
            eprintln!("internal error: {err}");
            ExitCode::from(3)
        }
    }
}

/// Print to stdout without panicking when the reader hangs up early
/// (`taskdoc dump-parse f | head` must still exit 0).
fn emit_stdout(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Ok(()) => Ok(()),
        Err(err) if err.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(err) => Err(internal(anyhow::anyhow!("cannot write to stdout: {err}"))),
    }
}

fn run_mine(args: MineArgs) -> Result<(), CliError> {
    let mut config = match &args.config {
        Some(path) => MinerConfig::load(path).map_err(input)?,
        None => MinerConfig::default(),
    };
    if let Some(mode) = args.mode {
        config.mode = mode.into();
    }
    if let Some(workers) = args.workers {
        config.workers = workers;
    }

    let format = if args.corpus.is_dir() {
        CorpusFormat::XmlDump
    } else {
        CorpusFormat::Jsonl
    };
    let corpus = load_corpus(&args.corpus, format).map_err(input)?;
    let catalog_load = load_catalog(&args.catalog).map_err(input)?;

    let loaded_lexicon;
    let lexicon = match (&args.lexicon, &args.negations) {
        (Some(lex), Some(neg)) => {
            loaded_lexicon = SentimentLexicon::load_with_negations(lex, neg).map_err(input)?;
            &loaded_lexicon
        }
        (Some(lex), None) => {
            loaded_lexicon = SentimentLexicon::load(lex).map_err(input)?;
            &loaded_lexicon
        }
        (None, _) => SentimentLexicon::embedded_default(),
    };

    let result = mine(&corpus.threads, &catalog_load.catalog, lexicon, &config)
        .map_err(internal)?;

    emit_scenarios(&result.scenarios, &args.out).map_err(input)?;
    if let Some(path) = &args.predictions {
        emit_predictions(&result.predictions, path).map_err(input)?;
    }

    for warning in &catalog_load.warnings {
        eprintln!("catalog: {warning}");
    }
    for note in &corpus.diagnostics {
        eprintln!("corpus: {note}");
    }
    for note in &result.diagnostics {
        eprintln!("mine: {note}");
    }
    let stats = &result.stats;
    eprintln!(
        "mined {} scenarios from {} threads ({} snippets: {} invalid, {} undecided)",
        stats.scenarios,
        stats.threads,
        stats.snippets_total,
        stats.snippets_invalid,
        stats.snippets_undecided
    );
    Ok(())
}

fn run_eval(args: EvalArgs) -> Result<(), CliError> {
    let predictions = load_labels(&args.pred).map_err(input)?;
    let gold = load_labels(&args.gold).map_err(input)?;
    let report = evaluate(&predictions, &gold, args.task.into()).map_err(input)?;
    let text = serde_json::to_string_pretty(&report).map_err(internal)?;
    emit_stdout(&text)
}

fn run_render(args: RenderArgs) -> Result<(), CliError> {
    let scenarios = load_scenarios(&args.scenarios).map_err(input)?;
    let pages = render_site(&scenarios, &args.out_dir).map_err(input)?;
    eprintln!("wrote {} pages under {}", pages.len(), args.out_dir.display());
    Ok(())
}

fn run_dump_parse(args: DumpParseArgs) -> Result<(), CliError> {
    let code = fs::read_to_string(&args.file)
        .map_err(|err| input(anyhow::anyhow!("cannot read {}: {err}", args.file.display())))?;
    let refr = SnippetRef {
        thread_id: 0,
        post_id: 0,
        snippet_index: 0,
        block_index: 0,
        in_question: false,
    };
    let mut parsed = parse_hybrid(&code, refr);
    parsed.apply_error_ratio(args.max_error_ratio);
    let text = serde_json::to_string_pretty(&parsed).map_err(internal)?;
    emit_stdout(&text)
}
