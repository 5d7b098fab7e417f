use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use roughp::lang::{validate_language, ValidationOptions, ValidationReport};
use roughp::report::{write_instances, write_json, write_scan_csv};
use roughp::{
    classify, generate, scan_alpha_sphere, verify_outputs, Budgets, Error, GenReport, GenRequest,
    IsoEngine, OutputFormat, PaddableLanguage, Registry, RunConfig, ScanMode, ScanOptions, Sign,
    SymString, DEFAULT_SEED,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "roughp",
    version,
    about = "Errorless heuristics and instance generation for paddable languages"
)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Registry file with extra language definitions (JSON).
    #[arg(long, global = true, env = "ROUGHP_CONFIG")]
    config: Option<PathBuf>,

    /// Most strings a single exhaustive enumeration may visit.
    #[arg(long, global = true, env = "ROUGHP_ENUM_BUDGET")]
    enum_budget: Option<u64>,

    /// Longest string handed to a membership decider.
    #[arg(long, global = true, env = "ROUGHP_DECIDE_BUDGET")]
    decide_budget: Option<usize>,

    /// Hard cap on ancestor-chain steps.
    #[arg(long, global = true, env = "ROUGHP_MAX_CHAIN")]
    max_chain: Option<usize>,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Main output file (stdout when absent).
    #[arg(long, global = true, env = "ROUGHP_OUT")]
    out: Option<PathBuf>,

    /// JSON report file.
    #[arg(long, global = true, env = "ROUGHP_REPORT")]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the padding contract of a language.
    Validate {
        #[arg(long)]
        lang: String,
        #[arg(long, default_value_t = 5)]
        exhaustive_len: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run the errorless heuristic on one input.
    Decide {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        input: String,
        #[arg(long)]
        trace: bool,
    },
    /// Emit instances of a requested sign.
    Generate {
        #[arg(long)]
        lang: String,
        #[arg(short = 'n', long = "n")]
        n: usize,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long)]
        count: usize,
        /// Re-check every instance with the membership decider.
        #[arg(long)]
        verify: bool,
    },
    /// Count heuristic failures on the image spheres.
    Scan {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        min_n: usize,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        check_correctness: bool,
    },
    /// Apply the isomorphism or its inverse.
    Iso {
        #[arg(long)]
        lang: String,
        #[arg(long, value_enum)]
        apply: ApplyArg,
        #[arg(long)]
        input: String,
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Pos,
    Neg,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Pos => Sign::Pos,
            SignArg::Neg => Sign::Neg,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ApplyArg {
    Phi,
    Alpha,
}

/// Command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn property(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::WitnessRejected { .. }
            | Error::InvalidLanguage { .. }
            | Error::ChainGuard { .. }
            | Error::CorrectnessViolation { .. }
            | Error::FailureLaw { .. }
            | Error::SignViolation { .. }
            | Error::OutsideSupport { .. }
            | Error::SupportMismatch { .. } => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run_config(global: &Global, language: &str) -> Result<RunConfig, Failure> {
    let mut config = RunConfig::new(language);
    config.registry_path = global.config.clone();
    config.seed = global.seed;
    config.output = global.out.clone();
    config.report = global.report.clone();
    config.format = global.format.into();
    let defaults = Budgets::default();
    config.budgets = Budgets {
        enumeration: global.enum_budget.unwrap_or(defaults.enumeration),
        decide_len: global.decide_budget.unwrap_or(defaults.decide_len),
        chain_guard: global.max_chain.or(defaults.chain_guard),
    };
    config.budgets.check()?;
    Ok(config)
}

fn load_language(config: &RunConfig) -> Result<PaddableLanguage, Failure> {
    let registry = match &config.registry_path {
        Some(path) => Registry::with_config_file(path)?,
        None => Registry::builtin(),
    };
    Ok(registry.lookup(&config.language)?)
}

fn engine_for(config: &RunConfig, lang: &PaddableLanguage) -> IsoEngine {
    let engine = IsoEngine::for_language(lang);
    match config.budgets.chain_guard {
        Some(cap) => engine.with_max_chain(cap),
        None => engine,
    }
}

fn open_sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::usage(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_report<T: serde::Serialize + ?Sized>(config: &RunConfig, value: &T) -> CmdResult {
    if let Some(path) = &config.report {
        write_json(open_sink(Some(path))?, value)?;
    }
    Ok(())
}

fn parse_input(lang: &PaddableLanguage, text: &str) -> Result<SymString, Failure> {
    Ok(SymString::parse(text, lang.alphabet())?)
}

fn run(cli: Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Validate {
            lang,
            exhaustive_len,
            samples,
        } => cmd_validate(&run_config(g, lang)?, *exhaustive_len, *samples),
        Command::Decide { lang, input, trace } => cmd_decide(&run_config(g, lang)?, input, *trace),
        Command::Generate {
            lang,
            n,
            sign,
            count,
            verify,
        } => cmd_generate(&run_config(g, lang)?, *n, (*sign).into(), *count, *verify),
        Command::Scan {
            lang,
            min_n,
            max_n,
            mode,
            samples,
            check_correctness,
        } => {
            if min_n > max_n {
                return Err(Failure::usage(format!(
                    "empty range: --min-n {min_n} > --max-n {max_n}"
                )));
            }
            let mode = match mode {
                ModeArg::Exhaustive => ScanMode::Exhaustive,
                ModeArg::Sample => ScanMode::Sampled,
            };
            cmd_scan(
                &run_config(g, lang)?,
                *min_n..=*max_n,
                mode,
                *samples,
                *check_correctness,
            )
        }
        Command::Iso {
            lang,
            apply,
            input,
            trace,
        } => cmd_iso(&run_config(g, lang)?, *apply, input, *trace),
    }
}

fn cmd_validate(config: &RunConfig, exhaustive_len: usize, samples: usize) -> CmdResult {
    let lang = load_language(config)?;
    let options = ValidationOptions {
        exhaustive_len,
        samples,
        seed: config.seed,
        enumeration_budget: config.budgets.enumeration,
        decide_len: config.budgets.decide_len,
    };
    let report = validate_language(&lang, &options)?;
    write_report(config, &report)?;
    let mut out = open_sink(config.output.as_deref())?;
    match config.format {
        OutputFormat::Json => write_json(&mut out, &report)?,
        _ => print_validation(&mut out, &report)?,
    }
    out.flush()?;
    if report.passed {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(Failure::property(format!(
            "{} violates {}",
            report.language,
            names.join("; ")
        )))
    }
}

fn print_validation(out: &mut dyn Write, report: &ValidationReport) -> io::Result<()> {
    writeln!(
        out,
        "{} (k={}): {} exhaustive pairs up to length {}, {} samples, seed {}",
        report.language,
        report.k,
        report.exhaustive_pairs,
        report.exhaustive_len,
        report.samples,
        report.seed
    )?;
    for check in &report.checks {
        let status = if check.passed { "ok  " } else { "FAIL" };
        write!(out, "  {status} {} ({} checked)", check.name, check.checked)?;
        if let Some(c) = &check.counterexample {
            write!(
                out,
                " counterexample x={:?} y={:?}: {}",
                c.x.to_string(),
                c.y.to_string(),
                c.detail
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn cmd_decide(config: &RunConfig, input: &str, trace: bool) -> CmdResult {
    let lang = load_language(config)?;
    let x = parse_input(&lang, input)?;
    let engine = engine_for(config, &lang);
    let decision = classify(&engine, &x)?;
    let mut out = open_sink(config.output.as_deref())?;
    if trace {
        let chain = engine.phi_trace(&x)?;
        match config.format {
            OutputFormat::Json => write_json(
                &mut out,
                &serde_json::json!({ "decision": decision, "trace": chain }),
            )?,
            _ => writeln!(out, "{decision}\n{chain}")?,
        }
    } else {
        writeln!(out, "{decision}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_generate(config: &RunConfig, n: usize, sign: Sign, count: usize, verify: bool) -> CmdResult {
    let lang = load_language(config)?;
    let engine = engine_for(config, &lang);
    let req = GenRequest {
        n,
        sign,
        count,
        seed: config.seed,
    };
    let outputs = generate(&engine, &req)?;
    let verdicts = if verify {
        let verdicts = verify_outputs(
            &lang,
            &outputs,
            sign,
            config.seed,
            config.budgets.decide_len,
        )?;
        let skipped = verdicts.iter().filter(|v| v.is_none()).count();
        if skipped > 0 {
            log::warn!("{skipped} instances exceed the decide budget and were not verified");
        }
        Some(verdicts)
    } else {
        None
    };
    let report = GenReport::new(
        lang.name(),
        lang.alphabet(),
        &req,
        &outputs,
        verdicts.as_deref(),
    );
    write_report(config, &report)?;
    let mut out = open_sink(config.output.as_deref())?;
    match config.format {
        OutputFormat::Json => write_json(&mut out, &report)?,
        _ => write_instances(&mut out, lang.alphabet(), &outputs)?,
    }
    out.flush()?;
    Ok(())
}

fn cmd_scan(
    config: &RunConfig,
    range: std::ops::RangeInclusive<usize>,
    mode: ScanMode,
    samples: u64,
    check_correctness: bool,
) -> CmdResult {
    let lang = load_language(config)?;
    let engine = engine_for(config, &lang);
    let options = ScanOptions {
        mode,
        samples,
        seed: config.seed,
        enumeration_budget: config.budgets.enumeration,
        decide_len: config.budgets.decide_len,
    };
    let checker = check_correctness.then_some(&lang);
    let mut rows = Vec::new();
    let mut failure = None;
    for n in range {
        match scan_alpha_sphere(&engine, n, &options, checker) {
            Ok(row) => rows.push(row),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    write_report(config, &rows)?;
    let mut out = open_sink(config.output.as_deref())?;
    match config.format {
        OutputFormat::Json => write_json(&mut out, &rows)?,
        _ => write_scan_csv(&mut out, &rows)?,
    }
    out.flush()?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn cmd_iso(config: &RunConfig, apply: ApplyArg, input: &str, trace: bool) -> CmdResult {
    let lang = load_language(config)?;
    let x = parse_input(&lang, input)?;
    let engine = engine_for(config, &lang);
    let chain = match apply {
        ApplyArg::Phi => engine.phi_trace(&x)?,
        ApplyArg::Alpha => engine.alpha_trace(&x)?,
    };
    let mut out = open_sink(config.output.as_deref())?;
    match (trace, config.format) {
        (true, OutputFormat::Json) => write_json(&mut out, &chain)?,
        (true, _) => writeln!(out, "{chain}")?,
        (false, OutputFormat::Json) => write_json(&mut out, &chain.output)?,
        (false, _) => writeln!(out, "{}", chain.output)?,
    }
    out.flush()?;
    Ok(())
}
