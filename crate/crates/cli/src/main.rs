//! `gradimp`: degrees, attack intensities, impacts, principle audits and
//! annotated renderings of argumentation frameworks.
//!
//! Exit codes: 0 success, 2 parse/IO/usage error, 3 solver non-convergence,
//! 4 unknown argument, 5 walk-series divergence, 6 audit result differs
//! from the reference table under `--expect-paper`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gradual_impact::af::{self, Annotations, Format};
use gradual_impact::attribution::{self, AttributionError, ShapleyConfig};
use gradual_impact::impact::{ImpactError, ImpactQuery, Measure};
use gradual_impact::principles::{self, AuditConfig, CorpusConfig};
use gradual_impact::semantics::{self, SemanticsError, SemanticsKind, SemanticsSpec};
use gradual_impact::{AfError, ArgumentSet, ArgumentationFramework};

#[derive(Parser)]
#[command(name = "gradimp", version, about = "Gradual semantics, attack intensities and impact measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Acceptability degree of every argument.
    Degrees {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        semantics: SemanticsArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Shapley intensity of every attack.
    Shapley {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        semantics: SemanticsArgs,
        #[command(flatten)]
        shapley: ShapleyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Impact of a set of arguments on a target argument.
    Impact {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        semantics: SemanticsArgs,
        #[command(flatten)]
        shapley: ShapleyArgs,
        #[arg(long, value_parser = parse_measure)]
        measure: Measure,
        /// Comma-separated subject set; may be empty.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Falsification audit of the impact principles.
    Audit(AuditArgs),
    /// Framework with degree-labelled nodes and intensity-labelled edges.
    Annotate {
        /// Input file, or `-` for standard input.
        input: String,
        #[arg(long = "input-format", value_enum)]
        input_format: Option<InputFormat>,
        #[arg(long, value_enum, default_value = "dot")]
        format: AnnotateFormat,
        #[command(flatten)]
        semantics: SemanticsArgs,
        #[command(flatten)]
        shapley: ShapleyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Input file, or `-` for standard input.
    input: String,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
}

#[derive(Args)]
struct SemanticsArgs {
    #[arg(long, value_parser = parse_semantics, default_value = "hbs")]
    semantics: SemanticsKind,
    /// Counting-semantics damping factor.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
}

#[derive(Args)]
struct ShapleyArgs {
    /// Targets with more attackers than this are sampled.
    #[arg(long = "exact-cap")]
    exact_cap: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// `count,nmin,nmax,p,seed`
    #[arg(long)]
    graphs: Option<String>,
    /// Comma-separated measures.
    #[arg(long, value_delimiter = ',', value_parser = parse_measure)]
    measures: Option<Vec<Measure>>,
    /// Comma-separated semantics.
    #[arg(long, value_delimiter = ',', value_parser = parse_semantics)]
    semantics: Option<Vec<SemanticsKind>>,
    #[arg(long, value_enum, default_value = "on")]
    fixtures: Toggle,
    /// Equality tolerance for impact comparisons.
    #[arg(long)]
    tol: Option<f64>,
    /// Exit 6 unless the matrix matches the reference table.
    #[arg(long = "expect-paper")]
    expect_paper: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Tgf,
    Apx,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnnotateFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse()
}

fn parse_semantics(s: &str) -> Result<SemanticsKind, String> {
    s.parse()
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<AfError> for Failure {
    fn from(e: AfError) -> Self {
        let code = match e {
            AfError::UnknownArgument(_) => 4,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        match e {
            SemanticsError::Af(e) => e.into(),
            SemanticsError::NonConvergence { .. } | SemanticsError::DivergentSeries { .. } => Failure::new(3, e.to_string()),
            SemanticsError::InvalidSpec(_) => Failure::new(2, e.to_string()),
        }
    }
}

impl From<AttributionError> for Failure {
    fn from(e: AttributionError) -> Self {
        match e {
            AttributionError::Semantics(e) => e.into(),
            AttributionError::Af(e) => e.into(),
            AttributionError::ExactModeRequired { .. } => Failure::new(2, e.to_string()),
        }
    }
}

impl From<ImpactError> for Failure {
    fn from(e: ImpactError) -> Self {
        match e {
            ImpactError::Af(e) => e.into(),
            ImpactError::Semantics(e) => e.into(),
            ImpactError::Attribution(e) => e.into(),
            ImpactError::Divergence { .. } => Failure::new(5, e.to_string()),
        }
    }
}

fn read_input(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::new(2, format!("cannot read standard input: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(input).map_err(|e| Failure::new(2, format!("cannot read {input}: {e}")))
    }
}

fn infer_format(input: &str, text: &str) -> InputFormat {
    match Path::new(input).extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("apx") => InputFormat::Apx,
        Some("tgf") => InputFormat::Tgf,
        Some("json") => InputFormat::Json,
        _ if text.trim_start().starts_with('{') => InputFormat::Json,
        _ if text.contains("arg(") => InputFormat::Apx,
        _ => InputFormat::Tgf,
    }
}

fn load(input: &str, format: Option<InputFormat>) -> Result<ArgumentationFramework, Failure> {
    let text = read_input(input)?;
    let parsed = match format.unwrap_or_else(|| infer_format(input, &text)) {
        InputFormat::Tgf => af::parse_tgf(&text),
        InputFormat::Apx => af::parse_apx(&text),
        InputFormat::Json => af::parse_json(&text),
    };
    // Every parse failure is an input error, whatever its kind.
    parsed.map_err(|e| Failure::new(2, format!("{input}: {e}")))
}

fn spec(args: &SemanticsArgs) -> Result<SemanticsSpec, Failure> {
    let mut spec = SemanticsSpec::new(args.semantics);
    if let Some(a) = args.alpha {
        spec = spec.with_damping(a);
    }
    if let Some(t) = args.tol {
        spec.tolerance = t;
    }
    if let Some(m) = args.max_iter {
        spec.max_iterations = m;
    }
    spec.validate()?;
    Ok(spec)
}

fn shapley_cfg(args: &ShapleyArgs) -> ShapleyConfig {
    let d = ShapleyConfig::default();
    ShapleyConfig {
        exact_indegree_cap: args.exact_cap.unwrap_or(d.exact_indegree_cap),
        sample_count: args.samples.unwrap_or(d.sample_count),
        seed: args.seed.unwrap_or(d.seed),
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(2, format!("cannot write output: {e}"))),
    }
}

fn emit_json(out: &OutputArgs, value: &serde_json::Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    emit(out, &text)
}

fn parse_set(text: &str) -> ArgumentSet {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn parse_graphs(text: &str) -> Result<CorpusConfig, Failure> {
    let bad = || Failure::new(2, format!("--graphs expects count,nmin,nmax,p,seed; got `{text}`"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(bad());
    }
    let p: f64 = parts[3].parse().map_err(|_| bad())?;
    Ok(CorpusConfig {
        count: parts[0].parse().map_err(|_| bad())?,
        min_arguments: parts[1].parse().map_err(|_| bad())?,
        max_arguments: parts[2].parse().map_err(|_| bad())?,
        min_probability: p,
        max_probability: p,
        seed: parts[4].parse().map_err(|_| bad())?,
        ..CorpusConfig::default()
    })
}

fn run_audit(args: &AuditArgs) -> Result<(), Failure> {
    let mut cfg = AuditConfig::default();
    if let Some(g) = &args.graphs {
        cfg.corpus = parse_graphs(g)?;
    }
    if let Some(m) = &args.measures {
        cfg.measures = m.clone();
    }
    if let Some(s) = &args.semantics {
        cfg.semantics = s.clone();
    }
    if let Some(t) = args.tol {
        cfg.check.tolerance = t;
    }
    cfg.fixtures = args.fixtures == Toggle::On;
    let report = principles::audit(&cfg).map_err(|e| Failure::new(2, e.to_string()))?;
    eprint!("{}", report.render_table());
    emit_json(&args.output, &report.to_json())?;
    if args.expect_paper {
        let mismatches = report.reference_mismatches();
        if !mismatches.is_empty() {
            for m in &mismatches {
                eprintln!("mismatch: {m}");
            }
            return Err(Failure::new(6, "audit does not match the reference table"));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Degrees { input, semantics, output } => {
            let af = load(&input.input, input.format)?;
            let spec = spec(&semantics)?;
            emit_json(&output, &semantics::degrees(&af, &spec)?.to_json(&spec))
        }
        Command::Shapley {
            input,
            semantics,
            shapley,
            output,
        } => {
            let af = load(&input.input, input.format)?;
            let spec = spec(&semantics)?;
            let measure = attribution::shapley_all(&af, &spec, &shapley_cfg(&shapley))?;
            emit_json(&output, &measure.to_json(&spec))
        }
        Command::Impact {
            input,
            semantics,
            shapley,
            measure,
            set,
            target,
            output,
        } => {
            let af = load(&input.input, input.format)?;
            let mut query = ImpactQuery::new(measure, spec(&semantics)?, parse_set(&set), target);
            query.shapley = shapley_cfg(&shapley);
            let value = query.evaluate(&af)?;
            emit_json(&output, &query.to_json(&value))
        }
        Command::Audit(args) => run_audit(&args),
        Command::Annotate {
            input,
            input_format,
            format,
            semantics,
            shapley,
            output,
        } => {
            let af = load(&input, input_format)?;
            let spec = spec(&semantics)?;
            let degrees = semantics::degrees(&af, &spec)?;
            let intensities = attribution::shapley_all(&af, &spec, &shapley_cfg(&shapley))?;
            let ann = Annotations {
                degrees: Some(degrees.as_map().clone()),
                intensities: Some(intensities.as_map().clone()),
            };
            let format = match format {
                AnnotateFormat::Dot => Format::Dot,
                AnnotateFormat::Json => Format::Json,
            };
            emit(&output, &af::serialize(&af, format, Some(&ann))?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gradimp: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
