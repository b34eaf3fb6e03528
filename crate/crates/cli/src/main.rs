mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use enactment_game::bargaining::{bargaining_verdict, stability_threshold, stable_imputation};
use enactment_game::core_set::{core_empty, Imputation};
use enactment_game::detect::detect;
use enactment_game::rational::{exact_string, parse_rational, Rational};
use enactment_game::values::{enumerate_values, DEFAULT_ENUMERATION_CAP, DEFAULT_ORACLE_CAP};
use enactment_game::vcg::{check_equivalence, vcg_payments};
use enactment_game::{emit_document, generate, load_graph, GameError, GameInstance, GeneratorParams};
use serde::Serialize;

use report::*;

const LP_CAP_VAR: &str = "ENACTMENT_LP_CAP";
const ORACLE_CAP_VAR: &str = "ENACTMENT_ORACLE_CAP";

/// Analyze pricing games between service providers on a service DAG.
#[derive(Parser)]
#[command(name = "enactment", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a game document is well formed and print a summary.
    Validate { file: PathBuf },
    /// Run analyses and print a JSON report with the requested sections.
    Analyze(AnalyzeArgs),
    /// Print a random layered game document.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Characteristic function (nonzero coalitions).
    #[arg(long)]
    values: bool,
    /// Core emptiness and a witness point.
    #[arg(long)]
    core: bool,
    /// The closed-form stable revenue split.
    #[arg(long)]
    imputation: bool,
    /// Minimal budget for a stable split.
    #[arg(long)]
    threshold: bool,
    /// VCG payments with one agent per service.
    #[arg(long)]
    vcg: bool,
    /// Compare announced price margins with the stable split.
    #[arg(long)]
    detect: bool,
    /// Allowed margin deviation for --detect.
    #[arg(long, default_value = "0", requires = "detect")]
    tolerance: String,
    /// Check a payoff vector with the exact objection oracle.
    #[arg(long)]
    oracle: bool,
    /// Payoff to check with --oracle, as PLAYER=AMOUNT; repeat for every
    /// player. Defaults to the closed-form split.
    #[arg(long = "payoff", value_name = "PLAYER=AMOUNT", requires = "oracle")]
    payoffs: Vec<String>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    services: usize,
    #[arg(long, default_value_t = 3)]
    layers: usize,
    #[arg(long, default_value_t = 1)]
    min_cost: u32,
    #[arg(long, default_value_t = 10)]
    max_cost: u32,
    /// Players per service, in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    players_per_service: f64,
    /// Probability of each optional edge between consecutive layers.
    #[arg(long, default_value_t = 0.3)]
    edge_density: f64,
    /// Budget; defaults to the total service cost.
    #[arg(long)]
    budget: Option<String>,
    /// Write the document here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// A failure with its exit status.
struct Failure {
    code: &'static str,
    message: String,
    status: u8,
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        let status = match &e {
            GameError::TooManyPlayers { .. } => 4,
            e if e.is_validation() => 2,
            GameError::InvalidParameters(_) => 2,
            _ => 3,
        };
        Failure { code: e.code(), message: e.to_string(), status }
    }
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure { code: "InvalidParameters", message, status: 2 }
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    code: &'a str,
    message: &'a str,
}

#[derive(Serialize)]
struct Diagnostics<'a> {
    errors: Vec<Diagnostic<'a>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Analyze(args) => analyze(&args),
        Command::Generate(args) => generate_cmd(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let diag = Diagnostics { errors: vec![Diagnostic { code: f.code, message: &f.message }] };
            eprintln!("{}", serde_json::to_string(&diag).expect("diagnostics serialize"));
            ExitCode::from(f.status)
        }
    }
}

/// Prints one line to stdout. A reader that closes the pipe early is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            Err(Failure { code: "Io", message: format!("cannot write output: {e}"), status: 2 })
        }
        _ => Ok(()),
    }
}

fn load(path: &Path) -> Result<GameInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: "Io",
        message: format!("cannot read {}: {e}", path.display()),
        status: 2,
    })?;
    Ok(load_graph(&text)?)
}

fn cap_from_env(var: &str, default: usize) -> Result<usize, Failure> {
    match std::env::var(var) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::usage(format!("{var} must be a player count, got {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn validate(path: &Path) -> Result<(), Failure> {
    let instance = load(path)?;
    let sp = instance.graph().shortest_path();
    let cost = sp.cost.finite().map(exact_string).unwrap_or_else(|| "inf".into());
    emit(&format!(
        "{} services, {} players, Cost_SP = {cost}",
        instance.graph().vertex_count(),
        instance.player_count()
    ))
}

fn parse_payoffs(instance: &GameInstance, specs: &[String]) -> Result<Imputation, Failure> {
    let mut pairs = Vec::with_capacity(specs.len());
    for spec in specs {
        let (id, amount) =
            spec.split_once('=').ok_or_else(|| Failure::usage(format!("expected PLAYER=AMOUNT, got {spec:?}")))?;
        pairs.push((id.trim(), parse_rational(amount.trim())?));
    }
    Ok(Imputation::from_ids(instance.graph(), pairs)?)
}

fn analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let any = args.values || args.core || args.imputation || args.threshold || args.vcg || args.detect || args.oracle;
    if !any {
        return Err(Failure::usage(
            "request at least one of --values, --core, --imputation, --threshold, --vcg, --detect, --oracle".into(),
        ));
    }
    let tolerance: Rational = parse_rational(&args.tolerance)?;
    let instance = load(&args.file)?;
    let graph = instance.graph();
    let lp_cap = cap_from_env(LP_CAP_VAR, DEFAULT_ENUMERATION_CAP)?;
    let oracle_cap = cap_from_env(ORACLE_CAP_VAR, DEFAULT_ORACLE_CAP)?;

    let mut report = Report::default();
    let table = if args.values || args.core || args.oracle {
        let cap = if args.values || args.core { lp_cap } else { lp_cap.max(oracle_cap) };
        Some(enumerate_values(&instance, cap)?)
    } else {
        None
    };
    if let Some(table) = &table {
        if args.values {
            report.values = Some(ValuesSection::new(graph, table));
        }
        if args.core {
            report.core = Some(CoreSection::new(graph, &core_empty(table)));
        }
    }
    let needs_split = args.imputation || (args.oracle && args.payoffs.is_empty());
    let split = if needs_split { Some(stable_imputation(&instance)?) } else { None };
    if args.imputation {
        report.imputation = split.as_ref().map(|s| ImputationSection::new(graph, s));
    }
    if args.oracle {
        let x = match &split {
            Some(s) if args.payoffs.is_empty() => s.imputation.clone(),
            _ => parse_payoffs(&instance, &args.payoffs)?,
        };
        let table = table.as_ref().expect("oracle builds the value table");
        let verdict = bargaining_verdict(table, &x, oracle_cap)?;
        report.oracle = Some(OracleSection::new(graph, &x, &verdict));
    }
    if args.threshold {
        report.threshold = Some(ThresholdSection::new(graph, &stability_threshold(&instance)));
    }
    if args.vcg {
        let payments = vcg_payments(graph)?;
        let eq = check_equivalence(graph)?;
        report.vcg = Some(VcgSection::new(&payments, &eq));
    }
    if args.detect {
        report.detect = Some(DetectSection::from(&detect(&instance, &tolerance)?));
    }
    emit(&serde_json::to_string_pretty(&report).expect("reports serialize"))
}

fn generate_cmd(args: &GenerateArgs) -> Result<(), Failure> {
    let budget = args.budget.as_deref().map(parse_rational).transpose()?;
    let params = GeneratorParams {
        seed: args.seed,
        services: args.services,
        layers: args.layers,
        min_cost: args.min_cost,
        max_cost: args.max_cost,
        players_per_service: args.players_per_service,
        edge_density: args.edge_density,
        budget,
    };
    let document = emit_document(&generate(&params)?);
    match &args.output {
        Some(path) => fs::write(path, document + "\n").map_err(|e| Failure {
            code: "Io",
            message: format!("cannot write {}: {e}", path.display()),
            status: 2,
        }),
        None => emit(&document),
    }
}
