use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use critfan::commands::{
    cmd_analyze, cmd_derivative, cmd_refine, cmd_regularize, cmd_simulate, CliError, Outcome, EXIT_INPUT,
    EXIT_NONCRITICAL, EXIT_SELFTEST,
};
use critfan::report::{render, TOOL_VERSION};
use critfan::selftest::{cases_json, report_hash, run_suites, Inject};
use critfan::spec::{load_spec, LoadedSpec};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Shift {
    None,
    Haar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InjectArg {
    WrongTwoRho,
}

#[derive(Parser, Debug)]
#[command(name = "critfan", version, about = "Exponent arrangements and criticality of regularized integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (default: json for spec commands, text otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Override the shift given in the spec.
    #[arg(long, global = true, value_enum)]
    shift: Option<Shift>,
    /// Run twice and fail unless both runs agree byte for byte.
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fan, exponents and criticality of a spec.
    Analyze { spec: PathBuf },
    /// Numeric exponents in the split-torus model of a spec.
    Simulate { spec: PathBuf },
    /// Regularized integral of a built-in function.
    Regularize { function: String },
    /// Simplicial refinement of the arrangement.
    Refine { spec: PathBuf },
    /// Derivative arrangement at `options.derivative_of`.
    Derivative { spec: PathBuf },
    /// Regression table and property suites.
    Selftest {
        /// Run only suites whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, hide = true, value_enum)]
        inject: Option<InjectArg>,
    },
}

fn shift_name(s: Option<Shift>) -> Option<&'static str> {
    s.map(|s| match s {
        Shift::None => "none",
        Shift::Haar => "haar",
    })
}

fn emit(cli: &Cli, outcome: &Outcome, default: Format) -> Result<(), String> {
    let body = match cli.format.unwrap_or(default) {
        Format::Json => render(&outcome.report),
        Format::Text => outcome.text.clone(),
    };
    match &cli.out {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run_spec(cli: &Cli, path: &PathBuf, f: fn(&LoadedSpec) -> Result<Outcome, CliError>) -> Result<Outcome, CliError> {
    let spec = load_spec(path, shift_name(cli.shift))?;
    let first = f(&spec)?;
    if cli.seedless {
        let second = f(&spec)?;
        if render(&first.report) != render(&second.report) {
            return Err(CliError::Input("determinism check failed: reports differ".into()));
        }
    }
    Ok(first)
}

fn selftest(cli: &Cli, filter: Option<&str>, inject: Option<Inject>) -> ExitCode {
    let cases = run_suites(filter, inject);
    let hash = report_hash(&cases);
    if cli.seedless && report_hash(&run_suites(filter, inject)) != hash {
        eprintln!("selftest: determinism check failed");
        return ExitCode::from(EXIT_SELFTEST);
    }
    let failures: Vec<String> = cases.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let mut text = String::new();
    for c in &cases {
        text.push_str(&format!("{} {:<48} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    text.push_str(&format!(
        "{} cases, {} failed\nreport hash: {hash}\n",
        cases.len(),
        failures.len()
    ));
    let outcome = Outcome {
        report: json!({
            "cases": cases_json(&cases),
            "failures": failures,
            "passed": failures.is_empty(),
            "report_hash": hash,
            "version": TOOL_VERSION,
        }),
        text,
        exit: if failures.is_empty() { EXIT_NONCRITICAL } else { EXIT_SELFTEST },
    };
    if let Err(e) = emit(cli, &outcome, Format::Text) {
        eprintln!("{e}");
        return ExitCode::from(EXIT_INPUT);
    }
    for f in &failures {
        eprintln!("selftest failure: {f}");
    }
    ExitCode::from(outcome.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { spec } => run_spec(&cli, spec, cmd_analyze).map(|o| (o, Format::Json)),
        Command::Simulate { spec } => run_spec(&cli, spec, cmd_simulate).map(|o| (o, Format::Json)),
        Command::Refine { spec } => run_spec(&cli, spec, cmd_refine).map(|o| (o, Format::Json)),
        Command::Derivative { spec } => run_spec(&cli, spec, cmd_derivative).map(|o| (o, Format::Json)),
        Command::Regularize { function } => cmd_regularize(function).map(|o| (o, Format::Text)),
        Command::Selftest { filter, inject } => {
            let inject = inject.map(|InjectArg::WrongTwoRho| Inject::WrongTwoRho);
            return selftest(&cli, filter.as_deref(), inject);
        }
    };
    match result {
        Ok((outcome, default)) => match emit(&cli, &outcome, default) {
            Ok(()) => ExitCode::from(outcome.exit),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INPUT)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
