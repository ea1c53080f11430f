//! Command-line front end: evaluate terms, normalize them into piecewise
//! s-functions, solve conditions, analyze eventual behaviour, run the
//! verification suites, and print the integration-closure chain.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use logcouple::oracle::{closure_chain, run_all, run_suite, GenConfig, SuiteReport};
use logcouple::sfunc::{PiecewiseSFunction, SFunction};
use logcouple::term::{parse_condition, parse_term};
use logcouple::vector::ExtValue;
use logcouple::{eval, eval_condition, psi_level, solve, term_to_piecewise};

#[derive(Parser)]
#[command(name = "logcouple")]
#[command(about = "Exact computation in the logarithmic asymptotic couple")]
#[command(version)]
#[command(after_help = "EXAMPLES:
    logcouple eval \"psi(x)\" --at \"[0,0,5]\"
    logcouple eval \"x = p(s(x))\" --at \"[1,1]\"
    logcouple normalize \"p(s(x))\" --format json
    logcouple solve \"s(x) < [1,1,1]\" --psi-names
    logcouple eventual \"d2(x) + [0,1]\"
    logcouple check --suite all --seed 42 --samples 10000
    logcouple closure --max-level 50")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a term (or a condition) at a point
    Eval(EvalArgs),
    /// Normalize a term into a piecewise s-function on the image set
    Normalize(TermArgs),
    /// Solve a condition over the image set
    Solve(TermArgs),
    /// Compute the eventual form of a term at the upper end of the group
    Eventual(TermArgs),
    /// Run verification suites
    Check(CheckArgs),
    /// Print the integration-closure chain grown from e_0
    Closure(ClosureArgs),
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    /// Term or condition to evaluate
    input: String,
    /// Evaluation point: a vector literal like "[1, -5/2]" or "inf"
    #[arg(long)]
    at: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print image-set values as psi_n
    #[arg(long)]
    psi_names: bool,
}

#[derive(Args)]
struct TermArgs {
    input: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print image-set values as psi_n
    #[arg(long)]
    psi_names: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name, or "all"
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cases per suite (structural suites run a tenth of this)
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Scan depth on the image set for the pointwise oracles
    #[arg(long, default_value_t = 40)]
    max_level: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ClosureArgs {
    /// Number of chain steps
    #[arg(long, default_value_t = 40)]
    max_level: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print image-set values as psi_n
    #[arg(long)]
    psi_names: bool,
}

/// Usage problems exit with status 2, suite failures with status 1.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Normalize(args) => cmd_normalize(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Eventual(args) => cmd_eventual(args),
        Command::Check(args) => cmd_check(args),
        Command::Closure(args) => cmd_closure(args),
    }
}

fn fmt_value(v: &ExtValue, psi_names: bool) -> String {
    if psi_names {
        if let Some(n) = psi_level(v) {
            return format!("psi_{n}");
        }
    }
    v.to_string()
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail")
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, String> {
    let at = match &args.at {
        Some(text) => ExtValue::parse_literal(text).map_err(|e| e.to_string())?,
        None => ExtValue::zero(),
    };
    match parse_term(&args.input) {
        Ok(term) => {
            if term.mentions_var() && args.at.is_none() {
                return Err("the term mentions x; pass an evaluation point with --at".into());
            }
            let value = eval(&term, &at);
            match args.format {
                Format::Text => println!("{}", fmt_value(&value, args.psi_names)),
                Format::Json => println!("{}", to_json(&value)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(term_err) => match parse_condition(&args.input) {
            Ok(cond) => {
                if args.at.is_none() {
                    return Err("conditions need an evaluation point; pass --at".into());
                }
                let value = eval_condition(&cond, &at);
                match args.format {
                    Format::Text => println!("{value}"),
                    Format::Json => println!("{}", to_json(&value)),
                }
                Ok(ExitCode::SUCCESS)
            }
            Err(_) => Err(term_err.to_string()),
        },
    }
}

fn cmd_normalize(args: TermArgs) -> Result<ExitCode, String> {
    let term = parse_term(&args.input).map_err(|e| e.to_string())?;
    let piecewise = term_to_piecewise(&term);
    match args.format {
        Format::Json => println!("{}", to_json(&piecewise)),
        Format::Text => print_piecewise(&piecewise, args.psi_names),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_piecewise(p: &PiecewiseSFunction, psi_names: bool) {
    for (interval, f) in p.pieces() {
        match f {
            SFunction::Constant(v) if psi_names => {
                println!("on {interval}: {}", fmt_value(v, true));
            }
            _ => println!("on {interval}: {f}"),
        }
    }
}

fn cmd_solve(args: TermArgs) -> Result<ExitCode, String> {
    let cond = parse_condition(&args.input).map_err(|e| e.to_string())?;
    let subset = solve(&cond);
    match args.format {
        Format::Json => println!("{}", to_json(&subset)),
        Format::Text => println!("{subset}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eventual(args: TermArgs) -> Result<ExitCode, String> {
    let term = parse_term(&args.input).map_err(|e| e.to_string())?;
    let form = logcouple::eventual_form(&term);
    match args.format {
        Format::Json => println!("{}", to_json(&form)),
        Format::Text => println!("{form}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, String> {
    let cfg = GenConfig {
        seed: args.seed,
        samples: args.samples,
        max_level: args.max_level,
        ..GenConfig::default()
    };
    let reports: Vec<SuiteReport> = if args.suite == "all" {
        run_all(&cfg)
    } else {
        vec![run_suite(&args.suite, &cfg).map_err(|e| e.to_string())?]
    };
    let failed = reports.iter().filter(|r| !r.passed()).count();
    match args.format {
        Format::Json => {
            let payload = serde_json::json!({
                "config": cfg,
                "reports": reports,
                "failed": failed,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).expect("serializable")
            );
        }
        Format::Text => {
            for report in &reports {
                println!("{report}");
                for failure in report.failures.iter().take(3) {
                    println!(
                        "  case {}: {} [{}]",
                        failure.case_index,
                        failure.message,
                        failure.inputs.join("; ")
                    );
                }
            }
            println!("{} suites, {} failed", reports.len(), failed);
        }
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_closure(args: ClosureArgs) -> Result<ExitCode, String> {
    if args.max_level < 1 {
        return Err("closure needs at least one step".into());
    }
    let steps = closure_chain(args.max_level);
    match args.format {
        Format::Json => {
            let payload = serde_json::json!({ "steps": steps });
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).expect("serializable")
            );
        }
        Format::Text => {
            for step in &steps {
                let beta = fmt_value(&ExtValue::Finite(step.beta.clone()), args.psi_names);
                println!(
                    "n = {:>3}: beta = {}  integral = {}  [s {} | int {} | psi {} | chi {} | expected {}]",
                    step.n,
                    beta,
                    step.alpha_next,
                    mark(step.successor_ok),
                    mark(step.integral_ok),
                    mark(step.psi_ok),
                    mark(step.chi_ok),
                    mark(step.matches_expected),
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}
