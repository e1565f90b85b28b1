use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fusion_cli::{golden, CliError, Problem};

/// Combine belief functions from a problem file.
#[derive(Parser)]
#[command(name = "fuse", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Rule selector, e.g. `pcr5` or `dubois-prade`.
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Also write the table and redistribution ledger as JSON.
    #[arg(long)]
    export: Option<PathBuf>,
    /// Rule parameter as `key=value`; overrides `param:` lines.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the embedded golden suite.
    Verify,
    /// Print every element of the problem's set algebra.
    Enumerate {
        #[arg(long)]
        input: PathBuf,
    },
}

fn load(path: &PathBuf) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(Problem::parse(&text)?)
}

fn combine(cli: &Cli) -> Result<(), CliError> {
    if let Some(rule) = &cli.rule {
        fusion_cli::parse_rule(rule)?;
    }
    let (Some(rule), Some(input)) = (&cli.rule, &cli.input) else {
        return Err(CliError::Usage(
            "usage: fuse --rule <selector> --input <file> [--export <file>] [--param k=v ...]".into(),
        ));
    };
    let overrides = cli
        .params
        .iter()
        .map(|p| fusion_cli::parse_override(p))
        .collect::<Result<Vec<_>, _>>()?;
    let problem = load(input)?;
    let table = fusion_cli::run(&problem, rule, &overrides)?;
    print!("{table}");
    if let Some(path) = &cli.export {
        std::fs::write(path, table.to_json() + "\n")
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Some(Command::Verify) => {
            let reports = golden::verify(&golden::cases());
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            println!("{} passed, {failed} failed", reports.len() - failed);
            return ExitCode::from(if failed == 0 { 0 } else { 1 });
        }
        Some(Command::Enumerate { input }) => load(input).and_then(|p| fusion_cli::enumerate(&p)).map(|elements| {
            for e in &elements {
                println!("{e}");
            }
            println!("{} elements", elements.len());
        }),
        None => combine(&cli),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
