use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use affclass_cli::commands::{self, CliError, Report};
use affclass_cli::selfcheck;

/// Divisor class groups, affine class groups and height-bound propagation
/// for monoid, hyperbola and determinantal rings.
#[derive(Parser)]
#[command(name = "affclass", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args)]
struct InputArgs {
    /// Read the input document from a file (`-` for standard input)
    #[arg(
        short = 'i',
        long = "input",
        value_name = "FILE",
        conflicts_with = "json"
    )]
    input: Option<PathBuf>,
    /// Inline JSON input
    #[arg(long, value_name = "JSON")]
    json: Option<String>,
    /// Report format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Cmd {
    /// Facet valuations of a monoid and whether it is simplicial
    MonoidFacets(InputArgs),
    /// Divisor class group of a monoid ring
    MonoidDkg(InputArgs),
    /// Affine class group of a monoid ring
    MonoidAkg(InputArgs),
    /// Whether a monomial divisor's complement is affine
    MonoidAffine(InputArgs),
    /// Class groups and divisor decisions for a hyperbola ring
    Hyperbola(InputArgs),
    /// Dimension, heights and class groups of a determinantal ring
    Determinantal(InputArgs),
    /// Union-of-primes affinity and superheights for the rank-one matrix ring
    Segre(InputArgs),
    /// Propagate height-invariant facts to a fixpoint
    Bounds(InputArgs),
    /// Run the built-in regression set
    Selfcheck {
        /// Report format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::MonoidFacets(args) => run(&args, commands::monoid_facets),
        Cmd::MonoidDkg(args) => run(&args, commands::monoid_dkg),
        Cmd::MonoidAkg(args) => run(&args, commands::monoid_akg),
        Cmd::MonoidAffine(args) => run(&args, commands::monoid_affine),
        Cmd::Hyperbola(args) => run(&args, commands::hyperbola),
        Cmd::Determinantal(args) => run(&args, commands::determinantal),
        Cmd::Segre(args) => run(&args, commands::segre),
        Cmd::Bounds(args) => run(&args, commands::bounds),
        Cmd::Selfcheck { format } => run_selfcheck(format),
    }
}

fn run(args: &InputArgs, command: fn(&Value) -> Result<Report, CliError>) -> ExitCode {
    let doc = match load_input(args) {
        Ok(doc) => doc,
        Err(message) => {
            eprintln!("error: {}", message);
            return ExitCode::from(2);
        }
    };
    match command(&doc) {
        Ok(report) => {
            match args.format {
                OutputFormat::Json => emit(&format!("{}\n", report.json)),
                OutputFormat::Text => emit(&report.text),
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {}", message);
            ExitCode::from(2)
        }
        Err(CliError::Domain {
            code,
            message,
            witness,
        }) => {
            eprintln!("error: {}", message);
            match args.format {
                OutputFormat::Json => emit(&format!(
                    "{}\n",
                    commands::error_report(code, &message, witness)
                )),
                OutputFormat::Text => {
                    emit(&format!("error: {}\n{}\n", code, message));
                }
            }
            ExitCode::from(1)
        }
    }
}

// Reports go to stdout; a closed pipe downstream is not our error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing report: {}", e);
        std::process::exit(2);
    }
}

fn load_input(args: &InputArgs) -> Result<Value, String> {
    let text = match (&args.input, &args.json) {
        (Some(path), None) if path.as_os_str() == "-" => {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| format!("reading standard input: {}", e))?;
            buffer
        }
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| format!("reading {}: {}", path.display(), e))?,
        (None, Some(inline)) => inline.clone(),
        (None, None) => return Err("an input is required: use -i FILE or --json '<doc>'".into()),
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting inputs"),
    };
    serde_json::from_str(&text).map_err(|e| format!("invalid JSON input: {}", e))
}

fn run_selfcheck(format: OutputFormat) -> ExitCode {
    let checks = selfcheck::run_all();
    let all_pass = checks.iter().all(|c| c.pass);
    match format {
        OutputFormat::Text => {
            let mut text = String::new();
            for check in &checks {
                if check.pass {
                    text.push_str(&format!("ok   {} ({} ms)\n", check.name, check.millis));
                } else {
                    text.push_str(&format!(
                        "FAIL {} ({} ms): {}\n",
                        check.name, check.millis, check.detail
                    ));
                }
            }
            text.push_str(if all_pass {
                "all checks passed\n"
            } else {
                "some checks FAILED\n"
            });
            emit(&text);
        }
        OutputFormat::Json => {
            let items: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "pass": c.pass,
                        "detail": c.detail,
                        "millis": u64::try_from(c.millis).unwrap_or(u64::MAX),
                    })
                })
                .collect();
            emit(&format!(
                "{}\n",
                json!({ "pass": all_pass, "checks": items })
            ));
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
