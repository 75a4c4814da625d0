use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};

use vacalc::frontend::{
    builtin, parse_definition, parse_query, run_query, split_query, Format, Options,
};
use vacalc::vertex_calc::DEFAULT_MAX_DEGREE;
use vacalc::Error;

/// Lambda-brackets, OPEs, modes and normally ordered products.
///
/// Queries: bracket X Y | nproduct X N Y | ope X Y | modes A_m B_n |
/// check skew|jacobi|borcherds|mode-jacobi | weight X | primary A [L] | show
#[derive(Parser, Debug)]
#[command(name = "vacalc", version, allow_negative_numbers = true)]
#[command(group(ArgGroup::new("source").required(true).args(["algebra", "builtin"])))]
struct Cli {
    /// The query, as separate words or one quoted string.
    #[arg(required = true, num_args = 1..)]
    query: Vec<String>,

    /// Definition file (.vac).
    #[arg(long, value_name = "FILE")]
    algebra: Option<PathBuf>,

    /// Built-in algebra: virasoro, neveu_schwarz, free_fermion, free_boson,
    /// sl2 or superfermion:E,O.
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,

    #[arg(long, default_value = "text", value_parser = ["text", "latex", "json", "ope"])]
    format: String,

    /// Index range for sweeps.
    #[arg(long, value_name = "N")]
    range: Option<i64>,

    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_DEGREE)]
    max_lambda_degree: u32,
}

fn run(cli: &Cli) -> Result<(String, Option<String>, i32), String> {
    let alg = match (&cli.algebra, &cli.builtin) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_definition(&text).map_err(|e| match e {
                Error::Located { .. } | Error::Parse { .. } => format!("{}:{e}", path.display()),
                other => format!("{}: {other}", path.display()),
            })?
        }
        (None, Some(name)) => builtin(name).map_err(|e| e.to_string())?,
        (None, None) => unreachable!("clap enforces a source"),
    };
    let words = if cli.query.len() == 1 {
        split_query(&cli.query[0])
    } else {
        cli.query.clone()
    };
    let q = parse_query(&words).map_err(|e| e.to_string())?;
    let opts = Options {
        format: cli.format.parse::<Format>().map_err(|e| e.to_string())?,
        range: cli.range,
        max_degree: cli.max_lambda_degree,
    };
    let out = run_query(&q, &alg, &opts).map_err(|e| e.to_string())?;
    Ok((out.output, out.diagnostic, out.code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((output, diagnostic, code)) => {
            if let Err(e) = writeln!(io::stdout().lock(), "{output}") {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("vacalc: {e}");
                    return ExitCode::from(2);
                }
            }
            if let Some(d) = diagnostic {
                eprintln!("vacalc: {d}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("vacalc: {e}");
            ExitCode::from(2)
        }
    }
}
