use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use frob_core::cli::{emit, parse, run, CliError, Command, Format, RunOptions};

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

/// Exact Frobenius bimodule analyses of `.frob` documents.
#[derive(Parser)]
#[command(name = "frob", version)]
struct Args {
    /// check | ranks | classify | restrict | partition | glue | duality | report-all
    command: String,
    /// Input document.
    input: PathBuf,
    /// Seed for isomorphism search and morphism sampling.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: OutFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Let localizing quantifiers range over the zero subcategory too.
    #[arg(long)]
    include_zero_subcategory: bool,
    /// Append per-task wall time to the text report.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match go(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("frob: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn go(args: &Args) -> Result<i32, CliError> {
    let command: Command = args.command.parse()?;
    let src = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let doc = parse(&src)?;
    let report = run(
        &doc,
        command,
        RunOptions {
            seed: args.seed,
            include_zero_subcategory: args.include_zero_subcategory,
        },
    );
    let format = match args.format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Json,
    };
    let text = emit(&report, format, args.timing);
    match &args.out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code())
}
