use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use derham_cli::{run, Command, Options};

#[derive(Parser)]
#[command(
    name = "derham",
    version,
    about = "Quantum de Rham complexes with d^3 = 0"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON algebra description
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Q branch label, overriding the config
    #[arg(long, global = true)]
    branch: Option<String>,
    /// Restrict case2d to one family of calculi
    #[arg(long, global = true)]
    family: Option<u8>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Matrix consistency conditions
    Check,
    /// Relations forced on second-order differentials
    Derive,
    /// Reduce an element to normal form
    NormalForm { expr: String },
    /// Critical pairs of the assembled relations
    Confluence,
    /// d^3 = 0 battery
    Complex {
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// The two-dimensional case study
    Case2d,
    /// Build (B, C, F) from a Hecke R-matrix
    HeckeBuild,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options {
        config: cli.config,
        branch: cli.branch,
        family: cli.family,
        ..Options::default()
    };
    let cmd = match cli.command {
        Cmd::Check => Command::Check,
        Cmd::Derive => Command::Derive,
        Cmd::NormalForm { expr } => Command::NormalForm(expr),
        Cmd::Confluence => Command::Confluence,
        Cmd::Complex { max_len } => {
            opts.max_len = max_len;
            Command::Complex
        }
        Cmd::Case2d => Command::Case2d,
        Cmd::HeckeBuild => Command::HeckeBuild,
    };
    let start = Instant::now();
    let mut report = match run(&cmd, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    report.elapsed_ms = Some(start.elapsed().as_millis());
    let text = match cli.format {
        Format::Text => report.render_text(),
        Format::Structured => report.render_structured(),
    };
    match cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
