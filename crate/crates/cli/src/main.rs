use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cecot_cli::commands::{CertifyOptions, ExtOptions, RandomOptions, VerifyOptions};
use cecot_cli::{cmd_certify, cmd_ext, cmd_random, cmd_verify, exit_code, CliError, ReportFile};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cecot", version, about = "Cartan–Eilenberg resolutions over F_p[x]/(x^m)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification pipeline on an instance
    Verify {
        input: PathBuf,
        /// Row cap of the resolution [default: hi - lo + 3]
        #[arg(long)]
        jmax: Option<usize>,
        /// Number of links in the truncation tower [default: max(-lo, 0) + 1]
        #[arg(long)]
        tower_depth: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Chain maps sampled per acyclic source
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Include wall-clock timings (makes the report non-deterministic)
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a verified cofiltration certificate for Cot(E)
    Certify {
        input: PathBuf,
        #[arg(long)]
        jmax: Option<usize>,
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hyper-Ext dimensions of a module into the instance
    Ext {
        input: PathBuf,
        /// `Q`, `k`, or Jordan block sizes such as `2,1`
        #[arg(long, default_value = "k")]
        module: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Row cap of the resolution [default: the smallest valid one]
        #[arg(long)]
        jmax: Option<usize>,
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded random instance
    Random {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        /// hi - lo of the generated complex
        #[arg(long, default_value_t = 2)]
        window: usize,
        #[arg(long, default_value_t = 4)]
        maxdim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            reason: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(report: ReportFile, out: Option<&Path>) -> Result<i32, CliError> {
    emit(&report.to_text(), out)?;
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {}: {}", c.name, c.detail);
    }
    Ok(exit_code(&report))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify {
            input,
            jmax,
            tower_depth,
            seed,
            samples,
            timings,
            out,
        } => {
            let opts = VerifyOptions {
                jmax,
                tower_depth,
                seed,
                samples,
                timings,
            };
            finish(cmd_verify(&read(&input)?, &opts)?, out.as_deref())
        }
        Command::Certify {
            input,
            jmax,
            timings,
            out,
        } => finish(
            cmd_certify(&read(&input)?, &CertifyOptions { jmax, timings })?,
            out.as_deref(),
        ),
        Command::Ext {
            input,
            module,
            depth,
            jmax,
            timings,
            out,
        } => {
            let opts = ExtOptions {
                module,
                depth,
                jmax,
                timings,
            };
            finish(cmd_ext(&read(&input)?, &opts)?, out.as_deref())
        }
        Command::Random {
            p,
            m,
            lo,
            window,
            maxdim,
            seed,
            out,
        } => {
            let inst = cmd_random(&RandomOptions {
                p,
                m,
                lo,
                window,
                maxdim,
                seed,
            })?;
            emit(&inst.to_text(), out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
