use std::io::Write;
use std::process::ExitCode;

use ces_core::Tolerances;
use ces_toolkit::{
    cmd_construct, cmd_enumerate, cmd_ppt, cmd_verify_all, render_text, CommandError, RunReport,
    RunSettings, EXIT_USAGE,
};
use clap::{Args, Parser, Subcommand};

/// Unextendible product bases, completely entangled subspaces and product-vector counts.
#[derive(Parser)]
#[command(name = "ces-toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Local dimensions for shape-generic spaces (F, SP), e.g. 3,3.
    #[arg(long, global = true, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Base seed of the search; restart i uses seed + i.
    #[arg(long, global = true, env = "CES_TOOLKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Number of random restarts of the search.
    #[arg(long, global = true, default_value_t = 400)]
    restarts: usize,
    /// Relative residual below which a vector counts as in the subspace.
    #[arg(long, global = true)]
    tol_zero: Option<f64>,
    /// Relative singular-value threshold for rank decisions.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named space and print its dimension and basis.
    Construct {
        /// Space, e.g. U, SU+0, SP+z(1)+z(inf).
        space: String,
        /// Also print basis amplitudes.
        #[arg(long)]
        basis: bool,
    },
    /// Count the product rays of a named space.
    Enumerate {
        space: String,
        /// Use the search even when a closed form or family applies.
        #[arg(long)]
        force_oracle: bool,
    },
    /// PPT and range-criterion report for the state built from a UPB.
    Ppt {
        /// "tiles" or "shifts3q".
        upb: String,
        /// Parts (numbered from 1) on one side of a single cut, e.g. 1 or 1,2.
        #[arg(long, value_delimiter = ',')]
        cut: Option<Vec<usize>>,
    },
    /// Run the acceptance suite.
    VerifyAll,
}

fn settings(c: &Common, force_oracle: bool) -> Result<RunSettings, CommandError> {
    let mut tol = Tolerances::default();
    if let Some(t) = c.tol_zero {
        tol.tol_zero = t;
    }
    if let Some(t) = c.tol_rank {
        tol.tol_rank = t;
    }
    tol.validate()?;
    if c.restarts == 0 {
        return Err(CommandError {
            message: "--restarts must be at least 1".into(),
            code: EXIT_USAGE,
        });
    }
    Ok(RunSettings {
        seed: c.seed,
        restarts: c.restarts,
        tol,
        force_oracle,
    })
}

fn run(cli: &Cli, echo: &str) -> Result<RunReport, CommandError> {
    let c = &cli.common;
    let dims = c.dims.as_deref();
    match &cli.command {
        Command::Construct { space, basis } => {
            cmd_construct(echo, space, dims, *basis, &settings(c, false)?)
        }
        Command::Enumerate {
            space,
            force_oracle,
        } => cmd_enumerate(echo, space, dims, &settings(c, *force_oracle)?),
        Command::Ppt { upb, cut } => cmd_ppt(echo, upb, cut.as_deref(), &settings(c, false)?),
        Command::VerifyAll => Ok(cmd_verify_all(echo, &settings(c, false)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().collect::<Vec<_>>().join(" ");
    match run(&cli, &echo) {
        Ok(report) => {
            let text = if cli.common.json {
                serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
            } else {
                render_text(&report)
            };
            // a closed pipe is not an error for the caller
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
