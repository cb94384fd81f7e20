use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use holoww::runner::{cmd_fit, cmd_resume, cmd_simulate, cmd_verify, RunConfig, VerifyOptions, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "holoww", version, about = "Water waves in holomorphic coordinates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write its run directory.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Continue the run from one of its checkpoint files.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Run a verification suite (or `all`) and print one line per check.
    Verify {
        #[arg(long)]
        suite: String,
        /// Number of grid modes.
        #[arg(long = "n")]
        modes: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Fit a power law to one norm series of a finished run.
    Fit {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        norm: String,
        #[arg(long, num_args = 2, value_names = ["T0", "T1"])]
        window: Option<Vec<f64>>,
    },
}

fn run(cli: Cli) -> holoww::Result<bool> {
    match cli.command {
        Command::Simulate { config, resume: None } => {
            let cfg = RunConfig::load(&config)?;
            let dir = cmd_simulate(&cfg)?;
            println!("{}", dir.display());
            Ok(true)
        }
        Command::Simulate { config, resume: Some(checkpoint) } => {
            let cfg = RunConfig::load(&config)?;
            let dir = holoww::runner::run_dir(&cfg);
            let out = cmd_resume(&dir, &checkpoint)?;
            println!("{} ({} records from t = {})", dir.display(), out.records.len(), out.final_state.t);
            Ok(true)
        }
        Command::Verify { suite, modes, seed } => {
            let reports = cmd_verify(&suite, &VerifyOptions { modes, seed })?;
            let mut ok = true;
            for r in &reports {
                for line in r.lines() {
                    println!("{line}");
                }
                ok &= r.passed();
            }
            Ok(ok)
        }
        Command::Fit { run, norm, window } => {
            let window = window.map(|w| (w[0], w[1]));
            let rep = cmd_fit(&run, &norm, window)?;
            println!(
                "{}, slope {:.6}, stderr {:.2e}, samples {}, series {}",
                rep.norm_id,
                rep.fit.slope,
                rep.fit.stderr,
                rep.fit.samples,
                rep.series.display()
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
