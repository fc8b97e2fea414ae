// Copyright 2026 The vidcache Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vidcache_harness::{
    run_per_vr, run_solve, run_sweep_gamma, run_sweep_storage, run_verify_coverage, ExperimentConfig, HarnessError,
    Table,
};

#[derive(Parser)]
#[command(name = "vidcache", version, about = "SBS rental market: equilibria, sweeps and coverage validation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare simulated and analytic cache-hit probabilities.
    VerifyCoverage(Common),
    /// Participants and revenues as the retailer preference exponent varies.
    SweepGamma(Common),
    /// Participants and revenues as the SBS storage varies.
    SweepStorage(Common),
    /// Prices and rented fractions of each retailer.
    PerVr(Common),
    /// Solve one market and print the equilibria.
    Solve(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config; every key is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Override a config key, e.g. `--set gamma=0.3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut overrides = self.overrides.clone();
        if let Some(seed) = self.seed {
            overrides.push(format!("seed={seed}"));
        }
        if let Some(trials) = self.trials {
            overrides.push(format!("trials={trials}"));
        }
        let mut cfg = ExperimentConfig::load(self.config.as_deref(), &overrides)?;
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        Ok(cfg)
    }
}

fn emit(table: &Table, cfg: &ExperimentConfig) -> Result<(), HarnessError> {
    match &cfg.out {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            table.write_csv(std::io::BufWriter::new(file))?;
            log::info!("wrote {} rows to {}", table.rows.len(), path.display());
        }
        None => table.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}

fn run(command: Command) -> Result<(), HarnessError> {
    let tabulate = |common: &Common, f: fn(&ExperimentConfig) -> Result<Table, HarnessError>| {
        let cfg = common.load()?;
        emit(&f(&cfg)?, &cfg)
    };
    match command {
        Command::VerifyCoverage(common) => {
            let cfg = common.load()?;
            let run = run_verify_coverage(&cfg)?;
            emit(&run.table, &cfg)?;
            match run.mismatches {
                0 => Ok(()),
                n => Err(HarnessError::Mismatch(n)),
            }
        }
        Command::SweepGamma(common) => tabulate(&common, run_sweep_gamma),
        Command::SweepStorage(common) => tabulate(&common, run_sweep_storage),
        Command::PerVr(common) => tabulate(&common, run_per_vr),
        Command::Solve(common) => tabulate(&common, run_solve),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
