//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, StatsCut};
use crate::error::{HarnessError, Result};
use crate::{cooling, heating, stats};

#[derive(Debug, Parser)]
#[command(
    name = "entcool",
    version,
    about = "Entanglement heating and cooling ensembles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the heating ensemble: entropy curves and final spectra.
    Heat(Overrides),
    /// Cool a sample of the heated realizations recorded in --out.
    Cool(Overrides),
    /// Spacing-ratio statistics of the recorded spectra.
    Stats(Overrides),
    /// heat, cool and stats in sequence.
    All(Overrides),
    /// Re-run one realization from the manifest in --out.
    Replay {
        realization: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Flags override values from --config, which override the defaults.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_qubits: Option<usize>,
    #[arg(long)]
    pub gate_set: Option<String>,
    #[arg(long)]
    pub n_gates: Option<usize>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub cool_samples: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub cut: Option<StatsCut>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub curve_stride: Option<usize>,
    #[arg(long)]
    pub trace_stride: Option<usize>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        set!(
            seed,
            n_qubits,
            gate_set,
            n_gates,
            realizations,
            cool_samples,
            beta,
            max_steps,
            cut,
            out,
            workers,
            curve_stride,
            trace_stride
        );
        Ok(c)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| HarnessError::Config(e.to_string()))?;
    run(cli)
}

/// Executes a parsed command, printing progress to stdout.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Heat(o) => {
            let cfg = o.resolve()?;
            let s = heating::run_heating_ensemble(&cfg)?;
            if let Some(last) = s.curve.last() {
                println!(
                    "heated {} realizations: mean S0 = {:.4}, mean S1 = {:.4} after {} gates",
                    s.records.len(),
                    last.mean_s0,
                    last.mean_s1,
                    last.gate_number
                );
            }
        }
        Command::Cool(o) => report_cooling(&cooling::run_cooling_ensemble(&o.resolve()?)?),
        Command::Stats(o) => println!("{}", stats::run_stats(&o.resolve()?)?.verdict_line()),
        Command::All(o) => {
            let cfg = o.resolve()?;
            heating::run_heating_ensemble(&cfg)?;
            report_cooling(&cooling::run_cooling_ensemble(&cfg)?);
            println!("{}", stats::run_stats(&cfg)?.verdict_line());
        }
        Command::Replay {
            realization,
            out,
            config,
        } => {
            let base = Overrides {
                config,
                out,
                ..Default::default()
            }
            .resolve()?;
            let r = heating::replay(&base.out, realization)?;
            let status = match r.matches_recorded {
                Some(true) => "matches spectra.csv",
                Some(false) => "differs from spectra.csv",
                None => "no recorded spectra to compare",
            };
            println!(
                "replayed realization {}: {} ({}, {})",
                r.realization,
                status,
                r.circuit_path.display(),
                r.spectra_path.display()
            );
        }
    }
    Ok(())
}

fn report_cooling(rows: &[cooling::CoolingRow]) {
    let done = rows.iter().filter(|r| r.outcome == "disentangled").count();
    let mean = rows.iter().map(|r| r.final_mean_s1).sum::<f64>() / rows.len().max(1) as f64;
    println!(
        "cooled {} samples: {} disentangled, mean final S1 = {:.4}",
        rows.len(),
        done,
        mean
    );
}
