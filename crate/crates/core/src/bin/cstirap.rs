use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cstirap::config::RunConfig;
use cstirap::presets::preset;
use cstirap::pulse::SequenceFamily;
use cstirap::run::{cmd_design_phases, cmd_simulate, cmd_sweep, init_thread_pool, resolve_output_dir, DesignOptions};
use cstirap::{Error, Result};

#[derive(Parser)]
#[command(name = "cstirap", version, about = "Composite STIRAP simulations in a three-level Lambda system")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunSource {
    /// JSON run configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Named preset: fig3, fig4a, fig4b or fig5.
    #[arg(long)]
    preset: Option<String>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunSource {
    fn configs(&self) -> Result<Vec<RunConfig>> {
        match (&self.config, &self.preset) {
            (Some(path), None) => Ok(vec![RunConfig::load(path)?]),
            (None, Some(name)) => preset(name),
            _ => Err(Error::Config("pass exactly one of --config or --preset".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// One ensemble-averaged run at the configured delay.
    Simulate(RunSource),
    /// Efficiency over the configured delay and Rabi-scale axes.
    Sweep(RunSource),
    /// Solve for the universal five-pulse phases.
    DesignPhases {
        /// Fit the infidelity scaling of every tabulated phase set.
        #[arg(long)]
        verify_table: bool,
        /// Fit the infidelity scaling of one family.
        #[arg(long, value_name = "FAMILY")]
        scaling: Option<SequenceFamily>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    init_thread_pool(cli.threads)?;
    match cli.command {
        Command::Simulate(src) => {
            for cfg in src.configs()? {
                let out = resolve_output_dir(src.out.as_deref(), &cfg);
                let rec = cmd_simulate(&cfg, &out)?;
                println!("{}: eta = {:.6}", cfg.label, rec.efficiency);
            }
        }
        Command::Sweep(src) => {
            for cfg in src.configs()? {
                let out = resolve_output_dir(src.out.as_deref(), &cfg);
                let map = cmd_sweep(&cfg, &out)?;
                let peak = map.peak().map_or_else(|| "n/a".into(), |p| format!("{p:.6}"));
                println!(
                    "{}: {} points, {} failed, peak eta = {peak} -> {}",
                    cfg.label,
                    map.tau_s.len() * map.omega_scale.len(),
                    map.failures.len(),
                    out.join(format!("{}.csv", cfg.label)).display()
                );
            }
        }
        Command::DesignPhases { verify_table, scaling, out } => {
            let report = cmd_design_phases(&DesignOptions { verify_table, scaling }, &out)?;
            for s in &report.solutions {
                let name = s.family.map_or("-", |f| f.name());
                println!("{name}: phi2 = {:.12}, phi3 = {:.12}", s.phi2, s.phi3);
            }
            for f in report.table.iter().chain(&report.scaling) {
                println!("{}: infidelity slope {:.3}", f.family, f.fit.slope);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
