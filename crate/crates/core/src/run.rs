//! Implementations of the `simulate`, `sweep` and `design-phases` commands.
//!
//! Every command writes into an output directory and returns what it wrote,
//! so the same code drives the binary, the examples and the tests.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::composite::{angle_samples, infidelity_scaling, log_grid, solve_u5_phases_all, PhaseSet, ScalingFit};
use crate::config::RunConfig;
use crate::ensemble::{ensemble_efficiency, probe_efficiency, simulate_probe, sweep, EfficiencyMap};
use crate::pulse::{build_sequence, phase_table, SequenceFamily};
use crate::quantum::DensityMatrix3;
use crate::{Error, Result};

/// Builds the global rayon pool; `0` lets rayon pick the thread count.
pub fn init_thread_pool(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot configure thread pool: {e}")))
}

/// Output of `simulate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub config: RunConfig,
    /// Averaged `ρ₃₃`.
    pub efficiency: f64,
    /// Averaged populations of `|1⟩, |2⟩, |3⟩`.
    pub populations: [f64; 3],
    /// Efficiency inferred from simulated probe absorptions on the two
    /// ground states; `null` when both are empty.
    pub probe_efficiency: Option<f64>,
    pub density: DensityMatrix3,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(file, value)?;
    Ok(())
}

/// Output directory: the explicit one, else the config's, else `out/`.
pub fn resolve_output_dir(explicit: Option<&Path>, cfg: &RunConfig) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

/// One ensemble-averaged run at the config's delay; writes `<label>.json`.
pub fn cmd_simulate(cfg: &RunConfig, out_dir: &Path) -> Result<SimulationRecord> {
    cfg.validate()?;
    let seq = build_sequence(&cfg.sequence_params()).map_err(|e| Error::Config(e.to_string()))?;
    let sys = cfg.system()?;
    let outcome = ensemble_efficiency(&seq, &sys, &cfg.members()?, &cfg.spatial()?, cfg.step_s)?;
    let populations = outcome.density.populations();
    let probe_efficiency = simulate_probe(populations[0].max(0.0), populations[2].max(0.0), sys.oscillator_strength_ratio)
        .and_then(|a| probe_efficiency(a.alpha_12, a.alpha_32, sys.oscillator_strength_ratio))
        .ok();
    let record = SimulationRecord {
        config: cfg.clone(),
        efficiency: outcome.efficiency,
        populations,
        probe_efficiency,
        density: outcome.density,
    };
    create_dir(out_dir)?;
    write_json(&out_dir.join(format!("{}.json", cfg.label)), &record)?;
    Ok(record)
}

/// Runs one config's sweep and writes `<label>.csv` and `<label>.json`.
///
/// The JSON metadata is the resolved config, so feeding it back reproduces
/// the map exactly.
pub fn cmd_sweep(cfg: &RunConfig, out_dir: &Path) -> Result<EfficiencyMap> {
    cfg.validate()?;
    let setup = cfg.sweep_setup()?;
    let metadata = serde_json::to_value(cfg)?;
    let label = cfg.label.clone();
    let map = sweep(&setup, &cfg.delay_axis(), &cfg.scale_axis(), metadata, |p| {
        let eta = p.efficiency.map_or_else(|| "failed".to_string(), |e| format!("{e:.6}"));
        log::info!(
            "{label}: point {}/{} tau = {:.3} us, scale = {:.3}: eta = {eta}",
            p.done,
            p.total,
            p.tau_s * 1e6,
            p.omega_scale
        );
    })?;
    create_dir(out_dir)?;
    map.write_csv(BufWriter::new(File::create(out_dir.join(format!("{label}.csv")))?))?;
    map.write_json(BufWriter::new(File::create(out_dir.join(format!("{label}.json")))?))?;
    Ok(map)
}

/// Reads the config embedded in a sweep's JSON output.
pub fn config_from_map(map: &EfficiencyMap) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_value(map.metadata.clone()).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Clone, Debug, Default)]
pub struct DesignOptions {
    /// Also fit the infidelity scaling of every tabulated family.
    pub verify_table: bool,
    /// Fit the infidelity scaling of one family.
    pub scaling: Option<SequenceFamily>,
}

/// A solution of the first-order conditions of the symmetric five-pulse sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct U5Solution {
    pub phi2: f64,
    pub phi3: f64,
    /// Phases of all five pulses.
    pub phases: Vec<f64>,
    /// Matching tabulated family, if any.
    pub family: Option<SequenceFamily>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyScaling {
    pub family: SequenceFamily,
    pub phases: Vec<f64>,
    pub fit: ScalingFit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    /// Every root on the torus, mirror images included.
    pub roots: Vec<(f64, f64)>,
    /// Roots matching a tabulated universal family.
    pub solutions: Vec<U5Solution>,
    pub table: Vec<FamilyScaling>,
    pub scaling: Option<FamilyScaling>,
}

pub const DESIGN_TOLERANCE: f64 = 1e-12;
/// ε range of the scaling fits.
pub const SCALING_EPSILON: (f64, f64) = (1e-3, 1e-2);
pub const SCALING_POINTS: usize = 10;
/// Angle samples per axis; the worst case is taken over their square.
pub const SCALING_ANGLES: usize = 8;

fn family_phases(family: SequenceFamily) -> Result<PhaseSet> {
    match family {
        SequenceFamily::Single => Ok(PhaseSet::new(vec![0.0])),
        SequenceFamily::Repeat => Ok(PhaseSet::new(vec![0.0; 5])),
        f => PhaseSet::from_family(f),
    }
}

/// Worst-case infidelity scaling of a family's relative phases.
///
/// `repeat` is evaluated with five pulses.
pub fn family_scaling(family: SequenceFamily) -> Result<FamilyScaling> {
    let phases = family_phases(family)?;
    let angles = angle_samples(SCALING_ANGLES);
    let fit = infidelity_scaling(
        &phases,
        &log_grid(SCALING_EPSILON.0, SCALING_EPSILON.1, SCALING_POINTS),
        &angles,
        &angles,
    )?;
    Ok(FamilyScaling {
        family,
        phases: phases.phases,
        fit,
    })
}

fn matching_family(phi2: f64, phi3: f64) -> Option<SequenceFamily> {
    [SequenceFamily::U5a, SequenceFamily::U5b].into_iter().find(|&f| {
        phase_table(f).is_ok_and(|t| {
            let close = |a: f64, b: f64| (a - b).rem_euclid(std::f64::consts::TAU).min((b - a).rem_euclid(std::f64::consts::TAU)) < 1e-6;
            close(t.pump[1], phi2) && close(t.pump[2], phi3)
        })
    })
}

/// Solves for the universal five-pulse phases and writes `design_phases.json`.
pub fn cmd_design_phases(opts: &DesignOptions, out_dir: &Path) -> Result<DesignReport> {
    let roots = solve_u5_phases_all(DESIGN_TOLERANCE);
    if roots.is_empty() {
        return Err(Error::Degenerate("no five-pulse phase solution found".into()));
    }
    let solutions = roots
        .iter()
        .filter_map(|&(phi2, phi3)| {
            matching_family(phi2, phi3).map(|family| U5Solution {
                phi2,
                phi3,
                phases: PhaseSet::symmetric_five(phi2, phi3).phases,
                family: Some(family),
            })
        })
        .collect();
    let table = if opts.verify_table {
        SequenceFamily::TABULATED
            .into_iter()
            .map(family_scaling)
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let scaling = opts.scaling.map(family_scaling).transpose()?;
    let report = DesignReport {
        roots,
        solutions,
        table,
        scaling,
    };
    create_dir(out_dir)?;
    write_json(&out_dir.join("design_phases.json"), &report)?;
    Ok(report)
}
