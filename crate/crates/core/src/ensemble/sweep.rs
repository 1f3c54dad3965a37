//! Delay × Rabi-scale sweeps and their CSV/JSON emission.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{ensemble_efficiency, EnsembleMember, LambdaSystem, SpatialAveragingSpec};
use crate::pulse::{build_sequence, SequenceParams};
use crate::{Error, Result};

/// Header row of every efficiency CSV file.
pub const CSV_HEADER: &str = "tau_s, omega_scale, efficiency";

/// Everything held fixed across a sweep.
#[derive(Clone, Debug)]
pub struct SweepSetup {
    /// Sequence layout; its delay and peaks are replaced at every point.
    pub sequence: SequenceParams,
    /// Peaks at scale 1, detunings and decay.
    pub system: LambdaSystem,
    pub members: Vec<EnsembleMember>,
    pub spatial: SpatialAveragingSpec,
    /// RK4 step (s); `None` uses T_Ω/2000.
    pub step: Option<f64>,
}

impl SweepSetup {
    /// Sequence parameters at one grid point.
    pub fn point_params(&self, tau: f64, scale: f64) -> SequenceParams {
        SequenceParams {
            delay: tau,
            pump_peak: self.system.pump_peak * scale,
            stokes_peak: self.system.stokes_peak * scale,
            ..self.sequence
        }
    }

    /// Ensemble efficiency at one grid point.
    pub fn evaluate(&self, tau: f64, scale: f64) -> Result<f64> {
        let seq = build_sequence(&self.point_params(tau, scale))?;
        Ok(ensemble_efficiency(&seq, &self.system, &self.members, &self.spatial, self.step)?.efficiency)
    }
}

/// A grid point that could not be evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub tau_s: f64,
    pub omega_scale: f64,
    pub message: String,
}

/// Report passed to the progress callback after each point.
#[derive(Clone, Copy, Debug)]
pub struct SweepProgress {
    pub done: usize,
    pub total: usize,
    pub tau_s: f64,
    pub omega_scale: f64,
    pub efficiency: Option<f64>,
}

/// Transfer efficiency over a (delay, Rabi-scale) grid.
///
/// `efficiency[i][j]` belongs to `tau_s[i]` and `omega_scale[j]`; `None`
/// marks a failed point, listed with its reason in `failures`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyMap {
    pub tau_s: Vec<f64>,
    pub omega_scale: Vec<f64>,
    pub efficiency: Vec<Vec<Option<f64>>>,
    pub failures: Vec<PointFailure>,
    pub metadata: serde_json::Value,
}

fn check_axis(values: &[f64], name: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid(format!("{name} axis is empty")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{name} axis contains non-finite values")));
    }
    Ok(())
}

/// Evaluates [`ensemble_efficiency`] on every `(τ, scale)` pair.
///
/// Points run in row-major order (τ outer). A failing point becomes a
/// missing value and the sweep carries on.
pub fn sweep(
    setup: &SweepSetup,
    tau_s: &[f64],
    omega_scale: &[f64],
    metadata: serde_json::Value,
    mut progress: impl FnMut(SweepProgress),
) -> Result<EfficiencyMap> {
    check_axis(tau_s, "delay")?;
    check_axis(omega_scale, "Rabi scale")?;
    setup.system.validate()?;
    setup.spatial.validate()?;
    if setup.members.is_empty() {
        return Err(Error::invalid("ensemble has no members"));
    }
    let total = tau_s.len() * omega_scale.len();
    let mut efficiency = Vec::with_capacity(tau_s.len());
    let mut failures = Vec::new();
    let mut done = 0;
    for &tau in tau_s {
        let mut row = Vec::with_capacity(omega_scale.len());
        for &scale in omega_scale {
            let value = match setup.evaluate(tau, scale) {
                Ok(eta) => Some(eta),
                Err(e) => {
                    log::warn!("sweep point tau = {tau:e} s, scale = {scale} failed: {e}");
                    failures.push(PointFailure {
                        tau_s: tau,
                        omega_scale: scale,
                        message: e.to_string(),
                    });
                    None
                }
            };
            row.push(value);
            done += 1;
            progress(SweepProgress {
                done,
                total,
                tau_s: tau,
                omega_scale: scale,
                efficiency: value,
            });
        }
        efficiency.push(row);
    }
    Ok(EfficiencyMap {
        tau_s: tau_s.to_vec(),
        omega_scale: omega_scale.to_vec(),
        efficiency,
        failures,
        metadata,
    })
}

impl EfficiencyMap {
    /// Rows `(τ, scale, η)` in output order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        self.tau_s.iter().enumerate().flat_map(move |(i, &tau)| {
            self.omega_scale
                .iter()
                .enumerate()
                .map(move |(j, &scale)| (tau, scale, self.efficiency[i][j]))
        })
    }

    /// Efficiencies along τ at scale index `j`.
    pub fn column(&self, j: usize) -> Vec<Option<f64>> {
        self.efficiency.iter().map(|row| row[j]).collect()
    }

    /// Largest evaluated efficiency.
    pub fn peak(&self) -> Option<f64> {
        self.points().filter_map(|p| p.2).reduce(f64::max)
    }

    /// CSV with [`CSV_HEADER`]; values use the shortest exact decimal form and
    /// a missing point leaves the efficiency field empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for (tau, scale, eta) in self.points() {
            match eta {
                Some(eta) => writeln!(out, "{tau:?}, {scale:?}, {eta:?}")?,
                None => writeln!(out, "{tau:?}, {scale:?}, ")?,
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}
