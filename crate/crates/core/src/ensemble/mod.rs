//! Inhomogeneous ensemble averaging and transfer-efficiency extraction.

mod probe;
mod sweep;

pub use probe::{probe_efficiency, simulate_probe, ProbeAbsorption};
pub use sweep::{sweep, EfficiencyMap, PointFailure, SweepProgress, SweepSetup, CSV_HEADER};

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pulse::CompositeSequence;
use crate::quantum::{propagate_lambda_density, DecayModel, DensityMatrix3, SampledDrive, TimeGrid};
use crate::{hz_to_angular, Error, Result};

/// Default RK4 step as a fraction of the pulse FWHM.
pub const STEPS_PER_FWHM: f64 = 2000.0;

/// Physical parameters of the driven Λ-system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaSystem {
    /// Peak pump Rabi frequency Ω_P (rad/s).
    pub pump_peak: f64,
    /// Peak Stokes Rabi frequency Ω_S (rad/s).
    pub stokes_peak: f64,
    /// Stokes single-photon detuning Δ_S (rad/s).
    pub stokes_detuning: f64,
    /// Two-photon detuning δ (rad/s); the pump detuning is Δ_S + δ.
    pub two_photon_detuning: f64,
    pub decay: DecayModel,
    /// Oscillator-strength ratio f₃₂/f₁₂ used by the probe read-out.
    pub oscillator_strength_ratio: f64,
}

impl LambdaSystem {
    pub fn pump_detuning(&self) -> f64 {
        self.stokes_detuning + self.two_photon_detuning
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("pump", self.pump_peak), ("stokes", self.stokes_peak)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!("{name} peak Rabi frequency must be non-negative, got {v}")));
            }
        }
        if !(self.stokes_detuning.is_finite() && self.two_photon_detuning.is_finite()) {
            return Err(Error::invalid("detunings must be finite"));
        }
        if !(self.oscillator_strength_ratio > 0.0 && self.oscillator_strength_ratio.is_finite()) {
            return Err(Error::invalid("oscillator-strength ratio must be positive"));
        }
        self.decay.validate()
    }
}

/// Grids and widths of the optical and hyperfine inhomogeneous broadening.
///
/// All values are ordinary frequencies in Hz. Widths are Gaussian FWHMs;
/// `f64::INFINITY` gives uniform weights and `0` a single sharp line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub optical_fwhm_hz: f64,
    pub hyperfine_fwhm_hz: f64,
    pub optical_range_hz: f64,
    pub optical_step_hz: f64,
    pub hyperfine_range_hz: f64,
    pub hyperfine_step_hz: f64,
}

impl Default for EnsembleSpec {
    /// 31 optical × 31 hyperfine detunings (961 members).
    fn default() -> Self {
        EnsembleSpec {
            optical_fwhm_hz: 200e3,
            hyperfine_fwhm_hz: 30e3,
            optical_range_hz: 300e3,
            optical_step_hz: 20e3,
            hyperfine_range_hz: 60e3,
            hyperfine_step_hz: 4e3,
        }
    }
}

impl EnsembleSpec {
    /// One member on resonance with weight 1.
    pub fn single() -> Self {
        EnsembleSpec {
            optical_range_hz: 0.0,
            hyperfine_range_hz: 0.0,
            ..Self::default()
        }
    }
}

/// One detuning class of the inhomogeneous ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMember {
    /// Optical offset (rad/s), shifts Δ_P and Δ_S alike.
    pub optical_offset: f64,
    /// Hyperfine offset (rad/s), shifts only the two-photon resonance.
    pub spin_offset: f64,
    pub weight: f64,
}

impl EnsembleMember {
    pub const RESONANT: EnsembleMember = EnsembleMember {
        optical_offset: 0.0,
        spin_offset: 0.0,
        weight: 1.0,
    };
}

fn axis(range: f64, step: f64, name: &str) -> Result<Vec<f64>> {
    if !(range.is_finite() && range >= 0.0) {
        return Err(Error::invalid(format!("{name} range must be finite and non-negative")));
    }
    if range == 0.0 {
        return Ok(vec![0.0]);
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::invalid(format!("{name} step must be positive")));
    }
    let n = (range / step + 1e-9).floor() as i64;
    Ok((-n..=n).map(|i| i as f64 * step).collect())
}

fn gaussian_density(x: f64, fwhm: f64) -> f64 {
    if fwhm.is_infinite() {
        1.0
    } else if fwhm == 0.0 {
        if x == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (-4.0 * LN_2 * (x / fwhm).powi(2)).exp()
    }
}

/// Cartesian product of the optical and hyperfine grids with normalised
/// Gaussian weights. Ordered optical-major.
pub fn ensemble_members(spec: &EnsembleSpec) -> Result<Vec<EnsembleMember>> {
    for (name, w) in [("optical", spec.optical_fwhm_hz), ("hyperfine", spec.hyperfine_fwhm_hz)] {
        if w.is_nan() || w < 0.0 {
            return Err(Error::invalid(format!("{name} width must be non-negative")));
        }
    }
    let optical = axis(spec.optical_range_hz, spec.optical_step_hz, "optical")?;
    let hyperfine = axis(spec.hyperfine_range_hz, spec.hyperfine_step_hz, "hyperfine")?;
    let mut members: Vec<EnsembleMember> = optical
        .iter()
        .flat_map(|&o| {
            hyperfine.iter().map(move |&h| EnsembleMember {
                optical_offset: hz_to_angular(o),
                spin_offset: hz_to_angular(h),
                weight: gaussian_density(o, spec.optical_fwhm_hz) * gaussian_density(h, spec.hyperfine_fwhm_hz),
            })
        })
        .collect();
    let total: f64 = members.iter().map(|m| m.weight).sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate("ensemble weights sum to zero".into()));
    }
    members.iter_mut().for_each(|m| m.weight /= total);
    Ok(members)
}

/// One Rabi-frequency scale factor of the spatial average.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleSample {
    pub scale: f64,
    pub weight: f64,
}

/// Average over the spatial distribution of Rabi frequencies in the probed volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialAveragingSpec {
    pub enabled: bool,
    pub samples: Vec<ScaleSample>,
}

/// Nodes and weights of the 7-point Gauss–Hermite rule (weight e^{−x²}),
/// non-negative half.
const GAUSS_HERMITE_7: [(f64, f64); 4] = [
    (0.0, 0.810_264_617_556_807_3),
    (0.816_287_882_858_964_7, 0.425_607_252_610_127_8),
    (1.673_551_628_767_471_4, 0.054_515_582_819_127_03),
    (2.651_961_356_835_233_4, 0.000_971_781_245_099_519_2),
];

impl SpatialAveragingSpec {
    pub fn disabled() -> Self {
        SpatialAveragingSpec {
            enabled: false,
            samples: vec![ScaleSample { scale: 1.0, weight: 1.0 }],
        }
    }

    /// Scale factors `1 − |x|` with `x` Gaussian of the given FWHM, from the
    /// 7-point Gauss–Hermite rule folded onto `(0, 1]` (mirrored nodes merge,
    /// leaving four samples).
    pub fn half_gaussian(fwhm_fraction: f64) -> Result<Self> {
        if !(fwhm_fraction > 0.0 && fwhm_fraction.is_finite()) {
            return Err(Error::invalid("spatial spread must be positive"));
        }
        let sigma = fwhm_fraction / (2.0 * (2.0 * LN_2).sqrt());
        let norm = std::f64::consts::PI.sqrt();
        let samples = GAUSS_HERMITE_7
            .iter()
            .map(|&(x, w)| ScaleSample {
                scale: 1.0 - sigma * std::f64::consts::SQRT_2 * x,
                weight: if x == 0.0 { w / norm } else { 2.0 * w / norm },
            })
            .collect();
        let spec = SpatialAveragingSpec { enabled: true, samples };
        spec.validate()?;
        Ok(spec)
    }

    /// Samples actually used (a single unit scale when disabled).
    pub fn effective_samples(&self) -> Vec<ScaleSample> {
        if self.enabled {
            self.samples.clone()
        } else {
            vec![ScaleSample { scale: 1.0, weight: 1.0 }]
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.enabled {
            return Ok(());
        }
        if self.samples.is_empty() {
            return Err(Error::invalid("spatial averaging needs at least one sample"));
        }
        if self.samples.iter().any(|s| !(s.scale > 0.0 && s.scale <= 1.0) || !(s.weight >= 0.0)) {
            return Err(Error::invalid("spatial scale factors must lie in (0, 1] with non-negative weights"));
        }
        let total: f64 = self.samples.iter().map(|s| s.weight).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("spatial weights sum to {total}, not 1")));
        }
        Ok(())
    }
}

/// Integration grid covering a whole sequence.
pub fn sequence_grid(seq: &CompositeSequence, step: Option<f64>) -> Result<TimeGrid> {
    let dt = step.unwrap_or(seq.params.fwhm / STEPS_PER_FWHM);
    TimeGrid::new(0.0, seq.duration(), dt)
}

fn member_density(drive: &SampledDrive, sys: &LambdaSystem, m: &EnsembleMember) -> Result<DensityMatrix3> {
    propagate_lambda_density(
        drive,
        sys.pump_detuning() + m.optical_offset + m.spin_offset,
        sys.stokes_detuning + m.optical_offset,
        &sys.decay,
        &DensityMatrix3::ground_state(),
    )
}

fn sample_drive(seq: &CompositeSequence, step: Option<f64>) -> Result<SampledDrive> {
    SampledDrive::sample_with_breaks(&sequence_grid(seq, step)?, &seq.breakpoints(), |t| seq.drive_at(t))
}

/// Final `ρ₃₃` of one member starting from `|1⟩⟨1|`.
///
/// The peak Rabi frequencies come from `seq`; `sys` supplies detunings and
/// decay. `step` defaults to T_Ω/2000.
pub fn transfer_efficiency(seq: &CompositeSequence, sys: &LambdaSystem, member: &EnsembleMember, step: Option<f64>) -> Result<f64> {
    sys.validate()?;
    let drive = sample_drive(seq, step)?;
    Ok(member_density(&drive, sys, member)?.populations()[2])
}

/// Weighted ensemble result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleOutcome {
    /// Transfer efficiency η = averaged `ρ₃₃`.
    pub efficiency: f64,
    /// Weighted average of the members' final density matrices.
    pub density: DensityMatrix3,
}

/// Weighted average over ensemble members and, if enabled, over spatial
/// Rabi scale factors applied to both peaks.
///
/// Members run in parallel; the reduction walks them in their fixed order,
/// so results are bit-identical between runs and thread counts.
pub fn ensemble_efficiency(
    seq: &CompositeSequence,
    sys: &LambdaSystem,
    members: &[EnsembleMember],
    spatial: &SpatialAveragingSpec,
    step: Option<f64>,
) -> Result<EnsembleOutcome> {
    sys.validate()?;
    spatial.validate()?;
    if members.is_empty() {
        return Err(Error::invalid("ensemble has no members"));
    }
    let mut acc = crate::quantum::ComplexMatrix3::ZERO;
    for sample in spatial.effective_samples() {
        let scaled;
        let seq_s = if sample.scale == 1.0 {
            seq
        } else {
            scaled = seq.scaled(sample.scale);
            &scaled
        };
        let drive = sample_drive(seq_s, step)?;
        let rhos = members
            .par_iter()
            .map(|m| member_density(&drive, sys, m))
            .collect::<Result<Vec<_>>>()?;
        for (m, rho) in members.iter().zip(&rhos) {
            acc = acc + rho.0.scale((m.weight * sample.weight).into());
        }
    }
    let density = DensityMatrix3(acc);
    Ok(EnsembleOutcome {
        efficiency: density.populations()[2],
        density,
    })
}
