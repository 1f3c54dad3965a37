//! Run configuration files.
//!
//! A run is described by one flat JSON object. Every physical quantity
//! carries its unit in the key (`_hz` for ordinary frequencies, `_s` for
//! seconds); unknown keys are rejected so a typo can never be silently
//! ignored. Missing keys take the defaults of [`RunConfig::default`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensemble::{ensemble_members, EnsembleMember, EnsembleSpec, LambdaSystem, SpatialAveragingSpec, SweepSetup};
use crate::pulse::{PulseOrdering, R5StokesScale, SequenceFamily, SequenceParams};
use crate::quantum::DecayModel;
use crate::{hz_to_angular, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Name used for output files.
    pub label: String,

    /// Peak pump Rabi frequency Ω_P/2π.
    pub rabi_pump_hz: f64,
    /// Peak Stokes Rabi frequency Ω_S/2π.
    pub rabi_stokes_hz: f64,
    /// Stokes single-photon detuning Δ_S/2π.
    pub stokes_detuning_hz: f64,
    /// Two-photon detuning δ/2π.
    pub two_photon_detuning_hz: f64,
    pub decay_enabled: bool,
    pub t1_opt_s: f64,
    pub t2_hf_s: f64,
    /// f₃₂/f₁₂ for the probe read-out.
    pub oscillator_strength_ratio: f64,

    pub family: SequenceFamily,
    /// Pair count; `null` takes the family's natural count (1 for repeat).
    pub n_pairs: Option<usize>,
    pub delay_s: f64,
    pub fwhm_s: f64,
    pub first_ordering: PulseOrdering,
    pub alternate_repeats: bool,
    /// Use the literal π/3 Stokes scale of the R5 table instead of π/5.
    pub r5_stokes_literal: bool,

    /// Off leaves a single resonant member.
    pub ensemble_enabled: bool,
    /// Gaussian FWHM of the optical broadening; `null` means flat.
    pub optical_fwhm_hz: Option<f64>,
    /// Gaussian FWHM of the hyperfine broadening; `null` means flat.
    pub hyperfine_fwhm_hz: Option<f64>,
    pub optical_range_hz: f64,
    pub optical_step_hz: f64,
    pub hyperfine_range_hz: f64,
    pub hyperfine_step_hz: f64,

    pub spatial_enabled: bool,
    /// FWHM of the spatial Rabi-frequency spread, as a fraction of the peak.
    pub spatial_fwhm_fraction: f64,

    /// Delay axis of a sweep; empty means `[delay_s]`.
    pub sweep_delay_s: Vec<f64>,
    /// Rabi-scale axis of a sweep; empty means `[1.0]`.
    pub sweep_rabi_scale: Vec<f64>,

    /// RK4 step; `null` uses T_Ω/2000.
    pub step_s: Option<f64>,
    /// Output directory; `--out` takes precedence.
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ens = EnsembleSpec::default();
        RunConfig {
            label: "run".into(),
            rabi_pump_hz: 0.0,
            rabi_stokes_hz: 0.0,
            stokes_detuning_hz: 0.0,
            two_photon_detuning_hz: 0.0,
            decay_enabled: false,
            t1_opt_s: 164e-6,
            t2_hf_s: 500e-6,
            oscillator_strength_ratio: 1.0,
            family: SequenceFamily::Single,
            n_pairs: None,
            delay_s: 5e-6,
            fwhm_s: 17e-6,
            first_ordering: PulseOrdering::Sp,
            alternate_repeats: false,
            r5_stokes_literal: false,
            ensemble_enabled: false,
            optical_fwhm_hz: Some(ens.optical_fwhm_hz),
            hyperfine_fwhm_hz: Some(ens.hyperfine_fwhm_hz),
            optical_range_hz: ens.optical_range_hz,
            optical_step_hz: ens.optical_step_hz,
            hyperfine_range_hz: ens.hyperfine_range_hz,
            hyperfine_step_hz: ens.hyperfine_step_hz,
            spatial_enabled: false,
            spatial_fwhm_fraction: 0.15,
            sweep_delay_s: Vec::new(),
            sweep_rabi_scale: Vec::new(),
            step_s: None,
            output_dir: None,
        }
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::InvalidInput(msg) | Error::Degenerate(msg) => Error::Config(msg),
        other => other,
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// Checks everything that can be checked without running.
    pub fn validate(&self) -> Result<()> {
        self.system().map_err(config_err)?;
        self.sequence_params().validate().map_err(config_err)?;
        self.members().map_err(config_err)?;
        self.spatial().map_err(config_err)?;
        for (name, axis) in [("sweep_delay_s", &self.sweep_delay_s), ("sweep_rabi_scale", &self.sweep_rabi_scale)] {
            if axis.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("{name} contains non-finite values")));
            }
        }
        if let Some(dt) = self.step_s {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Config(format!("step_s must be positive, got {dt}")));
            }
        }
        Ok(())
    }

    pub fn system(&self) -> Result<LambdaSystem> {
        let decay = if self.decay_enabled {
            DecayModel::new(self.t1_opt_s, self.t2_hf_s)?
        } else {
            DecayModel::DISABLED
        };
        let sys = LambdaSystem {
            pump_peak: hz_to_angular(self.rabi_pump_hz),
            stokes_peak: hz_to_angular(self.rabi_stokes_hz),
            stokes_detuning: hz_to_angular(self.stokes_detuning_hz),
            two_photon_detuning: hz_to_angular(self.two_photon_detuning_hz),
            decay,
            oscillator_strength_ratio: self.oscillator_strength_ratio,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn sequence_params(&self) -> SequenceParams {
        SequenceParams {
            family: self.family,
            n_pairs: self.n_pairs.or(self.family.fixed_pairs()).unwrap_or(1),
            delay: self.delay_s,
            fwhm: self.fwhm_s,
            pump_peak: hz_to_angular(self.rabi_pump_hz),
            stokes_peak: hz_to_angular(self.rabi_stokes_hz),
            first_ordering: self.first_ordering,
            alternate_repeats: self.alternate_repeats,
            r5_stokes: if self.r5_stokes_literal {
                R5StokesScale::PiOverThreeLiteral
            } else {
                R5StokesScale::PiOverFive
            },
        }
    }

    pub fn ensemble_spec(&self) -> EnsembleSpec {
        if !self.ensemble_enabled {
            return EnsembleSpec::single();
        }
        EnsembleSpec {
            optical_fwhm_hz: self.optical_fwhm_hz.unwrap_or(f64::INFINITY),
            hyperfine_fwhm_hz: self.hyperfine_fwhm_hz.unwrap_or(f64::INFINITY),
            optical_range_hz: self.optical_range_hz,
            optical_step_hz: self.optical_step_hz,
            hyperfine_range_hz: self.hyperfine_range_hz,
            hyperfine_step_hz: self.hyperfine_step_hz,
        }
    }

    pub fn members(&self) -> Result<Vec<EnsembleMember>> {
        ensemble_members(&self.ensemble_spec())
    }

    pub fn spatial(&self) -> Result<SpatialAveragingSpec> {
        if self.spatial_enabled {
            SpatialAveragingSpec::half_gaussian(self.spatial_fwhm_fraction)
        } else {
            Ok(SpatialAveragingSpec::disabled())
        }
    }

    pub fn sweep_setup(&self) -> Result<SweepSetup> {
        Ok(SweepSetup {
            sequence: self.sequence_params(),
            system: self.system().map_err(config_err)?,
            members: self.members().map_err(config_err)?,
            spatial: self.spatial().map_err(config_err)?,
            step: self.step_s,
        })
    }

    pub fn delay_axis(&self) -> Vec<f64> {
        if self.sweep_delay_s.is_empty() {
            vec![self.delay_s]
        } else {
            self.sweep_delay_s.clone()
        }
    }

    pub fn scale_axis(&self) -> Vec<f64> {
        if self.sweep_rabi_scale.is_empty() {
            vec![1.0]
        } else {
            self.sweep_rabi_scale.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_takes_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_key_is_named() {
        let err = RunConfig::from_json(r#"{"rabi_pump_khz": 600}"#).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("rabi_pump_khz"), "{err}");
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for text in [
            r#"{"rabi_pump_hz": -1}"#,
            r#"{"fwhm_s": 0}"#,
            r#"{"family": "R3", "n_pairs": 4}"#,
            r#"{"family": "X7"}"#,
            r#"{"decay_enabled": true, "t1_opt_s": 0}"#,
            r#"{"step_s": -1e-9}"#,
        ] {
            let err = RunConfig::from_json(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let cfg = RunConfig {
            rabi_pump_hz: 635e3 * 0.8,
            delay_s: 1.0 / 3.0 * 1e-5,
            sweep_delay_s: vec![0.1e-6, 2.2e-6, -7.7e-6],
            optical_fwhm_hz: None,
            ..RunConfig::default()
        };
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.delay_s.to_bits(), cfg.delay_s.to_bits());
    }

    #[test]
    fn family_names_parse_case_insensitively() {
        let cfg = RunConfig::from_json(r#"{"family": "u5b"}"#).unwrap();
        assert_eq!(cfg.family, SequenceFamily::U5b);
        assert_eq!(cfg.sequence_params().n_pairs, 5);
    }
}
