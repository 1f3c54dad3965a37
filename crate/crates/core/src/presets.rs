//! Named run sets reproducing the resonant, detuned and two-dimensional
//! efficiency scans.

use crate::config::RunConfig;
use crate::pulse::SequenceFamily;
use crate::{Error, Result};

pub const PRESET_NAMES: [&str; 4] = ["fig3", "fig4a", "fig4b", "fig5"];

/// Resonant scans: Ω_P/2π = 635 kHz, Ω_S/2π = 510 kHz, T_Ω = 17 µs.
pub const RESONANT_PUMP_HZ: f64 = 635e3;
pub const RESONANT_STOKES_HZ: f64 = 510e3;
pub const RESONANT_FWHM_S: f64 = 17e-6;

/// Detuned scans: Ω_P/2π = 640 kHz, Ω_S/2π = 550 kHz, T_Ω = 14 µs,
/// Δ_S/2π = 1.75 MHz.
pub const DETUNED_PUMP_HZ: f64 = 640e3;
pub const DETUNED_STOKES_HZ: f64 = 550e3;
pub const DETUNED_FWHM_S: f64 = 14e-6;
pub const DETUNED_STOKES_DETUNING_HZ: f64 = 1.75e6;

/// Stokes-to-pump peak ratio of the two-dimensional maps.
pub const MAP_STOKES_RATIO: f64 = 0.85;
/// Ratio of simulated to nominal Rabi frequencies in the two-dimensional maps.
pub const MAP_SIMULATION_RABI_RATIO: f64 = 0.8;

/// Evenly spaced axis from `start` to `stop` inclusive.
pub fn linear_axis(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn delay_axis_us(limit: f64, step: f64) -> Vec<f64> {
    let n = (2.0 * limit / step).round() as usize + 1;
    linear_axis(-limit * 1e-6, limit * 1e-6, n)
}

/// Broadening, decay and ensemble settings shared by every preset.
fn base(label: &str) -> RunConfig {
    RunConfig {
        label: label.into(),
        decay_enabled: true,
        t1_opt_s: 164e-6,
        t2_hf_s: 500e-6,
        ensemble_enabled: true,
        ..RunConfig::default()
    }
}

fn resonant(label: &str, family: SequenceFamily, n_pairs: Option<usize>) -> RunConfig {
    RunConfig {
        rabi_pump_hz: RESONANT_PUMP_HZ,
        rabi_stokes_hz: RESONANT_STOKES_HZ,
        fwhm_s: RESONANT_FWHM_S,
        family,
        n_pairs,
        alternate_repeats: true,
        spatial_enabled: true,
        sweep_delay_s: delay_axis_us(15.0, 1.0),
        ..base(label)
    }
}

fn detuned(label: &str, family: SequenceFamily, n_pairs: Option<usize>) -> RunConfig {
    RunConfig {
        rabi_pump_hz: DETUNED_PUMP_HZ,
        rabi_stokes_hz: DETUNED_STOKES_HZ,
        stokes_detuning_hz: DETUNED_STOKES_DETUNING_HZ,
        fwhm_s: DETUNED_FWHM_S,
        family,
        n_pairs,
        alternate_repeats: false,
        sweep_delay_s: delay_axis_us(12.0, 1.0),
        ..base(label)
    }
}

fn map(label: &str, family: SequenceFamily, n_pairs: Option<usize>, simulated: bool) -> RunConfig {
    let omega0 = if simulated {
        MAP_SIMULATION_RABI_RATIO * DETUNED_PUMP_HZ
    } else {
        DETUNED_PUMP_HZ
    };
    RunConfig {
        rabi_pump_hz: omega0,
        rabi_stokes_hz: MAP_STOKES_RATIO * omega0,
        spatial_enabled: !simulated,
        sweep_delay_s: delay_axis_us(12.0, 2.0),
        sweep_rabi_scale: linear_axis(0.5, 1.3, 9),
        ..detuned(label, family, n_pairs)
    }
}

/// The runs of a named preset, one per output curve or map.
///
/// - `fig3`: resonant single, alternating repeated-3 and R3 curves.
/// - `fig4a`: detuned single, repeated-3, D3 and U3 curves.
/// - `fig4b`: detuned single, repeated-5, D5 and U5b curves.
/// - `fig5`: delay × Rabi-scale maps of single, repeated-5, U5a and U5b,
///   each with nominal Rabi frequencies plus spatial averaging (`exp`) and
///   with 0.8× Rabi frequencies and no spatial averaging (`sim`).
pub fn preset(name: &str) -> Result<Vec<RunConfig>> {
    use SequenceFamily::*;
    let runs = match name.to_ascii_lowercase().as_str() {
        "fig3" => vec![
            resonant("fig3_single", Single, None),
            resonant("fig3_repeat3", Repeat, Some(3)),
            resonant("fig3_r3", R3, None),
        ],
        "fig4a" => vec![
            detuned("fig4a_single", Single, None),
            detuned("fig4a_repeat3", Repeat, Some(3)),
            detuned("fig4a_d3", D3, None),
            detuned("fig4a_u3", U3, None),
        ],
        "fig4b" => vec![
            detuned("fig4b_single", Single, None),
            detuned("fig4b_repeat5", Repeat, Some(5)),
            detuned("fig4b_d5", D5, None),
            detuned("fig4b_u5b", U5b, None),
        ],
        "fig5" => {
            let mut runs = Vec::new();
            for simulated in [false, true] {
                let tag = if simulated { "sim" } else { "exp" };
                for (family, n, name) in [
                    (Single, None, "single"),
                    (Repeat, Some(5), "repeat5"),
                    (U5a, None, "u5a"),
                    (U5b, None, "u5b"),
                ] {
                    runs.push(map(&format!("fig5_{name}_{tag}"), family, n, simulated));
                }
            }
            runs
        }
        _ => {
            return Err(Error::Config(format!(
                "unknown preset '{name}' (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(runs)
}
