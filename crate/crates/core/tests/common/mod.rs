#![allow(dead_code)]

use cstirap::ensemble::LambdaSystem;
use cstirap::hz_to_angular;
use cstirap::pulse::{build_sequence, CompositeSequence, SequenceFamily, SequenceParams};
use cstirap::quantum::DecayModel;

pub const US: f64 = 1e-6;

pub fn khz(f: f64) -> f64 {
    hz_to_angular(f * 1e3)
}

pub fn lossless(pump_khz: f64, stokes_khz: f64, stokes_detuning_khz: f64) -> LambdaSystem {
    LambdaSystem {
        pump_peak: khz(pump_khz),
        stokes_peak: khz(stokes_khz),
        stokes_detuning: khz(stokes_detuning_khz),
        two_photon_detuning: 0.0,
        decay: DecayModel::DISABLED,
        oscillator_strength_ratio: 1.0,
    }
}

pub fn sequence(family: SequenceFamily, sys: &LambdaSystem, delay: f64, fwhm: f64) -> CompositeSequence {
    build_sequence(&SequenceParams::new(family, delay, fwhm, sys.pump_peak, sys.stokes_peak)).unwrap()
}
