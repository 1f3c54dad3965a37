//! Effective two-level model of far-detuned STIRAP against the full three-level model.
//!
//! cargo run --release --example adiabatic_elimination

use cstirap::adiabatic::{effective_two_level, propagate_effective};
use cstirap::ensemble::{transfer_efficiency, EnsembleMember, LambdaSystem};
use cstirap::hz_to_angular;
use cstirap::pulse::{build_sequence, SequenceFamily, SequenceParams};
use cstirap::quantum::{DecayModel, TimeGrid};
use num_complex::Complex64 as C64;

fn main() -> cstirap::Result<()> {
    let (pump, stokes) = (hz_to_angular(640e3), hz_to_angular(550e3));
    println!("{:>10} {:>10} {:>10} {:>10}", "D/Omega_P", "A_E/pi", "3-level", "2-level");
    for ratio in [2.7, 5.0, 10.0, 20.0] {
        let detuning = ratio * pump;
        // Raise the drive with the detuning so Omega_E stays fixed.
        let scale = (ratio / 2.7f64).sqrt();
        let sys = LambdaSystem {
            pump_peak: pump * scale,
            stokes_peak: stokes * scale,
            stokes_detuning: detuning,
            two_photon_detuning: 0.0,
            decay: DecayModel::DISABLED,
            oscillator_strength_ratio: 1.0,
        };
        let seq = build_sequence(&SequenceParams::new(SequenceFamily::Single, 5e-6, 14e-6, sys.pump_peak, sys.stokes_peak))?;
        let step = (14e-6 / 2000.0f64).min(0.05 / detuning);
        let full = transfer_efficiency(&seq, &sys, &EnsembleMember::RESONANT, Some(step))?;

        let eff = effective_two_level(&seq, detuning, 0.0)?;
        let grid = TimeGrid::new(0.0, seq.duration(), step)?;
        let reduced = propagate_effective(&eff, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)], &grid)?[1];
        println!("{ratio:10.1} {:10.3} {full:10.4} {reduced:10.4}", eff.area() / std::f64::consts::PI);
    }
    Ok(())
}
