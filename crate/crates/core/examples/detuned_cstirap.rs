//! Far-detuned composite STIRAP: single pair against repeated, D3 and U3 sequences.
//!
//! Each sequence runs for one resonant atom and for a coarse inhomogeneous
//! ensemble with decay.
//!
//! cargo run --release --example detuned_cstirap

use cstirap::ensemble::{ensemble_efficiency, ensemble_members, EnsembleMember, EnsembleSpec, LambdaSystem, SpatialAveragingSpec};
use cstirap::hz_to_angular;
use cstirap::pulse::{build_sequence, SequenceFamily, SequenceParams};
use cstirap::quantum::DecayModel;

fn main() -> cstirap::Result<()> {
    let sys = LambdaSystem {
        pump_peak: hz_to_angular(640e3),
        stokes_peak: hz_to_angular(550e3),
        stokes_detuning: hz_to_angular(1.75e6),
        two_photon_detuning: 0.0,
        decay: DecayModel::new(164e-6, 500e-6)?,
        oscillator_strength_ratio: 1.0,
    };
    let ensemble = ensemble_members(&EnsembleSpec {
        optical_step_hz: 60e3,
        hyperfine_step_hz: 12e3,
        ..EnsembleSpec::default()
    })?;
    let spatial = SpatialAveragingSpec::disabled();

    let sequences = [
        ("single", SequenceParams::new(SequenceFamily::Single, 0.0, 14e-6, sys.pump_peak, sys.stokes_peak)),
        ("repeat3", SequenceParams::repeated(3, false, 0.0, 14e-6, sys.pump_peak, sys.stokes_peak)),
        ("D3", SequenceParams::new(SequenceFamily::D3, 0.0, 14e-6, sys.pump_peak, sys.stokes_peak)),
        ("U3", SequenceParams::new(SequenceFamily::U3, 0.0, 14e-6, sys.pump_peak, sys.stokes_peak)),
    ];
    println!("{} ensemble members", ensemble.len());
    println!("{:>8} {:>8} {:>10} {:>10}", "sequence", "tau (us)", "one atom", "ensemble");
    for (name, params) in sequences {
        for tau in [-8e-6, 4e-6, 8e-6] {
            let seq = build_sequence(&params.with_delay(tau))?;
            let atom = ensemble_efficiency(&seq, &sys, &[EnsembleMember::RESONANT], &spatial, None)?.efficiency;
            let avg = ensemble_efficiency(&seq, &sys, &ensemble, &spatial, None)?.efficiency;
            println!("{name:>8} {:8.1} {atom:10.4} {avg:10.4}", tau * 1e6);
        }
    }
    Ok(())
}
