//! Inhomogeneous and spatial averaging of a resonant STIRAP pair, read out
//! through simulated probe absorption.
//!
//! cargo run --release --example ensemble_average

use cstirap::ensemble::{
    ensemble_efficiency, ensemble_members, probe_efficiency, simulate_probe, EnsembleMember, EnsembleSpec, LambdaSystem,
    SpatialAveragingSpec,
};
use cstirap::hz_to_angular;
use cstirap::pulse::{build_sequence, SequenceFamily, SequenceParams};
use cstirap::quantum::DecayModel;

fn main() -> cstirap::Result<()> {
    let sys = LambdaSystem {
        pump_peak: hz_to_angular(635e3),
        stokes_peak: hz_to_angular(510e3),
        stokes_detuning: 0.0,
        two_photon_detuning: 0.0,
        decay: DecayModel::new(164e-6, 500e-6)?,
        oscillator_strength_ratio: 1.0,
    };
    let members = ensemble_members(&EnsembleSpec {
        optical_step_hz: 60e3,
        hyperfine_step_hz: 12e3,
        ..EnsembleSpec::default()
    })?;
    let spatial = SpatialAveragingSpec::half_gaussian(0.15)?;
    println!("{} members; spatial scales:", members.len());
    for s in spatial.effective_samples() {
        println!("  scale {:.3} weight {:.3}", s.scale, s.weight);
    }

    println!("\n{:>8} {:>9} {:>9} {:>9} {:>9}", "tau (us)", "atom", "ensemble", "+spatial", "probe");
    for tau in [-10e-6, -5e-6, 5e-6, 10e-6] {
        let seq = build_sequence(&SequenceParams::new(SequenceFamily::Single, tau, 17e-6, sys.pump_peak, sys.stokes_peak))?;
        let off = SpatialAveragingSpec::disabled();
        let atom = ensemble_efficiency(&seq, &sys, &[EnsembleMember::RESONANT], &off, None)?.efficiency;
        let ens = ensemble_efficiency(&seq, &sys, &members, &off, None)?.efficiency;
        let full = ensemble_efficiency(&seq, &sys, &members, &spatial, None)?;
        let p = full.density.populations();
        let probe = simulate_probe(p[0], p[2], sys.oscillator_strength_ratio)?;
        let read_out = probe_efficiency(probe.alpha_12, probe.alpha_32, sys.oscillator_strength_ratio)?;
        println!("{:8.1} {atom:9.4} {ens:9.4} {:9.4} {read_out:9.4}", tau * 1e6, full.efficiency);
    }
    Ok(())
}
