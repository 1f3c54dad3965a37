//! Single resonant STIRAP pair: populations, dark-state overlap and pulse area.
//!
//! cargo run --release --example resonant_stirap

use cstirap::adiabatic::{dark_state_overlap, pulse_area, AreaSpan};
use cstirap::hz_to_angular;
use cstirap::pulse::{build_sequence, SequenceFamily, SequenceParams};
use cstirap::quantum::{propagate_state, rwa_hamiltonian, Recording, StateVector3, TimeGrid};

fn main() -> cstirap::Result<()> {
    let (pump, stokes) = (hz_to_angular(635e3), hz_to_angular(510e3));
    let fwhm = 17e-6;
    // Positive delay: Stokes first (counter-intuitive order).
    let seq = build_sequence(&SequenceParams::new(SequenceFamily::Single, 10e-6, fwhm, pump, stokes))?;
    println!("pulse area A = {:.1} pi", pulse_area(&seq, AreaSpan::Total)? / std::f64::consts::PI);

    let grid = TimeGrid::new(0.0, seq.duration(), fwhm / 2000.0)?;
    let h = |t: f64| rwa_hamiltonian(&seq.drive_at(t).with_detunings(0.0, 0.0)).expect("finite drive");
    let traj = propagate_state(h, &StateVector3::basis(0), &grid, Recording::Every(400))?;
    let overlap = dark_state_overlap(&traj, &seq);

    println!("{:>8} {:>8} {:>8} {:>8} {:>8}", "t (us)", "P1", "P2", "P3", "<d|psi>");
    for ((t, psi), ov) in traj.times.iter().zip(&traj.states).zip(&overlap) {
        let p = psi.populations();
        println!("{:8.2} {:8.4} {:8.4} {:8.4} {:8.4}", t * 1e6, p[0], p[1], p[2], ov);
    }
    Ok(())
}
