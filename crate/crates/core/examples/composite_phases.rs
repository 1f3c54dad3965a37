//! Universal five-pulse phases and the infidelity scaling of every phase table.
//!
//! cargo run --release --example composite_phases

use std::f64::consts::PI;

use cstirap::composite::{compose, infidelity, solve_u5_phases_all, PhaseSet, Su2Propagator};
use cstirap::pulse::SequenceFamily;
use cstirap::run::family_scaling;

fn main() -> cstirap::Result<()> {
    println!("roots of the first-order conditions (units of pi):");
    for (phi2, phi3) in solve_u5_phases_all(1e-12) {
        println!("  phi2 = {:.6}, phi3 = {:.6}", phi2 / PI, phi3 / PI);
    }

    // A 10% amplitude error with arbitrary phases.
    let pulse = Su2Propagator::new(0.1, 0.7, 2.3)?;
    println!("\ninfidelity at eps = 0.1:");
    for family in [SequenceFamily::Single, SequenceFamily::D5, SequenceFamily::U5a, SequenceFamily::U5b] {
        let phases = match family {
            SequenceFamily::Single => PhaseSet::new(vec![0.0]),
            f => PhaseSet::from_family(f)?,
        };
        println!("  {:>6}: {:.3e}", family.name(), infidelity(&compose(&pulse, &phases)));
    }

    println!("\nworst-case slope of infidelity vs eps:");
    for family in [SequenceFamily::Single, SequenceFamily::Repeat]
        .into_iter()
        .chain(SequenceFamily::TABULATED)
    {
        let s = family_scaling(family)?;
        println!("  {:>6}: {:.2}", family.name(), s.fit.slope);
    }
    Ok(())
}
