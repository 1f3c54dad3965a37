//! Delay × Rabi-scale map of the U5b sequence, written as CSV and JSON.
//!
//! cargo run --release --example efficiency_map [out_dir]

use std::path::PathBuf;

use cstirap::config::RunConfig;
use cstirap::pulse::SequenceFamily;
use cstirap::run::cmd_sweep;

fn main() -> cstirap::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out".into()));
    let cfg = RunConfig {
        label: "u5b_map".into(),
        rabi_pump_hz: 512e3,
        rabi_stokes_hz: 435e3,
        stokes_detuning_hz: 1.75e6,
        fwhm_s: 14e-6,
        family: SequenceFamily::U5b,
        decay_enabled: true,
        sweep_delay_s: vec![-8e-6, -4e-6, 0.0, 4e-6, 8e-6],
        sweep_rabi_scale: vec![0.6, 0.8, 1.0, 1.2],
        ..RunConfig::default()
    };
    let map = cmd_sweep(&cfg, &out)?;

    print!("{:>9}", "tau\\scale");
    for s in &map.omega_scale {
        print!("{s:>8.2}");
    }
    println!();
    for (tau, row) in map.tau_s.iter().zip(&map.efficiency) {
        print!("{:9.1}", tau * 1e6);
        for eta in row {
            print!("{:>8}", eta.map_or("-".into(), |e| format!("{e:.3}")));
        }
        println!();
    }
    println!("wrote {}", out.join("u5b_map.csv").display());
    Ok(())
}
