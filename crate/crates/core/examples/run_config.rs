//! Run configurations: parsing, validation errors and the figure presets.
//!
//! cargo run --release --example run_config

use cstirap::config::RunConfig;
use cstirap::presets::{preset, PRESET_NAMES};

fn main() -> cstirap::Result<()> {
    let cfg = RunConfig::from_json(
        r#"{
            "label": "demo",
            "rabi_pump_hz": 640e3,
            "rabi_stokes_hz": 550e3,
            "stokes_detuning_hz": 1.75e6,
            "fwhm_s": 14e-6,
            "family": "u5b",
            "delay_s": 8e-6
        }"#,
    )?;
    println!("{}", cfg.to_json());

    match RunConfig::from_json(r#"{ "rabi_pump_khz": 640 }"#) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected (exit code {}): {e}", e.exit_code()),
    }

    for name in PRESET_NAMES {
        let runs = preset(name)?;
        let labels: Vec<&str> = runs.iter().map(|r| r.label.as_str()).collect();
        println!("{name}: {}", labels.join(", "));
    }
    Ok(())
}
