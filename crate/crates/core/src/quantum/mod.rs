//! Three-level Hamiltonians and their numerical propagation.
//!
//! Conventions: ħ = 1, angular frequencies in rad/s, times in seconds. The
//! basis is `|1⟩, |2⟩, |3⟩` with indices 0, 1, 2.

mod lambda;
mod matrix;
mod propagate;

pub use lambda::{propagate_lambda_density, SampledDrive};
pub use matrix::{ComplexMatrix3, DensityMatrix3, StateVector3};
pub use propagate::{propagate_density, propagate_state, Recording, TimeGrid, Trajectory};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Instantaneous field values of the pump and Stokes pulses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DriveValues {
    /// Pump Rabi frequency magnitude Ω_P (rad/s).
    pub pump_rabi: f64,
    /// Stokes Rabi frequency magnitude Ω_S (rad/s).
    pub stokes_rabi: f64,
    /// Pump phase φ_P (rad).
    pub pump_phase: f64,
    /// Stokes phase φ_S (rad).
    pub stokes_phase: f64,
}

impl DriveValues {
    pub const ZERO: DriveValues = DriveValues {
        pump_rabi: 0.0,
        stokes_rabi: 0.0,
        pump_phase: 0.0,
        stokes_phase: 0.0,
    };

    /// Couples the fields to the single-photon detunings.
    pub fn with_detunings(self, pump_detuning: f64, stokes_detuning: f64) -> Drive {
        Drive {
            fields: self,
            pump_detuning,
            stokes_detuning,
        }
    }

    /// Upper off-diagonal couplings `(H₁₂, H₂₃)` of the RWA Hamiltonian.
    #[inline]
    pub fn couplings(&self) -> (C64, C64) {
        (
            C64::from_polar(0.5 * self.pump_rabi, self.pump_phase),
            C64::from_polar(0.5 * self.stokes_rabi, -self.stokes_phase),
        )
    }
}

/// Field values plus the single-photon detunings Δ_P and Δ_S (rad/s).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    pub fields: DriveValues,
    pub pump_detuning: f64,
    pub stokes_detuning: f64,
}

/// Builds the rotating-wave Hamiltonian of the Λ-system.
///
/// `H₁₂ = (Ω_P/2)e^{iφ_P}`, `H₂₃ = (Ω_S/2)e^{−iφ_S}`, `H₂₂ = Δ_P` and
/// `H₃₃ = Δ_P − Δ_S` (the two-photon detuning δ). With Δ_P = Δ_S and zero
/// phases this is the textbook resonant-Raman matrix with Ω/2 couplings.
pub fn rwa_hamiltonian(drive: &Drive) -> Result<ComplexMatrix3> {
    let f = &drive.fields;
    let all = [
        f.pump_rabi,
        f.stokes_rabi,
        f.pump_phase,
        f.stokes_phase,
        drive.pump_detuning,
        drive.stokes_detuning,
    ];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("Hamiltonian inputs must be finite"));
    }
    if f.pump_rabi < 0.0 || f.stokes_rabi < 0.0 {
        return Err(Error::invalid(format!(
            "Rabi frequencies must be non-negative (pump {}, stokes {})",
            f.pump_rabi, f.stokes_rabi
        )));
    }
    Ok(rwa_hamiltonian_unchecked(drive))
}

#[inline]
pub(crate) fn rwa_hamiltonian_unchecked(drive: &Drive) -> ComplexMatrix3 {
    let (h12, h23) = drive.fields.couplings();
    let zero = C64::new(0.0, 0.0);
    ComplexMatrix3([
        [zero, h12, zero],
        [h12.conj(), C64::new(drive.pump_detuning, 0.0), h23],
        [
            zero,
            h23.conj(),
            C64::new(drive.pump_detuning - drive.stokes_detuning, 0.0),
        ],
    ])
}

/// Optical decay of `|2⟩` and ground-state (spin) decoherence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayModel {
    /// Excited-state population lifetime T1 (s).
    pub t1_opt: f64,
    /// Ground-state coherence lifetime T2 (s).
    pub t2_hf: f64,
    pub enabled: bool,
}

impl DecayModel {
    pub const DISABLED: DecayModel = DecayModel {
        t1_opt: f64::INFINITY,
        t2_hf: f64::INFINITY,
        enabled: false,
    };

    pub fn new(t1_opt: f64, t2_hf: f64) -> Result<Self> {
        let model = DecayModel {
            t1_opt,
            t2_hf,
            enabled: true,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.enabled && !(self.t1_opt > 0.0 && self.t2_hf > 0.0) {
            return Err(Error::invalid(format!(
                "decay lifetimes must be positive (T1 = {}, T2 = {})",
                self.t1_opt, self.t2_hf
            )));
        }
        Ok(())
    }

    /// Population loss rate Γ = 1/T1 of `|2⟩` (zero when disabled).
    #[inline]
    pub fn excited_loss_rate(&self) -> f64 {
        if self.enabled {
            1.0 / self.t1_opt
        } else {
            0.0
        }
    }

    /// Damping rate 1/T2 of the `ρ₁₃` ground-state coherence (zero when disabled).
    ///
    /// The damping comes from the dephasing operator `√γ(|1⟩⟨1| − |3⟩⟨3|)`
    /// with `γ = 1/(2T2)`, which also damps `ρ₁₂` and `ρ₂₃` at a quarter of
    /// this rate. Damping `ρ₁₃` alone would not keep ρ positive.
    #[inline]
    pub fn coherence_damping_rate(&self) -> f64 {
        if self.enabled {
            1.0 / self.t2_hf
        } else {
            0.0
        }
    }
}

/// Adds the non-Hermitian loss term `−i/(2T1)` to `H₂₂`.
///
/// Spin decoherence does not enter the Hamiltonian; it damps `ρ₁₃` inside
/// [`propagate_density`], which keeps the ground-state populations intact.
pub fn apply_decay(h: &ComplexMatrix3, decay: &DecayModel) -> ComplexMatrix3 {
    let mut out = *h;
    out.0[1][1].im -= 0.5 * decay.excited_loss_rate();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn drive(op: f64, os: f64, pp: f64, ps: f64, dp: f64, ds: f64) -> Drive {
        DriveValues {
            pump_rabi: op,
            stokes_rabi: os,
            pump_phase: pp,
            stokes_phase: ps,
        }
        .with_detunings(dp, ds)
    }

    #[test]
    fn no_coupling_is_diagonal() {
        let h = rwa_hamiltonian(&drive(0.0, 0.0, 0.3, 0.2, 5.0, 2.0)).unwrap();
        let expected = ComplexMatrix3::diag([0.0, 5.0, 3.0]);
        assert!(h.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn resonant_raman_matrix() {
        let (op, os, d) = (3.0, 2.0, 7.0);
        let h = rwa_hamiltonian(&drive(op, os, 0.0, 0.0, d, d)).unwrap();
        let r = |x: f64| C64::new(x, 0.0);
        let expected = ComplexMatrix3([
            [r(0.0), r(op / 2.0), r(0.0)],
            [r(op / 2.0), r(d), r(os / 2.0)],
            [r(0.0), r(os / 2.0), r(0.0)],
        ]);
        assert!(h.max_abs_diff(&expected) < 1e-15);
        assert!(h.is_hermitian(0.0));
    }

    #[test]
    fn pump_phase_pi_flips_sign() {
        let h = rwa_hamiltonian(&drive(2.0, 0.0, PI, 0.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(h.0[0][1].re, -1.0, epsilon = 1e-15);
        assert!(h.0[0][1].im.abs() < 1e-15);
    }

    #[test]
    fn stokes_phase_enters_conjugated() {
        let h = rwa_hamiltonian(&drive(0.0, 2.0, 0.0, 0.4, 0.0, 0.0)).unwrap();
        assert_relative_eq!(h.0[1][2].arg(), -0.4, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(rwa_hamiltonian(&drive(-1.0, 0.0, 0.0, 0.0, 0.0, 0.0)).is_err());
        assert!(rwa_hamiltonian(&drive(1.0, f64::NAN, 0.0, 0.0, 0.0, 0.0)).is_err());
        assert!(rwa_hamiltonian(&drive(1.0, 1.0, 0.0, 0.0, f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn decay_terms() {
        let h = rwa_hamiltonian(&drive(1.0, 1.0, 0.0, 0.0, 2.0, 2.0)).unwrap();
        assert_eq!(apply_decay(&h, &DecayModel::DISABLED), h);

        let decay = DecayModel::new(164e-6, 500e-6).unwrap();
        let lossy = apply_decay(&h, &decay);
        assert_relative_eq!(lossy.0[1][1].im, -1.0 / (2.0 * 164e-6), max_relative = 1e-15);
        assert_eq!(lossy.0[2][2], h.0[2][2]);

        let inf = DecayModel::new(f64::INFINITY, f64::INFINITY).unwrap();
        assert!(apply_decay(&h, &inf).is_hermitian(0.0));
    }

    #[test]
    fn decay_validation() {
        assert!(DecayModel::new(0.0, 1.0).is_err());
        assert!(DecayModel::new(1.0, -1.0).is_err());
        let off = DecayModel {
            t1_opt: -1.0,
            t2_hf: 0.0,
            enabled: false,
        };
        assert!(off.validate().is_ok());
    }
}
