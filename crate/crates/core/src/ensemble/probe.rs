//! Two-probe absorption read-out of the final populations.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Absorption coefficients on the pump (`1→2`) and Stokes (`3→2`) transitions,
/// up to a common factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeAbsorption {
    pub alpha_12: f64,
    pub alpha_32: f64,
}

/// `η = 1/(1 + x)` with `x = (α₁₂/α₃₂)(f₃₂/f₁₂)`.
///
/// With no Stokes-side absorption all population sits in `|1⟩` and η = 0.
pub fn probe_efficiency(alpha_12: f64, alpha_32: f64, f_ratio: f64) -> Result<f64> {
    if !(alpha_12 >= 0.0 && alpha_32 >= 0.0 && alpha_12.is_finite() && alpha_32.is_finite()) {
        return Err(Error::invalid("absorption coefficients must be finite and non-negative"));
    }
    if !(f_ratio > 0.0 && f_ratio.is_finite()) {
        return Err(Error::invalid("oscillator-strength ratio must be positive"));
    }
    if alpha_32 == 0.0 {
        return if alpha_12 > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Degenerate("both absorption coefficients vanish".into()))
        };
    }
    let x = alpha_12 / alpha_32 * f_ratio;
    Ok(1.0 / (1.0 + x))
}

/// Absorptions `α_{i2} ∝ f_{i2}·P_i`, normalised to `f₁₂ = 1`.
pub fn simulate_probe(p1: f64, p3: f64, f_ratio: f64) -> Result<ProbeAbsorption> {
    if !(p1 >= 0.0 && p3 >= 0.0) {
        return Err(Error::invalid("populations must be non-negative"));
    }
    if p1 + p3 == 0.0 {
        return Err(Error::Degenerate("both ground-state populations vanish".into()));
    }
    if !(f_ratio > 0.0 && f_ratio.is_finite()) {
        return Err(Error::invalid("oscillator-strength ratio must be positive"));
    }
    Ok(ProbeAbsorption {
        alpha_12: p1,
        alpha_32: f_ratio * p3,
    })
}
