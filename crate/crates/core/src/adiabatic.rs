//! Adiabatic-basis diagnostics and the effective two-level model of
//! far-detuned STIRAP.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::pulse::CompositeSequence;
use crate::quantum::{DensityMatrix3, StateVector3, TimeGrid, Trajectory};
use crate::{Error, Result};

/// Mixing angles ϑ (pump/Stokes ratio) and φ (detuning) of the adiabatic basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingAngles {
    pub theta: f64,
    pub phi: f64,
}

/// `ϑ = arctan(Ω_P/Ω_S)` and `φ = ½·arctan(Ω_rms/Δ)`.
///
/// φ is taken on the branch `½·atan2(Ω_rms, Δ)`, which stays continuous
/// through Δ = 0 and keeps the eigenvector formulas valid for Δ < 0.
pub fn mixing_angles(pump_rabi: f64, stokes_rabi: f64, detuning: f64) -> Result<MixingAngles> {
    if pump_rabi == 0.0 && stokes_rabi == 0.0 {
        return Err(Error::Degenerate("mixing angle ϑ is undefined without fields".into()));
    }
    if pump_rabi < 0.0 || stokes_rabi < 0.0 || !detuning.is_finite() {
        return Err(Error::invalid("mixing angles need non-negative Rabi frequencies and a finite detuning"));
    }
    let rms = pump_rabi.hypot(stokes_rabi);
    Ok(MixingAngles {
        theta: pump_rabi.atan2(stokes_rabi),
        phi: 0.5 * rms.atan2(detuning),
    })
}

/// The instantaneous eigenvectors `|b₊⟩`, `|b₋⟩`, `|d⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticStates {
    pub bright_plus: StateVector3,
    pub bright_minus: StateVector3,
    pub dark: StateVector3,
}

pub fn adiabatic_states(angles: &MixingAngles) -> AdiabaticStates {
    let (st, ct) = angles.theta.sin_cos();
    let (sp, cp) = angles.phi.sin_cos();
    AdiabaticStates {
        bright_plus: StateVector3::from_real([st * sp, cp, ct * sp]),
        bright_minus: StateVector3::from_real([st * cp, -sp, ct * cp]),
        dark: StateVector3::from_real([ct, 0.0, -st]),
    }
}

/// Dark state for phased fields, `cosϑ|1⟩ − sinϑ·e^{i(φ_S−φ_P)}|3⟩`.
pub fn phased_dark_state(theta: f64, pump_phase: f64, stokes_phase: f64) -> StateVector3 {
    let (st, ct) = theta.sin_cos();
    StateVector3([
        C64::new(ct, 0.0),
        C64::new(0.0, 0.0),
        -C64::from_polar(st, stokes_phase - pump_phase),
    ])
}

/// Integration range of [`pulse_area`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AreaSpan {
    Pair(usize),
    Total,
}

const SIMPSON_PANELS: usize = 2000;

/// Composite Simpson rule on `[a, b]` split at `breaks` so that the
/// truncation discontinuities sit on panel edges.
fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64]) -> f64 {
    let mut points: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let n = SIMPSON_PANELS;
            let h = (hi - lo) / n as f64;
            // Evaluate just inside the half-open supports at the edges.
            let eval = |x: f64| f(x.clamp(lo + h * 1e-9, hi - h * 1e-9));
            let mut s = eval(lo) + eval(hi);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * eval(lo + i as f64 * h);
            }
            s * h / 3.0
        })
        .sum()
}

fn span_window(seq: &CompositeSequence, span: AreaSpan) -> Result<(f64, f64)> {
    match span {
        AreaSpan::Total => Ok((0.0, seq.duration())),
        AreaSpan::Pair(k) if k < seq.n_pairs() => Ok(seq.pair_window(k)),
        AreaSpan::Pair(k) => Err(Error::invalid(format!("sequence has no pair {k}"))),
    }
}

/// Pulse area `A = ∫ Ω_rms dt` over one pair or the whole sequence.
pub fn pulse_area(seq: &CompositeSequence, span: AreaSpan) -> Result<f64> {
    let (a, b) = span_window(seq, span)?;
    Ok(integrate(
        |t| {
            let d = seq.drive_at(t);
            d.pump_rabi.hypot(d.stokes_rabi)
        },
        a,
        b,
        &seq.breakpoints(),
    ))
}

/// Effective Raman coupling after adiabatic elimination of `|2⟩`.
///
/// Returns `(Ω_E, Δ_E)` with `Ω_E = −Ω_PΩ_S/(2Δ)` and
/// `Δ_E = (Ω_P² − Ω_S²)/(2Δ)`.
pub fn effective_couplings(pump_rabi: f64, stokes_rabi: f64, detuning: f64) -> Result<(f64, f64)> {
    if detuning == 0.0 || !detuning.is_finite() {
        return Err(Error::invalid("adiabatic elimination needs a finite, non-zero detuning"));
    }
    Ok((
        -pump_rabi * stokes_rabi / (2.0 * detuning),
        (pump_rabi * pump_rabi - stokes_rabi * stokes_rabi) / (2.0 * detuning),
    ))
}

/// Pointwise value of the effective two-level model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveSample {
    pub time: f64,
    /// Ω_E (rad/s, signed).
    pub rabi: f64,
    /// Δ_E (rad/s).
    pub detuning: f64,
    /// Phase of the effective coupling, φ_P − φ_S.
    pub phase: f64,
}

/// Two-level Raman model `{|1⟩, |3⟩}` of a far-detuned sequence.
///
/// Hamiltonian: `H₁₃ = (Ω_E/2)e^{i(φ_P−φ_S)}`, `H₁₁ = 0`,
/// `H₃₃ = δ + Δ_E/2`. The diagonal is the difference of the two light shifts
/// `−Ω_P²/(4Δ)` and `−Ω_S²/(4Δ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveTwoLevel {
    pub sequence: CompositeSequence,
    /// Single-photon detuning Δ (rad/s).
    pub single_photon_detuning: f64,
    /// Two-photon detuning δ (rad/s).
    pub two_photon_detuning: f64,
}

pub fn effective_two_level(seq: &CompositeSequence, detuning: f64, two_photon_detuning: f64) -> Result<EffectiveTwoLevel> {
    effective_couplings(0.0, 0.0, detuning)?;
    if !two_photon_detuning.is_finite() {
        return Err(Error::invalid("two-photon detuning must be finite"));
    }
    Ok(EffectiveTwoLevel {
        sequence: seq.clone(),
        single_photon_detuning: detuning,
        two_photon_detuning,
    })
}

impl EffectiveTwoLevel {
    pub fn at(&self, t: f64) -> EffectiveSample {
        let d = self.sequence.drive_at(t);
        let delta = self.single_photon_detuning;
        EffectiveSample {
            time: t,
            rabi: -d.pump_rabi * d.stokes_rabi / (2.0 * delta),
            detuning: (d.pump_rabi * d.pump_rabi - d.stokes_rabi * d.stokes_rabi) / (2.0 * delta),
            phase: d.pump_phase - d.stokes_phase,
        }
    }

    /// Samples on every point of `grid`.
    pub fn trajectory(&self, grid: &TimeGrid) -> Vec<EffectiveSample> {
        (0..=grid.steps()).map(|n| self.at(grid.time(n))).collect()
    }

    /// Effective pulse area `A_E = ∫ |Ω_E| dt` over the whole sequence.
    pub fn area(&self) -> f64 {
        integrate(
            |t| self.at(t).rabi.abs(),
            0.0,
            self.sequence.duration(),
            &self.sequence.breakpoints(),
        )
    }

    /// Area of one pair.
    pub fn pair_area(&self, k: usize) -> Result<f64> {
        let (a, b) = span_window(&self.sequence, AreaSpan::Pair(k))?;
        Ok(integrate(|t| self.at(t).rabi.abs(), a, b, &self.sequence.breakpoints()))
    }

    #[inline]
    fn hamiltonian(&self, t: f64) -> [[C64; 2]; 2] {
        let s = self.at(t);
        let off = C64::from_polar(0.5 * s.rabi, s.phase);
        [
            [C64::new(0.0, 0.0), off],
            [off.conj(), C64::new(self.two_photon_detuning + 0.5 * s.detuning, 0.0)],
        ]
    }
}

/// Propagates amplitudes of `(|1⟩, |3⟩)` through the effective model and
/// returns the final populations.
pub fn propagate_effective(eff: &EffectiveTwoLevel, initial: [C64; 2], grid: &TimeGrid) -> Result<[f64; 2]> {
    grid.validate()?;
    let norm0 = initial[0].norm_sqr() + initial[1].norm_sqr();
    let h = grid.step();
    let rhs = |m: &[[C64; 2]; 2], v: &[C64; 2]| -> [C64; 2] {
        let mi = C64::new(0.0, -1.0);
        [mi * (m[0][0] * v[0] + m[0][1] * v[1]), mi * (m[1][0] * v[0] + m[1][1] * v[1])]
    };
    let ax = |v: &[C64; 2], s: f64, k: &[C64; 2]| [v[0] + k[0] * s, v[1] + k[1] * s];
    let mut c = initial;
    for n in 0..grid.steps() {
        let t = grid.time(n);
        let (h0, hm, h1) = (eff.hamiltonian(t), eff.hamiltonian(t + 0.5 * h), eff.hamiltonian(t + h));
        let k1 = rhs(&h0, &c);
        let k2 = rhs(&hm, &ax(&c, 0.5 * h, &k1));
        let k3 = rhs(&hm, &ax(&c, 0.5 * h, &k2));
        let k4 = rhs(&h1, &ax(&c, h, &k3));
        for i in 0..2 {
            c[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
    }
    let p = [c[0].norm_sqr(), c[1].norm_sqr()];
    let drift = p[0] + p[1] - norm0;
    if !drift.is_finite() || drift.abs() > 1e-6 {
        return Err(Error::Integration {
            time: grid.t_end,
            reason: format!("effective two-level norm drifted by {drift:e}"),
        });
    }
    Ok(p)
}

/// Dark state of the sequence at `t`, or `None` when both fields vanish.
fn dark_at(seq: &CompositeSequence, t: f64) -> Option<StateVector3> {
    let d = seq.drive_at(t);
    if d.pump_rabi == 0.0 && d.stokes_rabi == 0.0 {
        return None;
    }
    Some(phased_dark_state(d.pump_rabi.atan2(d.stokes_rabi), d.pump_phase, d.stokes_phase))
}

/// `|⟨d(t)|ψ(t)⟩|²` per sample of a state trajectory.
///
/// While both fields are off the dark state of the last driven instant is
/// kept (`|1⟩` before the first pulse).
pub fn dark_state_overlap(traj: &Trajectory<StateVector3>, seq: &CompositeSequence) -> Vec<f64> {
    let mut dark = StateVector3::basis(0);
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, psi)| {
            if let Some(d) = dark_at(seq, t) {
                dark = d;
            }
            dark.inner(psi).norm_sqr()
        })
        .collect()
}

/// `⟨d(t)|ρ(t)|d(t)⟩` per sample of a density-matrix trajectory.
pub fn dark_state_population(traj: &Trajectory<DensityMatrix3>, seq: &CompositeSequence) -> Vec<f64> {
    let mut dark = StateVector3::basis(0);
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, rho)| {
            if let Some(d) = dark_at(seq, t) {
                dark = d;
            }
            rho.expectation(&dark)
        })
        .collect()
}
