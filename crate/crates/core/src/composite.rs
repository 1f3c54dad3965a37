//! SU(2) composite-pulse algebra.
//!
//! A single pulse of unknown strength is described by
//!
//! ```text
//! U = [[ ε e^{iα},          √(1−ε²) e^{iβ} ],
//!      [ −√(1−ε²) e^{−iβ},  ε e^{−iα}      ]]
//! ```
//!
//! A phase shift φ of the drive maps β → β + φ. Composite sequences of
//! identical pulses are scored by `|U₁₁|²`, the probability of *not*
//! inverting.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pulse::{phase_table, SequenceFamily};
use crate::{Error, Result};

pub type Matrix2 = [[C64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Propagator {
    /// Error amplitude ε ∈ [0, 1]; the single-pulse transition probability is 1 − ε².
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Su2Propagator {
    pub fn new(epsilon: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::invalid(format!("ε must lie in [0, 1], got {epsilon}")));
        }
        Ok(Su2Propagator { epsilon, alpha, beta })
    }

    /// The same pulse driven with an extra phase φ.
    pub fn with_phase(&self, phi: f64) -> Self {
        Su2Propagator {
            beta: self.beta + phi,
            ..*self
        }
    }

    pub fn matrix(&self) -> Matrix2 {
        su2_matrix(self)
    }

    pub fn transition_probability(&self) -> f64 {
        1.0 - self.epsilon * self.epsilon
    }
}

pub fn su2_matrix(p: &Su2Propagator) -> Matrix2 {
    let s = (1.0 - p.epsilon * p.epsilon).max(0.0).sqrt();
    [
        [C64::from_polar(p.epsilon, p.alpha), C64::from_polar(s, p.beta)],
        [-C64::from_polar(s, -p.beta), C64::from_polar(p.epsilon, -p.alpha)],
    ]
}

pub fn mat2_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// Phases φ_k of a composite sequence of identical pulses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSet {
    pub phases: Vec<f64>,
}

impl PhaseSet {
    pub fn new(phases: Vec<f64>) -> Self {
        PhaseSet { phases }
    }

    /// `(0, φ₂, φ₃, φ₂, 0)`
    pub fn symmetric_five(phi2: f64, phi3: f64) -> Self {
        PhaseSet::new(vec![0.0, phi2, phi3, phi2, 0.0])
    }

    /// Two-level phases of a tabulated family, taken as φ_P − φ_S per pair.
    pub fn from_family(family: SequenceFamily) -> Result<Self> {
        Ok(PhaseSet::new(phase_table(family)?.relative()))
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// `φ_k = φ_{N−k+1}` for all k.
    pub fn is_symmetric(&self) -> bool {
        let n = self.phases.len();
        (0..n / 2).all(|k| (wrap(self.phases[k] - self.phases[n - 1 - k])).abs() < 1e-12)
    }

    /// `φ₁ = 0`.
    pub fn is_gauge_fixed(&self) -> bool {
        self.phases.first().is_none_or(|&p| p == 0.0)
    }
}

/// `U(φ_N)⋯U(φ₂)U(φ₁)`
pub fn compose(p: &Su2Propagator, phases: &PhaseSet) -> Matrix2 {
    let identity = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    phases
        .phases
        .iter()
        .fold(identity, |acc, &phi| mat2_mul(&p.with_phase(phi).matrix(), &acc))
}

/// Composite transition probability `1 − |U₁₁|²`.
pub fn transition_probability(u: &Matrix2) -> f64 {
    1.0 - u[0][0].norm_sqr()
}

/// Infidelity `|U₁₁|²`, computed without the cancellation in `1 − P`.
pub fn infidelity(u: &Matrix2) -> f64 {
    u[0][0].norm_sqr()
}

/// ε-linear coefficient of `U₁₁` for the symmetric five-pulse set
/// `(0, φ₂, φ₃, φ₂, 0)`:
/// `[1 + 2cos(2φ₂ − φ₃)]e^{iα} + 2cos(φ₂ − φ₃)e^{−iα}`.
pub fn first_order_coefficient(phi2: f64, phi3: f64, alpha: f64) -> C64 {
    let (a, b) = first_order_conditions(phi2, phi3);
    C64::from_polar(a, alpha) + C64::from_polar(b, -alpha)
}

/// The two real coefficients that must vanish for every α.
fn first_order_conditions(phi2: f64, phi3: f64) -> (f64, f64) {
    (1.0 + 2.0 * (2.0 * phi2 - phi3).cos(), 2.0 * (phi2 - phi3).cos())
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

const SEEDS_PER_AXIS: usize = 48;

/// All roots `(φ₂, φ₃) ∈ [0, 2π)²` of the first-order conditions.
///
/// Newton iteration from a uniform seed lattice on the torus; roots whose
/// residual exceeds `tolerance` are dropped and duplicates merged.
pub fn solve_u5_phases_all(tolerance: f64) -> Vec<(f64, f64)> {
    let mut roots: Vec<(f64, f64)> = Vec::new();
    let step = TAU / SEEDS_PER_AXIS as f64;
    for i in 0..SEEDS_PER_AXIS {
        for j in 0..SEEDS_PER_AXIS {
            let Some((a, b)) = newton(step * (i as f64 + 0.5), step * (j as f64 + 0.5)) else {
                continue;
            };
            let (g1, g2) = first_order_conditions(a, b);
            if g1.abs().max(g2.abs()) > tolerance {
                continue;
            }
            let (a, b) = (a.rem_euclid(TAU), b.rem_euclid(TAU));
            let dup = roots
                .iter()
                .any(|&(x, y)| wrap(x - a).abs() < 1e-6 && wrap(y - b).abs() < 1e-6);
            if !dup {
                roots.push((a, b));
            }
        }
    }
    roots.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
    roots
}

fn newton(mut a: f64, mut b: f64) -> Option<(f64, f64)> {
    for _ in 0..60 {
        let (g1, g2) = first_order_conditions(a, b);
        if g1.abs().max(g2.abs()) < 1e-15 {
            break;
        }
        let s = (2.0 * a - b).sin();
        let d = (a - b).sin();
        // Jacobian of (g1, g2) w.r.t. (a, b).
        let (j11, j12, j21, j22) = (-4.0 * s, 2.0 * s, -2.0 * d, 2.0 * d);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-12 {
            return None;
        }
        let da = (j22 * g1 - j12 * g2) / det;
        let db = (-j21 * g1 + j11 * g2) / det;
        a -= da;
        b -= db;
    }
    Some((a, b))
}

/// Distinct universal five-pulse phase sets.
///
/// The conditions are invariant under the mirror `φ → −φ` (complex
/// conjugation of every pulse), so roots come in mirrored pairs; one
/// representative with `φ₃ ∈ [0, π]` is kept from each pair. The result is
/// ordered by φ₂.
pub fn solve_u5_phases(tolerance: f64) -> Vec<PhaseSet> {
    let mut reps: Vec<(f64, f64)> = solve_u5_phases_all(tolerance)
        .into_iter()
        .filter(|&(_, b)| b <= PI + 1e-12)
        .collect();
    reps.sort_by(|x, y| x.0.total_cmp(&y.0));
    reps.into_iter().map(|(a, b)| PhaseSet::symmetric_five(a, b)).collect()
}

/// Power-law fit of the worst-case infidelity versus ε.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    /// Fitted exponent of `max_{α,β} |U₁₁|² ∝ ε^slope`.
    pub slope: f64,
    pub intercept: f64,
    pub epsilons: Vec<f64>,
    pub worst_infidelity: Vec<f64>,
}

/// Least-squares log–log slope of the worst-case infidelity over every
/// `(α, β)` pair of the sample lists.
pub fn infidelity_scaling(phases: &PhaseSet, epsilons: &[f64], alphas: &[f64], betas: &[f64]) -> Result<ScalingFit> {
    if epsilons.len() < 2 || alphas.is_empty() || betas.is_empty() {
        return Err(Error::invalid("scaling fit needs at least two ε values and one (α, β) sample"));
    }
    let samples: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| betas.iter().map(move |&b| (a, b))).collect();
    let worst = epsilons
        .iter()
        .map(|&eps| {
            Su2Propagator::new(eps, 0.0, 0.0)?;
            Ok(samples
                .par_iter()
                .map(|&(alpha, beta)| infidelity(&compose(&Su2Propagator { epsilon: eps, alpha, beta }, phases)))
                .reduce(|| 0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    if worst.iter().all(|&w| w < 1e-14) {
        return Err(Error::Degenerate("every infidelity is below 1e-14; nothing to fit".into()));
    }
    let pts: Vec<(f64, f64)> = epsilons
        .iter()
        .zip(&worst)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&e, &w)| (e.ln(), w.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Degenerate("fewer than two non-zero infidelities".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("ε grid has a single distinct value".into()));
    }
    let slope = sxy / sxx;
    Ok(ScalingFit {
        slope,
        intercept: my - slope * mx,
        epsilons: epsilons.to_vec(),
        worst_infidelity: worst,
    })
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `n` points evenly covering `[0, 2π)`.
pub fn angle_samples(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}
