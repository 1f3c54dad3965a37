//! Classical fixed-step fourth-order Runge–Kutta propagation.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{apply_decay, ComplexMatrix3, DecayModel, DensityMatrix3, StateVector3};
use crate::{Error, Result};

/// Drift of the norm (or trace) beyond which lossless propagation is
/// reported as diverged.
pub(crate) const DIVERGENCE_TOLERANCE: f64 = 1e-6;

const MIN_STEPS: f64 = 10.0;

/// Uniform integration grid on `[t_start, t_end]`.
///
/// The requested step is shrunk so that an integer number of steps lands
/// exactly on `t_end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        let grid = TimeGrid { t_start, t_end, dt };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.dt.is_finite()) {
            return Err(Error::invalid("time grid must be finite"));
        }
        if self.t_end <= self.t_start || self.dt <= 0.0 {
            return Err(Error::invalid(format!(
                "time grid needs t_end > t_start and dt > 0 (got [{}, {}], dt {})",
                self.t_start, self.t_end, self.dt
            )));
        }
        if (self.t_end - self.t_start) / self.dt < MIN_STEPS {
            return Err(Error::invalid("time grid must contain at least 10 steps"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.dt - 1e-9).ceil().max(1.0) as usize
    }

    /// The step actually taken.
    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps() as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps() {
            self.t_end
        } else {
            self.t_start + n as f64 * self.step()
        }
    }
}

/// Which samples of a propagation are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recording {
    /// Only the state at `t_end`.
    FinalOnly,
    /// The initial state and every `n`-th step (plus the final one).
    Every(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    fn new(recording: Recording, t0: f64, s0: S) -> Self {
        match recording {
            Recording::FinalOnly => Trajectory {
                times: Vec::new(),
                states: Vec::new(),
            },
            Recording::Every(_) => Trajectory {
                times: vec![t0],
                states: vec![s0],
            },
        }
    }

    fn record(&mut self, recording: Recording, n: usize, last: usize, t: f64, s: S) {
        let keep = match recording {
            Recording::FinalOnly => n == last,
            Recording::Every(k) => n == last || n.is_multiple_of(k.max(1)),
        };
        if keep {
            self.times.push(t);
            self.states.push(s);
        }
    }

    pub fn final_state(&self) -> &S {
        self.states.last().expect("trajectory always holds the final state")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn axpy3(a: &[C64; 3], h: f64, k: &[C64; 3]) -> [C64; 3] {
    [a[0] + k[0] * h, a[1] + k[1] * h, a[2] + k[2] * h]
}

/// Integrates `i dψ/dt = H(t) ψ`.
///
/// `H` may carry non-Hermitian loss terms; the norm check then only guards
/// against growth. When every evaluated `H` is Hermitian the norm must be
/// conserved to 1e-6 or the run is reported as diverged.
pub fn propagate_state<F>(
    hamiltonian: F,
    psi0: &StateVector3,
    grid: &TimeGrid,
    recording: Recording,
) -> Result<Trajectory<StateVector3>>
where
    F: Fn(f64) -> ComplexMatrix3,
{
    grid.validate()?;
    if !psi0.is_finite() {
        return Err(Error::invalid("initial state is not finite"));
    }
    let norm0 = psi0.norm_sqr();
    let steps = grid.steps();
    let h = grid.step();
    let minus_i = C64::new(0.0, -1.0);
    let rhs = |m: &ComplexMatrix3, v: &[C64; 3]| m.apply(v).map(|z| z * minus_i);

    let mut traj = Trajectory::new(recording, grid.t_start, *psi0);
    let mut psi = psi0.0;
    let mut lossless = true;
    for n in 1..=steps {
        let t = grid.time(n - 1);
        let h0 = hamiltonian(t);
        let hm = hamiltonian(t + 0.5 * h);
        let h1 = hamiltonian(t + h);
        lossless &= h0.is_hermitian(1e-12 * h0.0[1][1].norm().max(1.0));
        let k1 = rhs(&h0, &psi);
        let k2 = rhs(&hm, &axpy3(&psi, 0.5 * h, &k1));
        let k3 = rhs(&hm, &axpy3(&psi, 0.5 * h, &k2));
        let k4 = rhs(&h1, &axpy3(&psi, h, &k3));
        for i in 0..3 {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        let t_next = grid.time(n);
        let state = StateVector3(psi);
        check_norm(state.is_finite(), state.norm_sqr(), norm0, lossless, t_next)?;
        traj.record(recording, n, steps, t_next, state);
    }
    Ok(traj)
}

fn check_norm(finite: bool, norm: f64, norm0: f64, lossless: bool, t: f64) -> Result<()> {
    if !finite {
        return Err(Error::Integration {
            time: t,
            reason: "non-finite amplitudes".into(),
        });
    }
    let drift = norm - norm0;
    if drift > DIVERGENCE_TOLERANCE || (lossless && drift.abs() > DIVERGENCE_TOLERANCE) {
        return Err(Error::Integration {
            time: t,
            reason: format!("norm drifted by {drift:e}; reduce the step size"),
        });
    }
    Ok(())
}

/// Right-hand side of `dρ/dt = −i(Hρ − ρH†) − γ(ρ₁₃|1⟩⟨3| + h.c.)`.
///
/// Only `Hρ` is formed; for Hermitian `ρ` the second product is its adjoint
/// whatever `H` is. The result is Hermitian by construction.
pub(crate) fn liouville_rhs(h: &ComplexMatrix3, rho: &ComplexMatrix3, coherence_damping: f64) -> ComplexMatrix3 {
    let m = *h * *rho;
    let minus_i = C64::new(0.0, -1.0);
    let mut d = ComplexMatrix3::ZERO;
    for i in 0..3 {
        d.0[i][i] = C64::new(2.0 * m.0[i][i].im, 0.0);
        for j in (i + 1)..3 {
            let v = minus_i * (m.0[i][j] - m.0[j][i].conj());
            d.0[i][j] = v;
            d.0[j][i] = v.conj();
        }
    }
    for (i, j, rate) in [(0, 2, coherence_damping), (0, 1, 0.25 * coherence_damping), (1, 2, 0.25 * coherence_damping)] {
        d.0[i][j] -= rho.0[i][j] * rate;
        d.0[j][i] = d.0[i][j].conj();
    }
    d
}

/// Integrates the Liouville–von Neumann equation with the non-Hermitian
/// decay terms of `decay`.
///
/// `hamiltonian` must return the Hermitian (lossless) part; loss from `|2⟩`
/// is added with [`apply_decay`] and the `ρ₁₃` coherence is damped at
/// `1/T2` (see [`DecayModel::coherence_damping_rate`]). Population leaving `|2⟩` is discarded, so the trace decreases
/// when decay is enabled and is conserved otherwise.
pub fn propagate_density<F>(
    hamiltonian: F,
    rho0: &DensityMatrix3,
    decay: &DecayModel,
    grid: &TimeGrid,
    recording: Recording,
) -> Result<Trajectory<DensityMatrix3>>
where
    F: Fn(f64) -> ComplexMatrix3,
{
    grid.validate()?;
    decay.validate()?;
    rho0.validate(1e-12)?;
    let gamma = decay.coherence_damping_rate();
    let trace0 = rho0.trace();
    let steps = grid.steps();
    let h = grid.step();
    let axpy = |a: &ComplexMatrix3, s: f64, k: &ComplexMatrix3| *a + k.scale(C64::new(s, 0.0));

    let mut traj = Trajectory::new(recording, grid.t_start, *rho0);
    let mut rho = rho0.0;
    let mut lossless = !decay.enabled;
    for n in 1..=steps {
        let t = grid.time(n - 1);
        let raw = hamiltonian(t);
        lossless &= raw.is_hermitian(1e-12 * raw.0[1][1].norm().max(1.0));
        let h0 = apply_decay(&raw, decay);
        let hm = apply_decay(&hamiltonian(t + 0.5 * h), decay);
        let h1 = apply_decay(&hamiltonian(t + h), decay);
        let k1 = liouville_rhs(&h0, &rho, gamma);
        let k2 = liouville_rhs(&hm, &axpy(&rho, 0.5 * h, &k1), gamma);
        let k3 = liouville_rhs(&hm, &axpy(&rho, 0.5 * h, &k2), gamma);
        let k4 = liouville_rhs(&h1, &axpy(&rho, h, &k3), gamma);
        let incr = (k1 + (k2 + k3).scale(C64::new(2.0, 0.0)) + k4).scale(C64::new(h / 6.0, 0.0));
        rho = rho + incr;
        let t_next = grid.time(n);
        check_norm(rho.is_finite(), rho.trace().re, trace0, lossless, t_next)?;
        traj.record(recording, n, steps, t_next, DensityMatrix3(rho));
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{rwa_hamiltonian, DriveValues};
    use std::f64::consts::PI;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 1.0, 0.1).is_ok());
        assert!(TimeGrid::new(0.0, 1.0, 0.2).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 0.01).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.0).is_err());
        let g = TimeGrid::new(0.0, 1.0, 0.03).unwrap();
        assert_eq!(g.steps(), 34);
        assert_eq!(g.time(g.steps()), 1.0);
    }

    #[test]
    fn free_evolution_is_identity() {
        let grid = TimeGrid::new(0.0, 1e-6, 1e-8).unwrap();
        let psi0 = StateVector3::from_real([0.6, 0.0, 0.8]);
        let traj = propagate_state(|_| ComplexMatrix3::ZERO, &psi0, &grid, Recording::FinalOnly).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(*traj.final_state(), psi0);
    }

    #[test]
    fn resonant_pi_pulse_inverts() {
        // Square pump pulse with Ω·T = π.
        let omega = 2.0 * PI * 1e6;
        let t_end = PI / omega;
        let grid = TimeGrid::new(0.0, t_end, t_end / 2000.0).unwrap();
        let h = rwa_hamiltonian(
            &DriveValues {
                pump_rabi: omega,
                ..DriveValues::ZERO
            }
            .with_detunings(0.0, 0.0),
        )
        .unwrap();
        let traj = propagate_state(|_| h, &StateVector3::basis(0), &grid, Recording::Every(100)).unwrap();
        assert_eq!(traj.len(), 21);
        let p = traj.final_state().populations();
        assert!((p[1] - 1.0).abs() < 1e-6, "P2 = {}", p[1]);
    }

    #[test]
    fn divergence_is_reported() {
        // |H| dt = 10 is far outside the RK4 stability region.
        let grid = TimeGrid::new(0.0, 1.0, 0.1).unwrap();
        let h = ComplexMatrix3::diag([100.0, -100.0, 0.0]);
        let psi0 = StateVector3::from_real([1.0, 0.0, 0.0]);
        let err = propagate_state(|_| h, &psi0, &grid, Recording::FinalOnly).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
    }

    #[test]
    fn maximally_mixed_state_is_stationary() {
        let grid = TimeGrid::new(0.0, 1e-6, 1e-8).unwrap();
        let rho0 = DensityMatrix3::diagonal([1.0 / 3.0; 3]);
        let traj = propagate_density(
            |_| ComplexMatrix3::ZERO,
            &rho0,
            &DecayModel::DISABLED,
            &grid,
            Recording::FinalOnly,
        )
        .unwrap();
        assert!(traj.final_state().0.max_abs_diff(&rho0.0) < 1e-15);
    }

    #[test]
    fn excited_state_decays_exponentially() {
        let t1 = 164e-6;
        let decay = DecayModel::new(t1, 500e-6).unwrap();
        let t_end = 200e-6;
        let grid = TimeGrid::new(0.0, t_end, t1 / 2000.0).unwrap();
        let rho0 = DensityMatrix3::pure(&StateVector3::basis(1));
        let traj = propagate_density(|_| ComplexMatrix3::ZERO, &rho0, &decay, &grid, Recording::Every(50)).unwrap();
        for (t, rho) in traj.times.iter().zip(&traj.states) {
            assert!((rho.trace() - (-t / t1).exp()).abs() < 1e-6);
        }
    }

    #[test]
    fn coherence_damping_spares_populations() {
        let t2 = 500e-6;
        let decay = DecayModel::new(164e-6, t2).unwrap();
        let mut m = ComplexMatrix3::diag([0.5, 0.0, 0.5]);
        m.0[0][2] = C64::new(0.5, 0.0);
        m.0[2][0] = C64::new(0.5, 0.0);
        let rho0 = DensityMatrix3(m);
        let t_end = 300e-6;
        let grid = TimeGrid::new(0.0, t_end, 1e-7).unwrap();
        let rho = *propagate_density(|_| ComplexMatrix3::ZERO, &rho0, &decay, &grid, Recording::FinalOnly)
            .unwrap()
            .final_state();
        assert!((rho.populations()[0] - 0.5).abs() < 1e-14);
        assert!((rho.populations()[2] - 0.5).abs() < 1e-14);
        assert!((rho.0 .0[0][2].re - 0.5 * (-t_end / t2).exp()).abs() < 1e-9);
    }

    #[test]
    fn dephasing_damps_outer_coherences_at_quarter_rate() {
        let t2 = 100e-6;
        let decay = DecayModel::new(f64::INFINITY, t2).unwrap();
        let rho0 = DensityMatrix3::pure(&StateVector3::from_real([1.0, 1.0, 1.0].map(|x: f64| x / 3f64.sqrt())));
        let t_end = 50e-6;
        let grid = TimeGrid::new(0.0, t_end, 1e-7).unwrap();
        let rho = *propagate_density(|_| ComplexMatrix3::ZERO, &rho0, &decay, &grid, Recording::FinalOnly)
            .unwrap()
            .final_state();
        let third = 1.0 / 3.0;
        assert!((rho.0 .0[0][2].re - third * (-t_end / t2).exp()).abs() < 1e-12);
        assert!((rho.0 .0[0][1].re - third * (-0.25 * t_end / t2).exp()).abs() < 1e-12);
        assert!((rho.0 .0[1][2].re - third * (-0.25 * t_end / t2).exp()).abs() < 1e-12);
        assert!((rho.trace() - 1.0).abs() < 1e-14);
    }
}
