//! Density-matrix propagation specialised to the Λ-system Hamiltonian.
//!
//! Ensemble members share the pulse envelopes and differ only in their
//! detunings, so the couplings are sampled once on the RK4 half-step grid
//! and reused for every member.

use num_complex::Complex64 as C64;

use super::propagate::DIVERGENCE_TOLERANCE;
use super::{ComplexMatrix3, DecayModel, DensityMatrix3, DriveValues, TimeGrid};
use crate::{Error, Result};

/// Pump and Stokes couplings `H₁₂`, `H₂₃` sampled at the RK4 stage times.
///
/// The grid may be split at breakpoints where the drive jumps (pulse
/// truncation edges). Each segment gets its own uniform step no longer than
/// the grid's `dt`, and stage times on a segment boundary are nudged inside
/// the segment, so every step sees a smooth drive and RK4 keeps its order.
#[derive(Clone, Debug)]
pub struct SampledDrive {
    grid: TimeGrid,
    starts: Vec<f64>,
    steps: Vec<f64>,
    pump: Vec<[C64; 3]>,
    stokes: Vec<[C64; 3]>,
}

/// Relative inward offset of stage times lying on a segment boundary.
const EDGE_NUDGE: f64 = 1e-9;

impl SampledDrive {
    pub fn sample<F>(grid: &TimeGrid, fields: F) -> Result<Self>
    where
        F: Fn(f64) -> DriveValues,
    {
        Self::sample_with_breaks(grid, &[], fields)
    }

    /// Samples with the grid split at `breaks`; breaks outside
    /// `(t_start, t_end)` are ignored.
    pub fn sample_with_breaks<F>(grid: &TimeGrid, breaks: &[f64], fields: F) -> Result<Self>
    where
        F: Fn(f64) -> DriveValues,
    {
        grid.validate()?;
        let mut edges: Vec<f64> = std::iter::once(grid.t_start)
            .chain(breaks.iter().copied().filter(|&t| t > grid.t_start && t < grid.t_end))
            .chain(std::iter::once(grid.t_end))
            .collect();
        edges.sort_by(f64::total_cmp);
        // Slivers much shorter than a step would only add rounding noise.
        let min_len = grid.dt * 1e-6;
        edges.dedup_by(|b, a| *b - *a < min_len);
        if let Some(last) = edges.last_mut() {
            *last = grid.t_end;
        }

        let capacity = grid.steps() + edges.len();
        let mut drive = SampledDrive {
            grid: *grid,
            starts: Vec::with_capacity(capacity),
            steps: Vec::with_capacity(capacity),
            pump: Vec::with_capacity(capacity),
            stokes: Vec::with_capacity(capacity),
        };
        let sample = |t: f64| -> Result<(C64, C64)> {
            let v = fields(t);
            if !(v.pump_rabi >= 0.0 && v.stokes_rabi >= 0.0) {
                return Err(Error::invalid(format!("invalid Rabi frequencies at t = {t:e}")));
            }
            Ok(v.couplings())
        };
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let n = ((b - a) / grid.dt - 1e-9).ceil().max(1.0) as usize;
            let h = (b - a) / n as f64;
            let (lo, hi) = (a + EDGE_NUDGE * h, b - EDGE_NUDGE * h);
            for k in 0..n {
                let t0 = a + k as f64 * h;
                let t1 = if k + 1 == n { b } else { t0 + h };
                let (p0, s0) = sample(t0.clamp(lo, hi))?;
                let (pm, sm) = sample(0.5 * (t0 + t1))?;
                let (p1, s1) = sample(t1.clamp(lo, hi))?;
                drive.starts.push(t0);
                drive.steps.push(t1 - t0);
                drive.pump.push([p0, pm, p1]);
                drive.stokes.push([s0, sm, s1]);
            }
        }
        Ok(drive)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Number of RK4 steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Lossless Hamiltonian at stage `stage` (0 start, 1 midpoint, 2 end) of step `k`.
    pub fn hamiltonian(&self, k: usize, stage: usize, pump_detuning: f64, stokes_detuning: f64) -> ComplexMatrix3 {
        let zero = C64::new(0.0, 0.0);
        let (a, b) = (self.pump[k][stage], self.stokes[k][stage]);
        ComplexMatrix3([
            [zero, a, zero],
            [a.conj(), C64::new(pump_detuning, 0.0), b],
            [zero, b.conj(), C64::new(pump_detuning - stokes_detuning, 0.0)],
        ])
    }
}

type Rho = [C64; 9];

struct Coeffs {
    d2: C64,
    d3: f64,
    gamma13: f64,
    gamma_side: f64,
}

/// `−i(Hρ − ρH†)` for `H = [[0,a,0],[a*,d2,b],[0,b*,d3]]`, plus ground-state dephasing.
#[inline(always)]
fn rhs(a: C64, b: C64, c: &Coeffs, r: &Rho, out: &mut Rho) {
    let (ac, bc) = (a.conj(), b.conj());
    // M = Hρ, row-major.
    let m = [
        a * r[3],
        a * r[4],
        a * r[5],
        ac * r[0] + c.d2 * r[3] + b * r[6],
        ac * r[1] + c.d2 * r[4] + b * r[7],
        ac * r[2] + c.d2 * r[5] + b * r[8],
        bc * r[3] + r[6] * c.d3,
        bc * r[4] + r[7] * c.d3,
        bc * r[5] + r[8] * c.d3,
    ];
    let mi = |z: C64| C64::new(z.im, -z.re);
    out[0] = C64::new(2.0 * m[0].im, 0.0);
    out[4] = C64::new(2.0 * m[4].im, 0.0);
    out[8] = C64::new(2.0 * m[8].im, 0.0);
    out[1] = mi(m[1] - m[3].conj()) - r[1] * c.gamma_side;
    out[2] = mi(m[2] - m[6].conj()) - r[2] * c.gamma13;
    out[5] = mi(m[5] - m[7].conj()) - r[5] * c.gamma_side;
    out[3] = out[1].conj();
    out[6] = out[2].conj();
    out[7] = out[5].conj();
}

#[inline(always)]
fn axpy(x: &Rho, s: f64, k: &Rho) -> Rho {
    let mut out = *x;
    for i in 0..9 {
        out[i] += k[i] * s;
    }
    out
}

/// Propagates `ρ₀` through a sampled drive for one set of detunings.
///
/// Same equation of motion as [`super::propagate_density`]; only the final
/// density matrix is returned.
pub fn propagate_lambda_density(
    drive: &SampledDrive,
    pump_detuning: f64,
    stokes_detuning: f64,
    decay: &DecayModel,
    rho0: &DensityMatrix3,
) -> Result<DensityMatrix3> {
    decay.validate()?;
    if !(pump_detuning.is_finite() && stokes_detuning.is_finite()) {
        return Err(Error::invalid("detunings must be finite"));
    }
    let coeffs = Coeffs {
        d2: C64::new(pump_detuning, -0.5 * decay.excited_loss_rate()),
        d3: pump_detuning - stokes_detuning,
        gamma13: decay.coherence_damping_rate(),
        gamma_side: 0.25 * decay.coherence_damping_rate(),
    };
    let trace0 = rho0.trace();
    let lossless = !decay.enabled;

    let mut r: Rho = [C64::new(0.0, 0.0); 9];
    for i in 0..3 {
        for j in 0..3 {
            r[3 * i + j] = rho0.0 .0[i][j];
        }
    }
    let zero = [C64::new(0.0, 0.0); 9];
    let (mut k1, mut k2, mut k3, mut k4) = (zero, zero, zero, zero);
    let steps = drive.len();
    for n in 0..steps {
        let h = drive.steps[n];
        let [p0, pm, p1] = drive.pump[n];
        let [s0, sm, s1] = drive.stokes[n];
        rhs(p0, s0, &coeffs, &r, &mut k1);
        rhs(pm, sm, &coeffs, &axpy(&r, 0.5 * h, &k1), &mut k2);
        rhs(pm, sm, &coeffs, &axpy(&r, 0.5 * h, &k2), &mut k3);
        rhs(p1, s1, &coeffs, &axpy(&r, h, &k3), &mut k4);
        let w = h / 6.0;
        for i in 0..9 {
            r[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
        if n % 1024 == 1023 || n + 1 == steps {
            let tr = r[0].re + r[4].re + r[8].re;
            let drift = tr - trace0;
            if !tr.is_finite() || drift > DIVERGENCE_TOLERANCE || (lossless && drift.abs() > DIVERGENCE_TOLERANCE) {
                return Err(Error::Integration {
                    time: drive.starts[n] + h,
                    reason: format!("trace drifted by {drift:e}; reduce the step size"),
                });
            }
        }
    }
    let mut out = ComplexMatrix3::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            out.0[i][j] = r[3 * i + j];
        }
    }
    Ok(DensityMatrix3(out))
}
