//! Gaussian pump/Stokes pulses, pulse pairs and composite sequences.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::quantum::DriveValues;
use crate::{Error, Result};

/// Default truncation half-width in units of the FWHM (total support 3·T_Ω).
pub const TRUNCATION_HALFWIDTH_FWHM: f64 = 1.5;

/// A phased Gaussian Rabi-frequency envelope truncated to a finite window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPulse {
    /// Peak Rabi frequency (rad/s).
    pub peak_rabi: f64,
    /// Centre time (s).
    pub center: f64,
    /// Intensity-independent FWHM T_Ω of the Rabi frequency (s).
    pub fwhm: f64,
    /// Carrier phase (rad).
    pub phase: f64,
    /// Half-width of the truncation window (s).
    pub truncation_halfwidth: f64,
}

impl GaussianPulse {
    pub fn new(peak_rabi: f64, center: f64, fwhm: f64, phase: f64) -> Self {
        GaussianPulse {
            peak_rabi,
            center,
            fwhm,
            phase,
            truncation_halfwidth: TRUNCATION_HALFWIDTH_FWHM * fwhm,
        }
    }

    /// Half-open support `[center − w, center + w)`.
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.truncation_halfwidth, self.center + self.truncation_halfwidth)
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        let (a, b) = self.support();
        t >= a && t < b
    }

    /// Rabi frequency at time `t`; zero outside the truncation window.
    #[inline]
    pub fn envelope(&self, t: f64) -> f64 {
        if !self.contains(t) {
            return 0.0;
        }
        let x = (t - self.center) / self.fwhm;
        self.peak_rabi * (-4.0 * LN_2 * x * x).exp()
    }
}

/// Order of the two pulses within a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseOrdering {
    /// Stokes precedes pump (counter-intuitive).
    Sp,
    /// Pump precedes Stokes (intuitive).
    Ps,
}

impl PulseOrdering {
    pub fn flipped(self) -> Self {
        match self {
            PulseOrdering::Sp => PulseOrdering::Ps,
            PulseOrdering::Ps => PulseOrdering::Sp,
        }
    }
}

impl fmt::Display for PulseOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PulseOrdering::Sp => "SP",
            PulseOrdering::Ps => "PS",
        })
    }
}

/// One pump and one Stokes pulse separated by `separation = |τ|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulsePair {
    pub ordering: PulseOrdering,
    /// Distance between the two pulse centres (s, non-negative).
    pub separation: f64,
    pub pump: GaussianPulse,
    pub stokes: GaussianPulse,
}

impl PulsePair {
    /// Delay with the sign convention "positive when Stokes precedes pump".
    pub fn signed_delay(&self) -> f64 {
        self.pump.center - self.stokes.center
    }
}

/// Named pulse-sequence families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "&'static str")]
pub enum SequenceFamily {
    /// One STIRAP pair.
    Single,
    /// `n` identical pairs with zero phases.
    Repeat,
    R3,
    R5,
    D3,
    D5,
    U3,
    U5a,
    U5b,
}

impl SequenceFamily {
    pub const ALL: [SequenceFamily; 9] = [
        SequenceFamily::Single,
        SequenceFamily::Repeat,
        SequenceFamily::R3,
        SequenceFamily::R5,
        SequenceFamily::D3,
        SequenceFamily::D5,
        SequenceFamily::U3,
        SequenceFamily::U5a,
        SequenceFamily::U5b,
    ];

    /// Families with a tabulated phase set.
    pub const TABULATED: [SequenceFamily; 7] = [
        SequenceFamily::R3,
        SequenceFamily::R5,
        SequenceFamily::D3,
        SequenceFamily::D5,
        SequenceFamily::U3,
        SequenceFamily::U5a,
        SequenceFamily::U5b,
    ];

    /// Number of pairs fixed by the family, if any.
    pub fn fixed_pairs(self) -> Option<usize> {
        use SequenceFamily::*;
        match self {
            Single => Some(1),
            Repeat => None,
            R3 | D3 | U3 => Some(3),
            R5 | D5 | U5a | U5b => Some(5),
        }
    }

    /// Resonant families alternate SP/PS from pair to pair.
    pub fn is_resonant(self) -> bool {
        matches!(self, SequenceFamily::R3 | SequenceFamily::R5)
    }

    pub fn name(self) -> &'static str {
        use SequenceFamily::*;
        match self {
            Single => "single",
            Repeat => "repeat",
            R3 => "r3",
            R5 => "r5",
            D3 => "d3",
            D5 => "d5",
            U3 => "u3",
            U5a => "u5a",
            U5b => "u5b",
        }
    }
}

impl fmt::Display for SequenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<SequenceFamily> for &'static str {
    fn from(f: SequenceFamily) -> Self {
        f.name()
    }
}

impl TryFrom<String> for SequenceFamily {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for SequenceFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        SequenceFamily::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::invalid(format!("unknown sequence family '{s}'")))
    }
}

/// Scale of the printed R5 Stokes phases.
///
/// The tabulated R5 Stokes row is printed with a π/3 unit although the pump
/// row, and the pump/Stokes mirror symmetry of the R3 row, use π/5.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum R5StokesScale {
    #[default]
    PiOverFive,
    /// The literal printed value, kept for comparison runs.
    PiOverThreeLiteral,
}

/// Pump and Stokes phases of each pair (rad).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub pump: Vec<f64>,
    pub stokes: Vec<f64>,
}

impl PhaseTable {
    fn scaled(pump: &[f64], stokes: &[f64], pump_unit: f64, stokes_unit: f64) -> Self {
        PhaseTable {
            pump: pump.iter().map(|k| k * pump_unit).collect(),
            stokes: stokes.iter().map(|k| k * stokes_unit).collect(),
        }
    }

    fn zeros(n: usize) -> Self {
        PhaseTable {
            pump: vec![0.0; n],
            stokes: vec![0.0; n],
        }
    }

    /// Relative phases φ_P − φ_S of each pair.
    pub fn relative(&self) -> Vec<f64> {
        self.pump.iter().zip(&self.stokes).map(|(p, s)| p - s).collect()
    }
}

/// Tabulated phases of a named family.
pub fn phase_table(family: SequenceFamily) -> Result<PhaseTable> {
    phase_table_with(family, R5StokesScale::default())
}

pub fn phase_table_with(family: SequenceFamily, r5: R5StokesScale) -> Result<PhaseTable> {
    use SequenceFamily::*;
    let none = [0.0; 5];
    Ok(match family {
        Single => PhaseTable::zeros(1),
        Repeat => {
            return Err(Error::invalid(
                "the repeat family has no fixed length; use phases_for",
            ))
        }
        R3 => PhaseTable::scaled(&[0.0, 3.0, 1.0], &[1.0, 3.0, 0.0], PI / 3.0, PI / 3.0),
        R5 => {
            let stokes_unit = match r5 {
                R5StokesScale::PiOverFive => PI / 5.0,
                R5StokesScale::PiOverThreeLiteral => PI / 3.0,
            };
            PhaseTable::scaled(&[0.0, 5.0, 3.0, 8.0, 4.0], &[4.0, 8.0, 3.0, 5.0, 0.0], PI / 5.0, stokes_unit)
        }
        D3 => PhaseTable::scaled(&[0.0, 1.0, 0.0], &none[..3], 2.0 * PI / 3.0, 0.0),
        D5 => PhaseTable::scaled(&[0.0, 2.0, 1.0, 2.0, 0.0], &none, 2.0 * PI / 5.0, 0.0),
        U3 => PhaseTable::scaled(&[0.0, 1.0, 0.0], &none[..3], PI / 2.0, 0.0),
        U5a => PhaseTable::scaled(&[0.0, 5.0, 2.0, 5.0, 0.0], &none, PI / 6.0, 0.0),
        U5b => PhaseTable::scaled(&[0.0, 11.0, 2.0, 11.0, 0.0], &none, PI / 6.0, 0.0),
    })
}

/// Phases for `n_pairs` pairs of `family` (zeros for repeated STIRAP).
pub fn phases_for(family: SequenceFamily, n_pairs: usize, r5: R5StokesScale) -> Result<PhaseTable> {
    check_pair_count(family, n_pairs)?;
    match family {
        SequenceFamily::Repeat => Ok(PhaseTable::zeros(n_pairs)),
        _ => phase_table_with(family, r5),
    }
}

fn check_pair_count(family: SequenceFamily, n_pairs: usize) -> Result<()> {
    if n_pairs == 0 {
        return Err(Error::invalid("a sequence needs at least one pair"));
    }
    match family.fixed_pairs() {
        Some(n) if n != n_pairs => Err(Error::invalid(format!(
            "family {family} has {n} pairs, got n_pairs = {n_pairs}"
        ))),
        _ => Ok(()),
    }
}

/// Everything needed to lay out a composite sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceParams {
    pub family: SequenceFamily,
    pub n_pairs: usize,
    /// Signed pump/Stokes delay τ (s); τ > 0 keeps each pair's nominal
    /// ordering, τ < 0 flips it.
    pub delay: f64,
    /// Pulse FWHM T_Ω (s).
    pub fwhm: f64,
    /// Peak pump Rabi frequency (rad/s).
    pub pump_peak: f64,
    /// Peak Stokes Rabi frequency (rad/s).
    pub stokes_peak: f64,
    /// Nominal ordering of the first pair.
    pub first_ordering: PulseOrdering,
    /// Whether repeated STIRAP alternates SP/PS (resonant style) or keeps one
    /// ordering (detuned style). Ignored by the other families.
    pub alternate_repeats: bool,
    pub r5_stokes: R5StokesScale,
}

impl SequenceParams {
    /// A sequence with the family's natural pair count and ordering rule.
    pub fn new(family: SequenceFamily, delay: f64, fwhm: f64, pump_peak: f64, stokes_peak: f64) -> Self {
        SequenceParams {
            family,
            n_pairs: family.fixed_pairs().unwrap_or(1),
            delay,
            fwhm,
            pump_peak,
            stokes_peak,
            first_ordering: PulseOrdering::Sp,
            alternate_repeats: false,
            r5_stokes: R5StokesScale::default(),
        }
    }

    pub fn repeated(n_pairs: usize, alternate: bool, delay: f64, fwhm: f64, pump_peak: f64, stokes_peak: f64) -> Self {
        SequenceParams {
            n_pairs,
            alternate_repeats: alternate,
            ..SequenceParams::new(SequenceFamily::Repeat, delay, fwhm, pump_peak, stokes_peak)
        }
    }

    pub fn alternates(&self) -> bool {
        self.family.is_resonant() || (self.family == SequenceFamily::Repeat && self.alternate_repeats)
    }

    /// Width of one pair's time slot, `3·T_Ω + |τ|`.
    pub fn slot_duration(&self) -> f64 {
        2.0 * TRUNCATION_HALFWIDTH_FWHM * self.fwhm + self.delay.abs()
    }

    pub fn total_duration(&self) -> f64 {
        self.n_pairs as f64 * self.slot_duration()
    }

    pub fn with_delay(mut self, delay: f64) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_peak_scale(mut self, scale: f64) -> Self {
        self.pump_peak *= scale;
        self.stokes_peak *= scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_pair_count(self.family, self.n_pairs)?;
        if !(self.fwhm.is_finite() && self.fwhm > 0.0) {
            return Err(Error::invalid(format!("pulse FWHM must be positive, got {}", self.fwhm)));
        }
        if !self.delay.is_finite() {
            return Err(Error::invalid("pulse delay must be finite"));
        }
        for (name, v) in [("pump", self.pump_peak), ("stokes", self.stokes_peak)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!("{name} peak Rabi frequency must be non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

/// An ordered, back-to-back list of phased pulse pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositeSequence {
    pub params: SequenceParams,
    pub pairs: Vec<PulsePair>,
    pub phases: PhaseTable,
    pub slot_duration: f64,
}

/// Lays out a sequence: pair `k` occupies `[k·T_slot, (k+1)·T_slot)` with
/// `T_slot = 3T_Ω + |τ|`, and its two centres are `|τ|` apart.
pub fn build_sequence(params: &SequenceParams) -> Result<CompositeSequence> {
    params.validate()?;
    let phases = phases_for(params.family, params.n_pairs, params.r5_stokes)?;
    let slot = params.slot_duration();
    let sep = params.delay.abs();
    if sep >= 2.0 * TRUNCATION_HALFWIDTH_FWHM * params.fwhm {
        log::warn!(
            "pulse delay {:e} s leaves pump and Stokes without overlap (T_Ω = {:e} s)",
            params.delay,
            params.fwhm
        );
    }
    let alternate = params.alternates();
    let pairs = (0..params.n_pairs)
        .map(|k| {
            let mut ordering = if alternate && k % 2 == 1 {
                params.first_ordering.flipped()
            } else {
                params.first_ordering
            };
            if params.delay < 0.0 {
                ordering = ordering.flipped();
            }
            let first = k as f64 * slot + TRUNCATION_HALFWIDTH_FWHM * params.fwhm;
            let (pump_c, stokes_c) = match ordering {
                PulseOrdering::Sp => (first + sep, first),
                PulseOrdering::Ps => (first, first + sep),
            };
            PulsePair {
                ordering,
                separation: sep,
                pump: GaussianPulse::new(params.pump_peak, pump_c, params.fwhm, phases.pump[k]),
                stokes: GaussianPulse::new(params.stokes_peak, stokes_c, params.fwhm, phases.stokes[k]),
            }
        })
        .collect();
    Ok(CompositeSequence {
        params: *params,
        pairs,
        phases,
        slot_duration: slot,
    })
}

impl CompositeSequence {
    pub fn family(&self) -> SequenceFamily {
        self.params.family
    }

    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn duration(&self) -> f64 {
        self.slot_duration * self.pairs.len() as f64
    }

    pub fn orderings(&self) -> Vec<PulseOrdering> {
        self.pairs.iter().map(|p| p.ordering).collect()
    }

    /// Time window of pair `k`.
    pub fn pair_window(&self, k: usize) -> (f64, f64) {
        (k as f64 * self.slot_duration, (k + 1) as f64 * self.slot_duration)
    }

    /// Copy with both peak Rabi frequencies multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> CompositeSequence {
        let mut out = self.clone();
        out.params = out.params.with_peak_scale(scale);
        for pair in &mut out.pairs {
            pair.pump.peak_rabi *= scale;
            pair.stokes.peak_rabi *= scale;
        }
        out
    }

    /// Times where some envelope switches on or off, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self
            .pairs
            .iter()
            .flat_map(|p| {
                let (a, b) = p.pump.support();
                let (c, d) = p.stokes.support();
                [a, b, c, d]
            })
            .collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    /// Index of the pair whose slot contains `t`.
    #[inline]
    pub fn pair_at(&self, t: f64) -> Option<usize> {
        if t < 0.0 {
            return None;
        }
        let k = (t / self.slot_duration).floor() as usize;
        (k < self.pairs.len()).then_some(k)
    }

    /// Instantaneous pump/Stokes fields; zero outside every pulse support.
    #[inline]
    pub fn drive_at(&self, t: f64) -> DriveValues {
        let Some(pair) = self.pair_at(t).map(|k| &self.pairs[k]) else {
            return DriveValues::ZERO;
        };
        let phase_of = |p: &GaussianPulse| if p.contains(t) { p.phase } else { 0.0 };
        DriveValues {
            pump_rabi: pair.pump.envelope(t),
            stokes_rabi: pair.stokes.envelope(t),
            pump_phase: phase_of(&pair.pump),
            stokes_phase: phase_of(&pair.stokes),
        }
    }
}
