use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Dense 3×3 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix3(pub [[C64; 3]; 3]);

impl ComplexMatrix3 {
    pub const ZERO: ComplexMatrix3 = ComplexMatrix3([[ZERO; 3]; 3]);

    pub fn identity() -> Self {
        Self::diag([1.0; 3])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = Self::ZERO;
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = C64::new(v, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn apply(&self, v: &[C64; 3]) -> [C64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// Largest elementwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise modulus of `self − self†`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Mul for ComplexMatrix3 {
    type Output = ComplexMatrix3;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

impl Add for ComplexMatrix3 {
    type Output = ComplexMatrix3;

    fn add(mut self, rhs: Self) -> Self {
        self.0
            .iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for ComplexMatrix3 {
    type Output = ComplexMatrix3;

    fn sub(mut self, rhs: Self) -> Self {
        self.0
            .iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a -= b);
        self
    }
}

/// Probability amplitudes of `|1⟩, |2⟩, |3⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector3(pub [C64; 3]);

impl StateVector3 {
    /// The bare state `|k+1⟩`.
    pub fn basis(k: usize) -> Self {
        assert!(k < 3, "basis index out of range");
        let mut v = [ZERO; 3];
        v[k] = ONE;
        StateVector3(v)
    }

    pub fn from_real(a: [f64; 3]) -> Self {
        StateVector3(a.map(|x| C64::new(x, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn populations(&self) -> [f64; 3] {
        self.0.map(|z| z.norm_sqr())
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Density matrix of one ensemble member.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix3(pub ComplexMatrix3);

impl DensityMatrix3 {
    /// `|ψ⟩⟨ψ|`
    pub fn pure(psi: &StateVector3) -> Self {
        let mut m = ComplexMatrix3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = psi.0[i] * psi.0[j].conj();
            }
        }
        DensityMatrix3(m)
    }

    pub fn ground_state() -> Self {
        Self::pure(&StateVector3::basis(0))
    }

    pub fn diagonal(p: [f64; 3]) -> Self {
        DensityMatrix3(ComplexMatrix3::diag(p))
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.0 .0[0][0].re, self.0 .0[1][1].re, self.0 .0[2][2].re]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `⟨v|ρ|v⟩`
    pub fn expectation(&self, v: &StateVector3) -> f64 {
        let rv = self.0.apply(&v.0);
        v.0.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }

    /// Checks Hermiticity, `tr ρ ≤ 1` and positive semidefiniteness, each
    /// within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let m = &self.0;
        if !m.is_finite() {
            return Err(Error::invalid("density matrix has non-finite entries"));
        }
        let herm = m.hermiticity_error();
        if herm > tol {
            return Err(Error::invalid(format!(
                "density matrix is not Hermitian (error {herm:e})"
            )));
        }
        if self.trace() > 1.0 + tol {
            return Err(Error::invalid(format!(
                "density matrix trace {} exceeds 1",
                self.trace()
            )));
        }
        // A Hermitian matrix is PSD iff every principal minor is non-negative.
        let a = &m.0;
        let d = self.populations();
        let minors2 = [
            d[0] * d[1] - a[0][1].norm_sqr(),
            d[0] * d[2] - a[0][2].norm_sqr(),
            d[1] * d[2] - a[1][2].norm_sqr(),
        ];
        let det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
            .re;
        if d.iter().chain(&minors2).chain(std::iter::once(&det)).any(|&x| x < -tol) {
            return Err(Error::invalid("density matrix is not positive semidefinite"));
        }
        Ok(())
    }
}
