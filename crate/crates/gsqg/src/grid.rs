//! Uniform periodic grid on the square `[-L/2, L/2)^2`.
//!
//! Mode indices follow the usual FFT wrap: index `i` carries integer
//! wavenumber `i` for `i <= n/2 - 1` and `i - n` otherwise, so the physical
//! wavenumber is `2*pi*k/L`. The dealias cutoff keeps `|k| <= floor(f*n/2)`,
//! the classical 2/3 rule for `f = 2/3`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    length: f64,
    dealias_fraction: f64,
}

impl GridSpec {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        Self::with_dealias(n, length, 2.0 / 3.0)
    }

    pub fn with_dealias(n: usize, length: f64, dealias_fraction: f64) -> Result<Self> {
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "grid size must be even and at least 16, got {n}"
            )));
        }
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "box length must be positive, got {length}"
            )));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "dealias fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        Ok(Self { n, length, dealias_fraction })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Physical coordinate of sample `i`, wrapped so index 0 sits at the
    /// origin and the upper index half covers [-L/2, 0). With this layout
    /// the FFT bins are the true Fourier coefficients, no phase correction.
    pub fn coord(&self, i: usize) -> f64 {
        self.mode(i) as f64 * self.dx()
    }

    /// Signed integer mode for FFT bin `i`.
    pub fn mode(&self, i: usize) -> i64 {
        if i <= self.n / 2 - 1 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Physical wavenumber `2*pi*mode/L` for FFT bin `i`.
    pub fn wavenumber(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.mode(i) as f64 / self.length
    }

    /// Largest retained integer mode magnitude under the dealias rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.dealias_fraction * (self.n / 2) as f64).floor() as i64
    }

    pub fn same_as(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}
