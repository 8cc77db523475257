//! Real scalar fields stored jointly in physical and spectral form.
//!
//! The forward transform carries the 1/n^2 normalization, so `spectrum[k]`
//! is the Fourier coefficient of `exp(i xi . x)` and Parseval reads
//! `sum |f(x)|^2 / n^2 = sum |fhat(k)|^2`. Both representations are kept in
//! sync; all operators return new fields.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> =
        RefCell::new(HashMap::new());
    static SCRATCH: RefCell<Vec<Complex<f64>>> = RefCell::new(Vec::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        cell.borrow_mut()
            .entry((n, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                let dir = if inverse { FftDirection::Inverse } else { FftDirection::Forward };
                planner.plan_fft(n, dir)
            })
            .clone()
    })
}

/// Cache-blocked in-place transpose of a row-major n*n matrix.
fn transpose(buf: &mut [Complex<f64>], n: usize) {
    const B: usize = 32;
    for jb in (0..n).step_by(B) {
        let jt = (jb + B).min(n);
        for j in jb..jt {
            for i in (j + 1)..jt {
                buf.swap(j * n + i, i * n + j);
            }
        }
        for ib in ((jb + B)..n).step_by(B) {
            let it = (ib + B).min(n);
            for j in jb..jt {
                for i in ib..it {
                    buf.swap(j * n + i, i * n + j);
                }
            }
        }
    }
}

/// In-place 2D FFT over a row-major n*n buffer. Both passes run along
/// contiguous rows with a blocked transpose in between; strided column
/// walks thrash the cache already at n = 512.
pub(crate) fn fft2(buf: &mut [Complex<f64>], n: usize, inverse: bool) {
    let fft = plan(n, inverse);
    SCRATCH.with(|cell| {
        let mut scratch = cell.borrow_mut();
        scratch.resize(fft.get_inplace_scratch_len(), Complex::default());
        for row in buf.chunks_exact_mut(n) {
            fft.process_with_scratch(row, &mut scratch);
        }
        transpose(buf, n);
        for row in buf.chunks_exact_mut(n) {
            fft.process_with_scratch(row, &mut scratch);
        }
        transpose(buf, n);
    });
}

#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: GridSpec,
    values: Vec<f64>,
    spectrum: Vec<Complex<f64>>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        let n2 = grid.n() * grid.n();
        Self { grid, values: vec![0.0; n2], spectrum: vec![Complex::default(); n2] }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        let n = grid.n();
        if values.len() != n * n {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                n * n,
                values.len()
            )));
        }
        let mut buf: Vec<Complex<f64>> =
            values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft2(&mut buf, n, false);
        let scale = 1.0 / (n * n) as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
        Ok(Self { grid, values, spectrum: buf })
    }

    /// Build a field from a spectrum. The spectrum is symmetrized first so
    /// the physical field is exactly real.
    pub fn from_spectrum(grid: GridSpec, spectrum: Vec<Complex<f64>>) -> Result<Self> {
        let n = grid.n();
        if spectrum.len() != n * n {
            return Err(Error::GridMismatch(format!(
                "expected {} modes, got {}",
                n * n,
                spectrum.len()
            )));
        }
        let mut sym = spectrum;
        for j in 0..n {
            let jm = (n - j) % n;
            for i in 0..n {
                let im = (n - i) % n;
                let a = sym[j * n + i];
                let b = sym[jm * n + im].conj();
                let avg = 0.5 * (a + b);
                sym[j * n + i] = avg;
                sym[jm * n + im] = avg.conj();
            }
        }
        let mut buf = sym.clone();
        fft2(&mut buf, n, true);
        let values = buf.iter().map(|c| c.re).collect();
        Ok(Self { grid, values, spectrum: sym })
    }

    /// Sample `f(x1, x2)` on the centered grid.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let n = grid.n();
        let mut values = vec![0.0; n * n];
        use rayon::prelude::*;
        values
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(j, row)| {
                let y = grid.coord(j);
                for (i, v) in row.iter_mut().enumerate() {
                    *v = f(grid.coord(i), y);
                }
            });
        Self::from_values(grid, values).expect("length matches by construction")
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spectrum(&self) -> &[Complex<f64>] {
        &self.spectrum
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Apply a spectral multiplier `m(xi1, xi2)`; the zero mode is passed
    /// through `m(0,0)` unchanged, callers decide what happens there.
    pub fn multiplied(&self, m: impl Fn(f64, f64) -> Complex<f64>) -> Self {
        let n = self.grid.n();
        let mut spec = self.spectrum.clone();
        for j in 0..n {
            let k2 = self.grid.wavenumber(j);
            for i in 0..n {
                let k1 = self.grid.wavenumber(i);
                spec[j * n + i] *= m(k1, k2);
            }
        }
        Self::from_spectrum(self.grid, spec).expect("same grid")
    }

    /// Zero every mode outside the dealias band. Idempotent.
    pub fn dealias(&self) -> Self {
        let n = self.grid.n();
        let cut = self.grid.dealias_cutoff();
        let mut spec = self.spectrum.clone();
        for j in 0..n {
            let mj = self.grid.mode(j).abs();
            for i in 0..n {
                if self.grid.mode(i).abs() > cut || mj > cut {
                    spec[j * n + i] = Complex::default();
                }
            }
        }
        Self::from_spectrum(self.grid, spec).expect("same grid")
    }

    /// Pointwise product followed by dealiasing. For inputs already inside
    /// the dealias band this equals the exact spectral convolution on the
    /// retained modes.
    pub fn product(&self, other: &SpectralField) -> Result<Self> {
        self.grid.same_as(&other.grid)?;
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self::from_values(self.grid, values)?.dealias())
    }

    /// Linear in both representations, so no transform is spent here.
    pub fn add_scaled(&self, other: &SpectralField, c: f64) -> Result<Self> {
        self.grid.same_as(&other.grid)?;
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + c * b)
            .collect();
        let spectrum: Vec<Complex<f64>> = self
            .spectrum
            .iter()
            .zip(&other.spectrum)
            .map(|(a, b)| a + b * c)
            .collect();
        Ok(Self { grid: self.grid, values, spectrum })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
            spectrum: self.spectrum.iter().map(|s| s * c).collect(),
        }
    }

    /// Evaluate the trigonometric interpolant at an arbitrary point.
    /// Direct mode sum, intended for a handful of probe points.
    pub fn eval_at(&self, x1: f64, x2: f64) -> f64 {
        let n = self.grid.n();
        let mut acc = Complex::new(0.0, 0.0);
        for j in 0..n {
            let k2 = self.grid.wavenumber(j);
            let e2 = Complex::from_polar(1.0, k2 * x2);
            let mut row = Complex::new(0.0, 0.0);
            for i in 0..n {
                let k1 = self.grid.wavenumber(i);
                row += self.spectrum[j * n + i] * Complex::from_polar(1.0, k1 * x1);
            }
            acc += row * e2;
        }
        acc.re
    }

    /// Fraction of spectral energy in the outer 10% band of retained modes.
    /// A large fraction signals marginal resolution.
    pub fn tail_energy_fraction(&self) -> f64 {
        let n = self.grid.n();
        let cut = self.grid.dealias_cutoff();
        let edge = (0.9 * cut as f64) as i64;
        let mut total = 0.0;
        let mut tail = 0.0;
        for j in 0..n {
            let mj = self.grid.mode(j).abs();
            for i in 0..n {
                let mi = self.grid.mode(i).abs();
                if mi > cut || mj > cut {
                    continue;
                }
                let e = self.spectrum[j * n + i].norm_sqr();
                total += e;
                if mi.max(mj) > edge {
                    tail += e;
                }
            }
        }
        if total > 0.0 {
            tail / total
        } else {
            0.0
        }
    }
}
