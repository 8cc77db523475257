//! Sobolev norms and conserved quantities, evaluated on the spectral side.
//!
//! With the 1/n^2 forward normalization, Parseval on the L-periodic box reads
//!   ||f||_{L^2}^2 = L^2 sum_xi |fhat(xi)|^2,
//! and the homogeneous H^s seminorm inserts |xi|^{2s} (zero mode dropped).

use crate::error::{Error, Result};
use crate::field::SpectralField;

#[derive(Debug, Clone, Copy)]
pub struct SobolevSpec {
    pub s: f64,
    /// true: seminorm ||  |xi|^s fhat ||; false: ||f||_{L^2} + seminorm.
    pub homogeneous: bool,
}

impl SobolevSpec {
    pub fn homogeneous(s: f64) -> Self {
        Self { s, homogeneous: true }
    }

    pub fn inhomogeneous(s: f64) -> Self {
        Self { s, homogeneous: false }
    }
}

pub fn l2_norm(f: &SpectralField) -> f64 {
    let l = f.grid().length();
    let sum: f64 = f.spectrum().iter().map(|c| c.norm_sqr()).sum();
    l * sum.sqrt()
}

pub fn hdot_norm(f: &SpectralField, s: f64) -> f64 {
    let grid = f.grid();
    let n = grid.n();
    let mut sum = 0.0;
    for j in 0..n {
        let k2 = grid.wavenumber(j);
        for i in 0..n {
            let k1 = grid.wavenumber(i);
            let r2 = k1 * k1 + k2 * k2;
            if r2 == 0.0 {
                continue;
            }
            sum += r2.powf(s) * f.spectrum()[j * n + i].norm_sqr();
        }
    }
    grid.length() * sum.sqrt()
}

pub fn sobolev_norm(f: &SpectralField, spec: SobolevSpec) -> Result<f64> {
    if !spec.s.is_finite() {
        return Err(Error::InvalidParameter(format!("s = {} not finite", spec.s)));
    }
    let semi = hdot_norm(f, spec.s);
    Ok(if spec.homogeneous { semi } else { l2_norm(f) + semi })
}

/// Conserved Hamiltonian of the active scalar flow:
///   H = L^2 sum_{xi != 0} |xi|^{gamma-1} |theta_hat|^2.
pub fn hamiltonian(theta: &SpectralField, gamma: f64) -> f64 {
    let grid = theta.grid();
    let n = grid.n();
    let mut sum = 0.0;
    for j in 0..n {
        let k2 = grid.wavenumber(j);
        for i in 0..n {
            let k1 = grid.wavenumber(i);
            let r2 = k1 * k1 + k2 * k2;
            if r2 == 0.0 {
                continue;
            }
            sum += r2.powf(0.5 * (gamma - 1.0)) * theta.spectrum()[j * n + i].norm_sqr();
        }
    }
    grid.length() * grid.length() * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn tau() -> f64 {
        2.0 * std::f64::consts::PI
    }

    #[test]
    fn l2_of_sine_on_torus() {
        // ||sin(3x)||_{L^2} over [0, 2pi)^2 is sqrt(2 pi^2) = pi sqrt(2).
        let grid = GridSpec::new(64, tau()).unwrap();
        let f = SpectralField::from_fn(grid, |x, _| (3.0 * x).sin());
        let expect = std::f64::consts::PI * 2.0f64.sqrt();
        assert!((l2_norm(&f) - expect).abs() < 1e-12);
    }

    #[test]
    fn hdot_scales_plane_waves_by_wavenumber_power() {
        let grid = GridSpec::new(64, tau()).unwrap();
        for k in [2.0f64, 5.0, 9.0] {
            let f = SpectralField::from_fn(grid, |x, y| (k * x).sin() * (k * y).cos());
            let s = 1.7;
            let expect = (k * 2.0f64.sqrt()).powf(s) * l2_norm(&f);
            let got = hdot_norm(&f, s);
            assert!(
                (got - expect).abs() < 1e-10 * expect,
                "k={k}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn hdot_zero_is_l2_for_mean_free_fields() {
        let grid = GridSpec::new(32, tau()).unwrap();
        let f = SpectralField::from_fn(grid, |x, y| (x).sin() + (2.0 * y).cos());
        assert!((hdot_norm(&f, 0.0) - l2_norm(&f)).abs() < 1e-12);
    }

    #[test]
    fn norms_scale_linearly_in_amplitude() {
        let grid = GridSpec::new(32, 1.0).unwrap();
        let f = SpectralField::from_fn(grid, |x, y| {
            (tau() * 3.0 * x).sin() * (tau() * y).cos() + 0.3 * (tau() * 2.0 * y).sin()
        });
        let g = f.scale(2.5);
        for s in [0.5, 1.0, 2.2] {
            let a = sobolev_norm(&f, SobolevSpec::inhomogeneous(s)).unwrap();
            let b = sobolev_norm(&g, SobolevSpec::inhomogeneous(s)).unwrap();
            assert!((b - 2.5 * a).abs() < 1e-10 * b);
        }
    }

    #[test]
    fn hamiltonian_of_plane_wave() {
        // theta = sin(k x): H = L^2 * k^{gamma-1} * 2 |c|^2 with c = 1/(2i).
        let grid = GridSpec::new(64, tau()).unwrap();
        let k = 4.0;
        let theta = SpectralField::from_fn(grid, |x, _| (k * x).sin());
        for gamma in [-0.5, 0.0, 0.5] {
            let expect = tau() * tau() * k.powf(gamma - 1.0) * 0.5;
            let got = hamiltonian(&theta, gamma);
            assert!(
                (got - expect).abs() < 1e-10 * expect.abs(),
                "gamma={gamma}: {got} vs {expect}"
            );
        }
    }
}
