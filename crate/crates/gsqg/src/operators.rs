//! Fourier multiplier operators: fractional Laplacian powers, their
//! derivative family, gradients, and the nonlocal velocity.

use rustfft::num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::SpectralField;

/// Fractional Laplacian power: multiplier |xi|^alpha, zero mode annihilated
/// for alpha < 0 and left alone for alpha >= 0 (where |xi|^alpha -> 0 or 1).
pub fn fractional_laplacian(f: &SpectralField, alpha: f64) -> SpectralField {
    f.multiplied(|k1, k2| {
        let r2 = k1 * k1 + k2 * k2;
        if r2 == 0.0 {
            if alpha == 0.0 {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        } else {
            Complex::new(r2.powf(0.5 * alpha), 0.0)
        }
    })
}

/// Partial derivative of order `j = (j1, j2)`, via (i xi)^j.
pub fn derivative(f: &SpectralField, j1: u32, j2: u32) -> SpectralField {
    f.multiplied(|k1, k2| {
        Complex::new(0.0, k1).powu(j1) * Complex::new(0.0, k2).powu(j2)
    })
}

pub fn gradient(f: &SpectralField) -> (SpectralField, SpectralField) {
    (derivative(f, 1, 0), derivative(f, 0, 1))
}

/// xi-derivative d^j_xi |xi|^s for |j| <= 2, in closed form.
fn dsj_deriv(s: f64, j1: u32, j2: u32, k1: f64, k2: f64) -> Result<f64> {
    let r2 = k1 * k1 + k2 * k2;
    if r2 == 0.0 {
        return Ok(0.0);
    }
    let r = r2.sqrt();
    let v = match (j1, j2) {
        (0, 0) => r.powf(s),
        (1, 0) => s * k1 * r.powf(s - 2.0),
        (0, 1) => s * k2 * r.powf(s - 2.0),
        (2, 0) => s * r.powf(s - 2.0) + s * (s - 2.0) * k1 * k1 * r.powf(s - 4.0),
        (0, 2) => s * r.powf(s - 2.0) + s * (s - 2.0) * k2 * k2 * r.powf(s - 4.0),
        (1, 1) => s * (s - 2.0) * k1 * k2 * r.powf(s - 4.0),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "derivative order ({j1},{j2}) not supported; |j| <= 2"
            )))
        }
    };
    Ok(v)
}

/// Apply D^{s,j} = i^{-|j|} d^j_xi |xi|^s as a Fourier multiplier. The
/// i^{-|j|} phase (1, -i, or -1) is what keeps the operator real on real
/// input: for odd |j| the xi-derivative is odd, and -i times an odd real
/// symbol is conjugate-symmetric. The zero mode is annihilated (the symbol
/// is singular there for the exponents of interest).
pub fn apply_dsj(f: &SpectralField, s: f64, j1: u32, j2: u32) -> Result<SpectralField> {
    dsj_deriv(s, j1, j2, 1.0, 0.0)?;
    let phase = match (j1 + j2) % 4 {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(0.0, -1.0),
        2 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, 1.0),
    };
    Ok(f.multiplied(move |k1, k2| {
        phase * dsj_deriv(s, j1, j2, k1, k2).expect("order validated")
    }))
}

/// Nonlocal velocity v = (v1, v2) of a scalar field:
///   v1 = -d2 L^{gamma-1} theta,  v2 = +d1 L^{gamma-1} theta,
/// where L^{gamma-1} has multiplier |xi|^{gamma-1}. Divergence free by
/// construction; gamma = 1 recovers the perpendicular gradient.
pub fn velocity(theta: &SpectralField, gamma: f64) -> Result<(SpectralField, SpectralField)> {
    if gamma <= -1.0 || gamma >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} outside the open interval (-1, 1)"
        )));
    }
    let v1 = theta.multiplied(|k1, k2| {
        let r2 = k1 * k1 + k2 * k2;
        if r2 == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        Complex::new(0.0, -k2 * r2.powf(0.5 * (gamma - 1.0)))
    });
    let v2 = theta.multiplied(|k1, k2| {
        let r2 = k1 * k1 + k2 * k2;
        if r2 == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        Complex::new(0.0, k1 * r2.powf(0.5 * (gamma - 1.0)))
    });
    Ok((v1, v2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tau() -> f64 {
        2.0 * std::f64::consts::PI
    }

    #[test]
    fn laplacian_on_plane_wave() {
        let grid = GridSpec::new(32, tau()).unwrap();
        let f = SpectralField::from_fn(grid, |x, y| (3.0 * x).cos() * (4.0 * y).sin());
        let g = fractional_laplacian(&f, 2.0);
        // |xi|^2 with xi = (3,4) is 25.
        let err = f
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| (25.0 * a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-10, "err {err}");
    }

    #[test]
    fn half_laplacian_squares_to_laplacian() {
        let grid = GridSpec::new(32, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let vals: Vec<f64> = (0..32 * 32).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = SpectralField::from_values(grid, vals).unwrap();
        let once = fractional_laplacian(&fractional_laplacian(&f, 0.5), 0.5);
        let direct = fractional_laplacian(&f, 1.0);
        let err = once
            .values()
            .iter()
            .zip(direct.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-10, "err {err}");
    }

    #[test]
    fn derivative_of_sine() {
        let grid = GridSpec::new(64, tau()).unwrap();
        let f = SpectralField::from_fn(grid, |x, _| (5.0 * x).sin());
        let fx = derivative(&f, 1, 0);
        let n = grid.n();
        let mut err = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let x = grid.coord(i);
                err = err.max((fx.values()[j * n + i] - 5.0 * (5.0 * x).cos()).abs());
            }
        }
        assert!(err < 1e-10, "err {err}");
    }

    /// Worked case: f = sin(k x1), s = 2, j = (1,0). The multiplier is
    /// -s xi1 |xi|^{s-2} = -2 xi1 on the two modes xi1 = +-k, which turns
    /// sin(k x1) into -2k cos(k x1) after the i^{-1} factor.
    #[test]
    fn dsj_worked_example() {
        let grid = GridSpec::new(64, tau()).unwrap();
        for k in [1.0f64, 3.0, 7.0] {
            let f = SpectralField::from_fn(grid, |x, _| (k * x).sin());
            let g = apply_dsj(&f, 2.0, 1, 0).unwrap();
            let n = grid.n();
            let mut err = 0.0f64;
            for j in 0..n {
                for i in 0..n {
                    let x = grid.coord(i);
                    let expect = -2.0 * k * (k * x).cos();
                    err = err.max((g.values()[j * n + i] - expect).abs());
                }
            }
            assert!(err < 1e-9, "k={k} err {err}");
        }
    }

    /// D^{s,j} must be real on real input and odd symbols must be
    /// anti-self-adjoint in L^2. Checked with seeded random fields.
    #[test]
    fn dsj_realness_and_symmetry() {
        let grid = GridSpec::new(32, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..3 {
            let a: Vec<f64> = (0..32 * 32).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..32 * 32).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let fa = SpectralField::from_values(grid, a).unwrap();
            let fb = SpectralField::from_values(grid, b).unwrap();
            let s = 1.3;
            let ga = apply_dsj(&fa, s, 1, 0).unwrap();
            let gb = apply_dsj(&fb, s, 1, 0).unwrap();
            let dot = |u: &SpectralField, v: &SpectralField| -> f64 {
                u.values().iter().zip(v.values()).map(|(x, y)| x * y).sum()
            };
            // odd symbol: <D f, g> = -<f, D g>
            let lhs = dot(&ga, &fb);
            let rhs = -dot(&fa, &gb);
            assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn velocity_is_divergence_free() {
        let grid = GridSpec::new(64, tau()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let vals: Vec<f64> = (0..64 * 64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let theta = SpectralField::from_values(grid, vals).unwrap();
        for gamma in [-0.5, 0.0, 0.5, 0.9] {
            let (v1, v2) = velocity(&theta, gamma).unwrap();
            let div = derivative(&v1, 1, 0)
                .add_scaled(&derivative(&v2, 0, 1), 1.0)
                .unwrap();
            assert!(div.max_abs() < 1e-9, "gamma {gamma}: div {}", div.max_abs());
        }
    }

    #[test]
    fn gamma_one_limit_is_perpendicular_gradient() {
        // gamma = 1 itself is rejected; approach it and compare against
        // (-d2, d1) of theta.
        let grid = GridSpec::new(32, tau()).unwrap();
        let theta = SpectralField::from_fn(grid, |x, y| (2.0 * x).sin() * (3.0 * y).cos());
        let (v1, v2) = velocity(&theta, 1.0 - 1e-12).unwrap();
        let g1 = derivative(&theta, 0, 1).scale(-1.0);
        let g2 = derivative(&theta, 1, 0);
        let e1 = v1
            .values()
            .iter()
            .zip(g1.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let e2 = v2
            .values()
            .iter()
            .zip(g2.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(e1 < 1e-9 && e2 < 1e-9, "e1 {e1} e2 {e2}");
    }

    #[test]
    fn velocity_rejects_gamma_outside_range() {
        let grid = GridSpec::new(32, 1.0).unwrap();
        let theta = SpectralField::zeros(grid);
        assert!(velocity(&theta, 1.0).is_err());
        assert!(velocity(&theta, -1.0).is_err());
        assert!(velocity(&theta, 1.5).is_err());
    }
}
