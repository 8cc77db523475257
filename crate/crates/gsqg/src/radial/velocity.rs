//! Free-space velocity of radial and near-radial densities by direct
//! polar-coordinate kernel quadrature.
//!
//! The velocity of a scalar density q is
//!     v(x) = A(gamma) PV int (x - y)^perp / |x - y|^{3+gamma} q(y) dy,
//! (a, b)^perp = (-b, a), which matches the spectral definition
//! v1^ = -i xi2 |xi|^{gamma-1} q^, v2^ = +i xi1 |xi|^{gamma-1} q^.
//! In the frame of an evaluation point at radius r, with y at radius rho
//! and relative angle a, the kernel components are
//!     angular: (r - rho cos a) / D^{(3+gamma)/2},
//!     radial:   rho sin a      / D^{(3+gamma)/2},
//! D = r^2 + rho^2 - 2 r rho cos a.

use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::radial::profile::RadialProfile;
use crate::radial::QuadratureSpec;

/// Riesz potential constant C(gamma) = Gamma((1+gamma)/2) /
/// (2^{1-gamma} pi Gamma((1-gamma)/2)); the kernel of |x|^{-(1+gamma)}
/// representing the |xi|^{gamma-1} multiplier.
pub fn riesz_constant(gamma: f64) -> f64 {
    gamma_fn(0.5 * (1.0 + gamma))
        / (2.0f64.powf(1.0 - gamma) * std::f64::consts::PI * gamma_fn(0.5 * (1.0 - gamma)))
}

/// Prefactor A(gamma) = -(1+gamma) C(gamma) of the velocity kernel;
/// differentiation of the Riesz kernel brings down the -(1+gamma).
pub fn velocity_constant(gamma: f64) -> f64 {
    -(1.0 + gamma) * riesz_constant(gamma)
}

/// Far-field limit of r^{4+gamma} d(omega)/dr for a density of unit radial
/// mass (int rho q(rho) d rho = 1, i.e. total mass 2 pi).
pub fn rotation_limit_constant(gamma: f64) -> f64 {
    2.0 * std::f64::consts::PI * (3.0 + gamma) * (1.0 + gamma) * riesz_constant(gamma)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma <= -1.0 || gamma >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} outside the open interval (-1, 1)"
        )));
    }
    Ok(())
}

/// Panels over [a, b] with widths growing geometrically away from the
/// endpoint nearest to `center` (or from `center` itself when interior),
/// capped at `max_width`.
fn graded_panels(a: f64, b: f64, center: f64, first: f64, max_width: f64) -> Vec<(f64, f64)> {
    const RATIO: f64 = 3.0;
    assert!(b > a && first > 0.0 && max_width > 0.0);
    let mut panels = Vec::new();
    if center > a && center < b {
        let mut left = ladder(center, a, first, RATIO, max_width);
        left.reverse();
        panels.extend(left.into_iter().map(|(x, y)| (y, x)));
        panels.extend(ladder(center, b, first, RATIO, max_width));
    } else if center <= a {
        let start = first.max(0.3 * (a - center));
        panels.extend(ladder(a, b, start, RATIO, max_width));
    } else {
        let start = first.max(0.3 * (center - b));
        let mut down = ladder(b, a, start, RATIO, max_width);
        down.reverse();
        panels.extend(down.into_iter().map(|(x, y)| (y, x)));
    }
    panels
}

/// Geometric ladder from `from` toward `to` (either direction); panels are
/// returned as (near, far) pairs in march order.
fn ladder(from: f64, to: f64, first: f64, ratio: f64, max_width: f64) -> Vec<(f64, f64)> {
    let dir = if to > from { 1.0 } else { -1.0 };
    let span = (to - from).abs();
    let mut panels = Vec::new();
    let mut off = 0.0;
    let mut width = first.min(span).min(max_width);
    while off < span {
        let mut next = (off + width).min(span);
        if span - next < 0.25 * width {
            next = span;
        }
        panels.push((from + dir * off, from + dir * next));
        off = next;
        width = (width * ratio).min(max_width);
    }
    panels
}

/// 2 int_{a0}^{pi} (r - rho cos a) D^{-(3+gamma)/2} da, graded toward a0.
fn kernel_angular_plain(
    r: f64,
    rho: f64,
    gamma: f64,
    a0: f64,
    nodes: usize,
) -> f64 {
    let expo = -0.5 * (3.0 + gamma);
    let width = ((r - rho).abs() / (r * rho).sqrt().max(1e-300)).max(1e-9);
    let first = (a0.max(width) * 0.5).max(1e-9);
    let panels = ladder(a0, std::f64::consts::PI, first, 3.0, std::f64::consts::FRAC_PI_4);
    let (gn, gw) = gauss_legendre(nodes);
    let mut sum = 0.0;
    for &(pa, pb) in &panels {
        let mid = 0.5 * (pa + pb);
        let half = 0.5 * (pb - pa);
        let mut acc = 0.0;
        for (x, w) in gn.iter().zip(&gw) {
            let a = mid + half * x;
            let cosa = a.cos();
            // (r-rho)^2 + 4 r rho sin^2(a/2): no cancellation near rho = r.
            let s = (0.5 * a).sin();
            let d = (r - rho) * (r - rho) + 4.0 * r * rho * s * s;
            acc += w * (r - rho * cosa) * d.powf(expo);
        }
        sum += half * acc;
    }
    2.0 * sum
}

/// Oscillatory angular kernels at order n:
///   Kc = 2 int (r - rho cos a) cos(n a) D^{-(3+gamma)/2} da,
///   Ks = 2 int  rho sin a      sin(n a) D^{-(3+gamma)/2} da,
/// both from a0 to pi, evaluated in one pass.
fn kernel_angular_oscillatory(
    r: f64,
    rho: f64,
    n_osc: u32,
    gamma: f64,
    a0: f64,
    nodes: usize,
) -> (f64, f64) {
    let expo = -0.5 * (3.0 + gamma);
    let width = ((r - rho).abs() / (r * rho).sqrt().max(1e-300)).max(1e-9);
    let first = (a0.max(width) * 0.5).max(1e-9);
    let cap = (6.0 / n_osc.max(1) as f64).min(std::f64::consts::FRAC_PI_4);
    let panels = ladder(a0, std::f64::consts::PI, first, 3.0, cap);
    let (gn, gw) = gauss_legendre(nodes);
    let nf = n_osc as f64;
    let mut kc = 0.0;
    let mut ks = 0.0;
    for &(pa, pb) in &panels {
        let mid = 0.5 * (pa + pb);
        let half = 0.5 * (pb - pa);
        let mut acc_c = 0.0;
        let mut acc_s = 0.0;
        for (x, w) in gn.iter().zip(&gw) {
            let a = mid + half * x;
            let (sina, cosa) = a.sin_cos();
            let s = (0.5 * a).sin();
            let d = (r - rho) * (r - rho) + 4.0 * r * rho * s * s;
            let k = d.powf(expo);
            acc_c += w * (r - rho * cosa) * (nf * a).cos() * k;
            acc_s += w * rho * sina * (nf * a).sin() * k;
        }
        kc += half * acc_c;
        ks += half * acc_s;
    }
    (2.0 * kc, 2.0 * ks)
}

/// Angular (azimuthal) velocity component of a radial density at radius r.
/// Uses the subtracted absolutely convergent form
///   v_a(r) = A int rho (f(rho) - f(r)) K0(r, rho) d rho  +  tail,
/// valid because a constant density induces no velocity; the tail restores
/// the subtracted constant outside the truncation radius analytically.
pub fn angular_velocity(
    f: &RadialProfile,
    r: f64,
    gamma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_gamma(gamma)?;
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius r = {r} must be positive")));
    }
    let (s0, s1) = f.support();
    if s1 <= s0 {
        return Ok(0.0);
    }
    let fr = f.eval(r);
    let scale = r.max(s1);
    let r_out = 2.0 * scale;
    let (lo, hi) = if fr == 0.0 { (s0, s1) } else { (0.0, r_out) };
    let max_w = spec.split_radius * scale;
    let first = 1e-7 * scale;
    let panels = graded_panels(lo, hi, r, first, max_w);
    let (gn, gw) = gauss_legendre(spec.radial_nodes);
    let mut main = 0.0;
    for &(pa, pb) in &panels {
        let mid = 0.5 * (pa + pb);
        let half = 0.5 * (pb - pa);
        let mut acc = 0.0;
        for (x, w) in gn.iter().zip(&gw) {
            let rho = mid + half * x;
            if rho <= 0.0 {
                continue;
            }
            let dens = f.eval(rho) - fr;
            if dens == 0.0 {
                continue;
            }
            acc += w * rho * dens * kernel_angular_plain(r, rho, gamma, 0.0, spec.angular_nodes);
        }
        main += half * acc;
    }
    let mut tail = 0.0;
    if fr != 0.0 {
        // -f(r) r^{-gamma} int_0^{r/R} u^{gamma-1} G(u) du, G(u) the scaled
        // angular kernel; G(u) ~ -pi (1+gamma) u near 0, so the integrand is
        // u^gamma at worst and geometric grading toward 0 resolves it.
        let u_max = r / r_out;
        let expo = -0.5 * (3.0 + gamma);
        let g_of = |u: f64| -> f64 {
            let (un, uw) = gauss_legendre(spec.angular_nodes);
            let panels = ladder(0.0, std::f64::consts::PI, std::f64::consts::FRAC_PI_4, 2.0, std::f64::consts::FRAC_PI_4);
            let mut s = 0.0;
            for &(pa, pb) in &panels {
                let mid = 0.5 * (pa + pb);
                let half = 0.5 * (pb - pa);
                let mut acc = 0.0;
                for (x, w) in un.iter().zip(&uw) {
                    let a = mid + half * x;
                    let cosa = a.cos();
                    let s = (0.5 * a).sin();
                    let d = (1.0 - u) * (1.0 - u) + 4.0 * u * s * s;
                    acc += w * (u - cosa) * d.powf(expo);
                }
                s += half * acc;
            }
            2.0 * s
        };
        let u_panels = ladder(0.0, u_max, 1e-6 * u_max, 3.0, 0.2 * u_max);
        let (un, uw) = gauss_legendre(spec.radial_nodes);
        let mut t = 0.0;
        for &(pa, pb) in &u_panels {
            let mid = 0.5 * (pa + pb);
            let half = 0.5 * (pb - pa);
            let mut acc = 0.0;
            for (x, w) in un.iter().zip(&uw) {
                let u = mid + half * x;
                if u <= 0.0 {
                    continue;
                }
                acc += w * u.powf(gamma - 1.0) * g_of(u);
            }
            t += half * acc;
        }
        tail = -fr * r.powf(-gamma) * t;
    }
    Ok(velocity_constant(gamma) * (main + tail))
}

/// Self-checking variant: recomputes at refined settings and rejects if the
/// two runs disagree by more than `spec.tolerance` relative.
pub fn angular_velocity_verified(
    f: &RadialProfile,
    r: f64,
    gamma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let base = angular_velocity(f, r, gamma, spec)?;
    let fine = angular_velocity(f, r, gamma, &spec.refined())?;
    let denom = fine.abs().max(1e-300);
    if ((base - fine) / denom).abs() > spec.tolerance {
        return Err(Error::QuadratureNonConvergence(format!(
            "angular velocity at r = {r}: base {base:e} vs refined {fine:e}"
        )));
    }
    Ok(fine)
}

/// d(omega)/dr of the rotation omega(r) = v_a(r)/r generated by a radial
/// density, at radii strictly outside its support (the only regime the
/// constructions need; inside, the differentiated kernel is not absolutely
/// convergent and this routine refuses).
pub fn differential_rotation(
    f: &RadialProfile,
    r: f64,
    gamma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_gamma(gamma)?;
    let (s0, s1) = f.support();
    if s1 <= s0 {
        return Ok(0.0);
    }
    if r >= s0 && r <= s1 {
        return Err(Error::InvalidParameter(format!(
            "differential rotation needs r outside the source support [{s0:.3e}, {s1:.3e}], got r = {r:.3e}"
        )));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius r = {r} must be positive")));
    }
    let expo3 = -0.5 * (3.0 + gamma);
    let expo5 = -0.5 * (5.0 + gamma);
    let scale = r.max(s1);
    let max_w = spec.split_radius * scale;
    let panels = graded_panels(s0, s1, r, 1e-7 * scale, max_w);
    let (gn, gw) = gauss_legendre(spec.radial_nodes);
    let (an, aw) = gauss_legendre(spec.angular_nodes);
    let mut sum = 0.0;
    for &(pa, pb) in &panels {
        let mid = 0.5 * (pa + pb);
        let half = 0.5 * (pb - pa);
        let mut acc = 0.0;
        for (x, w) in gn.iter().zip(&gw) {
            let rho = mid + half * x;
            let dens = f.eval(rho);
            if dens == 0.0 {
                continue;
            }
            // Angular sweep of the differentiated bracket kernel.
            let width = ((r - rho).abs() / (r * rho).sqrt()).max(1e-9);
            let apanels = ladder(0.0, std::f64::consts::PI, 0.5 * width, 3.0, std::f64::consts::FRAC_PI_4);
            let mut ang = 0.0;
            for &(qa, qb) in &apanels {
                let amid = 0.5 * (qa + qb);
                let ahalf = 0.5 * (qb - qa);
                let mut aacc = 0.0;
                for (y, v) in an.iter().zip(&aw) {
                    let a = amid + ahalf * y;
                    let cosa = a.cos();
                    let proj = r - rho * cosa;
                    let s = (0.5 * a).sin();
                    let d = (r - rho) * (r - rho) + 4.0 * r * rho * s * s;
                    let k3 = d.powf(expo3);
                    let k5 = d.powf(expo5);
                    aacc += v * (k3 - (3.0 + gamma) * proj * proj * k5 - proj * k3 / r);
                }
                ang += ahalf * aacc;
            }
            acc += w * rho * dens * 2.0 * ang;
        }
        sum += half * acc;
    }
    Ok(velocity_constant(gamma) * sum / r)
}

pub fn differential_rotation_verified(
    f: &RadialProfile,
    r: f64,
    gamma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let base = differential_rotation(f, r, gamma, spec)?;
    let fine = differential_rotation(f, r, gamma, &spec.refined())?;
    let denom = fine.abs().max(1e-300);
    if ((base - fine) / denom).abs() > spec.tolerance {
        return Err(Error::QuadratureNonConvergence(format!(
            "differential rotation at r = {r}: base {base:e} vs refined {fine:e}"
        )));
    }
    Ok(fine)
}

/// Velocity of the oscillatory density
///     q(rho, phi) = envelope(rho) sin(n phi - phase(rho))
/// at every angle in `alphas` on the ring of radius r, returned as
/// (angular, radial) component pairs.
///
/// The integral is a principal value for gamma >= 0; a metric disk of
/// radius eps = pv_epsilon * r is excised around the evaluation point and
/// the eps -> 0 limit is Richardson-extrapolated with the known eps^{1-gamma}
/// error exponent. By symmetry of the disk the excised odd kernel mass
/// cancels against the density value at the point, so the extrapolation
/// starts from an O(eps^{1-gamma}) error, not O(eps^{-gamma}).
pub fn oscillatory_velocity_ring(
    envelope: &RadialProfile,
    phase: &RadialProfile,
    n_osc: u32,
    gamma: f64,
    r: f64,
    alphas: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>> {
    check_gamma(gamma)?;
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius r = {r} must be positive")));
    }
    if n_osc == 0 {
        return Err(Error::InvalidParameter("oscillation order must be >= 1".into()));
    }
    let eps = spec.pv_epsilon * r;
    let coarse = ring_pass(envelope, phase, n_osc, gamma, r, alphas, spec, eps)?;
    let fine = ring_pass(envelope, phase, n_osc, gamma, r, alphas, spec, 0.5 * eps)?;
    let fac = 1.0 / (2.0f64.powf(1.0 - gamma) - 1.0);
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| {
            (
                f.0 + (f.0 - c.0) * fac,
                f.1 + (f.1 - c.1) * fac,
            )
        })
        .collect())
}

/// Which polar velocity component to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityComponent {
    Radial,
    Angular,
}

/// Velocity component at a single point (r, alpha) of the perturbation
///     p(rho, phi) = envelope(rho) sin(n phi - n alpha0(rho)),
/// the building block of the rotating two-scale data. Order n = 0 means no
/// oscillation at all: the density is then the bare envelope, so the
/// angular component falls back to the radial machinery and the radial
/// component vanishes by symmetry.
#[allow(clippy::too_many_arguments)]
pub fn perturbation_velocity_polar(
    envelope: &RadialProfile,
    alpha0: &RadialProfile,
    n_osc: u32,
    gamma: f64,
    component: VelocityComponent,
    r: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if n_osc == 0 {
        return match component {
            VelocityComponent::Angular => angular_velocity(envelope, r, gamma, spec),
            VelocityComponent::Radial => Ok(0.0),
        };
    }
    let phase = alpha0.scale(n_osc as f64);
    let (va, vr) = oscillatory_velocity(envelope, &phase, n_osc, gamma, r, alpha, spec)?;
    Ok(match component {
        VelocityComponent::Angular => va,
        VelocityComponent::Radial => vr,
    })
}

/// Single-point wrapper around the ring evaluation.
pub fn oscillatory_velocity(
    envelope: &RadialProfile,
    phase: &RadialProfile,
    n_osc: u32,
    gamma: f64,
    r: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    Ok(oscillatory_velocity_ring(envelope, phase, n_osc, gamma, r, &[alpha], spec)?[0])
}

#[allow(clippy::too_many_arguments)]
fn ring_pass(
    envelope: &RadialProfile,
    phase: &RadialProfile,
    n_osc: u32,
    gamma: f64,
    r: f64,
    alphas: &[f64],
    spec: &QuadratureSpec,
    eps: f64,
) -> Result<Vec<(f64, f64)>> {
    let (e0, e1) = envelope.support();
    if e1 <= e0 {
        return Ok(vec![(0.0, 0.0); alphas.len()]);
    }
    let scale = r.max(e1);
    // Cap radial panels so the radially varying phase stays resolved.
    let mut max_slope: f64 = 0.0;
    for k in 0..64 {
        let rho = e0 + (e1 - e0) * k as f64 / 63.0;
        max_slope = max_slope.max(phase.deriv(rho).abs());
    }
    let max_w = (spec.split_radius * scale).min(2.0 / max_slope.max(1e-300));
    let panels = graded_panels(e0, e1, r, (0.5 * eps).max(1e-9 * scale), max_w);
    let (gn, gw) = gauss_legendre(spec.radial_nodes);
    let nf = n_osc as f64;
    // Precompute per-node data; the angular kernels are independent of the
    // evaluation angle, so one radial sweep serves every alpha.
    struct Node {
        weight: f64,
        phase: f64,
        kc: f64,
        ks: f64,
    }
    let mut nodes = Vec::new();
    for &(pa, pb) in &panels {
        let mid = 0.5 * (pa + pb);
        let half = 0.5 * (pb - pa);
        for (x, w) in gn.iter().zip(&gw) {
            let rho = mid + half * x;
            if rho <= 0.0 {
                continue;
            }
            let env = envelope.eval(rho);
            if env == 0.0 {
                continue;
            }
            let h = rho - r;
            let a0 = if h.abs() < eps {
                // Angular start of the excised metric disk |x - y| < eps.
                let c = 1.0 - (eps * eps - h * h) / (2.0 * r * rho);
                c.clamp(-1.0, 1.0).acos()
            } else {
                0.0
            };
            let (kc, ks) =
                kernel_angular_oscillatory(r, rho, n_osc, gamma, a0, spec.angular_nodes);
            nodes.push(Node {
                weight: half * w * rho * env,
                phase: phase.eval(rho),
                kc,
                ks,
            });
        }
    }
    let a_const = velocity_constant(gamma);
    let out = alphas
        .iter()
        .map(|&alpha| {
            let mut va = 0.0;
            let mut vr = 0.0;
            for node in &nodes {
                let arg = nf * alpha - node.phase;
                va += node.weight * arg.sin() * node.kc;
                vr += node.weight * arg.cos() * node.ks;
            }
            (a_const * va, a_const * vr)
        })
        .collect();
    Ok(out)
}
