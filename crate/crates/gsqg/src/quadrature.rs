//! Gauss-Legendre quadrature with graded panel decompositions.
//!
//! Nodes and weights come from Newton iteration on the Legendre polynomial;
//! panel builders produce geometric subdivisions for integrands that are
//! smooth away from an endpoint singularity.

use std::cell::RefCell;
use std::collections::HashMap;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    thread_local! {
        static CACHE: RefCell<HashMap<usize, (Vec<f64>, Vec<f64>)>> =
            RefCell::new(HashMap::new());
    }
    CACHE.with(|cell| {
        cell.borrow_mut()
            .entry(n)
            .or_insert_with(|| compute_gauss_legendre(n))
            .clone()
    })
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for k in 0..m {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_and_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over [a, b] with an n-point rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        sum += w * f(mid + half * x);
    }
    half * sum
}

/// Integrate over a list of panels, n points each.
pub fn integrate_panels(f: impl Fn(f64) -> f64, panels: &[(f64, f64)], n: usize) -> f64 {
    panels.iter().map(|&(a, b)| integrate(&f, a, b, n)).sum()
}

/// Geometric panels from `a` outward to `b` with the first panel of width
/// `first` and ratio `ratio`; refines resolution toward `a`. Caller
/// guarantees 0 < first <= b - a and ratio > 1.
pub fn geometric_panels(a: f64, b: f64, first: f64, ratio: f64) -> Vec<(f64, f64)> {
    assert!(b > a && first > 0.0 && ratio > 1.0);
    let mut panels = Vec::new();
    let mut left = a;
    let mut width = first.min(b - a);
    while left < b {
        let right = (left + width).min(b);
        // Swallow a sliver remainder into the final panel.
        let right = if b - right < 0.25 * width { b } else { right };
        panels.push((left, right));
        left = right;
        width *= ratio;
    }
    panels
}

/// Uniform panels capped so each spans at most `max_width`.
pub fn uniform_panels(a: f64, b: f64, max_width: f64) -> Vec<(f64, f64)> {
    assert!(b > a && max_width > 0.0);
    let count = ((b - a) / max_width).ceil().max(1.0) as usize;
    let h = (b - a) / count as f64;
    (0..count)
        .map(|k| (a + k as f64 * h, a + (k + 1) as f64 * h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_match_known_five_point_rule() {
        let (nodes, weights) = gauss_legendre(5);
        // Reference values for the 5-point rule.
        let xref = 0.906179845938664;
        let wref = 0.236926885056189;
        assert!((nodes[4] - xref).abs() < 1e-14);
        assert!((nodes[0] + xref).abs() < 1e-14);
        assert!((weights[0] - wref).abs() < 1e-14);
        assert!((nodes[2]).abs() < 1e-15);
    }

    #[test]
    fn exact_on_polynomials() {
        // n-point rule is exact through degree 2n-1.
        for n in [2usize, 5, 12, 32] {
            let deg = 2 * n - 1;
            let f = |x: f64| x.powi(deg as i32) + 3.0 * x * x;
            let got = integrate(f, -1.0, 1.0, n);
            assert!((got - 2.0).abs() < 1e-12, "n={n}: {got}");
        }
    }

    #[test]
    fn smooth_integral_to_machine_precision() {
        let got = integrate(|x| (x).exp() * (3.0 * x).cos(), 0.0, 2.0, 40);
        // Antiderivative e^x (cos 3x + 3 sin 3x)/10.
        let anti = |x: f64| x.exp() * ((3.0 * x).cos() + 3.0 * (3.0 * x).sin()) / 10.0;
        assert!((got - (anti(2.0) - anti(0.0))).abs() < 1e-13);
    }

    #[test]
    fn graded_panels_capture_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2; geometric refinement toward 0.
        let panels = geometric_panels(1e-12, 1.0, 1e-12, 2.0);
        let got = integrate_panels(|x| x.powf(-0.5), &panels, 16);
        assert!((got - 2.0).abs() < 1e-5, "got {got}");
    }

    #[test]
    fn panel_builders_tile_without_gaps() {
        for panels in [
            geometric_panels(0.01, 3.7, 0.005, 3.0),
            uniform_panels(-1.0, 2.5, 0.3),
        ] {
            assert!(panels.windows(2).all(|w| (w[0].1 - w[1].0).abs() < 1e-15));
            assert!(panels.iter().all(|&(a, b)| b > a));
        }
    }
}
