//! Integration tests for the rotating two-scale family built from the real
//! radial construction: norm budgets, time invariance, source assembly along
//! two routes, decay in the oscillation order, and the growth law.

use std::sync::OnceLock;

use gsqg::grid::GridSpec;
use gsqg::operators::gradient;
use gsqg::pseudosolution::{
    evaluate_pseudosolution, source_term, source_term_polar, PseudoParams,
};
use gsqg::radial::{construct_f1, construct_f2, F1Construction, QuadratureSpec, RadialProfile};
use gsqg::sobolev::{l2_norm, sobolev_norm, SobolevSpec};
use gsqg::SpectralField;

const GAMMA: f64 = 0.5;
const BETA: f64 = 2.2;
const C: f64 = 0.5;
const K_BIG: f64 = 2.0;

fn fixture() -> &'static (F1Construction, PseudoParams) {
    static FIX: OnceLock<(F1Construction, PseudoParams)> = OnceLock::new();
    FIX.get_or_init(|| {
        let spec = QuadratureSpec::default();
        let core = construct_f1(GAMMA, BETA, C, K_BIG, 0.45, &spec).unwrap();
        let f2 = construct_f2(&core, C, &spec).unwrap();
        let p = PseudoParams::build(&core, f2, 8, &spec).unwrap();
        (core, p)
    })
}

fn f1_field(core: &F1Construction, grid: &GridSpec) -> SpectralField {
    let prof = core.profile.clone();
    SpectralField::from_fn(*grid, move |x, y| prof.eval(x.hypot(y))).dealias()
}

/// Least-squares slope of ln(y) against ln(x).
fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}

#[test]
fn ripple_l2_budget_and_time_independence() {
    let (core, p) = fixture();
    let r_ck = p.r_ck;

    // The oscillatory member's L2 norm at t = 0 is c r_ck^beta N^-beta times
    // the angular average of sin^2, i.e. the budget with a 1/sqrt(2) factor.
    for nn in [8u32, 32] {
        let pn = p.with_n_osc(nn).unwrap();
        let grid = GridSpec::new(1024, 12.0 * r_ck).unwrap();
        let theta = evaluate_pseudosolution(&pn, 0.0, &grid).unwrap();
        let diff = theta.add_scaled(&f1_field(core, &grid), -1.0).unwrap();
        let norm = l2_norm(&diff);
        let budget = pn.c * r_ck.powf(BETA) / (nn as f64).powf(BETA);
        println!(
            "N = {nn:>3}: |theta(0) - f1|_L2 = {norm:.6e}, budget c r_ck^b N^-b = {budget:.6e}"
        );
        assert!(norm <= budget, "ripple norm exceeds its budget at N = {nn}");
        assert!(
            norm >= 0.6 * budget / std::f64::consts::SQRT_2,
            "ripple norm far below the expected 1/sqrt(2) of budget at N = {nn}"
        );
    }

    // Shearing only rephases the oscillation; the L2 norm of theta - f1 is
    // t-independent. Grid chosen so the sheared spectrum stays far inside the
    // dealias cutoff (radial reach N t max|omega'| plus the envelope width).
    let grid = GridSpec::new(1536, 12.0 * r_ck).unwrap();
    let base = l2_norm(
        &evaluate_pseudosolution(p, 0.0, &grid)
            .unwrap()
            .add_scaled(&f1_field(core, &grid), -1.0)
            .unwrap(),
    );
    for t in [0.5, 1.0] {
        let norm = l2_norm(
            &evaluate_pseudosolution(p, t, &grid)
                .unwrap()
                .add_scaled(&f1_field(core, &grid), -1.0)
                .unwrap(),
        );
        let rel = (norm - base).abs() / base;
        println!("t = {t}: |theta(t) - f1|_L2 drift = {rel:.3e} relative");
        assert!(rel < 1e-10, "ripple L2 norm drifted with t: {rel:.3e}");
    }
}

#[test]
fn pure_radial_member_is_f1_and_sources_nothing() {
    let (core, p) = fixture();
    let r_ck = p.r_ck;
    let spec = QuadratureSpec::default();

    let radii: Vec<f64> = (0..64)
        .map(|i| (0.6 + i as f64 / 63.0) * r_ck)
        .collect();
    let zero = RadialProfile::from_samples(radii, vec![0.0; 64], true).unwrap();
    let pz = PseudoParams::build(core, zero, 8, &spec).unwrap();

    let grid = GridSpec::new(768, 12.0 * r_ck).unwrap();
    let theta = evaluate_pseudosolution(&pz, 0.0, &grid).unwrap();
    let f1 = f1_field(core, &grid);
    let gap = l2_norm(&theta.add_scaled(&f1, -1.0).unwrap()) / l2_norm(&f1);
    println!("f2 = 0: |theta(0) - f1| / |f1| = {gap:.3e}");
    assert!(gap < 1e-12, "pure radial member deviates from f1: {gap:.3e}");

    let f = source_term(&pz, 0.3, &grid).unwrap();
    let (g1, g2) = gradient(&f1);
    let grad_scale = (l2_norm(&g1).powi(2) + l2_norm(&g2).powi(2)).sqrt();
    println!(
        "f2 = 0: |F|_L2 = {:.3e}, gradient scale = {:.3e}",
        l2_norm(&f),
        grad_scale
    );
    assert!(
        l2_norm(&f) <= 1e-10 * grad_scale,
        "radial member sources a nonzero term"
    );
}

#[test]
fn source_routes_agree() {
    let (_, p) = fixture();
    let grid = GridSpec::new(1024, 12.0 * p.r_ck).unwrap();
    for t in [0.0, 0.1] {
        let fa = source_term(p, t, &grid).unwrap();
        let fb = source_term_polar(p, t, &grid).unwrap();
        let rel = l2_norm(&fa.add_scaled(&fb, -1.0).unwrap()) / l2_norm(&fa);
        println!("t = {t}: spectral vs polar source gap = {rel:.3e} relative");
        assert!(rel < 1e-6, "source routes disagree at t = {t}: {rel:.3e}");
    }
}

#[test]
fn source_decay_in_oscillation_order() {
    let (_, p) = fixture();
    let sweep: Vec<u32> = vec![8, 16, 32, 64, 128];
    let mut l2s = Vec::new();
    let mut hbs = Vec::new();
    println!(
        "{:>6} {:>6} {:>14} {:>14}",
        "N", "n", "|F|_L2", "|F|_H(b+1/2)"
    );
    for &nn in &sweep {
        let pn = p.with_n_osc(nn).unwrap();
        let grid = GridSpec::new((20 * nn as usize).max(768), 12.0 * p.r_ck).unwrap();
        let f = source_term(&pn, 0.0, &grid).unwrap();
        let l2 = l2_norm(&f);
        let hb = sobolev_norm(&f, SobolevSpec::inhomogeneous(BETA + 0.5)).unwrap();
        println!("{:>6} {:>6} {:>14.6e} {:>14.6e}", nn, grid.n(), l2, hb);
        l2s.push(l2);
        hbs.push(hb);
    }
    let ns: Vec<f64> = sweep.iter().map(|&v| v as f64).collect();

    // The product-rule estimate gives |F|_L2 <= C N^-(2b-1-g): check it as
    // the one-sided bound it is.
    let bound_rate = -(2.0 * BETA - 1.0 - GAMMA);
    let fit = loglog_slope(&ns, &l2s);
    println!("fitted L2 slope {fit:+.3} vs product-rule rate {bound_rate:+.2}");
    assert!(
        fit <= bound_rate + 0.15,
        "L2 decay slower than the product-rule estimate allows: {fit:+.3}"
    );

    // The assembled bracket cancels its own leading order (it vanishes
    // identically as gamma -> 1), so the measured decay is one power faster
    // than the estimate. Pin the sharp rates on the terminal pair; a
    // two-sided check against the estimate rate itself reads FAIL and is
    // reported as such, with the bound holding by a full power.
    let last = sweep.len() - 1;
    let term_l2 = (l2s[last] / l2s[last - 1]).log2();
    let term_hb = (hbs[last] / hbs[last - 1]).log2();
    let sharp_l2 = -(2.0 * BETA - GAMMA);
    let sharp_hb = -(BETA - 0.5 - GAMMA);
    let two_sided = (fit - bound_rate).abs() <= 0.15;
    println!(
        "two-sided check of L2 slope against {bound_rate:+.2} +- 0.15: {}",
        if two_sided { "PASS" } else { "FAIL (decay is faster than the estimate)" }
    );
    println!(
        "terminal-pair slopes: L2 {term_l2:+.3} (sharp {sharp_l2:+.2}), H(b+1/2) {term_hb:+.3} (sharp {sharp_hb:+.2})"
    );
    assert!(
        (term_l2 - sharp_l2).abs() <= 0.15,
        "terminal L2 slope off the sharp rate: {term_l2:+.3} vs {sharp_l2:+.2}"
    );
    assert!(
        (term_hb - sharp_hb).abs() <= 0.15,
        "terminal H(b+1/2) slope off the sharp rate: {term_hb:+.3} vs {sharp_hb:+.2}"
    );
    let hb_bound_rate = -(BETA - 1.5 - GAMMA);
    let hb_fit = loglog_slope(&ns, &hbs);
    assert!(
        hb_fit <= hb_bound_rate + 0.15,
        "H(b+1/2) decay slower than the product-rule estimate allows: {hb_fit:+.3}"
    );
}

#[test]
fn hbeta_growth_tracks_beta() {
    let (_, p) = fixture();
    let grid = GridSpec::new(3584, 12.0 * p.r_ck).unwrap();
    let hb = SobolevSpec::inhomogeneous(BETA);

    // Nondecreasing on [1/K, 5/K], then the log-log slope vs t approaches
    // beta once K t >= 3 (the sheared radial wavenumber dominates the norm).
    let ts: Vec<f64> = vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
    let mut norms = Vec::new();
    for &t in &ts {
        let theta = evaluate_pseudosolution(p, t, &grid).unwrap();
        let v = sobolev_norm(&theta, hb).unwrap();
        println!("K t = {:>4.1}: |theta|_H(b) = {v:.6e}", K_BIG * t);
        norms.push(v);
    }
    for i in 1..5 {
        assert!(
            norms[i] >= norms[i - 1] * (1.0 - 1e-9),
            "H(b) norm decreased inside [1/K, 5/K] at t = {}",
            ts[i]
        );
    }
    let tail_t: Vec<f64> = ts[2..].to_vec();
    let tail_n: Vec<f64> = norms[2..].to_vec();
    let slope = loglog_slope(&tail_t, &tail_n);
    println!("growth slope over K t in [3, 8]: {slope:+.3} (beta = {BETA})");
    assert!(
        (slope - BETA).abs() <= 0.3,
        "growth exponent off beta: {slope:+.3}"
    );
}

#[test]
fn initial_hbeta_norm_uniform_in_oscillation_order() {
    let (_, p) = fixture();
    let hb = SobolevSpec::inhomogeneous(BETA);
    let sweep: Vec<u32> = vec![16, 32, 64, 128, 256];
    let mut norms = Vec::new();
    for &nn in &sweep {
        let pn = p.with_n_osc(nn).unwrap();
        let grid = GridSpec::new((16 * nn as usize).max(768), 12.0 * p.r_ck).unwrap();
        let theta = evaluate_pseudosolution(&pn, 0.0, &grid).unwrap();
        let v = sobolev_norm(&theta, hb).unwrap();
        println!("N = {nn:>3}: |theta(0)|_H(b) = {v:.6e}");
        norms.push(v);
    }

    // The envelope contributes a fixed radial wavenumber (about 24 / r_ck for
    // the widest ring the annulus admits), so the azimuthal wavenumber N / r
    // dominates the H(b) content only once N clears ~26. From N = 32 up the
    // norm is flat; N = 16 sits on the crossover and runs high. Checked
    // two-tier: <10% from 32 up, and the N = 16 value pinned coarsely so a
    // regression there is still caught.
    let lo = norms[1..].iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = norms[1..].iter().cloned().fold(0.0f64, f64::max);
    let spread = hi / lo - 1.0;
    let full_lo = norms.iter().cloned().fold(f64::INFINITY, f64::min);
    let full_hi = norms.iter().cloned().fold(0.0f64, f64::max);
    let full_spread = full_hi / full_lo - 1.0;
    println!(
        "spread over N in {{32..256}}: {:.1}%; over N in {{16..256}}: {:.1}% ({})",
        100.0 * spread,
        100.0 * full_spread,
        if full_spread < 0.10 {
            "PASS"
        } else {
            "FAIL for the window starting at 16 (envelope crossover)"
        }
    );
    assert!(
        spread < 0.10,
        "H(b) norm not N-uniform above the envelope crossover: {:.1}%",
        100.0 * spread
    );
    assert!(
        full_spread < 0.35,
        "N = 16 value moved beyond its known crossover excess: {:.1}%",
        100.0 * full_spread
    );
}
