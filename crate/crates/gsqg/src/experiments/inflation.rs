//! Norm inflation of the rotating two-scale family: the H^beta norm of a
//! member grows algebraically in K t, the growth is monotone in the shear
//! strength K, and the genuinely evolved flow shadows the family member
//! through the inflation window.

use crate::error::{Error, Result};
use crate::fit::loglog_fit;
use crate::grid::GridSpec;
use crate::pseudosolution::{
    evaluate_pseudosolution, predicted_inflation_lower_bound, PseudoParams,
};
use crate::radial::{construct_f1, construct_f2, QuadratureSpec, RadialProfile};
use crate::sobolev::{sobolev_norm, SobolevSpec};
use crate::solver::{integrate, SolverConfig};

use super::{ExperimentResult, SlopeReport, SweepConfig, Verdict};

/// Absolute time of the K-monotonicity snapshots. At fixed K t the growth
/// ratio is K-independent (shear rate and envelope wavenumber both scale
/// with 1 / r_ck), so the sweep compares constructions at one absolute time
/// instead; this value keeps the strongest shear inside the dealias budget
/// of the n = 1024 grid while the weakest already inflates visibly.
const K_SWEEP_TIME: f64 = 0.0126;

/// The family member is built with a reduced amplitude so its full initial
/// H^beta norm, ripple included, stays below the configured budget c.
const AMPLITUDE_MARGIN: f64 = 0.625;

fn build_member(
    gamma: f64,
    beta: f64,
    c_eff: f64,
    k_big: f64,
    n_osc: u32,
    spec: &QuadratureSpec,
) -> Result<PseudoParams> {
    let core = construct_f1(gamma, beta, c_eff, k_big, 0.45, spec)?;
    let f2 = construct_f2(&core, c_eff, spec)?;
    PseudoParams::build(&core, f2, n_osc, spec)
}

pub fn run_inflation(cfg: &SweepConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.k_list.is_empty() {
        return Err(Error::Config("inflation needs a nonempty K list".into()));
    }
    let spec = QuadratureSpec::default();
    let gamma = cfg.gammas[0];
    let beta = cfg.betas[0];
    let c_eff = AMPLITUDE_MARGIN * cfg.c;
    let n_osc = cfg.n_list[0];
    let hb = SobolevSpec::inhomogeneous(beta);
    let mut res = ExperimentResult::new(
        &cfg.experiment,
        &["phase", "k_big", "n_osc", "kt", "hbeta", "ratio", "predictor"],
    );
    res.notes.push(
        "phase 0 rows scan the analytic member in time, phase 1 rows sweep the shear \
         strength K at one absolute time, phase 2 rows compare the evolved flow against \
         the member"
            .into(),
    );

    // Phase 0: growth of the analytic member in K t at the weakest K.
    let k0 = cfg.k_list[0];
    let p = build_member(gamma, beta, c_eff, k0, n_osc, &spec)?;
    let n_grid = cfg.grid_n.unwrap_or(3584);
    let grid = GridSpec::new(n_grid, cfg.box_ratio * p.r_ck)?;
    let norm0 = sobolev_norm(&evaluate_pseudosolution(&p, 0.0, &grid)?, hb)?;
    res.verdicts.push(Verdict::new(
        "criterion-8 initial norm budget",
        norm0 <= cfg.c,
        format!("||member(0)||_Hb = {norm0:.4} <= c = {}", cfg.c),
    ));

    let mut kts = vec![0.0];
    let mut kt = 0.5;
    while kt <= cfg.t_end + 1e-9 {
        kts.push(kt);
        kt += if kt < 3.0 - 1e-9 { 0.5 } else { 1.0 };
    }
    let mut ratios = Vec::new();
    let mut preds = Vec::new();
    for &kt in &kts {
        let t = kt / k0;
        let norm = if kt == 0.0 {
            norm0
        } else {
            sobolev_norm(&evaluate_pseudosolution(&p, t, &grid)?, hb)?
        };
        let pred = predicted_inflation_lower_bound(&p, t);
        res.push_row(vec![
            0.0,
            k0,
            n_osc as f64,
            kt,
            norm,
            norm / norm0,
            pred,
        ]);
        ratios.push(norm / norm0);
        preds.push(pred);
    }
    let near_monotone = ratios.windows(2).all(|w| w[1] >= 0.99 * w[0]);
    res.verdicts.push(Verdict::new(
        "criterion-8 growth monotone",
        near_monotone,
        format!(
            "H^beta ratio rises from 1.00 to {:.2} without dips beyond 1%",
            ratios.last().unwrap()
        ),
    ));
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    res.verdicts.push(Verdict::new(
        "criterion-8 inflation factor",
        max_ratio >= cfg.m_big,
        format!("max H^beta ratio {max_ratio:.2} >= M = {}", cfg.m_big),
    ));

    let window: Vec<(f64, f64)> = kts
        .iter()
        .zip(&ratios)
        .filter(|(&kt, _)| kt >= 3.0)
        .map(|(&kt, &r)| (kt, r))
        .collect();
    if window.len() >= 2 {
        let xs: Vec<f64> = window.iter().map(|w| w.0).collect();
        let ys: Vec<f64> = window.iter().map(|w| w.1).collect();
        let fit = loglog_fit(&xs, &ys)?;
        res.slopes.push(SlopeReport {
            name: "measured growth exponent (Kt >= 3)".into(),
            fit,
        });
        res.verdicts.push(Verdict::new(
            "criterion-8 growth exponent",
            (fit.slope - beta).abs() <= 0.3,
            format!("fitted exponent {:+.3} vs beta = {beta} +- 0.3", fit.slope),
        ));
        let pw: Vec<f64> = kts
            .iter()
            .zip(&preds)
            .filter(|(&kt, _)| kt >= 3.0)
            .map(|(_, &p)| p)
            .collect();
        if pw.iter().all(|&v| v > 0.0) {
            let pfit = loglog_fit(&xs, &pw)?;
            res.slopes.push(SlopeReport {
                name: "closed-form lower bound trend (Kt >= 3)".into(),
                fit: pfit,
            });
            res.notes.push(format!(
                "the closed-form lower bound rises with trend exponent {:+.2} over the \
                 same window; the exponent verdict is taken against the measured \
                 trajectory, the bound only has to stay below it",
                pfit.slope
            ));
        }
    } else {
        res.verdicts.push(Verdict::invalid(
            "criterion-8 growth exponent",
            format!(
                "scan ends at Kt = {}, need at least two points past Kt = 3",
                cfg.t_end
            ),
        ));
    }

    // Phase 1: K-monotonicity. Each K gets its own construction; snapshots
    // at one absolute time so stronger shear means more accumulated tilt.
    if cfg.k_list.len() >= 2 {
        let mut k_ratios = Vec::new();
        for &k in &cfg.k_list {
            let pk = build_member(gamma, beta, c_eff, k, n_osc, &spec)?;
            let gk = GridSpec::new(1024, cfg.box_ratio * pk.r_ck)?;
            let n0 = sobolev_norm(&evaluate_pseudosolution(&pk, 0.0, &gk)?, hb)?;
            let nt =
                sobolev_norm(&evaluate_pseudosolution(&pk, K_SWEEP_TIME, &gk)?, hb)?;
            res.push_row(vec![
                1.0,
                k,
                n_osc as f64,
                k * K_SWEEP_TIME,
                nt,
                nt / n0,
                predicted_inflation_lower_bound(&pk, K_SWEEP_TIME),
            ]);
            k_ratios.push(nt / n0);
        }
        let increasing = k_ratios.windows(2).all(|w| w[1] > w[0]);
        res.verdicts.push(Verdict::new(
            "criterion-8 monotone in K",
            increasing,
            format!(
                "ratios at t = {K_SWEEP_TIME}: {}",
                k_ratios
                    .iter()
                    .map(|r| format!("{r:.2}"))
                    .collect::<Vec<_>>()
                    .join(" < ")
            ),
        ));
    }

    // Phase 2: the evolved flow shadows the member. The order is the largest
    // whose tilted spiral at K t* still fits the dealias budget of the
    // n = 1024 grid; doubling it needs n >= 1536 at four times the cost.
    let t_star = cfg.t_star;
    let gt = GridSpec::new(1024, cfg.box_ratio * p.r_ck)?;
    let theta0 = evaluate_pseudosolution(&p, 0.0, &gt)?;
    let member = evaluate_pseudosolution(&p, t_star, &gt)?;
    let config = SolverConfig::new(0.5, t_star, 25)?;
    let (theta, diag) = integrate(&theta0, &config, gamma, &[hb])?;
    let h_true = sobolev_norm(&theta, hb)?;
    let h_member = sobolev_norm(&member, hb)?;
    let h0 = sobolev_norm(&theta0, hb)?;
    res.push_row(vec![
        2.0,
        k0,
        n_osc as f64,
        k0 * t_star,
        h_true,
        h_true / h_member,
        0.0,
    ]);
    res.verdicts.push(Verdict::new(
        "criterion-8 evolved flow shadows the member",
        (h_true / h_member - 1.0).abs() <= 0.2 && h_member / h0 > 2.0,
        format!(
            "H^beta at t* = {t_star}: evolved {h_true:.3} vs member {h_member:.3} \
             (ratio {:.3}), member inflated {:.1}x",
            h_true / h_member,
            h_member / h0
        ),
    ));
    if !diag.tail_warning_times.is_empty() {
        res.notes.push(format!(
            "spectral tail exceeded 1e-4 of the energy at {} checkpoint(s) of the \
             evolved run",
            diag.tail_warning_times.len()
        ));
    }

    // Criterion 10 on the same run: the support never outruns the recorded
    // maximum speed by more than the advection estimate plus two cells.
    let dx = gt.dx();
    let mut worst = f64::NEG_INFINITY;
    let mut vmax_running = 0.0f64;
    for i in 0..diag.times.len() {
        vmax_running = vmax_running.max(diag.max_velocity[i]);
        let allowed = diag.support_radius[0] + 1.1 * vmax_running * diag.times[i] + 2.0 * dx;
        worst = worst.max(diag.support_radius[i] - allowed);
    }
    res.verdicts.push(Verdict::new(
        "criterion-10 support confinement",
        worst <= 0.0,
        format!(
            "max excess over supp(0) + 1.1 max|v| t + 2 dx across {} checkpoints: \
             {worst:.3e}",
            diag.times.len()
        ),
    ));

    // Control: with the ripple removed the member is the steady core, so
    // the ratio pins to one.
    let radii: Vec<f64> = (0..64)
        .map(|i| (0.6 + i as f64 / 63.0) * p.r_ck)
        .collect();
    let zero = RadialProfile::from_samples(radii, vec![0.0; 64], true)?;
    let core0 = construct_f1(gamma, beta, c_eff, k0, 0.45, &spec)?;
    let pz = PseudoParams::build(&core0, zero, n_osc, &spec)?;
    let gz = GridSpec::new(768, cfg.box_ratio * pz.r_ck)?;
    let z0 = sobolev_norm(&evaluate_pseudosolution(&pz, 0.0, &gz)?, hb)?;
    let zt = sobolev_norm(&evaluate_pseudosolution(&pz, 2.0 / k0, &gz)?, hb)?;
    res.verdicts.push(Verdict::new(
        "criterion-8 control (ripple removed)",
        (zt / z0 - 1.0).abs() <= 1e-6,
        format!("H^beta ratio without ripple: {:.9}", zt / z0),
    ));

    Ok(res)
}
