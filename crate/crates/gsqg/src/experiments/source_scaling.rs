//! Decay of the pseudosolution's source term in the oscillation order N,
//! measured in L2, H^2, and H^(beta+1/2) and fitted against two rate
//! targets: the product-rule estimate and the sharp cancellation rate.

use crate::error::{Error, Result};
use crate::fit::{loglog_fit, terminal_slope};
use crate::grid::GridSpec;
use crate::pseudosolution::{source_term, PseudoParams};
use crate::radial::{construct_f1, construct_f2, QuadratureSpec, RadialProfile};
use crate::sobolev::{l2_norm, sobolev_norm, SobolevSpec};

use super::{ExperimentResult, SlopeReport, SweepConfig, Verdict};

pub fn run_source_scaling(cfg: &SweepConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let spec = QuadratureSpec::default();
    let mut res = ExperimentResult::new(
        &cfg.experiment,
        &["gamma", "beta", "n_osc", "grid_n", "l2", "h2", "hb12"],
    );
    res.notes.push(
        "the estimate rate -(2b-1-g) is an upper bound from the product rule; the assembled \
         bracket cancels its own leading order (vanishing identically as gamma -> 1) and decays \
         one power faster, so the two-sided as-specified check reads FAIL while the bound check \
         and the sharp-rate guard both pass"
            .into(),
    );
    res.notes.push(
        "slopes are fitted on raw norms; dividing out the log factor ln(e+N) for gamma < 0 \
         overshoots the sharp rate, so the factor is reported but not applied"
            .into(),
    );

    for (&gamma, &beta) in cfg.gammas.iter().zip(&cfg.betas) {
        let core = construct_f1(gamma, beta, cfg.c, cfg.k_big, 0.45, &spec)?;
        let f2 = construct_f2(&core, cfg.c, &spec)?;
        let p = PseudoParams::build(&core, f2, cfg.n_list[0], &spec)?;
        let tag = format!("gamma={gamma}, beta={beta}");

        let mut ns = Vec::new();
        let mut l2s = Vec::new();
        let mut h2s = Vec::new();
        let mut hbs = Vec::new();
        let mut guard: Option<String> = None;
        for &nn in &cfg.n_list {
            let n_grid = cfg.grid_n.unwrap_or((20 * nn as usize).max(768));
            let grid = GridSpec::new(n_grid, cfg.box_ratio * p.r_ck)?;
            let pn = p.with_n_osc(nn)?;
            let f = match source_term(&pn, 0.0, &grid) {
                Ok(f) => f,
                Err(Error::UnderResolved(msg)) => {
                    guard = Some(format!("N = {nn}, n = {n_grid}: {msg}"));
                    break;
                }
                Err(e) => return Err(e),
            };
            let l2 = l2_norm(&f);
            let h2 = sobolev_norm(&f, SobolevSpec::inhomogeneous(2.0))?;
            let hb = sobolev_norm(&f, SobolevSpec::inhomogeneous(beta + 0.5))?;
            res.push_row(vec![gamma, beta, nn as f64, n_grid as f64, l2, h2, hb]);
            ns.push(nn as f64);
            l2s.push(l2);
            h2s.push(h2);
            hbs.push(hb);
        }

        if let Some(msg) = guard {
            for norm in ["L2", "H2", "H(b+1/2)"] {
                res.verdicts.push(Verdict::invalid(
                    &format!("criterion-6 {norm} ({tag})"),
                    format!("resolution guard: {msg}"),
                ));
            }
            continue;
        }

        let tol = if gamma >= 0.0 { 0.15 } else { 0.25 };
        // (bound rate from the estimate, sharp rate from the cancellation)
        let targets = [
            ("L2", -(2.0 * beta - 1.0 - gamma), -(2.0 * beta - gamma), &l2s),
            ("H2", -(2.0 * beta - 3.0 - gamma), -(2.0 * beta - 2.0 - gamma), &h2s),
            ("H(b+1/2)", -(beta - 1.5 - gamma), -(beta - 0.5 - gamma), &hbs),
        ];
        for (norm, bound, sharp, series) in targets {
            let fit = loglog_fit(&ns, series)?;
            let term = terminal_slope(&ns, series)?;
            res.slopes.push(SlopeReport {
                name: format!("{norm} ({tag})"),
                fit,
            });
            res.verdicts.push(Verdict::new(
                &format!("criterion-6 {norm} bound ({tag})"),
                fit.slope <= bound + tol,
                format!("fitted slope {:+.3} <= estimate rate {bound:+.2} + {tol}", fit.slope),
            ));
            res.verdicts.push(Verdict::new(
                &format!("criterion-6 {norm} as-specified ({tag})"),
                (fit.slope - bound).abs() <= tol,
                format!(
                    "fitted slope {:+.3} vs estimate rate {bound:+.2} +- {tol} (two-sided; \
                     decay is genuinely faster, see notes)",
                    fit.slope
                ),
            ));
            res.verdicts.push(Verdict::new(
                &format!("criterion-6 {norm} sharp rate ({tag})"),
                (term - sharp).abs() <= 0.15,
                format!("terminal-pair slope {term:+.3} vs sharp rate {sharp:+.2} +- 0.15"),
            ));
        }
    }

    // f2 = 0 control: a purely radial member sources nothing at any N.
    let gamma = cfg.gammas[0];
    let beta = cfg.betas[0];
    let core = construct_f1(gamma, beta, cfg.c, cfg.k_big, 0.45, &spec)?;
    let radii: Vec<f64> = (0..64)
        .map(|i| (0.6 + i as f64 / 63.0) * core.r_ck)
        .collect();
    let zero = RadialProfile::from_samples(radii, vec![0.0; 64], true)?;
    let pz = PseudoParams::build(&core, zero, cfg.n_list[0], &spec)?;
    let grid = GridSpec::new(768, cfg.box_ratio * core.r_ck)?;
    let mut worst = 0.0f64;
    for &nn in &cfg.n_list {
        let f = source_term(&pz.with_n_osc(nn)?, 0.0, &grid)?;
        worst = worst
            .max(l2_norm(&f))
            .max(sobolev_norm(&f, SobolevSpec::inhomogeneous(2.0))?)
            .max(sobolev_norm(&f, SobolevSpec::inhomogeneous(beta + 0.5))?);
    }
    res.verdicts.push(Verdict::new(
        "criterion-6 control (f2 = 0)",
        worst < 1e-9,
        format!("largest source norm across N: {worst:.3e} (< 1e-9)"),
    ));

    Ok(res)
}
