//! Gap between the numerically evolved flow and the analytic family member
//! it starts from: at a fixed time the gap shrinks with the oscillation
//! order at the source rate, and at a fixed order it grows linearly in time.

use crate::error::{Error, Result};
use crate::fit::loglog_fit;
use crate::grid::GridSpec;
use crate::pseudosolution::{evaluate_pseudosolution, source_term, PseudoParams};
use crate::radial::{construct_f1, construct_f2, QuadratureSpec};
use crate::sobolev::l2_norm;
use crate::solver::{integrate, SolverConfig};

use super::{ExperimentResult, SlopeReport, SweepConfig, Verdict};

const CFL: f64 = 0.4;

/// L2 distance at time t between the unforced (or forced) evolution of the
/// family member's initial data and the analytic member itself.
fn evolve_gap(
    p: &PseudoParams,
    grid: &GridSpec,
    t: f64,
    forced: bool,
) -> Result<f64> {
    let theta0 = evaluate_pseudosolution(p, 0.0, grid)?;
    let reference = evaluate_pseudosolution(p, t, grid)?;
    let mut config = SolverConfig::new(CFL, t, usize::MAX)?;
    if forced {
        let pf = p.clone();
        let gf = *grid;
        config = config.with_forcing(Box::new(move |s| source_term(&pf, s, &gf)));
    }
    let (theta, _) = integrate(&theta0, &config, p.gamma, &[])?;
    Ok(l2_norm(&theta.add_scaled(&reference, -1.0)?))
}

pub fn run_error_scaling(cfg: &SweepConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let spec = QuadratureSpec::default();
    let mut res = ExperimentResult::new(
        &cfg.experiment,
        &["gamma", "beta", "n_osc", "grid_n", "t", "err_l2"],
    );
    res.notes.push(
        "grids follow n = max(512, 16 N): eight points per azimuthal wavelength plus room \
         for the sheared spiral at t*; a fixed n = 512 trips the resolution guard at N = 64"
            .into(),
    );
    res.notes.push(
        "the slope check is one-sided: the gap is driven by the source, whose decay is \
         one power faster than the product-rule estimate, so the fitted slope lands well \
         below the target"
            .into(),
    );

    for (&gamma, &beta) in cfg.gammas.iter().zip(&cfg.betas) {
        let core = construct_f1(gamma, beta, cfg.c, cfg.k_big, 0.45, &spec)?;
        let f2 = construct_f2(&core, cfg.c, &spec)?;
        let p = PseudoParams::build(&core, f2, cfg.n_list[0], &spec)?;
        let tag = format!("gamma={gamma}, beta={beta}");

        let mut ns = Vec::new();
        let mut gaps = Vec::new();
        let mut guard: Option<String> = None;
        for &nn in &cfg.n_list {
            let n_grid = cfg.grid_n.unwrap_or((16 * nn as usize).max(512));
            let grid = GridSpec::new(n_grid, cfg.box_ratio * p.r_ck)?;
            let pn = p.with_n_osc(nn)?;
            match evolve_gap(&pn, &grid, cfg.t_star, false) {
                Ok(gap) => {
                    res.push_row(vec![
                        gamma,
                        beta,
                        nn as f64,
                        n_grid as f64,
                        cfg.t_star,
                        gap,
                    ]);
                    ns.push(nn as f64);
                    gaps.push(gap);
                }
                Err(Error::UnderResolved(msg)) => {
                    guard = Some(format!("N = {nn}, n = {n_grid}: {msg}"));
                    break;
                }
                Err(e) => return Err(e),
            }
        }

        if let Some(msg) = guard {
            res.verdicts.push(Verdict::invalid(
                &format!("criterion-7 gap slope ({tag})"),
                format!("resolution guard: {msg}"),
            ));
            continue;
        }

        let target = -(2.0 * beta - 1.0 - gamma);
        let fit = loglog_fit(&ns, &gaps)?;
        res.slopes.push(SlopeReport {
            name: format!("gap vs N ({tag})"),
            fit,
        });
        res.verdicts.push(Verdict::new(
            &format!("criterion-7 gap slope ({tag})"),
            fit.slope <= target + 0.2,
            format!(
                "fitted slope {:+.3} <= target {target:+.2} + 0.2 (one-sided)",
                fit.slope
            ),
        ));
    }

    // Time dependence and the forced control, on the first pair at the
    // second-smallest order.
    let gamma = cfg.gammas[0];
    let beta = cfg.betas[0];
    let core = construct_f1(gamma, beta, cfg.c, cfg.k_big, 0.45, &spec)?;
    let f2 = construct_f2(&core, cfg.c, &spec)?;
    let nn = cfg.n_list[1.min(cfg.n_list.len() - 1)];
    let p = PseudoParams::build(&core, f2, nn, &spec)?;
    let n_grid = cfg.grid_n.unwrap_or((16 * nn as usize).max(512));
    let grid = GridSpec::new(n_grid, cfg.box_ratio * p.r_ck)?;

    let mut ts = Vec::new();
    let mut tgaps = Vec::new();
    for k in 1..=4 {
        let t = cfg.t_star * k as f64 / 4.0;
        let gap = evolve_gap(&p, &grid, t, false)?;
        res.push_row(vec![gamma, beta, nn as f64, n_grid as f64, t, gap]);
        ts.push(t);
        tgaps.push(gap);
    }
    let tfit = loglog_fit(&ts, &tgaps)?;
    res.slopes.push(SlopeReport {
        name: format!("gap vs t (N = {nn})"),
        fit: tfit,
    });
    res.verdicts.push(Verdict::new(
        "criterion-7 time exponent",
        (tfit.slope - 1.0).abs() <= 0.3,
        format!("fitted exponent {:+.3} vs 1.00 +- 0.30", tfit.slope),
    ));

    // Control: forcing the solver with the source term must reproduce the
    // analytic trajectory up to discretization error, a small fraction of
    // the unforced gap. This pins the gap on the source, not the solver.
    let unforced = tgaps[tgaps.len() - 1];
    let forced = evolve_gap(&p, &grid, cfg.t_star, true)?;
    res.verdicts.push(Verdict::new(
        "criterion-7 control (forced run tracks the member)",
        forced <= 0.2 * unforced,
        format!(
            "forced gap {forced:.3e} vs unforced gap {unforced:.3e} (ratio {:.3})",
            forced / unforced
        ),
    ));

    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_sweep_runs_and_names_verdicts() {
        let mut cfg = SweepConfig::defaults_for("error-scaling").unwrap();
        cfg.n_list = vec![8, 16];
        cfg.t_star = 0.04;
        let res = run_error_scaling(&cfg).unwrap();
        assert!(res.table.len() >= 6);
        assert!(res
            .verdicts
            .iter()
            .any(|v| v.criterion.contains("time exponent")));
        assert!(res.verdicts.iter().any(|v| v.criterion.contains("control")));
        let mut out = Vec::new();
        res.write_summary(&mut out).unwrap();
        println!("{}", String::from_utf8(out).unwrap());
    }
}
