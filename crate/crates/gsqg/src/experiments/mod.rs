//! Parameterized sweeps that turn the scaling laws and identities of the
//! construction into measured exponents with pass/fail verdicts.

use std::io::Write;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::fit::SlopeFit;

mod error_scaling;
mod inflation;
mod patch_interaction;
mod source_scaling;
mod verification;

pub use error_scaling::run_error_scaling;
pub use inflation::run_inflation;
pub use patch_interaction::run_patch_interaction;
pub use source_scaling::run_source_scaling;
pub use verification::run_verification_suite;

/// Admissible exponent window for a given gamma: beta must sit strictly
/// inside (3/2 + gamma, 2 + gamma) and be at least 1.
pub fn admissible_beta(gamma: f64, beta: f64) -> bool {
    gamma > -1.0 && gamma < 1.0 && beta >= 1.0 && beta > 1.5 + gamma && beta < 2.0 + gamma
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub experiment: String,
    /// (gamma, beta) pairs run in order; paired by index.
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub n_list: Vec<u32>,
    pub c: f64,
    pub k_big: f64,
    /// Target growth factor for the inflation experiment.
    pub m_big: f64,
    pub t_star: f64,
    pub t_end: f64,
    /// K values for the inflation monotonicity sweep.
    pub k_list: Vec<f64>,
    /// Patch separations for the interaction experiment, in box units.
    pub r_list: Vec<f64>,
    /// Fixed grid size override; each experiment picks per-point grids when absent.
    pub grid_n: Option<usize>,
    /// Box side in units of the concentration radius.
    pub box_ratio: f64,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

impl SweepConfig {
    /// Baseline configuration for a named experiment. Every field can be
    /// overridden before `validate`.
    pub fn defaults_for(experiment: &str) -> Result<Self> {
        let mut cfg = Self {
            experiment: experiment.to_string(),
            gammas: vec![0.5],
            betas: vec![2.2],
            n_list: vec![8, 16, 32, 64],
            c: 0.5,
            k_big: 2.0,
            m_big: 10.0,
            t_star: 0.1,
            t_end: 4.0,
            k_list: vec![25.0, 50.0, 100.0],
            r_list: vec![0.06, 0.09, 0.135, 0.2025],
            grid_n: None,
            box_ratio: 12.0,
            seed: 7,
            output_dir: None,
        };
        match experiment {
            "source-scaling" => {
                cfg.gammas = vec![0.5, 0.0, -0.5];
                cfg.betas = vec![2.2, 1.8, 1.2];
                cfg.n_list = vec![8, 16, 32, 64, 128];
            }
            "error-scaling" => {
                cfg.c = 0.25;
            }
            "inflation" => {
                cfg.n_list = vec![8];
                cfg.t_star = 0.06;
                // For this experiment t_end is the end of the growth scan in
                // units of K t, so the fit window [3, 8] is fully covered.
                cfg.t_end = 8.0;
            }
            "patch-interaction" => {
                cfg.gammas = vec![-0.5, 0.0, 0.5];
                cfg.betas = vec![1.2, 1.8, 2.2];
                // Separations stay small against the box so the free-space
                // far field dominates the periodic images at every gamma.
                cfg.r_list = vec![0.04, 0.06, 0.09, 0.135];
            }
            "verification" => {}
            other => {
                return Err(Error::Config(format!(
                    "unknown experiment '{other}' (expected source-scaling, error-scaling, \
                     inflation, patch-interaction, or verification)"
                )));
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gammas.len() != self.betas.len() || self.gammas.is_empty() {
            return Err(Error::Config(format!(
                "need matching nonempty gamma/beta lists, got {} and {}",
                self.gammas.len(),
                self.betas.len()
            )));
        }
        for (&g, &b) in self.gammas.iter().zip(&self.betas) {
            if !admissible_beta(g, b) {
                let reason = if b >= 2.0 + g {
                    format!("beta >= 2+gamma ({b} vs {})", 2.0 + g)
                } else if b <= 1.5 + g {
                    format!("beta <= 3/2+gamma ({b} vs {})", 1.5 + g)
                } else {
                    format!("gamma outside (-1, 1) or beta < 1 (gamma = {g}, beta = {b})")
                };
                return Err(Error::Config(format!(
                    "inadmissible exponent pair: {reason}"
                )));
            }
        }
        if self.n_list.is_empty() {
            return Err(Error::Config("empty N list".into()));
        }
        for w in self.n_list.windows(2) {
            if w[1] != 2 * w[0] {
                return Err(Error::Config(format!(
                    "N list must be geometric with ratio 2, found {} after {}",
                    w[1], w[0]
                )));
            }
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(Error::Config(format!("c must lie in (0,1), got {}", self.c)));
        }
        if !(self.k_big > 1.0) {
            return Err(Error::Config(format!("K must exceed 1, got {}", self.k_big)));
        }
        if !(self.m_big > 1.0) {
            return Err(Error::Config(format!("M must exceed 1, got {}", self.m_big)));
        }
        if !(self.t_star > 0.0) || !(self.t_end > 0.0) {
            return Err(Error::Config(format!(
                "t_star and T must be positive, got {} and {}",
                self.t_star, self.t_end
            )));
        }
        if !(self.box_ratio >= 8.0) {
            return Err(Error::Config(format!(
                "box must be at least 8 concentration radii for the support rule, got {}",
                self.box_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictState {
    Pass,
    Fail,
    /// A resolution guard tripped; the measurement is void, not failed.
    Invalid,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    /// Names the acceptance rule the verdict reports on.
    pub criterion: String,
    pub state: VerdictState,
    pub detail: String,
}

impl Verdict {
    pub fn new(criterion: &str, passed: bool, detail: String) -> Self {
        Self {
            criterion: criterion.to_string(),
            state: if passed { VerdictState::Pass } else { VerdictState::Fail },
            detail,
        }
    }

    pub fn invalid(criterion: &str, detail: String) -> Self {
        Self {
            criterion: criterion.to_string(),
            state: VerdictState::Invalid,
            detail,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SlopeReport {
    pub name: String,
    pub fit: SlopeFit,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub experiment: String,
    pub table_header: Vec<String>,
    pub table: Vec<Vec<f64>>,
    pub slopes: Vec<SlopeReport>,
    pub verdicts: Vec<Verdict>,
    /// Rationale lines: tolerance choices, deviations, measured constants.
    pub notes: Vec<String>,
}

impl ExperimentResult {
    pub fn new(experiment: &str, table_header: &[&str]) -> Self {
        Self {
            experiment: experiment.to_string(),
            table_header: table_header.iter().map(|s| s.to_string()).collect(),
            table: Vec::new(),
            slopes: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// True when every verdict passed; invalid verdicts never count.
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.state == VerdictState::Pass)
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.table_header.len());
        self.table.push(row);
    }

    pub fn write_raw_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{}", self.table_header.join(","))?;
        for row in &self.table {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn write_summary(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "experiment: {}", self.experiment)?;
        for s in &self.slopes {
            if s.fit.half_width.is_finite() {
                writeln!(
                    w,
                    "slope {}: {:+.4} +- {:.4} ({} points)",
                    s.name, s.fit.slope, s.fit.half_width, s.fit.points
                )?;
            } else {
                writeln!(
                    w,
                    "slope {}: {:+.4} ({} points, no residual dof)",
                    s.name, s.fit.slope, s.fit.points
                )?;
            }
        }
        for v in &self.verdicts {
            let tag = match v.state {
                VerdictState::Pass => "PASS",
                VerdictState::Fail => "FAIL",
                VerdictState::Invalid => "INVALID",
            };
            writeln!(w, "{tag} {}: {}", v.criterion, v.detail)?;
        }
        for n in &self.notes {
            writeln!(w, "note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_for_every_experiment() {
        for id in [
            "source-scaling",
            "error-scaling",
            "inflation",
            "patch-interaction",
            "verification",
        ] {
            SweepConfig::defaults_for(id).unwrap().validate().unwrap();
        }
        assert!(SweepConfig::defaults_for("nope").is_err());
    }

    #[test]
    fn validation_names_the_violated_rule() {
        let mut cfg = SweepConfig::defaults_for("source-scaling").unwrap();
        cfg.gammas = vec![0.5];
        cfg.betas = vec![2.6];
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("beta >= 2+gamma"), "got: {msg}");

        cfg.betas = vec![1.9];
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("beta <= 3/2+gamma"), "got: {msg}");

        cfg.betas = vec![2.2];
        cfg.n_list = vec![8, 24];
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("geometric"), "got: {msg}");
    }

    #[test]
    fn result_writers_round_numbers_through() {
        let mut res = ExperimentResult::new("demo", &["n", "value"]);
        res.push_row(vec![8.0, 1.5e-3]);
        res.verdicts.push(Verdict::new("criterion-x", true, "ok".into()));
        res.verdicts.push(Verdict::invalid("criterion-y", "guard".into()));
        assert!(!res.all_pass());
        let mut csv = Vec::new();
        res.write_raw_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("n,value\n"));
        assert!(text.contains("1.5"));
        let mut summary = Vec::new();
        res.write_summary(&mut summary).unwrap();
        let text = String::from_utf8(summary).unwrap();
        assert!(text.contains("PASS criterion-x"));
        assert!(text.contains("INVALID criterion-y"));
    }
}
