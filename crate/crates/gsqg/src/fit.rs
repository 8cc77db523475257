//! Log-log regression for scaling-law measurements.

use crate::error::{Error, Result};

/// Least-squares line through (ln x, ln y) with a residual-based slope
/// uncertainty. half_width is the classical standard error of the slope
/// (infinite when there are no residual degrees of freedom).
#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub half_width: f64,
    pub points: usize,
}

pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParameter(format!(
            "slope fit needs paired samples, got {} x vs {} y",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "slope fit needs at least 2 points".into(),
        ));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "slope fit needs positive finite samples on both axes".into(),
        ));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "slope fit needs at least two distinct x values".into(),
        ));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let half_width = if xs.len() > 2 {
        let ss_res: f64 = lx
            .iter()
            .zip(&ly)
            .map(|(a, b)| {
                let r = b - (intercept + slope * a);
                r * r
            })
            .sum();
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(SlopeFit {
        slope,
        intercept,
        half_width,
        points: xs.len(),
    })
}

/// Slope of the last pair alone: log(y1/y0) / log(x1/x0). The tail of a
/// sweep is where preasymptotic corrections are smallest.
pub fn terminal_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return Err(Error::InvalidParameter(
            "terminal slope needs at least 2 paired points".into(),
        ));
    }
    let k = xs.len() - 1;
    Ok((ys[k] / ys[k - 1]).ln() / (xs[k] / xs[k - 1]).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_recovered() {
        let xs: Vec<f64> = (1..=6).map(|k| 2.0f64.powi(k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x.powf(-2.25)).collect();
        let fit = loglog_fit(&xs, &ys).unwrap();
        assert!((fit.slope + 2.25).abs() < 1e-12);
        assert!((fit.intercept - 3.5f64.ln()).abs() < 1e-12);
        assert!(fit.half_width < 1e-12);
        assert!((terminal_slope(&xs, &ys).unwrap() + 2.25).abs() < 1e-12);
    }

    #[test]
    fn half_width_covers_perturbed_slope() {
        let xs: Vec<f64> = (1..=8).map(|k| 2.0f64.powi(k)).collect();
        // Alternating +-5% wobble around a clean power law.
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| x.powf(-1.5) * if i % 2 == 0 { 1.05 } else { 0.95 })
            .collect();
        let fit = loglog_fit(&xs, &ys).unwrap();
        println!("slope {} +- {}", fit.slope, fit.half_width);
        assert!((fit.slope + 1.5).abs() < 3.0 * fit.half_width);
        assert!(fit.half_width > 1e-3);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(loglog_fit(&[1.0], &[1.0]).is_err());
        assert!(loglog_fit(&[1.0, 2.0], &[1.0]).is_err());
        assert!(loglog_fit(&[1.0, 2.0], &[1.0, -1.0]).is_err());
        assert!(loglog_fit(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(loglog_fit(&[2.0, 2.0], &[1.0, 2.0]).is_err());
        let two = loglog_fit(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert!(two.half_width.is_infinite());
    }
}
