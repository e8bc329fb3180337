use crate::error::{Error, Result};

use super::welch::PsdEstimate;

const MIN_POINTS: usize = 10;

/// Least-squares exponent `α` of `power ∝ |f − reference|^α` over the grid
/// points with `band.0 <= f <= band.1`.
pub fn slope_fit(psd: &PsdEstimate, band: (f64, f64), reference: f64) -> Result<f64> {
    let (lo, hi) = band;
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty fit band [{lo}, {hi}]")));
    }
    if reference >= lo && reference <= hi {
        return Err(Error::invalid(format!("reference {reference} lies inside the fit band [{lo}, {hi}]")));
    }
    let points: Vec<(f64, f64)> = psd
        .select(lo, hi)
        .map(|(f, p)| ((f - reference).abs().log10(), p))
        .collect();
    if points.len() < MIN_POINTS {
        return Err(Error::invalid(format!(
            "fit band [{lo}, {hi}] holds {} grid points, need at least {MIN_POINTS}",
            points.len()
        )));
    }
    if points.iter().any(|(_, p)| !(*p > 0.0)) {
        return Err(Error::invalid("fit band contains zero power"));
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(sx, sy), (x, p)| (sx + x, sy + p.log10()));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), (x, p)| {
        let dx = x - mx;
        (sxy + dx * (p.log10() - my), sxx + dx * dx)
    });
    Ok(sxy / sxx)
}

/// Mean of the fitted exponents on both sides of an occupied band
/// `[edge_lo, edge_hi]`, each fitted over offsets `[from, to]` beyond its edge.
pub fn two_sided_slope(psd: &PsdEstimate, edge_lo: f64, edge_hi: f64, from: f64, to: f64) -> Result<f64> {
    let upper = slope_fit(psd, (edge_hi + from, edge_hi + to), edge_hi)?;
    let lower = slope_fit(psd, (edge_lo - to, edge_lo - from), edge_lo)?;
    Ok(0.5 * (upper + lower))
}
