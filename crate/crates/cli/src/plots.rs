//! SVG plots of holonomy samples and fit residuals.

use orbitdepth::curve::{MelnikovFit, C64};
use plotters::prelude::*;
use std::path::Path;

fn model(fit: &MelnikovFit, eps: f64) -> C64 {
    fit.coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| c * eps.powi(k as i32 + 1))
        .sum()
}

fn log_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| *v > 0.0 && v.is_finite())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (1e-16, 1.0);
    }
    (lo / 2.0, hi * 2.0)
}

/// Two panels over `ε`: `|P(t₀) − t₀|` with `|c₃|ε³`, and the fit residual.
pub fn fit_svg(fit: &MelnikovFit, path: &Path) -> Result<(), Box<dyn std::error::Error>> {
    let root = SVGBackend::new(path, (1000, 420)).into_drawing_area();
    root.fill(&WHITE)?;
    let (left, right) = root.split_horizontally(500);
    let eps: Vec<f64> = fit.samples.iter().map(|s| s.0).collect();
    let (e_lo, e_hi) = log_range(eps.iter().copied());

    let size: Vec<(f64, f64)> = fit.samples.iter().map(|(e, v)| (*e, v.norm())).collect();
    let cubic: Vec<(f64, f64)> = eps
        .iter()
        .map(|e| (*e, fit.c(3).norm() * e.powi(3)))
        .collect();
    let (y_lo, y_hi) = log_range(size.iter().chain(&cubic).map(|p| p.1));
    let mut chart = ChartBuilder::on(&left)
        .caption("|P(t0) - t0|", ("sans-serif", 18))
        .margin(10)
        .x_label_area_size(35)
        .y_label_area_size(60)
        .build_cartesian_2d((e_lo..e_hi).log_scale(), (y_lo..y_hi).log_scale())?;
    chart.configure_mesh().x_desc("eps").draw()?;
    chart
        .draw_series(size.iter().map(|p| Circle::new(*p, 3, BLUE.filled())))?
        .label("samples")
        .legend(|(x, y)| Circle::new((x, y), 3, BLUE.filled()));
    chart
        .draw_series(LineSeries::new(cubic, &RED))?
        .label("|c3| eps^3")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 15, y)], RED));
    chart.configure_series_labels().border_style(BLACK).draw()?;

    let resid: Vec<(f64, f64)> = fit
        .samples
        .iter()
        .map(|(e, v)| (*e, (v - model(fit, *e)).norm().max(1e-18)))
        .collect();
    let (r_lo, r_hi) = log_range(resid.iter().map(|p| p.1));
    let mut chart = ChartBuilder::on(&right)
        .caption("fit residual", ("sans-serif", 18))
        .margin(10)
        .x_label_area_size(35)
        .y_label_area_size(60)
        .build_cartesian_2d((e_lo..e_hi).log_scale(), (r_lo..r_hi).log_scale())?;
    chart.configure_mesh().x_desc("eps").draw()?;
    chart.draw_series(resid.iter().map(|p| Cross::new(*p, 4, BLACK)))?;
    root.present()?;
    Ok(())
}
