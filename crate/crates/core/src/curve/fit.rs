//! Least-squares extraction of `c₁, c₂, c₃` from `P(t₀) − t₀ = c₁ε + c₂ε² + c₃ε³ + …`.

use super::cycle::{cycle_of_word, Cycle};
use super::geometry::C64;
use super::holonomy::holonomy_on_cycle;
use super::CurveError;
use crate::melnikov::Deformation;
use crate::word::Word;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Highest power of `ε` in the model; the powers above 3 absorb truncation.
/// Grids with fewer than `FIT_DEGREE + 2` points use degree `n − 2`.
pub const FIT_DEGREE: usize = 8;
pub const MIN_GRID: usize = 5;
/// `cⱼ` is flagged zero when `|cⱼ| ≤ ZERO_RELATIVE·|c₃|·max ε`.
pub const ZERO_RELATIVE: f64 = 1e-7;
/// Holonomy values are resolved to about this absolute level; coefficients whose
/// whole contribution `|cⱼ|·(max ε)^j` stays below it are also flagged zero.
pub const NOISE_FLOOR: f64 = 1e-12;
/// Relative spread of `c₃` between the two sub-grids for it to count as stable.
pub const RICHARDSON_TOLERANCE: f64 = 0.005;

/// `{10⁻⁴·2^(j/3) : j = 0..20}`, spanning `10⁻⁴ ≤ ε ≤ 1.02·10⁻²`.
pub fn default_eps_grid() -> Vec<f64> {
    geometric_eps_grid(1e-4, 2f64.powf(1.0 / 3.0), 21)
}

/// `{10⁻³·2^j : j = 0..5}`; too coarse for the zero flags, kept for comparison runs.
pub fn coarse_eps_grid() -> Vec<f64> {
    geometric_eps_grid(1e-3, 2.0, 6)
}

pub fn geometric_eps_grid(first: f64, ratio: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| first * ratio.powi(j as i32)).collect()
}

fn model_degree(n: usize) -> usize {
    FIT_DEGREE.min(n - 2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Richardson {
    /// `c₃` fitted without the largest `ε`.
    pub c3_small: C64,
    /// `c₃` fitted without the smallest `ε`.
    pub c3_large: C64,
    pub relative_spread: f64,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MelnikovFit {
    pub t0: C64,
    pub eps_grid: Vec<f64>,
    /// `(ε, P(t₀) − t₀)`.
    pub samples: Vec<(f64, C64)>,
    /// `c₁, c₂, …` up to the model degree.
    pub coefficients: Vec<C64>,
    /// Spread of `c₁, c₂, c₃` between the full fit and the two sub-grid fits.
    pub uncertainty: [f64; 3],
    pub zero: [bool; 3],
    pub richardson: Richardson,
    pub residual_rms: f64,
    pub condition: f64,
    pub warning: Option<String>,
}

impl MelnikovFit {
    pub fn c(&self, j: usize) -> C64 {
        self.coefficients[j - 1]
    }

    pub fn c3_nonzero(&self) -> bool {
        !self.zero[2] && self.richardson.stable
    }
}

struct Solved {
    coefficients: Vec<C64>,
    residual_rms: f64,
    condition: f64,
}

fn least_squares(samples: &[(f64, C64)], degree: usize) -> Solved {
    let scale = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    // Columns in the scaled variable ε/scale keep the matrix well conditioned.
    let a = DMatrix::from_fn(samples.len(), degree, |r, k| {
        C64::new((samples[r].0 / scale).powi(k as i32 + 1), 0.0)
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    let x = svd.solve(&b, 0.0).expect("U and V were computed");
    let residual_rms = ((&a * &x - &b).norm_squared() / samples.len() as f64).sqrt();
    let coefficients = (0..degree)
        .map(|k| x[k] / scale.powi(k as i32 + 1))
        .collect();
    Solved {
        coefficients,
        residual_rms,
        condition,
    }
}

/// Fits holonomy samples already computed on a grid.
pub fn fit_samples(t0: C64, samples: Vec<(f64, C64)>) -> Result<MelnikovFit, CurveError> {
    let n = samples.len();
    if n < MIN_GRID {
        return Err(CurveError::GridTooSmall {
            got: n,
            need: MIN_GRID,
        });
    }
    let mut sorted = samples;
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    if sorted[0].0 <= 0.0 || sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(CurveError::Precondition(
            "ε grid must consist of distinct positive values".into(),
        ));
    }
    let degree = model_degree(n);
    let full = least_squares(&sorted, degree);
    let small = least_squares(&sorted[..n - 1], degree);
    let large = least_squares(&sorted[1..], degree);
    let c3 = full.coefficients[2];
    let (c3s, c3l) = (small.coefficients[2], large.coefficients[2]);
    let relative_spread = (c3s - c3l).norm() / c3.norm();
    let mut uncertainty = [0.0; 3];
    for (j, u) in uncertainty.iter_mut().enumerate() {
        *u = (full.coefficients[j] - small.coefficients[j])
            .norm()
            .max((full.coefficients[j] - large.coefficients[j]).norm());
    }
    let max_eps = sorted[n - 1].0;
    let mut zero = [false; 3];
    for (j, z) in zero.iter_mut().enumerate() {
        let cj = full.coefficients[j].norm();
        *z = cj <= ZERO_RELATIVE * c3.norm() * max_eps
            || cj * max_eps.powi(j as i32 + 1) <= NOISE_FLOOR;
    }
    let ratio = sorted[n - 1].0 / sorted[0].0;
    let warning = if ratio < 4.0 {
        Some(format!(
            "grid spans only a factor {ratio:.2} in ε; fit is ill-conditioned"
        ))
    } else if full.condition > 1e8 {
        Some(format!(
            "design matrix condition number {:.2e}",
            full.condition
        ))
    } else {
        None
    };
    Ok(MelnikovFit {
        t0,
        eps_grid: sorted.iter().map(|s| s.0).collect(),
        samples: sorted,
        coefficients: full.coefficients,
        uncertainty,
        zero,
        richardson: Richardson {
            c3_small: c3s,
            c3_large: c3l,
            relative_spread,
            stable: relative_spread <= RICHARDSON_TOLERANCE,
        },
        residual_rms: full.residual_rms,
        condition: full.condition,
        warning,
    })
}

/// Holonomy on every grid point in parallel, in grid order.
pub fn holonomy_samples(
    cyc: &Cycle,
    eps_grid: &[f64],
    d: &Deformation,
) -> Result<Vec<(f64, C64)>, CurveError> {
    eps_grid
        .par_iter()
        .map(|&e| {
            let (p, _) = holonomy_on_cycle(cyc, C64::new(e, 0.0), d)?;
            Ok((e, p - cyc.t))
        })
        .collect()
}

pub fn melnikov_fit_on_cycle(
    cyc: &Cycle,
    eps_grid: &[f64],
    d: &Deformation,
) -> Result<MelnikovFit, CurveError> {
    if eps_grid.len() < MIN_GRID {
        return Err(CurveError::GridTooSmall {
            got: eps_grid.len(),
            need: MIN_GRID,
        });
    }
    fit_samples(cyc.t, holonomy_samples(cyc, eps_grid, d)?)
}

pub fn melnikov_fit(
    w: &Word,
    t0: C64,
    eps_grid: &[f64],
    d: &Deformation,
) -> Result<MelnikovFit, CurveError> {
    melnikov_fit_on_cycle(&cycle_of_word(w, t0)?, eps_grid, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_polynomial_coefficients() {
        let c = [
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, -32.0),
            C64::new(5.0, 1.0),
            C64::new(-40.0, 0.0),
        ];
        let samples = default_eps_grid()
            .into_iter()
            .map(|e| (e, (0..5).map(|k| c[k] * e.powi(k as i32 + 1)).sum()))
            .collect();
        let f = fit_samples(C64::new(0.36, 0.0), samples).unwrap();
        assert!((f.c(3) - c[2]).norm() < 1e-8);
        assert!(f.zero[0] && f.zero[1]);
        assert!(f.c3_nonzero());
    }

    #[test]
    fn rejects_short_grid() {
        let samples = vec![(1e-3, C64::new(0.0, 0.0)); 4];
        assert!(fit_samples(C64::new(0.36, 0.0), samples).is_err());
        let repeated = vec![(1e-3, C64::new(0.0, 0.0)); 6];
        assert!(fit_samples(C64::new(0.36, 0.0), repeated).is_err());
    }
}
