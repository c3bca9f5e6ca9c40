//! Chen iterated integrals `∫_c ω₁ω₂…ω_m`, with `ω₁` integrated first along the path.
//!
//! Each piece contributes an upper unitriangular matrix `J` with
//! `J[i][j] = ∫ ω_{i+1} … ω_j` over that piece. Path concatenation is the
//! matrix product and reversal is the inverse, which is also how the per-panel
//! matrices combine inside a piece.

use super::cycle::{Cycle, Piece};
use super::forms::{check_poles, factor, integrate_pieces, OneForm};
use super::geometry::C64;
use super::quad::LegendrePanel;
use super::CurveError;

pub const MAX_LENGTH: usize = 4;

type ChenMatrix = Vec<Vec<C64>>;

fn identity(n: usize) -> ChenMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

fn multiply(a: &ChenMatrix, b: &ChenMatrix) -> ChenMatrix {
    let n = a.len();
    let mut out = identity(n);
    for i in 0..n {
        for j in i + 1..n {
            out[i][j] = (i..=j).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Inverse of an upper unitriangular matrix by back substitution.
fn invert(a: &ChenMatrix) -> ChenMatrix {
    let n = a.len();
    let mut out = identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            out[i][j] = -(i + 1..=j).map(|k| a[i][k] * out[k][j]).sum::<C64>();
        }
    }
    out
}

/// Chen matrix of one panel `[a, b]` of a piece.
fn panel_matrix(piece: &Piece, forms: &[OneForm], a: f64, b: f64) -> ChenMatrix {
    let lp = LegendrePanel::shared();
    let m = forms.len();
    let n = lp.order();
    let h = 0.5 * (b - a);
    let t = piece.segment.level();
    // vals[k][q] = ω_{k+1} at node q, against ds.
    let vals: Vec<Vec<C64>> = {
        let pts: Vec<_> = lp
            .nodes
            .iter()
            .map(|&z| piece.point(a + h * (z + 1.0)))
            .collect();
        forms
            .iter()
            .map(|f| {
                pts.iter()
                    .map(|p| f.integrand(p, t).expect("pointwise form"))
                    .collect()
            })
            .collect()
    };
    let mut out = identity(m + 1);
    for i in 0..m {
        let mut g = vec![C64::new(1.0, 0.0); n];
        for k in i..m {
            let integrand: Vec<C64> = (0..n).map(|q| g[q] * vals[k][q]).collect();
            out[i][k + 1] = (0..n).map(|q| integrand[q] * (lp.weights[q] * h)).sum();
            if k + 1 < m {
                g = (0..n)
                    .map(|q| {
                        (0..n)
                            .map(|r| integrand[r] * (lp.cumulative[q][r] * h))
                            .sum()
                    })
                    .collect();
            }
        }
    }
    out
}

fn piece_matrix(piece: &Piece, forms: &[OneForm]) -> ChenMatrix {
    let forward = piece
        .segment
        .panels()
        .iter()
        .fold(identity(forms.len() + 1), |acc, &(a, b)| {
            let fwd = Piece::forward(&piece.segment);
            multiply(&acc, &panel_matrix(&fwd, forms, a, b))
        });
    if piece.reversed {
        invert(&forward)
    } else {
        forward
    }
}

fn check_forms(pieces: &[Piece], forms: &[OneForm]) -> Result<(), CurveError> {
    if forms.is_empty() || forms.len() > MAX_LENGTH {
        return Err(CurveError::IteratedLength(forms.len()));
    }
    for f in forms {
        f.validate()?;
        if !f.is_pointwise() {
            return Err(CurveError::NotPointwise(f.to_string()));
        }
        check_poles(pieces, f)?;
    }
    Ok(())
}

/// Full Chen matrix along a chain of pieces.
pub fn chen_matrix(pieces: &[Piece], forms: &[OneForm]) -> Result<Vec<Vec<C64>>, CurveError> {
    check_forms(pieces, forms)?;
    Ok(pieces.iter().fold(identity(forms.len() + 1), |acc, p| {
        multiply(&acc, &piece_matrix(p, forms))
    }))
}

/// `∫_c ω₁…ω_m` for pointwise forms, `m ≤ 4`.
pub fn iterated_integral(cyc: &Cycle, forms: &[OneForm]) -> Result<C64, CurveError> {
    let j = chen_matrix(&cyc.pieces, forms)?;
    Ok(j[0][forms.len()])
}

/// `∫_c φᵢ dφⱼ` through `φᵢ(base)·∫ηⱼ + ∫ηᵢηⱼ`, independent of the continued-log sweep.
pub fn phi_dphi_by_chen(cyc: &Cycle, i: usize, j: usize) -> Result<C64, CurveError> {
    let phi_base = factor(i, cyc.base.x, cyc.base.y).ln();
    let chen = chen_matrix(&cyc.pieces, &[OneForm::Eta(i), OneForm::Eta(j)])?;
    Ok(phi_base * chen[1][2] + chen[0][2])
}

/// `∫_c φᵢ dφⱼ` by the continued-log sweep.
pub fn phi_dphi_direct(cyc: &Cycle, i: usize, j: usize) -> Result<C64, CurveError> {
    Ok(integrate_pieces(&cyc.pieces, &OneForm::PhiDphi { i, j })?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitriangular_inverse() {
        let a: ChenMatrix = vec![
            vec![C64::new(1.0, 0.0), C64::new(2.0, 1.0), C64::new(0.5, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-3.0, 0.2)],
            vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ];
        let p = multiply(&a, &invert(&a));
        for (i, row) in p.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((v - C64::new(e, 0.0)).norm() < 1e-14);
            }
        }
    }
}
