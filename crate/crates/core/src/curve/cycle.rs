//! Closed based paths on `{F = t}`: the real oval, saddle loops with tails, and words in them.

use super::forms::{integrate_pieces, OneForm};
use super::geometry::{c, BasePath, Chart, CurvePoint, C64};
use super::segment::{SegPoint, Segment};
use super::CurveError;
use crate::word::{Generator, Word};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// Endpoints of consecutive pieces must agree to this distance.
pub const JOIN_TOLERANCE: f64 = 1e-12;

/// Largest `|t|` for which saddle loops are built.
pub const MAX_LOOP_LEVEL: f64 = 0.5;

/// Saddle coordinates `(x_s, y_s)` of `δ₀..δ₃`.
pub const SADDLES: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];

/// A segment traversed forwards or backwards.
#[derive(Clone, Debug)]
pub struct Piece {
    pub segment: Arc<Segment>,
    pub reversed: bool,
}

impl Piece {
    pub fn forward(segment: &Arc<Segment>) -> Self {
        Piece {
            segment: Arc::clone(segment),
            reversed: false,
        }
    }

    pub fn backward(segment: &Arc<Segment>) -> Self {
        Piece {
            segment: Arc::clone(segment),
            reversed: true,
        }
    }

    pub fn inverse(&self) -> Self {
        Piece {
            segment: Arc::clone(&self.segment),
            reversed: !self.reversed,
        }
    }

    /// Segment parameter at piece parameter `s`.
    pub fn segment_param(&self, s: f64) -> f64 {
        if self.reversed {
            1.0 - s
        } else {
            s
        }
    }

    pub fn point(&self, s: f64) -> SegPoint {
        let p = self.segment.point(self.segment_param(s));
        if self.reversed {
            SegPoint {
                dx: -p.dx,
                dy: -p.dy,
                ..p
            }
        } else {
            p
        }
    }

    pub fn start(&self) -> CurvePoint {
        self.segment.curve_point(self.segment_param(0.0))
    }

    pub fn end(&self) -> CurvePoint {
        self.segment.curve_point(self.segment_param(1.0))
    }

    /// Panels of the piece in its own parameter, in traversal order.
    pub fn panels(&self) -> Vec<(f64, f64)> {
        let p = self.segment.panels();
        if self.reversed {
            p.iter().rev().map(|&(a, b)| (1.0 - b, 1.0 - a)).collect()
        } else {
            p.to_vec()
        }
    }

    fn cancels(&self, next: &Piece) -> bool {
        self.segment.id() == next.segment.id() && self.reversed != next.reversed
    }
}

/// How the orientation of a cycle was fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Orientation {
    /// Real oval, with the certified value of `∮ x dy`.
    Oval {
        x_dy: f64,
    },
    /// Saddle loop: template sign `−x_s·y_s` times the calibration sign from `∫_{δ₁} η₃ = +2πi`.
    SaddleLoop {
        index: usize,
        template_sign: f64,
        calibration_sign: f64,
    },
    Composite,
}

#[derive(Clone, Debug)]
pub struct Cycle {
    pub label: String,
    pub t: C64,
    pub pieces: Vec<Piece>,
    pub base: CurvePoint,
    pub closure_residual: f64,
    pub orientation: Orientation,
}

impl Cycle {
    /// Validates joins and closure; an empty piece list is the constant loop at `base`.
    pub fn new(
        label: impl Into<String>,
        t: C64,
        pieces: Vec<Piece>,
        base: CurvePoint,
        orientation: Orientation,
    ) -> Result<Cycle, CurveError> {
        let label = label.into();
        let mut at = base;
        for p in &pieces {
            let gap = at.distance(&p.start());
            if gap > JOIN_TOLERANCE {
                return Err(CurveError::Discontinuity {
                    cycle: label,
                    segment: p.segment.label().to_string(),
                    gap,
                });
            }
            at = p.end();
        }
        let closure_residual = at.distance(&base);
        if closure_residual > JOIN_TOLERANCE {
            return Err(CurveError::NotClosed {
                cycle: label,
                residual: closure_residual,
            });
        }
        Ok(Cycle {
            label,
            t,
            pieces,
            base,
            closure_residual,
            orientation,
        })
    }

    pub fn inverse(&self) -> Cycle {
        Cycle {
            label: format!("({})^-1", self.label),
            t: self.t,
            pieces: self.pieces.iter().rev().map(Piece::inverse).collect(),
            base: self.base,
            closure_residual: self.closure_residual,
            orientation: Orientation::Composite,
        }
    }

    /// Path product `self · other` (traverse `self` first), freely reduced.
    pub fn concat(&self, other: &Cycle) -> Cycle {
        let pieces = reduce_pieces(self.pieces.iter().chain(&other.pieces).cloned());
        Cycle {
            label: format!("{}·{}", self.label, other.label),
            t: self.t,
            pieces,
            base: self.base,
            closure_residual: self.closure_residual.max(other.closure_residual),
            orientation: Orientation::Composite,
        }
    }

    pub fn identity(t: C64, base: CurvePoint) -> Cycle {
        Cycle {
            label: "1".into(),
            t,
            pieces: Vec::new(),
            base,
            closure_residual: 0.0,
            orientation: Orientation::Composite,
        }
    }

    /// `c · self · c⁻¹` for a path `c` of pieces ending at the current base point.
    pub fn conjugated_by_path(&self, path: &[Piece], label: &str) -> Result<Cycle, CurveError> {
        let base = match path.first() {
            Some(p) => p.start(),
            None => self.base,
        };
        let pieces = reduce_pieces(
            path.iter()
                .cloned()
                .chain(self.pieces.iter().cloned())
                .chain(path.iter().rev().map(Piece::inverse)),
        );
        Cycle::new(
            format!("{label}·{}·{label}^-1", self.label),
            self.t,
            pieces,
            base,
            Orientation::Composite,
        )
    }

    pub fn segment_count(&self) -> usize {
        self.pieces.len()
    }
}

fn reduce_pieces(it: impl IntoIterator<Item = Piece>) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::new();
    for p in it {
        match out.last() {
            Some(last) if last.cancels(&p) => {
                out.pop();
            }
            _ => out.push(p),
        }
    }
    out
}

/// Where based cycles start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum BasePoint {
    /// `p₀ = (−√(1−t), 0)`, near the edge `{x = −1}`.
    #[default]
    Left,
    /// `(0, −√(1−t))`, a quarter turn along the oval from `p₀`.
    Bottom,
}

/// All segments needed for based cycles at one real level `t ∈ (0, 1)`.
///
/// The oval is split at the four corner points `(±s₀, ±s₀)` with `s₀ = √(1 − √t)`
/// so that no segment passes a turning point of its chart.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub t: f64,
    pub corner: f64,
    pub loop_radius: f64,
    /// `LL, BL, BR, R, T, LU` in counterclockwise order from `p₀`.
    oval: Vec<Arc<Segment>>,
    spurs: Vec<Arc<Segment>>,
    loops: Vec<Arc<Segment>>,
    pub calibration_sign: f64,
    pub oval_x_dy: f64,
}

fn line(from: f64, to: f64) -> BasePath {
    BasePath::Line {
        from: c(from, 0.0),
        to: c(to, 0.0),
    }
}

fn check_loop_level(t: C64) -> Result<(), CurveError> {
    if t.norm() == 0.0 || t.norm() > MAX_LOOP_LEVEL {
        return Err(CurveError::LevelOutOfRange {
            t,
            allowed: format!("0 < |t| <= {MAX_LOOP_LEVEL}"),
        });
    }
    Ok(())
}

/// Circle of radius `√|t|/2` in `x` around the saddle, starting on the side facing the origin.
fn loop_segment(i: usize, t: C64, sign: f64, seed: C64) -> Result<Segment, CurveError> {
    let (xs, _) = SADDLES[i];
    let r = t.norm().sqrt() / 2.0;
    let theta0 = if xs > 0.0 { PI } else { 0.0 };
    let path = BasePath::Arc {
        center: c(xs, 0.0),
        radius: r,
        theta0,
        sweep: TAU * sign,
    };
    Segment::build(format!("loop{i}"), Chart::OverX, path, t, seed)
}

fn template_sign(i: usize) -> f64 {
    let (xs, ys) = SADDLES[i];
    -xs * ys
}

/// Sign that makes `∫_{δ₁} η₃ = +2πi` for the template orientation at level `t`.
fn calibrate(t: C64) -> Result<f64, CurveError> {
    let (_, ys) = SADDLES[1];
    let probe = Arc::new(loop_segment(1, t, template_sign(1), c(ys, 0.0))?);
    let v = integrate_pieces(&[Piece::forward(&probe)], &OneForm::Eta(3))?.value;
    Ok(if v.im >= 0.0 { 1.0 } else { -1.0 })
}

impl Atlas {
    pub fn new(t: f64) -> Result<Atlas, CurveError> {
        if !(t > 0.0 && t < 1.0) {
            return Err(CurveError::LevelOutOfRange {
                t: c(t, 0.0),
                allowed: "0 < t < 1".into(),
            });
        }
        let tc = c(t, 0.0);
        let s0 = (1.0 - t.sqrt()).sqrt();
        let a = (1.0 - t).sqrt();
        let seg = |label: &str, chart, path, seed: f64| {
            Segment::build(label, chart, path, tc, c(seed, 0.0)).map(Arc::new)
        };
        let oval = vec![
            seg("LL", Chart::OverY, line(0.0, -s0), -a)?,
            seg("BL", Chart::OverX, line(-s0, 0.0), -s0)?,
            seg("BR", Chart::OverX, line(0.0, s0), -a)?,
            seg("R", Chart::OverY, line(-s0, s0), s0)?,
            seg("T", Chart::OverX, line(s0, -s0), s0)?,
            seg("LU", Chart::OverY, line(s0, 0.0), -s0)?,
        ];
        let r = t.sqrt() / 2.0;
        let mut atlas = Atlas {
            t,
            corner: s0,
            loop_radius: r,
            oval,
            spurs: Vec::new(),
            loops: Vec::new(),
            calibration_sign: 1.0,
            oval_x_dy: 0.0,
        };
        let x_dy = integrate_pieces(&atlas.oval_pieces(), &OneForm::XdY)?.value;
        atlas.oval_x_dy = x_dy.re;
        if t <= MAX_LOOP_LEVEL {
            atlas.calibration_sign = calibrate(tc)?;
            for (i, &(xs, ys)) in SADDLES.iter().enumerate() {
                let spur = seg(
                    &format!("spur{i}"),
                    Chart::OverX,
                    line(xs * s0, xs * (1.0 - r)),
                    ys * s0,
                )?;
                let seed = spur.end().y;
                let lp = loop_segment(i, tc, template_sign(i) * atlas.calibration_sign, seed)?;
                atlas.spurs.push(spur);
                atlas.loops.push(Arc::new(lp));
            }
        }
        Ok(atlas)
    }

    pub fn level(&self) -> C64 {
        c(self.t, 0.0)
    }

    pub fn oval_segments(&self) -> &[Arc<Segment>] {
        &self.oval
    }

    fn oval_pieces(&self) -> Vec<Piece> {
        self.oval.iter().map(Piece::forward).collect()
    }

    /// `p₀ = (−√(1−t), 0)`.
    pub fn p0(&self) -> CurvePoint {
        self.oval[0].start()
    }

    pub fn real_oval(&self) -> Result<Cycle, CurveError> {
        Cycle::new(
            "gamma",
            self.level(),
            self.oval_pieces(),
            self.p0(),
            Orientation::Oval {
                x_dy: self.oval_x_dy,
            },
        )
    }

    /// Path along the oval from `p₀` to the corner nearest saddle `i`, then straight toward the saddle.
    fn tail(&self, i: usize) -> Vec<Piece> {
        let along = [1, 3, 4, 5][i];
        let mut out: Vec<Piece> = self.oval[..along].iter().map(Piece::forward).collect();
        out.push(Piece::forward(&self.spurs[i]));
        out
    }

    fn require_loops(&self) -> Result<(), CurveError> {
        if self.loops.is_empty() {
            return Err(CurveError::LevelOutOfRange {
                t: self.level(),
                allowed: format!("0 < t <= {MAX_LOOP_LEVEL} for saddle loops"),
            });
        }
        Ok(())
    }

    /// `δᵢ` based at `p₀` through its tail.
    pub fn based_loop(&self, i: usize) -> Result<Cycle, CurveError> {
        self.require_loops()?;
        let tail = self.tail(i);
        let pieces = reduce_pieces(
            tail.iter()
                .cloned()
                .chain(std::iter::once(Piece::forward(&self.loops[i])))
                .chain(tail.iter().rev().map(Piece::inverse)),
        );
        Cycle::new(
            format!("d{i}"),
            self.level(),
            pieces,
            self.p0(),
            Orientation::SaddleLoop {
                index: i,
                template_sign: template_sign(i),
                calibration_sign: self.calibration_sign,
            },
        )
    }

    /// The loop `δᵢ` alone, based at its own start point.
    pub fn bare_loop(&self, i: usize) -> Result<Cycle, CurveError> {
        self.require_loops()?;
        let piece = Piece::forward(&self.loops[i]);
        let base = piece.start();
        Cycle::new(
            format!("d{i}"),
            self.level(),
            vec![piece],
            base,
            Orientation::SaddleLoop {
                index: i,
                template_sign: template_sign(i),
                calibration_sign: self.calibration_sign,
            },
        )
    }

    /// Concatenation of based generator cycles along `w`; `g` is the real oval.
    pub fn word_cycle(&self, w: &Word) -> Result<Cycle, CurveError> {
        let mut gens: Vec<Option<Cycle>> = vec![None; 5];
        let mut out = Cycle::identity(self.level(), self.p0());
        for l in w.letters() {
            let k = l.gen.index();
            if gens[k].is_none() {
                gens[k] = Some(match l.gen {
                    Generator::G => self.real_oval()?,
                    g => self.based_loop(g.index() - 1)?,
                });
            }
            let g = gens[k].as_ref().expect("filled above");
            out = if l.inverse {
                out.concat(&g.inverse())
            } else {
                out.concat(g)
            };
        }
        out.label = w.to_string();
        Cycle::new(
            out.label,
            out.t,
            out.pieces,
            out.base,
            Orientation::Composite,
        )
    }

    /// Moves the base point of a `p₀`-based cycle along the oval.
    pub fn rebase(&self, cyc: &Cycle, base: BasePoint) -> Result<Cycle, CurveError> {
        match base {
            BasePoint::Left => Ok(cyc.clone()),
            BasePoint::Bottom => {
                let path = [
                    Piece::backward(&self.oval[1]),
                    Piece::backward(&self.oval[0]),
                ];
                cyc.conjugated_by_path(&path, "c")
            }
        }
    }
}

fn real_level(t: C64) -> Result<f64, CurveError> {
    if t.im != 0.0 {
        return Err(CurveError::LevelOutOfRange {
            t,
            allowed: "real 0 < t < 1 for based cycles".into(),
        });
    }
    Ok(t.re)
}

/// Real oval at `t ∈ (0, 1)`, counterclockwise, based at `p₀`.
pub fn real_oval(t: f64) -> Result<Cycle, CurveError> {
    Atlas::new(t)?.real_oval()
}

/// Saddle loop `δᵢ`; with a tail it is based at `p₀` (real `t` only), otherwise any `0 < |t| ≤ 0.5`.
pub fn vanishing_loop(i: usize, t: C64, with_tail: bool) -> Result<Cycle, CurveError> {
    if i >= 4 {
        return Err(CurveError::BadIndex(i));
    }
    check_loop_level(t)?;
    if with_tail {
        return Atlas::new(real_level(t)?)?.based_loop(i);
    }
    let sign = calibrate(t)?;
    let (_, ys) = SADDLES[i];
    let seg = Arc::new(loop_segment(i, t, template_sign(i) * sign, c(ys, 0.0))?);
    let piece = Piece::forward(&seg);
    let base = piece.start();
    Cycle::new(
        format!("d{i}"),
        t,
        vec![piece],
        base,
        Orientation::SaddleLoop {
            index: i,
            template_sign: template_sign(i),
            calibration_sign: sign,
        },
    )
}

pub fn cycle_of_word(w: &Word, t: C64) -> Result<Cycle, CurveError> {
    Atlas::new(real_level(t)?)?.word_cycle(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::geometry::residual_bound;
    use crate::word::parse_word;

    #[test]
    fn oval_passes_through_axis_points() {
        let at = Atlas::new(0.36).unwrap();
        let g = at.real_oval().unwrap();
        assert!(g.closure_residual <= JOIN_TOLERANCE);
        assert!((g.base.x - c(-0.8, 0.0)).norm() < 1e-14);
        assert!(at.oval_x_dy > 0.0);
        // BR starts at (0, −0.8), R passes (0.8, 0) at its midpoint.
        assert!((at.oval[2].start().y - c(-0.8, 0.0)).norm() < 1e-14);
        assert!((at.oval[3].curve_point(0.5).x - c(0.8, 0.0)).norm() < 1e-14);
        assert!((at.oval[4].curve_point(0.5).y - c(0.8, 0.0)).norm() < 1e-14);
        for p in &g.pieces {
            for k in 0..=20 {
                assert!(p.segment.curve_point(k as f64 / 20.0).residual <= residual_bound(g.t));
            }
        }
    }

    #[test]
    fn oval_shrinks_toward_origin() {
        let near = Atlas::new(0.999).unwrap();
        assert!(near.p0().x.norm() < 0.04);
        assert!(Atlas::new(1.0).is_err());
        assert!(Atlas::new(0.0).is_err());
    }

    #[test]
    fn inverse_letters_cancel() {
        let at = Atlas::new(0.36).unwrap();
        let w = parse_word("d2 d2^-1").unwrap();
        assert!(at.word_cycle(&w).unwrap().pieces.is_empty());
        let d2 = at.based_loop(2).unwrap();
        assert!(d2.concat(&d2.inverse()).pieces.is_empty());
    }

    #[test]
    fn complex_level_loop_closes() {
        let l = vanishing_loop(2, c(0.2, 0.15), false).unwrap();
        assert!(l.closure_residual < JOIN_TOLERANCE);
        assert!(vanishing_loop(0, c(0.6, 0.0), false).is_err());
        assert!(vanishing_loop(0, c(0.2, 0.1), true).is_err());
    }
}
