//! Holonomy of the perturbed foliation `dF + εω = 0` along a cycle.
//!
//! Along each piece the leaf is followed over the piece's base path. With
//! `G = F − t₀` as the unknown, eliminating the dependent coordinate from
//! `dF = −ε(P dx + Q dy)` gives
//! `G′ = −ε x′ (P F_y − Q F_x) / (F_y + εQ)` over `x`, and the same with the
//! roles of the coordinates swapped over `y`.

use super::cycle::{Cycle, Piece};
use super::geometry::{gradient, nearest_partner, Chart, C64};
use super::ode::{integrate_unit, OdeFailure, OdeOptions};
use super::CurveError;
use crate::melnikov::{Deformation, RatFunc};
use crate::word::Word;
use num_traits::ToPrimitive;

pub const RTOL: f64 = 1e-13;
/// Absolute tolerance per unit `|ε|`; `G` is of size `ε` along the path.
pub const ATOL_PER_EPS: f64 = 1e-15;
const H_MAX: f64 = 1.0 / 16.0;
const MAX_STEPS: usize = 200_000;
/// Largest `|ε|` accepted by [`holonomy`].
pub const MAX_EPS: f64 = 0.05;
/// Smallest acceptable `|F_w + ε·coef|` relative to `|F_w|` (loss of transversality).
const TRANSVERSALITY: f64 = 1e-3;
/// Smallest acceptable ratio between the two roots of the perturbed level over a base point.
const ROOT_SEPARATION: f64 = 4.0;

/// A rational function with `f64` coefficients for fast complex evaluation.
#[derive(Clone, Debug)]
struct NumericRat {
    num: Vec<f64>,
    den: Vec<f64>,
}

fn horner(c: &[f64], t: C64) -> C64 {
    c.iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &k| acc * t + k)
}

impl NumericRat {
    fn new(r: &RatFunc) -> Self {
        let conv = |p: &crate::melnikov::Poly| {
            p.coeffs()
                .iter()
                .map(|q| q.to_f64().unwrap_or(f64::NAN))
                .collect()
        };
        NumericRat {
            num: conv(r.numer()),
            den: conv(r.denom()),
        }
    }

    fn eval(&self, t: C64) -> C64 {
        horner(&self.num, t) / horner(&self.den, t)
    }
}

/// Base path of one integration leg together with a branch guess for the dependent root.
enum Leg<'a> {
    Piece(&'a Piece),
    /// Short straight leg at a chart switch, from the leaf point reached on the
    /// previous piece to the start of the next one.
    Connector {
        chart: Chart,
        from: C64,
        to: C64,
        w_from: C64,
        w_to: C64,
    },
}

impl Leg<'_> {
    fn chart(&self) -> Chart {
        match self {
            Leg::Piece(p) => p.segment.chart(),
            Leg::Connector { chart, .. } => *chart,
        }
    }

    fn label(&self) -> String {
        match self {
            Leg::Piece(p) => p.segment.label().to_string(),
            Leg::Connector { .. } => "chart switch".to_string(),
        }
    }

    /// `(u, du/ds, dependent root at level, root ratio)`.
    fn geometry(&self, s: f64, level: C64) -> (C64, C64, C64, f64) {
        match self {
            Leg::Piece(piece) => {
                let seg = &piece.segment;
                let sigma = piece.segment_param(s);
                let (u, mut du) = seg.path().at(sigma);
                if piece.reversed {
                    du = -du;
                }
                let (w, ratio) = seg.dependent_at_level_checked(sigma, level);
                (u, du, w, ratio)
            }
            Leg::Connector {
                from,
                to,
                w_from,
                w_to,
                ..
            } => {
                let u = from + (to - from) * s;
                let (w, ratio) = nearest_partner(u, level, w_from + (w_to - w_from) * s);
                (u, to - from, w, ratio)
            }
        }
    }
}

struct LegOde<'a> {
    leg: Leg<'a>,
    t0: C64,
    eps: C64,
    a: &'a [NumericRat; 3],
}

impl LegOde<'_> {
    /// Leaf point at parameter `s` when the leaf has `F = t₀ + g` there.
    fn point(&self, s: f64, g: C64) -> (C64, C64) {
        let (u, _, w, _) = self.leg.geometry(s, self.t0 + g);
        self.leg.chart().to_xy(u, w)
    }

    fn rhs(&self, s: f64, g: C64) -> (C64, f64, f64) {
        let level = self.t0 + g;
        let (u, du, w, ratio) = self.leg.geometry(s, level);
        let (x, y) = self.leg.chart().to_xy(u, w);
        let (fx, fy) = gradient(x, y);
        let p = self.a[0].eval(level) / (x + 1.0) + self.a[2].eval(level) / (x - 1.0);
        let q = self.a[1].eval(level) / (y - 1.0);
        let e = self.eps;
        let (num, den, fw) = match self.leg.chart() {
            Chart::OverX => (p * fy - q * fx, fy + e * q, fy),
            Chart::OverY => (q * fx - p * fy, fx + e * p, fx),
        };
        (-e * du * num / den, (den / fw).norm(), ratio)
    }

    fn check_transversal(&self, s: f64, g: C64) -> Result<(), CurveError> {
        let (_, transversal, ratio) = self.rhs(s, g);
        if transversal < TRANSVERSALITY || ratio < ROOT_SEPARATION {
            return Err(CurveError::Ode {
                segment: self.leg.label(),
                s,
                msg: format!(
                    "near-tangency (transversality {transversal:.2e}, root ratio {ratio:.2e})"
                ),
            });
        }
        Ok(())
    }

    /// Integrates `G` over the whole leg, starting from `g`.
    fn run(&self, g: C64, stats: &mut HolonomyStats) -> Result<C64, CurveError> {
        self.check_transversal(0.0, g)?;
        let opts = OdeOptions {
            rtol: RTOL,
            atol: ATOL_PER_EPS * self.eps.norm(),
            h_max: H_MAX,
            max_steps: MAX_STEPS,
        };
        let (g_end, st) = integrate_unit(|s, g| self.rhs(s, g).0, g, &opts).map_err(|e| {
            let (s, msg) = match e {
                OdeFailure::TooManySteps { s } => (s, "step budget exhausted"),
                OdeFailure::StepUnderflow { s } => (s, "step size underflow"),
                OdeFailure::NonFinite { s } => (s, "non-finite state"),
            };
            CurveError::Ode {
                segment: self.leg.label(),
                s,
                msg: msg.into(),
            }
        })?;
        stats.accepted_steps += st.accepted;
        stats.rejected_steps += st.rejected;
        stats.evaluations += st.evaluations;
        self.check_transversal(1.0, g_end)?;
        Ok(g_end)
    }
}

/// Integration statistics of one holonomy run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HolonomyStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
    pub chart_switches: usize,
}

/// `F` at the end of the perturbed leaf through the start of `cyc` at level `t0`.
///
/// The start and end of the cycle must lie over the same base point in the same
/// chart, so that both ends sit on one transversal.
pub fn holonomy_on_cycle(
    cyc: &Cycle,
    eps: C64,
    d: &Deformation,
) -> Result<(C64, HolonomyStats), CurveError> {
    let t0 = cyc.t;
    let mut g = C64::new(0.0, 0.0);
    let mut stats = HolonomyStats::default();
    if eps.norm() == 0.0 || cyc.pieces.is_empty() {
        return Ok((t0, stats));
    }
    let a = [
        NumericRat::new(&d.a1),
        NumericRat::new(&d.a2),
        NumericRat::new(&d.a3),
    ];
    let mut previous: Option<LegOde> = None;
    for piece in &cyc.pieces {
        let ode = LegOde {
            leg: Leg::Piece(piece),
            t0,
            eps,
            a: &a,
        };
        if let Some(prev) = &previous {
            let chart = piece.segment.chart();
            if prev.leg.chart() != chart {
                // The leaf leaves the previous piece at a point that is off the
                // next piece's base path; follow it there in the new chart.
                let (x, y) = prev.point(1.0, g);
                let (from, w_from) = chart.from_xy(x, y);
                let (to, _, w_to, _) = ode.leg.geometry(0.0, t0 + g);
                let connector = LegOde {
                    leg: Leg::Connector {
                        chart,
                        from,
                        to,
                        w_from,
                        w_to,
                    },
                    t0,
                    eps,
                    a: &a,
                };
                g = connector.run(g, &mut stats)?;
                stats.chart_switches += 1;
            }
        }
        g = ode.run(g, &mut stats)?;
        previous = Some(ode);
    }
    let first = cyc.pieces.first().expect("nonempty");
    let last = cyc.pieces.last().expect("nonempty");
    if first.segment.chart() != last.segment.chart() {
        return Err(CurveError::Precondition(format!(
            "cycle {} starts and ends in different charts",
            cyc.label
        )));
    }
    Ok((t0 + g, stats))
}

/// Holonomy image of `t0` along the cycle realizing `w`.
pub fn holonomy(w: &Word, t0: C64, eps: C64, d: &Deformation) -> Result<C64, CurveError> {
    if eps.norm() > MAX_EPS {
        return Err(CurveError::EpsTooLarge(eps.norm()));
    }
    let cyc = super::cycle::cycle_of_word(w, t0)?;
    Ok(holonomy_on_cycle(&cyc, eps, d)?.0)
}
