//! One-forms on `{F = t}` and their line integrals along cycles.

use super::cycle::{Cycle, Piece};
use super::geometry::C64;
use super::quad::{adaptive_gk21, LegendrePanel};
use super::segment::SegPoint;
use super::CurveError;
use crate::melnikov::RatFunc;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Absolute quadrature target per piece.
pub const PIECE_TOLERANCE: f64 = 1e-12;
pub const MAX_INTERVALS: usize = 2000;
/// Forms with a factor closer than this to vanishing on the path are rejected.
pub const POLE_DISTANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OneForm {
    /// `ηᵢ = dfᵢ/fᵢ` with `f₁ = x+1`, `f₂ = y−1`, `f₃ = x−1`, `f₄ = y+1`.
    Eta(usize),
    /// `a(F)·ηᵢ`.
    Scaled {
        coef: RatFunc,
        eta: usize,
    },
    /// `φᵢ dφⱼ` with `φᵢ = log fᵢ` continued along the path from the principal value at the base point.
    PhiDphi {
        i: usize,
        j: usize,
    },
    /// `log(t/(y²−1)) dy/(y−1)`, continued like `φᵢ`.
    CauchyLog,
    XdY,
}

/// `fᵢ(x, y)` for `i` in `1..=4`.
pub fn factor(i: usize, x: C64, y: C64) -> C64 {
    match i {
        1 => x + 1.0,
        2 => y - 1.0,
        3 => x - 1.0,
        4 => y + 1.0,
        _ => unreachable!("factor index checked at construction"),
    }
}

fn factor_velocity(i: usize, p: &SegPoint) -> C64 {
    if i % 2 == 1 {
        p.dx
    } else {
        p.dy
    }
}

/// `ηᵢ(p′)` along a parametrized point.
pub fn eta_at(i: usize, p: &SegPoint) -> C64 {
    factor_velocity(i, p) / factor(i, p.x, p.y)
}

fn check_index(i: usize) -> Result<(), CurveError> {
    if (1..=4).contains(&i) {
        Ok(())
    } else {
        Err(CurveError::BadIndex(i))
    }
}

impl OneForm {
    pub fn validate(&self) -> Result<(), CurveError> {
        match *self {
            OneForm::Eta(i) | OneForm::Scaled { eta: i, .. } => check_index(i),
            OneForm::PhiDphi { i, j } => check_index(i).and(check_index(j)),
            OneForm::CauchyLog | OneForm::XdY => Ok(()),
        }
    }

    /// Whether the integrand is a function of the point alone (no continued logarithm).
    pub fn is_pointwise(&self) -> bool {
        !matches!(self, OneForm::PhiDphi { .. } | OneForm::CauchyLog)
    }

    /// Integrand against `ds` for pointwise forms.
    pub fn integrand(&self, p: &SegPoint, t: C64) -> Option<C64> {
        match self {
            OneForm::Eta(i) => Some(eta_at(*i, p)),
            OneForm::Scaled { coef, eta } => Some(coef.eval_c64(t) * eta_at(*eta, p)),
            OneForm::XdY => Some(p.x * p.dy),
            OneForm::PhiDphi { .. } | OneForm::CauchyLog => None,
        }
    }

    /// Factors whose zeros are poles of the form.
    fn pole_factors(&self) -> Vec<usize> {
        match *self {
            OneForm::Eta(i) | OneForm::Scaled { eta: i, .. } => vec![i],
            OneForm::PhiDphi { i, j } => vec![i, j],
            OneForm::CauchyLog => vec![2, 4],
            OneForm::XdY => vec![],
        }
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneForm::Eta(i) => write!(f, "eta{i}"),
            OneForm::Scaled { coef, eta } => write!(f, "({coef})*eta{eta}"),
            OneForm::PhiDphi { i, j } => write!(f, "phi{i}*dphi{j}"),
            OneForm::CauchyLog => write!(f, "cauchy-log"),
            OneForm::XdY => write!(f, "xdy"),
        }
    }
}

fn parse_index(s: &str, prefix: &str) -> Option<usize> {
    s.strip_prefix(prefix)?.parse().ok()
}

impl FromStr for OneForm {
    type Err = CurveError;

    /// Accepts `eta1..eta4`, `dphi1..dphi4`, `phiI*dphiJ`, `xdy` and `cauchy-log`.
    fn from_str(s: &str) -> Result<Self, CurveError> {
        let s = s.trim();
        let bad = || CurveError::FormSyntax(s.to_string());
        let form = if s == "xdy" {
            OneForm::XdY
        } else if s == "cauchy-log" {
            OneForm::CauchyLog
        } else if let Some((a, b)) = s.split_once('*') {
            OneForm::PhiDphi {
                i: parse_index(a.trim(), "phi").ok_or_else(bad)?,
                j: parse_index(b.trim(), "dphi").ok_or_else(bad)?,
            }
        } else if let Some(i) = parse_index(s, "eta").or_else(|| parse_index(s, "dphi")) {
            OneForm::Eta(i)
        } else {
            return Err(bad());
        };
        form.validate().map_err(|_| bad())?;
        Ok(form)
    }
}

/// Comma-separated form list.
pub fn parse_forms(list: &str) -> Result<Vec<OneForm>, CurveError> {
    list.split(',').map(str::parse).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormIntegral {
    pub value: C64,
    pub error: f64,
}

pub(crate) fn check_poles(pieces: &[Piece], form: &OneForm) -> Result<(), CurveError> {
    for p in pieces {
        let d = p.segment.min_factor_distance();
        for i in form.pole_factors() {
            if d[i - 1] < POLE_DISTANCE {
                return Err(CurveError::PoleOnPath {
                    segment: p.segment.label().to_string(),
                    form: form.to_string(),
                    distance: d[i - 1],
                });
            }
        }
    }
    Ok(())
}

/// Sum of per-piece integrals; continued-log forms are integrated along the whole chain.
pub fn integrate_pieces(pieces: &[Piece], form: &OneForm) -> Result<FormIntegral, CurveError> {
    form.validate()?;
    check_poles(pieces, form)?;
    if !form.is_pointwise() {
        return Ok(log_form_integral(pieces, form));
    }
    let mut value = C64::new(0.0, 0.0);
    let mut error = 0.0;
    for piece in pieces {
        let t = piece.segment.level();
        let r = adaptive_gk21(
            |s| form.integrand(&piece.point(s), t).expect("pointwise form"),
            0.0,
            1.0,
            PIECE_TOLERANCE,
            MAX_INTERVALS,
        )
        .ok_or_else(|| CurveError::QuadratureFailed {
            segment: piece.segment.label().to_string(),
            form: form.to_string(),
        })?;
        value += r.value;
        error += r.error;
    }
    Ok(FormIntegral { value, error })
}

pub fn integrate_form(cyc: &Cycle, form: &OneForm) -> Result<FormIntegral, CurveError> {
    integrate_pieces(&cyc.pieces, form)
}

/// A logarithm continued along a path by accumulating principal increments.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ContinuedLog {
    value: C64,
    arg: C64,
}

impl ContinuedLog {
    pub fn start(z: C64) -> Self {
        ContinuedLog {
            value: z.ln(),
            arg: z,
        }
    }

    /// Advances to `z`; the step must turn the argument by less than `π`.
    pub fn advance(&mut self, z: C64) -> C64 {
        self.value += (z / self.arg).ln();
        self.arg = z;
        self.value
    }
}

type LogArgument = Box<dyn Fn(&SegPoint, C64) -> C64>;

/// Function whose continued logarithm multiplies the form, and the `η`-type factor.
fn log_form_parts(form: &OneForm) -> (LogArgument, usize) {
    match *form {
        OneForm::PhiDphi { i, j } => (Box::new(move |p: &SegPoint, _| factor(i, p.x, p.y)), j),
        OneForm::CauchyLog => (Box::new(|p: &SegPoint, t| t / (p.y * p.y - 1.0)), 2),
        _ => unreachable!("only continued-log forms"),
    }
}

/// Single forward sweep over panel nodes, continuing the logarithm node to node.
fn log_form_integral(pieces: &[Piece], form: &OneForm) -> FormIntegral {
    let (g, j) = log_form_parts(form);
    let lp = LegendrePanel::shared();
    let mut total = C64::new(0.0, 0.0);
    let mut log: Option<ContinuedLog> = None;
    let mut tail = 0.0f64;
    for piece in pieces {
        let t = piece.segment.level();
        if log.is_none() {
            log = Some(ContinuedLog::start(g(&piece.point(0.0), t)));
        }
        let lg = log.as_mut().expect("initialized");
        for (a, b) in piece.panels() {
            let h = 0.5 * (b - a);
            let mut vals = Vec::with_capacity(lp.order());
            for (&z, &w) in lp.nodes.iter().zip(&lp.weights) {
                let p = piece.point(a + h * (z + 1.0));
                let v = lg.advance(g(&p, t)) * eta_at(j, &p);
                vals.push(v);
                total += v * (w * h);
            }
            lg.advance(g(&piece.point(b), t));
            tail = tail.max(lp.tail_ratio(&vals));
        }
    }
    FormIntegral {
        value: total,
        error: tail * total.norm().max(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_form_tags() {
        assert_eq!("eta3".parse::<OneForm>().unwrap(), OneForm::Eta(3));
        assert_eq!("dphi2".parse::<OneForm>().unwrap(), OneForm::Eta(2));
        assert_eq!(
            "phi1*dphi3".parse::<OneForm>().unwrap(),
            OneForm::PhiDphi { i: 1, j: 3 }
        );
        assert!("eta5".parse::<OneForm>().is_err());
        assert!("phi1dphi3".parse::<OneForm>().is_err());
        assert_eq!(parse_forms("dphi2,dphi3").unwrap().len(), 2);
    }

    #[test]
    fn continued_log_winds() {
        let mut l = ContinuedLog::start(C64::new(1.0, 0.0));
        let mut last = C64::new(0.0, 0.0);
        for k in 1..=64 {
            last = l.advance(C64::from_polar(
                1.0,
                std::f64::consts::TAU * k as f64 / 64.0,
            ));
        }
        assert!((last - C64::new(0.0, std::f64::consts::TAU)).norm() < 1e-13);
    }
}
