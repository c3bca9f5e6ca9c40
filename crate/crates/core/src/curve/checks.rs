//! Reference checks built from cycles, forms and fits.
//!
//! Every function here computes a numeric quantity and compares it with an
//! independently known value, returning [`ValueCheck`]s rather than booleans so
//! callers can report the actual discrepancy.

use super::cycle::{Atlas, BasePoint, Cycle};
use super::fit::{fit_samples, holonomy_samples, MelnikovFit};
use super::forms::{integrate_form, OneForm};
use super::geometry::{c, C64};
use super::holonomy::holonomy_on_cycle;
use super::iterated::{iterated_integral, phi_dphi_by_chen, phi_dphi_direct};
use super::CurveError;
use crate::melnikov::{
    center_family, m2_francoise, m3_tilde_coefficient, m3_tilde_coefficient_corrected, mv,
    Deformation, IntegralSymbol, RatFunc,
};
use crate::word::{delta_gen, v_k, Word};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `(2πi)`.
pub fn two_pi_i() -> C64 {
    c(0.0, 2.0 * PI)
}

/// Rows `δ₁, δ₂, δ₃`, columns `η₁, η₂, η₃`, in units of `2πi`.
pub const PAIRING_TABLE: [[i32; 3]; 3] = [[0, 0, 1], [0, 1, -1], [1, -1, 0]];

/// The entry fixed by orientation calibration: `∫_{δ₁} η₃`.
pub const CALIBRATION_ENTRY: (usize, usize) = (1, 3);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Absolute,
    Relative,
}

/// One numeric comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueCheck {
    pub label: String,
    pub expected: C64,
    pub computed: C64,
    pub kind: ErrorKind,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ValueCheck {
    pub fn absolute(
        label: impl Into<String>,
        expected: C64,
        computed: C64,
        tolerance: f64,
    ) -> Self {
        let error = (computed - expected).norm();
        ValueCheck {
            label: label.into(),
            expected,
            computed,
            kind: ErrorKind::Absolute,
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }

    /// Relative error `|computed − expected| / |expected|`; a zero expectation never passes.
    pub fn relative(
        label: impl Into<String>,
        expected: C64,
        computed: C64,
        tolerance: f64,
    ) -> Self {
        let scale = expected.norm();
        let error = if scale > 0.0 {
            (computed - expected).norm() / scale
        } else {
            f64::INFINITY
        };
        ValueCheck {
            label: label.into(),
            expected,
            computed,
            kind: ErrorKind::Relative,
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }
}

pub fn all_pass(checks: &[ValueCheck]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingEntry {
    pub delta: usize,
    pub eta: usize,
    /// Whether this entry fixed the loop orientation (and so is not a test).
    pub calibration: bool,
    pub check: ValueCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub t: f64,
    pub calibration_sign: f64,
    pub entries: Vec<PairingEntry>,
    /// `∫_{δ₀} ηⱼ` for `j = 1..3`, outside the table but determined by `δ₀δ₁δ₂δ₃` additivity tests.
    pub delta0_row: [C64; 3],
    pub pass: bool,
}

/// The nine periods `∫_{δᵢ} ηⱼ`, `i, j ∈ {1, 2, 3}`, against [`PAIRING_TABLE`].
pub fn pairing_table(t: f64, tolerance: f64) -> Result<PairingReport, CurveError> {
    let atlas = Atlas::new(t)?;
    let mut entries = Vec::with_capacity(9);
    for i in 1..=3 {
        let cyc = atlas.bare_loop(i)?;
        for j in 1..=3 {
            let v = integrate_form(&cyc, &OneForm::Eta(j))?.value;
            let expected = two_pi_i() * f64::from(PAIRING_TABLE[i - 1][j - 1]);
            entries.push(PairingEntry {
                delta: i,
                eta: j,
                calibration: (i, j) == CALIBRATION_ENTRY,
                check: ValueCheck::absolute(format!("int_d{i} eta{j}"), expected, v, tolerance),
            });
        }
    }
    let d0 = atlas.bare_loop(0)?;
    let mut delta0_row = [C64::new(0.0, 0.0); 3];
    for (j, slot) in delta0_row.iter_mut().enumerate() {
        *slot = integrate_form(&d0, &OneForm::Eta(j + 1))?.value;
    }
    Ok(PairingReport {
        t,
        calibration_sign: atlas.calibration_sign,
        pass: entries.iter().all(|e| e.check.pass),
        entries,
        delta0_row,
    })
}

/// Integrals on the real oval that vanish because the integrand extends holomorphically inside it.
pub fn cauchy_suite(t: f64, tolerance: f64) -> Result<Vec<ValueCheck>, CurveError> {
    let gamma = Atlas::new(t)?.real_oval()?;
    let zero = C64::new(0.0, 0.0);
    Ok(vec![
        ValueCheck::absolute(
            "int_gamma phi1 dphi3 (continued log)",
            zero,
            phi_dphi_direct(&gamma, 1, 3)?,
            tolerance,
        ),
        ValueCheck::absolute(
            "int_gamma phi1 dphi3 (Chen)",
            zero,
            phi_dphi_by_chen(&gamma, 1, 3)?,
            tolerance,
        ),
        ValueCheck::absolute(
            "int_gamma log(t/(y^2-1)) dy/(y-1)",
            zero,
            integrate_form(&gamma, &OneForm::CauchyLog)?.value,
            tolerance,
        ),
        ValueCheck::absolute(
            "int_gamma dphi2 dphi2",
            zero,
            iterated_integral(&gamma, &[OneForm::Eta(2), OneForm::Eta(2)])?,
            tolerance,
        ),
    ])
}

/// `∫_{v₂} dφ₂dφ₃`.
pub fn v2_double_integral(atlas: &Atlas) -> Result<C64, CurveError> {
    let cyc = atlas.word_cycle(&v_k(2))?;
    iterated_integral(&cyc, &[OneForm::Eta(2), OneForm::Eta(3)])
}

/// The global sign `σ` with `∫_{v₂} dφ₂dφ₃ = σ (2πi)²`.
///
/// It fixes how the Wronskian expressions, written for `(2πi)`-normalized
/// periods, map onto holonomy coefficients under this crate's orientation and
/// commutator conventions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignCalibration {
    pub t: f64,
    pub v2_value: C64,
    pub sign: f64,
}

pub fn sign_calibration(atlas: &Atlas) -> Result<SignCalibration, CurveError> {
    let v = v2_double_integral(atlas)?;
    let q = v / (two_pi_i() * two_pi_i());
    Ok(SignCalibration {
        t: atlas.t,
        v2_value: v,
        sign: if q.re >= 0.0 { 1.0 } else { -1.0 },
    })
}

/// `∫_{v₂} dφ₂dφ₃ = 4π²`, relative.
pub fn four_pi_squared_check(t: f64, tolerance: f64) -> Result<ValueCheck, CurveError> {
    let v = v2_double_integral(&Atlas::new(t)?)?;
    Ok(ValueCheck::relative(
        "int_v2 dphi2 dphi3 = 4 pi^2",
        C64::new(4.0 * PI * PI, 0.0),
        v,
        tolerance,
    ))
}

/// Based words used as `σ₁, σ₂` in the shuffle and determinant checks.
pub fn reference_word_pairs() -> Vec<(Word, Word)> {
    let d = delta_gen;
    vec![
        (&d(1) * &d(2), &d(2) * &d(3)),
        (d(1), d(2)),
        (d(2), d(3)),
        (&d(1) * &d(3), d(2).inverse()),
        (&d(3) * &d(1), &d(1) * &d(2)),
    ]
}

fn form_pairs() -> Vec<(usize, usize)> {
    vec![(2, 3), (1, 2), (1, 3), (3, 2)]
}

/// `∫_c ω₁ω₂ + ∫_c ω₂ω₁ = ∫_c ω₁ · ∫_c ω₂` on closed based cycles.
pub fn shuffle_checks(t: f64, tolerance: f64) -> Result<Vec<ValueCheck>, CurveError> {
    let atlas = Atlas::new(t)?;
    let mut out = Vec::new();
    for (u, v) in reference_word_pairs() {
        let w = &u * &v;
        let cyc = atlas.word_cycle(&w)?;
        for (a, b) in form_pairs() {
            let (ea, eb) = (OneForm::Eta(a), OneForm::Eta(b));
            let ab = iterated_integral(&cyc, &[ea.clone(), eb.clone()])?;
            let ba = iterated_integral(&cyc, &[eb.clone(), ea.clone()])?;
            let pa = integrate_form(&cyc, &ea)?.value;
            let pb = integrate_form(&cyc, &eb)?.value;
            out.push(ValueCheck::absolute(
                format!("shuffle eta{a},eta{b} on {w}"),
                pa * pb,
                ab + ba,
                tolerance,
            ));
        }
    }
    Ok(out)
}

/// `∫_{[σ₁,σ₂]} ω₁ω₂ = det{∫_{σᵢ} ωⱼ}`.
pub fn determinant_checks(t: f64, tolerance: f64) -> Result<Vec<ValueCheck>, CurveError> {
    let atlas = Atlas::new(t)?;
    let mut out = Vec::new();
    for (u, v) in reference_word_pairs() {
        let (cu, cv) = (atlas.word_cycle(&u)?, atlas.word_cycle(&v)?);
        let comm = atlas.word_cycle(&Word::commutator(&u, &v))?;
        for (a, b) in form_pairs() {
            let (ea, eb) = (OneForm::Eta(a), OneForm::Eta(b));
            let p = |cyc: &Cycle, f: &OneForm| integrate_form(cyc, f).map(|r| r.value);
            let det = p(&cu, &ea)? * p(&cv, &eb)? - p(&cu, &eb)? * p(&cv, &ea)?;
            let lhs = iterated_integral(&comm, &[ea, eb])?;
            out.push(ValueCheck::absolute(
                format!("determinant eta{a},eta{b} on [{u}, {v}]"),
                det,
                lhs,
                tolerance,
            ));
        }
    }
    Ok(out)
}

/// `∫_{uv} ηⱼ = ∫_u ηⱼ + ∫_v ηⱼ` for `j = 1..4`.
pub fn additivity_checks(
    atlas: &Atlas,
    u: &Word,
    v: &Word,
    tolerance: f64,
) -> Result<Vec<ValueCheck>, CurveError> {
    let (cu, cv, cuv) = (
        atlas.word_cycle(u)?,
        atlas.word_cycle(v)?,
        atlas.word_cycle(&(u * v))?,
    );
    (1..=4)
        .map(|j| {
            let f = OneForm::Eta(j);
            let parts = integrate_form(&cu, &f)?.value + integrate_form(&cv, &f)?.value;
            let whole = integrate_form(&cuv, &f)?.value;
            Ok(ValueCheck::absolute(
                format!("additivity eta{j} on {u} * {v}"),
                parts,
                whole,
                tolerance,
            ))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct M2Assembly {
    pub t0: f64,
    pub i12: C64,
    pub i13: C64,
    pub i23: C64,
    pub i32: C64,
    /// `Σ_{i<j} W(aᵢ, aⱼ)(t₀) Iᵢⱼ`.
    pub m2: ValueCheck,
    /// `I₁₃` computed two ways and compared with zero.
    pub i13_checks: Vec<ValueCheck>,
    pub cauchy_log: ValueCheck,
    pub pass: bool,
}

/// Assembles the second-order Melnikov function on the real oval from numeric `∫_γ φᵢdφⱼ`.
pub fn m2_assembly_check(
    d: &Deformation,
    t0: f64,
    m2_tolerance: f64,
    cauchy_tolerance: f64,
) -> Result<M2Assembly, CurveError> {
    let gamma = Atlas::new(t0)?.real_oval()?;
    let i12 = phi_dphi_direct(&gamma, 1, 2)?;
    let i13 = phi_dphi_direct(&gamma, 1, 3)?;
    let i23 = phi_dphi_direct(&gamma, 2, 3)?;
    let i32 = phi_dphi_direct(&gamma, 3, 2)?;
    let value = |s: IntegralSymbol| match s {
        IntegralSymbol::I12 => i12,
        IntegralSymbol::I13 => i13,
        IntegralSymbol::I23 => i23,
        IntegralSymbol::I32 => i32,
        IntegralSymbol::E23 => i23 + i32,
    };
    let zero = C64::new(0.0, 0.0);
    let m2 = m2_francoise(d).evaluate(c(t0, 0.0), value);
    let m2 = ValueCheck::absolute("M2 on gamma", zero, m2, m2_tolerance);
    let i13_checks = vec![
        ValueCheck::absolute("I13 (continued log)", zero, i13, cauchy_tolerance),
        ValueCheck::absolute(
            "I13 (Chen)",
            zero,
            phi_dphi_by_chen(&gamma, 1, 3)?,
            cauchy_tolerance,
        ),
    ];
    let cauchy_log = ValueCheck::absolute(
        "int_gamma log(t/(y^2-1)) dy/(y-1)",
        zero,
        integrate_form(&gamma, &OneForm::CauchyLog)?.value,
        cauchy_tolerance,
    );
    let pass = m2.pass && all_pass(&i13_checks) && cauchy_log.pass;
    Ok(M2Assembly {
        t0,
        i12,
        i13,
        i23,
        i32,
        m2,
        i13_checks,
        cauchy_log,
        pass,
    })
}

/// Fitted `ε³` coefficient along `v₃` against `σ (2πi)³ mv(3)(t₀)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct V3Crosscheck {
    pub calibration: SignCalibration,
    pub mv3_at_t0: C64,
    pub fit: MelnikovFit,
    pub check: ValueCheck,
}

pub fn v3_crosscheck(
    d: &Deformation,
    t0: f64,
    eps_grid: &[f64],
    tolerance: f64,
) -> Result<V3Crosscheck, CurveError> {
    let atlas = Atlas::new(t0)?;
    let calibration = sign_calibration(&atlas)?;
    let mv3 = mv(3, d)
        .map_err(|e| CurveError::Precondition(e.to_string()))?
        .value
        .eval_c64(c(t0, 0.0));
    let cyc = atlas.word_cycle(&v_k(3))?;
    let fit = fit_samples(cyc.t, holonomy_samples(&cyc, eps_grid, d)?)?;
    let expected = two_pi_i().powi(3) * mv3 * calibration.sign;
    let check = ValueCheck::relative("v3 eps^3 coefficient", expected, fit.c(3), tolerance);
    Ok(V3Crosscheck {
        calibration,
        mv3_at_t0: mv3,
        fit,
        check,
    })
}

/// `max |P(t₀) − t₀|` over `eps` for a deformation expected to preserve the center.
pub fn center_preservation(
    d: &Deformation,
    t0: f64,
    eps: &[f64],
    tolerance: f64,
) -> Result<Vec<ValueCheck>, CurveError> {
    let gamma = Atlas::new(t0)?.real_oval()?;
    eps.iter()
        .map(|&e| {
            let (p, _) = holonomy_on_cycle(&gamma, c(e, 0.0), d)?;
            Ok(ValueCheck::absolute(
                format!("P(t0) - t0 at eps = {e}"),
                c(t0, 0.0),
                p,
                tolerance,
            ))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterCrosscheck {
    pub t0: f64,
    pub lambda1: String,
    pub lambda: String,
    pub sign: f64,
    pub i23: C64,
    pub fit: MelnikovFit,
    /// Against `σ·(−λ²/(t₀A′(t₀)²))·∫_γdφ₂dφ₃`.
    pub stated: ValueCheck,
    /// Against `σ·(−λλ₁/(t₀A′(t₀)²))·∫_γdφ₂dφ₃`.
    pub corrected: ValueCheck,
}

fn q_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

fn prefactor_at(r: &RatFunc, a: &RatFunc, t0: f64) -> C64 {
    let da = a.derivative().eval_c64(c(t0, 0.0));
    r.eval_c64(c(t0, 0.0)) / da
}

/// Fitted `ε³` coefficient along the real oval for a center-family deformation
/// against the closed-form third-order prediction.
pub fn m3_center_crosscheck(
    a: &RatFunc,
    c1: &BigRational,
    lambda1: &BigRational,
    lambda: &BigRational,
    t0: f64,
    eps_grid: &[f64],
    tolerance: f64,
) -> Result<CenterCrosscheck, CurveError> {
    let to_pre = |e: crate::melnikov::MelnikovError| CurveError::Precondition(e.to_string());
    let d = center_family(a, c1, lambda1, lambda).map_err(to_pre)?;
    let atlas = Atlas::new(t0)?;
    let sign = sign_calibration(&atlas)?.sign;
    let gamma = atlas.real_oval()?;
    let i23 = iterated_integral(&gamma, &[OneForm::Eta(2), OneForm::Eta(3)])?;
    let fit = fit_samples(gamma.t, holonomy_samples(&gamma, eps_grid, &d)?)?;
    let stated =
        prefactor_at(&m3_tilde_coefficient(a, lambda).map_err(to_pre)?, a, t0) * i23 * sign;
    let corrected = prefactor_at(
        &m3_tilde_coefficient_corrected(a, lambda1, lambda).map_err(to_pre)?,
        a,
        t0,
    ) * i23
        * sign;
    let label = |kind: &str| {
        format!(
            "center eps^3 coefficient, lambda1 = {}, lambda = {} ({kind})",
            q_to_f64(lambda1),
            q_to_f64(lambda)
        )
    };
    Ok(CenterCrosscheck {
        t0,
        lambda1: lambda1.to_string(),
        lambda: lambda.to_string(),
        sign,
        i23,
        stated: ValueCheck::relative(label("-lambda^2 form"), stated, fit.c(3), tolerance),
        corrected: ValueCheck::relative(
            label("-lambda lambda1 form"),
            corrected,
            fit.c(3),
            tolerance,
        ),
        fit,
    })
}

/// Leading coefficient of a commutator word with the base point moved along the oval.
pub fn base_point_check(
    w: &Word,
    d: &Deformation,
    t0: f64,
    eps_grid: &[f64],
    tolerance: f64,
) -> Result<ValueCheck, CurveError> {
    let atlas = Atlas::new(t0)?;
    let left = atlas.word_cycle(w)?;
    let bottom = atlas.rebase(&left, BasePoint::Bottom)?;
    let fl = fit_samples(left.t, holonomy_samples(&left, eps_grid, d)?)?;
    let fb = fit_samples(bottom.t, holonomy_samples(&bottom, eps_grid, d)?)?;
    Ok(ValueCheck::relative(
        format!("base point move on {w}"),
        fl.c(3),
        fb.c(3),
        tolerance,
    ))
}

/// Leading coefficient of `w⁻¹` against minus that of `w`.
pub fn reversal_check(
    w: &Word,
    d: &Deformation,
    t0: f64,
    eps_grid: &[f64],
    tolerance: f64,
) -> Result<ValueCheck, CurveError> {
    let atlas = Atlas::new(t0)?;
    let fwd = atlas.word_cycle(w)?;
    let rev = atlas.word_cycle(&w.inverse())?;
    let ff = fit_samples(fwd.t, holonomy_samples(&fwd, eps_grid, d)?)?;
    let fr = fit_samples(rev.t, holonomy_samples(&rev, eps_grid, d)?)?;
    Ok(ValueCheck::relative(
        format!("reversal of {w}"),
        -ff.c(3),
        fr.c(3),
        tolerance,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_check_rejects_zero_expectation() {
        let z = C64::new(0.0, 0.0);
        assert!(!ValueCheck::relative("z", z, z, 1.0).pass);
        assert!(ValueCheck::absolute("z", z, z, 0.0).pass);
    }

    #[test]
    fn pairing_table_at_quarter_level() {
        let r = pairing_table(0.25, 1e-9).unwrap();
        assert!(r.pass, "{:#?}", r.entries);
        assert_eq!(r.entries.iter().filter(|e| e.calibration).count(), 1);
    }
}
