//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Tolerances and runtime budgets are fixed here rather than read from a
//! config. Where a criterion states a closed form, that form is evaluated
//! directly in this file instead of through the library helper that wraps it.

use num_rational::BigRational;
use orbitdepth::curve::{
    c, cauchy_suite, center_preservation, default_eps_grid, determinant_checks, fit_samples,
    holonomy_samples, iterated_integral, m2_assembly_check, pairing_table, shuffle_checks, Atlas,
    OneForm, C64,
};
use orbitdepth::laurent::{impossibility_check, LaurentPoly2, Representation};
use orbitdepth::magnus::{compare_variation_with_v, depth, first_difference_degree, Depth};
use orbitdepth::melnikov::{
    center_family, classify, hierarchy_collapse_check, mv, parse_ratfunc, Deformation, RatFunc,
};
use orbitdepth::word::{
    back_substitute, delta_gen, exponent_sums_rho, gamma, m_endo, mon0, mon1, orbit_normal_form,
    parse_word, random_word, rewrite_to_rho_alphabet, seeded_rng, v_k, var_iter, Generator, Word,
};
use rand::Rng;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const SEED: u64 = 20_240_611;
const T0: f64 = 0.36;
const MAGNUS_TRUNCATION: usize = 8;
const K_MAX: usize = 5;
const RANDOM_SAMPLES: usize = 100;

const PAIRING_ABS: f64 = 1e-9;
const FOUR_PI_SQUARED_REL: f64 = 1e-6;
const CAUCHY_ABS: f64 = 1e-8;
const SHUFFLE_DET_ABS: f64 = 1e-6;
const ZERO_FLAG_REL: f64 = 1e-7;
const RICHARDSON_REL: f64 = 5e-3;
const V3_REL: f64 = 5e-3;
const HAMILTONIAN_ABS: f64 = 1e-10;
const CENTER_REL: f64 = 5e-3;
const SCALING_REL: f64 = 1e-2;
const M2_ABS: f64 = 1e-7;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn w(s: &str) -> Word {
    parse_word(s).expect("literal word")
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn criterion_1() -> Result<Outcome, String> {
    use Generator::*;
    let m1 = mon1();
    let m1_ok = [
        (G, "g"),
        (D0, "g d0"),
        (D1, "g d1"),
        (D2, "g d2"),
        (D3, "g d3"),
    ]
    .iter()
    .all(|(g, img)| *m1.image(*g) == w(img));
    let m0 = mon0();
    let m0_ok = [
        (G, "d0 d1 d2 d3 g"),
        (D0, "d0"),
        (D1, "d0 d1 d0'"),
        (D2, "d0 d1 d2 d1' d0'"),
        (D3, "d0 d1 d2 d3 d2' d1' d0'"),
    ]
    .iter()
    .all(|(g, img)| *m0.image(*g) == w(img));
    let mut rng = seeded_rng(SEED);
    let conj = &delta_gen(0) * &delta_gen(1);
    let m = m_endo();
    let mut agree = 0;
    for _ in 0..RANDOM_SAMPLES {
        let s = random_word(&mut rng, 30);
        if m.apply(&s) == &(&conj.inverse() * &m0.apply(&s)) * &conj {
            agree += 1;
        }
    }
    Ok(Outcome::new(
        m1_ok && m0_ok && agree == RANDOM_SAMPLES,
        format!("Mon1 images {m1_ok}, Mon0 images {m0_ok}, M conjugation {agree}/{RANDOM_SAMPLES}"),
    ))
}

fn criterion_2() -> Result<Outcome, String> {
    let nf = orbit_normal_form(&var_iter(&gamma(), 2)).ok_or("no normal form for var^2(gamma)")?;
    let is_xz = nf == rewrite_to_rho_alphabet(&v_k(2));
    let magnus_agree = first_difference_degree(&back_substitute(&nf), &v_k(2), 3)
        .map_err(|e| e.to_string())?
        .is_none();
    let mut rows = Vec::new();
    let mut ok = is_xz && magnus_agree;
    for i in 2..=5 {
        let dvar = depth(&var_iter(&gamma(), i), MAGNUS_TRUNCATION).map_err(|e| e.to_string())?;
        let dv = depth(&v_k(i), MAGNUS_TRUNCATION).map_err(|e| e.to_string())?;
        let cmp =
            compare_variation_with_v(i, MAGNUS_TRUNCATION, false).map_err(|e| e.to_string())?;
        let row_ok =
            dvar.lower_bound() >= i && dv == Depth::Exact(i) && cmp.leading_terms_congruent;
        ok &= row_ok;
        rows.push(format!(
            "i={i}: var {dvar}, v {dv}, leading mod K {}",
            cmp.leading_terms_congruent
        ));
    }
    Ok(Outcome::new(
        ok,
        format!(
            "var^2(gamma) ~ {nf} ([x,z]: {is_xz}, Magnus deg<=3 {magnus_agree}); {}",
            rows.join("; ")
        ),
    ))
}

/// `(1/c − 1)(1/a − 1) k!`, the corner coefficient as stated.
fn stated_corner(k: usize) -> LaurentPoly2 {
    let one = LaurentPoly2::one();
    let inv_c = &LaurentPoly2::unit(0, -1) - &one;
    let inv_a = &LaurentPoly2::unit(-1, 0) - &one;
    let fact: i64 = (1..=k as i64).product();
    &(&inv_c * &inv_a) * &LaurentPoly2::from_int(fact)
}

fn corner_only(dev: &[(usize, usize, LaurentPoly2)], dim: usize) -> Option<LaurentPoly2> {
    match dev {
        [] => Some(LaurentPoly2::zero()),
        [(0, j, v)] if *j == dim - 1 => Some(v.clone()),
        _ => None,
    }
}

fn criterion_3() -> Result<Outcome, String> {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 1..=K_MAX {
        let rep = Representation::new(k).map_err(|e| e.to_string())?;
        let dim = 1usize << k;
        let identities = (2..=k + 4)
            .filter(|&i| i != k + 2)
            .all(|i| rep.rho(&v_k(i)).deviation_from_identity().is_empty());
        let corner = corner_only(&rep.rho(&v_k(k + 2)).deviation_from_identity(), dim);
        let stated = stated_corner(k);
        let corner_ok = corner.as_ref() == Some(&stated);
        let a = LaurentPoly2::a();
        let ratio_is_a = corner.as_ref() == Some(&(&stated * &a));

        let mut rng = seeded_rng(SEED + k as u64);
        let mut comm_ok = 0;
        let mut comm_ok_times_a = 0;
        for _ in 0..RANDOM_SAMPLES {
            let s = random_word(&mut rng, 40);
            let (m, n) = exponent_sums_rho(&s);
            let dev = rep.commutator(&s, &v_k(k + 2)).deviation_from_identity();
            let got = corner_only(&dev, dim);
            let factor = &LaurentPoly2::unit(m as i32, -(n as i32)) - &LaurentPoly2::one();
            let want = &factor * &stated;
            if got.as_ref() == Some(&want) {
                comm_ok += 1;
            }
            if got.as_ref() == Some(&(&want * &a)) {
                comm_ok_times_a += 1;
            }
        }
        ok &= identities && corner_ok && comm_ok == RANDOM_SAMPLES;
        parts.push(format!(
            "k={k}: identities {identities}, stated corner {corner_ok} (observed = a * stated: {ratio_is_a}), commutator {comm_ok}/{RANDOM_SAMPLES} (with extra factor a: {comm_ok_times_a}/{RANDOM_SAMPLES})"
        ));
    }
    let mut rng = seeded_rng(SEED ^ 0xfeed);
    let mut nonzero = 0;
    for _ in 0..RANDOM_SAMPLES {
        let len = rng.gen_range(1..=8);
        let terms: Vec<(i64, i64, i64)> = (0..len)
            .map(|_| loop {
                let (m, n) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
                if (m, n) != (0, 0) {
                    break (rng.gen_range(-6..=6), m, n);
                }
            })
            .collect();
        if impossibility_check(&terms).map_err(|e| e.to_string())? {
            nonzero += 1;
        }
    }
    ok &= nonzero == RANDOM_SAMPLES;
    parts.push(format!("impossibility {nonzero}/{RANDOM_SAMPLES}"));
    Ok(Outcome::new(ok, parts.join("; ")))
}

fn criterion_4() -> Result<Outcome, String> {
    let d = Deformation::flagship();
    let rf = |s: &str| parse_ratfunc(s).expect("literal");
    let expected = [rf("0"), rf("t^2"), rf("0"), rf("0"), rf("0")];
    let mut flagship_ok = true;
    for (i, want) in (2..=6).zip(&expected) {
        flagship_ok &= mv(i, &d).map_err(|e| e.to_string())?.value == *want;
    }
    let mut recursion_ok = true;
    let mut all_zero = true;
    let mut chain_ok = true;
    let mut cases = 0;
    for (l1, l) in [(1, 1), (1, 2), (3, 2), (2, -1), (5, 3)] {
        let d = center_family(&RatFunc::t(), &q(1), &q(l1), &q(l)).map_err(|e| e.to_string())?;
        let cls = classify(&d);
        let (Some(w1), Some(w2)) = (cls.lambda1, cls.lambda2) else {
            return Err(format!("center family ({l1}, {l}) has no witnesses"));
        };
        let p = &w1 * &w2;
        for i in 2..6 {
            let lhs = mv(i + 1, &d).map_err(|e| e.to_string())?.value;
            let rhs = mv(i, &d).map_err(|e| e.to_string())?.value.scale(&p);
            all_zero &= lhs.is_zero() && rhs.is_zero();
            recursion_ok &= lhs == rhs;
        }
        // The literal recursion compares zeros; the Wronskian chain behind it is not trivial.
        let h = hierarchy_collapse_check(&d, 6).map_err(|e| e.to_string())?;
        chain_ok &= h.inner_chain_holds == Some(true) && h.chain_ratio == Some(q(l));
        cases += 1;
    }
    Ok(Outcome::new(
        flagship_ok && recursion_ok && chain_ok,
        format!(
            "flagship mv(2..6) = 0, t^2, 0, 0, 0: {flagship_ok}; lambda1 lambda2 recursion on {cases} center families: {recursion_ok} (all terms zero: {all_zero}); inner chain scales by lambda: {chain_ok}"
        ),
    ))
}

fn criterion_5() -> Result<Outcome, String> {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [0.25, 0.36] {
        let r = pairing_table(t, PAIRING_ABS).map_err(|e| e.to_string())?;
        let tested: Vec<_> = r.entries.iter().filter(|e| !e.calibration).collect();
        let worst = tested.iter().map(|e| e.check.error).fold(0.0, f64::max);
        let all = tested.len() == 8 && tested.iter().all(|e| e.check.error <= PAIRING_ABS);
        ok &= all;
        parts.push(format!(
            "t={t}: {} tested entries, max error {worst:.1e}",
            tested.len()
        ));
    }
    Ok(Outcome::new(ok, parts.join("; ")))
}

fn criterion_6() -> Result<Outcome, String> {
    let atlas = Atlas::new(T0).map_err(|e| e.to_string())?;
    let v2 = atlas.word_cycle(&v_k(2)).map_err(|e| e.to_string())?;
    let val =
        iterated_integral(&v2, &[OneForm::Eta(2), OneForm::Eta(3)]).map_err(|e| e.to_string())?;
    let four_pi2 = 4.0 * PI * PI;
    let rel = (val - c(four_pi2, 0.0)).norm() / four_pi2;
    let cauchy = cauchy_suite(T0, CAUCHY_ABS).map_err(|e| e.to_string())?;
    let cauchy_max = cauchy.iter().map(|c| c.computed.norm()).fold(0.0, f64::max);
    let shuffle = shuffle_checks(T0, SHUFFLE_DET_ABS).map_err(|e| e.to_string())?;
    let det = determinant_checks(T0, SHUFFLE_DET_ABS).map_err(|e| e.to_string())?;
    let sd_max = shuffle
        .iter()
        .chain(&det)
        .map(|c| c.error)
        .fold(0.0, f64::max);
    Ok(Outcome::new(
        rel <= FOUR_PI_SQUARED_REL && cauchy_max <= CAUCHY_ABS && sd_max <= SHUFFLE_DET_ABS,
        format!(
            "int_v2 dphi2 dphi3 = {:.9} (rel {rel:.1e}); Cauchy max {cauchy_max:.1e}; shuffle/determinant max {sd_max:.1e} over {} identities",
            val.re,
            shuffle.len() + det.len()
        ),
    ))
}

fn criterion_7() -> Result<Outcome, String> {
    let grid = default_eps_grid();
    let gamma = Atlas::new(T0)
        .and_then(|a| a.real_oval())
        .map_err(|e| e.to_string())?;
    let fit = fit_samples(
        gamma.t,
        holonomy_samples(&gamma, &grid, &Deformation::flagship()).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let max_eps = grid.iter().copied().fold(0.0, f64::max);
    let c3 = fit.c(3).norm();
    let bound = ZERO_FLAG_REL * c3 * max_eps;
    let (c1, c2) = (fit.c(1).norm(), fit.c(2).norm());
    let spread = (fit.richardson.c3_small - fit.richardson.c3_large).norm() / c3;
    Ok(Outcome::new(
        c3 > 0.0 && c1 <= bound && c2 <= bound && spread <= RICHARDSON_REL,
        format!("|c1| = {c1:.1e}, |c2| = {c2:.1e}, bound {bound:.1e}, c3 = {:.9}, Richardson spread {spread:.1e}", fit.c(3).re),
    ))
}

/// `σ` with `∫_{v₂} dφ₂dφ₃ = σ(2πi)² = −4π²σ`.
fn orientation_sign(atlas: &Atlas) -> Result<f64, String> {
    let v2 = atlas.word_cycle(&v_k(2)).map_err(|e| e.to_string())?;
    let val =
        iterated_integral(&v2, &[OneForm::Eta(2), OneForm::Eta(3)]).map_err(|e| e.to_string())?;
    Ok(if val.re < 0.0 { 1.0 } else { -1.0 })
}

fn criterion_8() -> Result<Outcome, String> {
    let atlas = Atlas::new(T0).map_err(|e| e.to_string())?;
    let sigma = orientation_sign(&atlas)?;
    let v3 = atlas.word_cycle(&v_k(3)).map_err(|e| e.to_string())?;
    let fit = fit_samples(
        v3.t,
        holonomy_samples(&v3, &default_eps_grid(), &Deformation::flagship())
            .map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    // (2πi)³ t₀² = −8π³ t₀² i.
    let expected = C64::new(0.0, -8.0 * PI.powi(3) * T0 * T0) * sigma;
    let rel = (fit.c(3) - expected).norm() / expected.norm();
    Ok(Outcome::new(
        rel <= V3_REL,
        format!(
            "sigma = {sigma}; c3(v3) = {:.6e}{:+.9}i against {:+.9}i, rel {rel:.1e}",
            fit.c(3).re,
            fit.c(3).im,
            expected.im
        ),
    ))
}

fn criterion_9() -> Result<Outcome, String> {
    let a = RatFunc::t();
    let hamiltonian = center_family(&a, &q(1), &q(1), &q(0)).map_err(|e| e.to_string())?;
    let checks = center_preservation(&hamiltonian, T0, &[0.01, 0.02, 0.05], HAMILTONIAN_ABS)
        .map_err(|e| e.to_string())?;
    let displacement = checks.iter().map(|c| c.error).fold(0.0, f64::max);

    let atlas = Atlas::new(T0).map_err(|e| e.to_string())?;
    let sigma = orientation_sign(&atlas)?;
    let gamma = atlas.real_oval().map_err(|e| e.to_string())?;
    let i23 = iterated_integral(&gamma, &[OneForm::Eta(2), OneForm::Eta(3)])
        .map_err(|e| e.to_string())?;
    let c3_for = |lambda: i64| -> Result<C64, String> {
        let d = center_family(&a, &q(1), &q(1), &q(lambda)).map_err(|e| e.to_string())?;
        let s = holonomy_samples(&gamma, &default_eps_grid(), &d).map_err(|e| e.to_string())?;
        Ok(fit_samples(gamma.t, s).map_err(|e| e.to_string())?.c(3))
    };
    let (c3_1, c3_2) = (c3_for(1)?, c3_for(2)?);
    // −λ²/(t₀ A′²) ∫dφ₂dφ₃ with A = t, λ = 1.
    let predicted = i23 * (-1.0 / T0) * sigma;
    let rel = (c3_1 - predicted).norm() / predicted.norm();
    let ratio = c3_2 / c3_1;
    let scaling_rel = (ratio - c(4.0, 0.0)).norm() / 4.0;
    Ok(Outcome::new(
        displacement <= HAMILTONIAN_ABS && rel <= CENTER_REL && scaling_rel <= SCALING_REL,
        format!(
            "lambda=0 max |P - t0| = {displacement:.1e}; lambda=1 c3 = {:.9} vs {:.9} (rel {rel:.1e}); c3(2)/c3(1) = {:.6} vs 4 (rel {scaling_rel:.1e})",
            c3_1.re, predicted.re, ratio.re
        ),
    ))
}

fn criterion_10() -> Result<Outcome, String> {
    let r = m2_assembly_check(&Deformation::flagship(), T0, M2_ABS, CAUCHY_ABS)
        .map_err(|e| e.to_string())?;
    let m2 = r.m2.computed.norm();
    Ok(Outcome::new(
        m2 <= M2_ABS,
        format!("|M_gamma,2| = {m2:.1e}"),
    ))
}

type Criterion = (usize, &'static str, u64, fn() -> Result<Outcome, String>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "monodromy identities", 1, criterion_1),
        (2, "variation elements", 30, criterion_2),
        (3, "representation certificates", 120, criterion_3),
        (4, "Wronskian layer", 1, criterion_4),
        (5, "pairing table", 10, criterion_5),
        (6, "iterated integrals", 60, criterion_6),
        (7, "flagship holonomy fit", 60, criterion_7),
        (8, "v3 holonomy cross-check", 300, criterion_8),
        (9, "center checks", 300, criterion_9),
        (10, "second-order assembly", 60, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, title, budget_s, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= Duration::from_secs(budget_s);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {n:>2} {}: {title} [{:.2}s of {budget_s}s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
