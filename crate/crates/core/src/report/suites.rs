//! The checks behind each suite, as independent jobs.

use super::{CheckRecord, Config, Metric, MetricKind, ReportError, Suite};
use crate::curve::{
    additivity_checks, base_point_check, cauchy_suite, center_preservation, determinant_checks,
    four_pi_squared_check, m2_assembly_check, m3_center_crosscheck, melnikov_fit_on_cycle,
    pairing_table, reversal_check, shuffle_checks, v3_crosscheck, Atlas, CenterCrosscheck,
    ErrorKind, MelnikovFit, ValueCheck, C64,
};
use crate::laurent::{
    corner_coefficient_inverse_conjugation, depth_certificate, impossibility_check, rho,
    verify_v_images,
};
use crate::magnus::{compare_variation_with_v, depth, first_difference_degree, Depth};
use crate::melnikov::{
    center_family, classify, hierarchy_collapse_check, m2_reduction_check, make_length3, mv,
    mv3_by_composition, mv3_from_coefficients, parse_ratfunc, ClassTag, Deformation, RatFunc,
};
use crate::word::{
    back_substitute, delta_gen, gamma, m_endo, m_endo_inverse, mon0, mon1, orbit_normal_form,
    parse_word, random_word, rewrite_to_rho_alphabet, seeded_rng, v_k, var_iter, Endo, Generator,
    Word,
};
use num_rational::BigRational;
use rand::Rng;
use serde_json::{json, Value};
use std::sync::{Arc, OnceLock};

type Runner = Box<dyn Fn() -> Result<JobOutcome, String> + Send + Sync>;

/// One check waiting to run.
pub struct Job {
    pub id: String,
    pub suite: Suite,
    pub claim: String,
    pub params: Value,
    pub(crate) run: Runner,
}

impl Job {
    fn new(
        suite: Suite,
        id: impl Into<String>,
        claim: impl Into<String>,
        params: Value,
        run: impl Fn() -> Result<JobOutcome, String> + Send + Sync + 'static,
    ) -> Self {
        Job {
            id: id.into(),
            suite,
            claim: claim.into(),
            params,
            run: Box::new(run),
        }
    }
}

/// What a job measured.
#[derive(Clone, Debug)]
pub struct JobOutcome {
    pub expected: String,
    pub computed: String,
    pub metric: Metric,
    /// Set when the metric alone does not decide the outcome.
    pub pass_override: Option<bool>,
    pub note: Option<String>,
}

impl JobOutcome {
    pub fn exact(
        expected: impl Into<String>,
        computed: impl Into<String>,
        mismatches: usize,
    ) -> Self {
        JobOutcome {
            expected: expected.into(),
            computed: computed.into(),
            metric: Metric::exact(mismatches),
            pass_override: None,
            note: None,
        }
    }

    fn numeric(
        expected: String,
        computed: String,
        kind: MetricKind,
        error: f64,
        tolerance: f64,
    ) -> Self {
        JobOutcome {
            expected,
            computed,
            metric: Metric {
                kind,
                error,
                tolerance,
            },
            pass_override: None,
            note: None,
        }
    }

    pub fn errored(msg: String) -> Self {
        JobOutcome {
            expected: String::new(),
            computed: format!("error: {msg}"),
            metric: Metric {
                kind: MetricKind::Exact,
                error: f64::MAX,
                tolerance: 0.0,
            },
            pass_override: Some(false),
            note: Some(msg),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Requires `extra` on top of the metric.
    fn and_also(mut self, extra: bool) -> Self {
        self.pass_override = Some(self.pass_override.unwrap_or(true) && extra);
        self
    }

    pub fn into_record(self, job: &Job, runtime_ms: f64) -> CheckRecord {
        let mut metric = self.metric;
        if !metric.error.is_finite() {
            metric.error = f64::MAX;
        }
        let pass = metric.within() && self.pass_override.unwrap_or(true);
        CheckRecord {
            id: job.id.clone(),
            claim: job.claim.clone(),
            params: job.params.clone(),
            expected: self.expected,
            computed: self.computed,
            metric,
            pass,
            runtime_ms,
            note: self.note,
        }
    }
}

fn fmt_c(z: C64) -> String {
    format!("{:.12e}{:+.12e}i", z.re, z.im)
}

fn from_value_check(c: &ValueCheck) -> JobOutcome {
    let kind = match c.kind {
        ErrorKind::Absolute => MetricKind::Absolute,
        ErrorKind::Relative => MetricKind::Relative,
    };
    JobOutcome::numeric(
        fmt_c(c.expected),
        fmt_c(c.computed),
        kind,
        c.error,
        c.tolerance,
    )
    .and_also(c.pass)
}

/// Worst case over a list of checks sharing one kind and tolerance.
fn from_value_checks(checks: &[ValueCheck]) -> Result<JobOutcome, String> {
    let worst = checks
        .iter()
        .max_by(|a, b| a.error.total_cmp(&b.error))
        .ok_or("no checks produced")?;
    let failing: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.label.as_str())
        .collect();
    let mut out = from_value_check(worst).and_also(failing.is_empty());
    out.expected = format!("{} identities within tolerance", checks.len());
    out.computed = format!(
        "worst: {} (expected {}, got {})",
        worst.label,
        fmt_c(worst.expected),
        fmt_c(worst.computed)
    );
    if !failing.is_empty() {
        out = out.with_note(format!("failing: {}", failing.join("; ")));
    }
    Ok(out)
}

fn err_string<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn word(s: &str) -> Word {
    parse_word(s).expect("literal word parses")
}

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).expect("literal expression parses")
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Every job of `suite` in pipeline order.
pub fn job_list(suite: Suite, config: &Config) -> Result<Vec<Job>, ReportError> {
    let deformation = config.deformation()?;
    let mut jobs = Vec::new();
    if suite.includes(Suite::Orbit) {
        orbit_jobs(config, &mut jobs);
    }
    if suite.includes(Suite::Repr) {
        repr_jobs(config, &mut jobs);
    }
    if suite.includes(Suite::Melnikov) {
        melnikov_jobs(&deformation, &mut jobs);
    }
    if suite.includes(Suite::Numeric) {
        numeric_jobs(config, &deformation, &mut jobs);
    }
    Ok(jobs)
}

fn image_mismatches(endo: &Endo, expected: &[(Generator, &str)]) -> (Vec<String>, usize) {
    let mut shown = Vec::new();
    let mut bad = 0;
    for &(g, w) in expected {
        let got = endo.image(g);
        if *got != word(w) {
            bad += 1;
        }
        shown.push(format!("{g:?} -> {got}"));
    }
    (shown, bad)
}

fn orbit_jobs(config: &Config, jobs: &mut Vec<Job>) {
    use Generator::*;
    let s = Suite::Orbit;
    jobs.push(Job::new(
        s,
        "orbit.mon1_images",
        "Mon1 fixes gamma and sends each delta_i to gamma delta_i",
        json!({}),
        || {
            let expected = [
                (G, "g"),
                (D0, "g d0"),
                (D1, "g d1"),
                (D2, "g d2"),
                (D3, "g d3"),
            ];
            let (shown, bad) = image_mismatches(&mon1(), &expected);
            Ok(JobOutcome::exact(
                "g, g d0, g d1, g d2, g d3",
                shown.join(", "),
                bad,
            ))
        },
    ));
    jobs.push(Job::new(
        s,
        "orbit.mon0_images",
        "Mon0 sends gamma to delta gamma and conjugates delta_j by the product of the preceding deltas",
        json!({}),
        || {
            let expected = [
                (G, "d0 d1 d2 d3 g"),
                (D0, "d0"),
                (D1, "d0 d1 d0'"),
                (D2, "d0 d1 d2 d1' d0'"),
                (D3, "d0 d1 d2 d3 d2' d1' d0'"),
            ];
            let (shown, bad) = image_mismatches(&mon0(), &expected);
            let want: Vec<&str> = expected.iter().map(|e| e.1).collect();
            Ok(JobOutcome::exact(want.join(", "), shown.join(", "), bad))
        },
    ));
    let samples = config.samples;
    let seed = config.seed;
    jobs.push(Job::new(
        s,
        "orbit.m_conjugation",
        "M(w) = (d0 d1)^-1 Mon0(w) (d0 d1) on random words, and M^-1 inverts M",
        json!({"samples": samples, "seed": seed, "max_len": 30}),
        move || {
            let mut rng = seeded_rng(seed);
            let c = &delta_gen(0) * &delta_gen(1);
            let (m, mi, m0) = (m_endo(), m_endo_inverse(), mon0());
            let mut bad = 0;
            for _ in 0..samples {
                let w = random_word(&mut rng, 30);
                let direct = &(&c.inverse() * &m0.apply(&w)) * &c;
                let image = m.apply(&w);
                if image != direct || mi.apply(&image) != w {
                    bad += 1;
                }
            }
            Ok(JobOutcome::exact(
                format!("{samples} equalities"),
                format!("{} equalities", samples - bad),
                bad,
            ))
        },
    ));
    let n = config.magnus_degree;
    jobs.push(Job::new(
        s,
        "orbit.var2_normal_form",
        "var^2(gamma) reduces modulo K to [x,z], and that word has the Magnus expansion of v_2 through degree 3",
        json!({"magnus_degree": 3}),
        || {
            let nf = orbit_normal_form(&var_iter(&gamma(), 2)).ok_or("var^2(gamma) has no orbit normal form")?;
            let target = rewrite_to_rho_alphabet(&v_k(2));
            let diff = first_difference_degree(&back_substitute(&nf), &v_k(2), 3).map_err(err_string)?;
            let mismatches = usize::from(nf != target) + usize::from(diff.is_some());
            Ok(JobOutcome::exact(
                format!("{target}; Magnus agreement through degree 3"),
                format!(
                    "{nf}; first Magnus difference {}",
                    diff.map_or("none".to_string(), |d| d.to_string())
                ),
                mismatches,
            ))
        },
    ));
    for i in 2..=5usize {
        jobs.push(Job::new(
            s,
            format!("orbit.variation_depth.i{i}"),
            format!(
                "var^{i}(gamma) has Magnus depth at least {i}, v_{i} has depth exactly {i}, and their degree-{i} parts agree modulo the leading parts of K"
            ),
            json!({"i": i, "magnus_degree": n}),
            move || {
                let dv = depth(&var_iter(&gamma(), i), n).map_err(err_string)?;
                let dvi = depth(&v_k(i), n).map_err(err_string)?;
                let cmp = compare_variation_with_v(i, n, false).map_err(err_string)?;
                let proj = compare_variation_with_v(i, n, true).map_err(err_string)?;
                let mismatches = usize::from(dv.lower_bound() < i)
                    + usize::from(dvi != Depth::Exact(i))
                    + usize::from(!cmp.leading_terms_congruent)
                    + usize::from(!proj.leading_terms_congruent);
                let lit = |c: &crate::magnus::VariationComparison| {
                    c.literal_first_difference.map_or("none".into(), |d| d.to_string())
                };
                Ok(JobOutcome::exact(
                    format!("depth(var) >= {i}, depth(v) = {i}, congruent leading parts"),
                    format!(
                        "depth(var) {dv}, depth(v) {dvi}, congruent {} (projected {})",
                        cmp.leading_terms_congruent, proj.leading_terms_congruent
                    ),
                    mismatches,
                )
                .with_note(format!(
                    "literal first Magnus difference: degree {} unprojected, {} projected",
                    lit(&cmp),
                    lit(&proj)
                )))
            },
        ));
    }
}

fn repr_jobs(config: &Config, jobs: &mut Vec<Job>) {
    let s = Suite::Repr;
    for k in 1..=config.k_max {
        jobs.push(Job::new(
            s,
            format!("repr.v_images.k{k}"),
            format!(
                "rho_{k}(v_i) = I for i in 2..={} except i = {}, where rho_{k}(v_{}) - I = -(a-1)(1/c-1){k}! times the corner matrix",
                k + 4,
                k + 2,
                k + 2
            ),
            json!({"k": k, "i_max": k + 4}),
            move || {
                let r = verify_v_images(k, k + 4).map_err(err_string)?;
                let corner = r.checks.iter().find_map(|c| c.corner.clone()).unwrap_or_default();
                Ok(JobOutcome::exact(
                    format!("{} identities", r.checks.len()),
                    format!("all hold; corner {corner}"),
                    r.checks.iter().filter(|c| !c.pass).count(),
                ))
            },
        ));
        jobs.push(Job::new(
            s,
            format!("repr.stated_corner.k{k}"),
            format!(
                "rho_{k}(v_{}) - I = (1/c-1)(1/a-1){k}! times the corner matrix",
                k + 2
            ),
            json!({"k": k}),
            move || {
                let dev = rho(k, &v_k(k + 2))
                    .map_err(err_string)?
                    .deviation_from_identity();
                let dim = 1usize << k;
                let stated = corner_coefficient_inverse_conjugation(k);
                let observed = match dev.as_slice() {
                    [(0, j, v)] if *j == dim - 1 => Some(v.clone()),
                    _ => None,
                };
                let ok = observed.as_ref() == Some(&stated);
                Ok(JobOutcome::exact(
                    stated.to_string(),
                    observed.map_or_else(
                        || format!("{} nonzero deviations", dev.len()),
                        |v| v.to_string(),
                    ),
                    usize::from(!ok),
                )
                .with_note("the observed corner equals the stated coefficient times a"))
            },
        ));
        let (samples, seed) = (config.samples, config.seed.wrapping_add(k as u64));
        jobs.push(Job::new(
            s,
            format!("repr.certificate.k{k}"),
            format!(
                "[rho_{k}(s), rho_{k}(v_{})] is I plus (a^m c^-n - 1) times the corner of rho_{k}(v_{}) - I on random words, and no integer combination of the harvested corners cancels it",
                k + 2,
                k + 2
            ),
            json!({"k": k, "samples": samples, "seed": seed}),
            move || {
                let c = depth_certificate(k, samples, seed).map_err(err_string)?;
                let bad = c.checks.iter().filter(|x| !x.pass).count() + usize::from(!c.pass);
                let names: Vec<&str> = c.checks.iter().map(|x| x.name.as_str()).collect();
                Ok(JobOutcome::exact(
                    "v_images, commutator_scalars, impossibility",
                    names.join(", "),
                    bad,
                ))
            },
        ));
    }
    let (samples, seed) = (config.samples, config.seed);
    jobs.push(Job::new(
        s,
        "repr.impossibility",
        "sum lambda_i a^m_i c^-n_i = 1 + sum lambda_i fails identically whenever each (m_i, n_i) is nonzero",
        json!({"samples": samples, "seed": seed}),
        move || {
            let mut rng = seeded_rng(seed ^ 0x5eed);
            let mut bad = 0;
            for _ in 0..samples {
                let len = rng.gen_range(1..=8);
                let terms: Vec<(i64, i64, i64)> = (0..len)
                    .map(|_| loop {
                        let (m, n) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
                        if (m, n) != (0, 0) {
                            break (rng.gen_range(-6..=6), m, n);
                        }
                    })
                    .collect();
                if !impossibility_check(&terms).map_err(err_string)? {
                    bad += 1;
                }
            }
            Ok(JobOutcome::exact(
                format!("{samples} nonvanishing"),
                format!("{} nonvanishing", samples - bad),
                bad,
            ))
        },
    ));
}

fn center_cases() -> Vec<(i64, i64)> {
    vec![(1, 0), (1, 1), (1, 2), (3, 2), (2, -1)]
}

fn melnikov_jobs(d: &Deformation, jobs: &mut Vec<Job>) {
    let s = Suite::Melnikov;
    let dj = json!({"a1": d.a1.to_string(), "a2": d.a2.to_string(), "a3": d.a3.to_string()});
    let d1 = d.clone();
    jobs.push(Job::new(
        s,
        "mel.mv_values",
        "mv(2) = 0, mv(3) = t^2 and mv(i) = 0 for i = 4..6",
        dj.clone(),
        move || {
            let expected = [rf("0"), rf("t^2"), rf("0"), rf("0"), rf("0")];
            let mut got = Vec::new();
            let mut bad = 0;
            for (i, want) in (2..=6).zip(&expected) {
                let v = mv(i, &d1).map_err(err_string)?.value;
                if v != *want {
                    bad += 1;
                }
                got.push(v.to_string());
            }
            Ok(JobOutcome::exact("0, t^2, 0, 0, 0", got.join(", "), bad))
        },
    ));
    let d2 = d.clone();
    jobs.push(Job::new(
        s,
        "mel.classification",
        "the deformation is of length 3",
        dj.clone(),
        move || {
            let c = classify(&d2);
            Ok(JobOutcome::exact(
                "LENGTH3",
                format!("{:?}", c.tag),
                usize::from(c.tag != ClassTag::Length3),
            ))
        },
    ));
    let d3 = d.clone();
    jobs.push(Job::new(
        s,
        "mel.mv3_routes",
        "W(a2, W(a2 - a3, a1 - a3)) equals the nested Wronskian from composing leading terms",
        dj.clone(),
        move || {
            let direct = mv3_from_coefficients(&d3);
            let composed = mv3_by_composition(&d3).unwrap_or_else(RatFunc::zero);
            let hierarchy = mv(3, &d3).map_err(err_string)?.value;
            let bad = usize::from(direct != composed) + usize::from(direct != hierarchy);
            Ok(JobOutcome::exact(
                direct.to_string(),
                format!("{composed}; {hierarchy}"),
                bad,
            ))
        },
    ));
    let d4 = d.clone();
    jobs.push(Job::new(
        s,
        "mel.m2_reduction",
        "when W(a2, a1 - a3) = 0 the second-order sum reduces to W(a1,a2)(I12 + I32) on closed cycles",
        dj,
        move || {
            let r = m2_reduction_check(&d4);
            Ok(JobOutcome::exact("identity holds", format!("identity holds: {}", r.identity_holds), usize::from(!r.identity_holds)))
        },
    ));
    jobs.push(Job::new(
        s,
        "mel.make_length3",
        "a1 = a3 + alpha1, a2 = lambda alpha1 with a3 built from the antiderivative gives mv(2) = 0 and mv(3) = lambda W(alpha1, alpha2)",
        json!({"alpha1": "t", "alpha2": "t^2", "c0": 0, "lambda": 2}),
        || {
            let d = make_length3(&rf("t"), &rf("t^2"), &q(0), &q(2)).map_err(err_string)?;
            let m3 = mv(3, &d).map_err(err_string)?.value;
            let want = rf("2t^2");
            Ok(JobOutcome::exact(want.to_string(), m3.to_string(), usize::from(m3 != want)))
        },
    ));
    for (l1, l) in center_cases() {
        jobs.push(Job::new(
            s,
            format!("mel.center_hierarchy.l1_{l1}.l_{l}"),
            "for the center family, mv(2) = mv(3) = 0 forces mv(i) = 0 for i up to 6 and mv(i+1) = lambda1 lambda2 mv(i)",
            json!({"A": "t", "c1": 1, "lambda1": l1, "lambda": l, "i_max": 6}),
            move || {
                let d = center_family(&RatFunc::t(), &q(1), &q(l1), &q(l)).map_err(err_string)?;
                let r = hierarchy_collapse_check(&d, 6).map_err(err_string)?;
                let bad = usize::from(!r.higher_vanish)
                    + usize::from(r.product_recursion_holds != Some(true))
                    + usize::from(r.inner_chain_holds != Some(true));
                Ok(JobOutcome::exact(
                    "mv(4..6) = 0, recursion holds",
                    format!(
                        "higher vanish {}, product recursion {:?}, inner chain ratio {:?}",
                        r.higher_vanish,
                        r.product_recursion_holds,
                        r.chain_ratio.map(|x| x.to_string())
                    ),
                    bad,
                )
                .with_note("the product recursion holds because both sides vanish; the inner chain scales by lambda2/lambda1"))
            },
        ));
    }
}

fn zero_flag_outcome(fit: &MelnikovFit, zero_relative: f64) -> JobOutcome {
    let max_eps = fit.eps_grid.iter().copied().fold(0.0, f64::max);
    let c3 = fit.c(3).norm();
    let lower = fit.c(1).norm().max(fit.c(2).norm());
    let ratio = lower / (c3 * max_eps);
    JobOutcome::numeric(
        format!("|c1|, |c2| <= {zero_relative:e} |c3| max eps; c3 Richardson-stable"),
        format!(
            "c1 = {}, c2 = {}, c3 = {}, spread {:.2e}",
            fmt_c(fit.c(1)),
            fmt_c(fit.c(2)),
            fmt_c(fit.c(3)),
            fit.richardson.relative_spread
        ),
        MetricKind::Relative,
        ratio,
        zero_relative,
    )
    .and_also(c3 > 0.0 && fit.richardson.stable)
}

type CenterCache = Arc<OnceLock<Result<CenterCrosscheck, String>>>;

fn center_fit(
    cache: &CenterCache,
    lambda: i64,
    t0: f64,
    grid: &[f64],
    tol: f64,
) -> Result<CenterCrosscheck, String> {
    cache
        .get_or_init(|| {
            m3_center_crosscheck(&RatFunc::t(), &q(1), &q(1), &q(lambda), t0, grid, tol)
                .map_err(err_string)
        })
        .clone()
}

fn numeric_jobs(config: &Config, d: &Deformation, jobs: &mut Vec<Job>) {
    let s = Suite::Numeric;
    let tol = config.tolerances.clone();
    let t0 = config.t0;
    let grid = config.eps_grid.clone();
    for t in [0.25, 0.36] {
        let tp = tol.pairing;
        jobs.push(Job::new(
            s,
            format!("num.pairing.t{t}"),
            "the periods of eta_j over delta_i form the table 2 pi i [[0,0,1],[0,1,-1],[1,-1,0]] after fixing one orientation",
            json!({"t": t, "calibration_entry": [1, 3]}),
            move || {
                let r = pairing_table(t, tp).map_err(err_string)?;
                let tested: Vec<ValueCheck> = r.entries.iter().filter(|e| !e.calibration).map(|e| e.check.clone()).collect();
                Ok(from_value_checks(&tested)?
                    .and_also(r.pass)
                    .with_note(format!("{} tested entries, calibration sign {}", tested.len(), r.calibration_sign)))
            },
        ));
    }
    let tc = tol.cauchy;
    jobs.push(Job::new(
        s,
        "num.cauchy",
        "integrals over the real oval of forms holomorphic inside it vanish",
        json!({"t": t0}),
        move || from_value_checks(&cauchy_suite(t0, tc).map_err(err_string)?),
    ));
    let tf = tol.four_pi_squared;
    jobs.push(Job::new(
        s,
        "num.four_pi_squared",
        "the iterated integral of dphi2 dphi3 over v_2 equals 4 pi^2",
        json!({"t": t0}),
        move || {
            Ok(from_value_check(
                &four_pi_squared_check(t0, tf).map_err(err_string)?,
            ))
        },
    ));
    let ti = tol.iterated_identities;
    jobs.push(Job::new(
        s,
        "num.shuffle",
        "int w1 w2 + int w2 w1 = int w1 * int w2 on closed cycles",
        json!({"t": t0}),
        move || from_value_checks(&shuffle_checks(t0, ti).map_err(err_string)?),
    ));
    jobs.push(Job::new(
        s,
        "num.determinant",
        "int over [s1, s2] of w1 w2 equals det(int_si wj)",
        json!({"t": t0}),
        move || from_value_checks(&determinant_checks(t0, ti).map_err(err_string)?),
    ));
    let (seed, tp) = (config.seed, tol.pairing);
    jobs.push(Job::new(
        s,
        "num.additivity",
        "line integrals of eta_j are additive under concatenation of based loops",
        json!({"t": t0, "pairs": 20, "seed": seed}),
        move || {
            let atlas = Atlas::new(t0).map_err(err_string)?;
            let mut rng = seeded_rng(seed ^ 0xadd);
            let gens = [Generator::D1, Generator::D2, Generator::D3, Generator::D0];
            let mut checks = Vec::new();
            for _ in 0..20 {
                let u = crate::word::random_word_over(&mut rng, 3, &gens);
                let v = crate::word::random_word_over(&mut rng, 3, &gens);
                checks.extend(additivity_checks(&atlas, &u, &v, tp).map_err(err_string)?);
            }
            from_value_checks(&checks)
        },
    ));
    let d_gamma = d.clone();
    let g1 = grid.clone();
    jobs.push(Job::new(
        s,
        "num.gamma_fit",
        "along the real oval the first nonzero term of P(t0) - t0 is of order eps^3",
        json!({"t0": t0, "eps_grid": g1.len()}),
        move || {
            let cyc = Atlas::new(t0)
                .and_then(|a| a.real_oval())
                .map_err(err_string)?;
            let fit = melnikov_fit_on_cycle(&cyc, &g1, &d_gamma).map_err(err_string)?;
            Ok(zero_flag_outcome(&fit, crate::curve::ZERO_RELATIVE))
        },
    ));
    let d_v2 = d.clone();
    let g2 = grid.clone();
    jobs.push(Job::new(
        s,
        "num.v2_fit",
        "along v_2 the holonomy also starts at order eps^3",
        json!({"t0": t0, "eps_grid": g2.len()}),
        move || {
            let cyc = Atlas::new(t0)
                .and_then(|a| a.word_cycle(&v_k(2)))
                .map_err(err_string)?;
            let fit = melnikov_fit_on_cycle(&cyc, &g2, &d_v2).map_err(err_string)?;
            Ok(zero_flag_outcome(&fit, crate::curve::ZERO_RELATIVE))
        },
    ));
    let d_v3 = d.clone();
    let (g3, tr) = (grid.clone(), tol.fit_relative);
    jobs.push(Job::new(
        s,
        "num.v3_crosscheck",
        "the eps^3 coefficient of the holonomy along v_3 is sigma (2 pi i)^3 mv(3)(t0)",
        json!({"t0": t0, "eps_grid": g3.len()}),
        move || {
            let r = v3_crosscheck(&d_v3, t0, &g3, tr).map_err(err_string)?;
            Ok(from_value_check(&r.check).with_note(format!(
                "sigma = {} from int_v2 dphi2 dphi3 = {}",
                r.calibration.sign,
                fmt_c(r.calibration.v2_value)
            )))
        },
    ));
    let th = tol.hamiltonian;
    jobs.push(Job::new(
        s,
        "num.hamiltonian",
        "the center family with lambda = 0 preserves the center: P(t0) = t0",
        json!({"A": "t", "c1": 1, "lambda1": 1, "lambda": 0, "eps": [0.01, 0.02, 0.05]}),
        move || {
            let d = center_family(&RatFunc::t(), &q(1), &q(1), &q(0)).map_err(err_string)?;
            from_value_checks(
                &center_preservation(&d, t0, &[0.01, 0.02, 0.05], th).map_err(err_string)?,
            )
        },
    ));
    let cache1: CenterCache = Arc::default();
    let cache2: CenterCache = Arc::default();
    let center_params = |l: i64| json!({"A": "t", "c1": 1, "lambda1": 1, "lambda": l, "t0": t0});
    {
        let (c, g) = (cache1.clone(), grid.clone());
        jobs.push(Job::new(
            s,
            "num.center_stated.lambda1",
            "for lambda = 1 the eps^3 coefficient is -lambda^2/(t0 A') int dphi2 dphi3",
            center_params(1),
            move || Ok(from_value_check(&center_fit(&c, 1, t0, &g, tr)?.stated)),
        ));
        let (c, g) = (cache1.clone(), grid.clone());
        jobs.push(Job::new(
            s,
            "num.center_corrected.lambda1",
            "for lambda = 1 the eps^3 coefficient is -lambda lambda1/(t0 A') int dphi2 dphi3",
            center_params(1),
            move || Ok(from_value_check(&center_fit(&c, 1, t0, &g, tr)?.corrected)),
        ));
        let (c, g) = (cache2.clone(), grid.clone());
        jobs.push(Job::new(
            s,
            "num.center_corrected.lambda2",
            "for lambda = 2 the eps^3 coefficient is -lambda lambda1/(t0 A') int dphi2 dphi3",
            center_params(2),
            move || Ok(from_value_check(&center_fit(&c, 2, t0, &g, tr)?.corrected)),
        ));
    }
    let ts = tol.scaling;
    for (id, factor, claim) in [
        ("num.center_scaling_stated", 4.0, "the center eps^3 coefficient scales as lambda^2: lambda = 2 gives 4 times lambda = 1"),
        ("num.center_scaling_corrected", 2.0, "the center eps^3 coefficient scales linearly in lambda: lambda = 2 gives 2 times lambda = 1"),
    ] {
        let (c1, c2, g) = (cache1.clone(), cache2.clone(), grid.clone());
        jobs.push(Job::new(s, id, claim, json!({"lambda": [1, 2], "expected_ratio": factor}), move || {
            let a = center_fit(&c1, 1, t0, &g, tr)?.fit.c(3);
            let b = center_fit(&c2, 2, t0, &g, tr)?.fit.c(3);
            Ok(from_value_check(&ValueCheck::relative(
                "c3(lambda=2)/c3(lambda=1)",
                C64::new(factor, 0.0),
                b / a,
                ts,
            )))
        }));
    }
    let d_m2 = d.clone();
    let (tm, tc) = (tol.m2, tol.cauchy);
    jobs.push(Job::new(
        s,
        "num.m2_assembly",
        "the second-order Melnikov function on the real oval, assembled from numeric iterated integrals, vanishes",
        json!({"t0": t0}),
        move || {
            let r = m2_assembly_check(&d_m2, t0, tm, tc).map_err(err_string)?;
            Ok(from_value_check(&r.m2).and_also(r.pass).with_note(format!(
                "I12 = {}, I32 = {}, I13 = {}",
                fmt_c(r.i12),
                fmt_c(r.i32),
                fmt_c(r.i13)
            )))
        },
    ));
    let d_bp = d.clone();
    let g4 = grid.clone();
    jobs.push(Job::new(
        s,
        "num.base_point",
        "the leading holonomy coefficient of v_3 does not depend on the base point on the oval",
        json!({"t0": t0, "word": "v3"}),
        move || {
            Ok(from_value_check(
                &base_point_check(&v_k(3), &d_bp, t0, &g4, tr).map_err(err_string)?,
            ))
        },
    ));
    let d_rev = d.clone();
    let g5 = grid;
    jobs.push(Job::new(
        s,
        "num.reversal",
        "reversing v_3 negates its leading holonomy coefficient",
        json!({"t0": t0, "word": "v3"}),
        move || {
            Ok(from_value_check(
                &reversal_check(&v_k(3), &d_rev, t0, &g5, tr).map_err(err_string)?,
            ))
        },
    ));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let jobs = job_list(Suite::All, &Config::default()).unwrap();
        let mut ids: Vec<&str> = jobs.iter().map(|j| j.id.as_str()).collect();
        let n = ids.len();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn orbit_suite_passes() {
        let cfg = Config {
            samples: 20,
            ..Config::default()
        };
        let r = crate::report::run_suite(Suite::Orbit, &cfg).unwrap();
        assert!(r.pass, "{}", r.summary_table());
    }

    #[test]
    fn grid_default_matches_fit_module() {
        assert_eq!(Config::default().eps_grid, crate::curve::default_eps_grid());
    }
}
