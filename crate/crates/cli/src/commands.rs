//! The `orbit`, `repr`, `mel` and `num` subcommand trees.

use crate::{plots, resolve_config, CmdResult, Failure, GlobalArgs};
use clap::{Args, Subcommand, ValueEnum};
use num_rational::BigRational;
use orbitdepth::curve::{self, C64};
use orbitdepth::laurent;
use orbitdepth::magnus;
use orbitdepth::melnikov::{self, Deformation, RatFunc};
use orbitdepth::report::{output_dir, Config};
use orbitdepth::word::{self, Word};
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Failure::failed)?;
    crate::print_stdout(&format!("{text}\n"))
}

fn status(pass: bool) -> u8 {
    if pass {
        0
    } else {
        crate::EXIT_FAILED
    }
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    word::parse_word(s).map_err(|e| Failure::usage(format!("word {s:?}: {e}")))
}

fn parse_rat(s: &str) -> Result<RatFunc, Failure> {
    melnikov::parse_ratfunc(s).map_err(|e| Failure::usage(format!("expression {s:?}: {e}")))
}

fn parse_q(s: &str) -> Result<BigRational, Failure> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Failure::usage(format!("rational {s:?}: {e}")))
}

#[derive(Subcommand, Debug)]
pub enum OrbitCmd {
    /// Iterated variation var^i(w) = M(w) w^-1.
    Var {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Image of a word under a monodromy automorphism.
    Mon {
        #[arg(long, value_enum)]
        which: MonArg,
        #[arg(long)]
        word: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Lowest degree of the Magnus expansion and its leading terms.
    Depth {
        #[arg(long)]
        word: String,
        #[arg(long = "max-degree", default_value_t = magnus::DEFAULT_DEGREE)]
        max_degree: usize,
    },
    /// Projection killing gamma and delta_0, and the orbit normal form.
    Project {
        #[arg(long)]
        word: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MonArg {
    Mon0,
    Mon1,
    M,
}

pub fn orbit(_g: &GlobalArgs, cmd: &OrbitCmd) -> CmdResult {
    match cmd {
        OrbitCmd::Var { word, times } => {
            let w = parse_word(word)?;
            let v = word::var_iter(&w, *times);
            emit(&json!({
                "word": w.to_string(),
                "times": times,
                "result": v.to_string(),
                "length": v.len(),
                "rho_alphabet": word::rewrite_to_rho_alphabet(&v).to_string(),
            }))?;
        }
        OrbitCmd::Mon {
            which,
            word,
            inverse,
        } => {
            let w = parse_word(word)?;
            let endo = match (which, inverse) {
                (MonArg::Mon0, false) => word::mon0(),
                (MonArg::Mon0, true) => word::mon0_inverse(),
                (MonArg::Mon1, false) => word::mon1(),
                (MonArg::Mon1, true) => word::mon1_inverse(),
                (MonArg::M, false) => word::m_endo(),
                (MonArg::M, true) => word::m_endo_inverse(),
            };
            emit(&json!({
                "word": w.to_string(),
                "map": format!("{which:?}").to_lowercase(),
                "inverse": inverse,
                "image": endo.apply(&w).to_string(),
            }))?;
        }
        OrbitCmd::Depth { word, max_degree } => {
            let w = parse_word(word)?;
            emit(&magnus::depth_lower_bound(&w, *max_degree).map_err(Failure::usage)?)?;
        }
        OrbitCmd::Project { word } => {
            let w = parse_word(word)?;
            emit(&json!({
                "word": w.to_string(),
                "projected": word::project_mod_gamma_subgroup(&w).to_string(),
                "orbit_normal_form": word::orbit_normal_form(&w).map(|n| n.to_string()),
            }))?;
        }
    }
    Ok(0)
}

#[derive(Subcommand, Debug)]
pub enum ReprCmd {
    /// A_k, B_k, C_k as string matrices.
    Matrices {
        #[arg(long)]
        k: usize,
    },
    /// rho_k(v_i) for i = 2..=imax.
    CheckV {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        imax: usize,
    },
    /// Corner of [rho_k(s), rho_k(v_{k+2})] against its closed form.
    CommScalar {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        word: String,
    },
    /// Whether sum l_i (a^m_i c^-n_i) - sum l_i - 1 is a nonzero Laurent polynomial.
    Impossible {
        /// Semicolon-separated triples "l,m,n".
        #[arg(long)]
        terms: String,
    },
    /// Bundled certificate for level k; uses the global --samples and --seed.
    Certificate {
        #[arg(long)]
        k: usize,
    },
}

fn parse_terms(s: &str) -> Result<Vec<(i64, i64, i64)>, Failure> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: Vec<i64> = t
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::usage(format!("term {t:?}: {e}")))?;
            match v.as_slice() {
                [l, m, n] => Ok((*l, *m, *n)),
                _ => Err(Failure::usage(format!("term {t:?}: expected l,m,n"))),
            }
        })
        .collect()
}

pub fn repr(g: &GlobalArgs, cmd: &ReprCmd) -> CmdResult {
    let usage = |e: laurent::ReprError| Failure::usage(e);
    match cmd {
        ReprCmd::Matrices { k } => {
            let (a, b, c) = laurent::base_matrices(*k).map_err(usage)?;
            emit(&json!({"k": k, "A": a.to_strings(), "B": b.to_strings(), "C": c.to_strings()}))?;
            Ok(0)
        }
        ReprCmd::CheckV { k, imax } => match laurent::verify_v_images(*k, *imax) {
            Ok(r) => {
                emit(&r)?;
                Ok(status(r.pass))
            }
            Err(e @ laurent::ReprError::IdentityMismatch { .. }) => Err(Failure::failed(e)),
            Err(e) => Err(usage(e)),
        },
        ReprCmd::CommScalar { k, word } => {
            let s = parse_word(word)?;
            match laurent::commutator_scalar(*k, &s) {
                Ok(cs) => {
                    emit(
                        &json!({"k": k, "word": s.to_string(), "m": cs.m, "n": cs.n, "scalar": cs.scalar.to_string()}),
                    )?;
                    Ok(0)
                }
                Err(e @ laurent::ReprError::IdentityMismatch { .. }) => Err(Failure::failed(e)),
                Err(e) => Err(usage(e)),
            }
        }
        ReprCmd::Impossible { terms } => {
            let t = parse_terms(terms)?;
            let nonzero = laurent::impossibility_check(&t).map_err(usage)?;
            emit(&json!({"terms": t, "nonvanishing": nonzero}))?;
            Ok(status(nonzero))
        }
        ReprCmd::Certificate { k } => {
            let cfg = resolve_config(g, None)?;
            match laurent::depth_certificate(*k, cfg.samples, cfg.seed) {
                Ok(c) => {
                    emit(&c)?;
                    Ok(status(c.pass))
                }
                Err(e @ laurent::ReprError::IdentityMismatch { .. }) => Err(Failure::failed(e)),
                Err(e) => Err(usage(e)),
            }
        }
    }
}

/// `a₁, a₂, a₃`; any omitted coefficient comes from the configured deformation.
#[derive(Args, Debug, Clone, Default)]
pub struct DeformationArgs {
    #[arg(long)]
    pub a1: Option<String>,
    #[arg(long)]
    pub a2: Option<String>,
    #[arg(long)]
    pub a3: Option<String>,
}

impl DeformationArgs {
    fn resolve(&self, cfg: &Config) -> Result<Deformation, Failure> {
        let base = cfg.deformation().map_err(Failure::usage)?;
        let pick = |s: &Option<String>, fallback: &RatFunc| match s {
            Some(s) => parse_rat(s),
            None => Ok(fallback.clone()),
        };
        if self.a1.is_none() && self.a2.is_none() && self.a3.is_none() {
            return Ok(base);
        }
        Ok(Deformation::raw(
            pick(&self.a1, &base.a1)?,
            pick(&self.a2, &base.a2)?,
            pick(&self.a3, &base.a3)?,
        ))
    }
}

/// Parameters of the center family `a₂ = 1/A′`, `a₁ = a₂(λA + c₁)`, `a₃ = a₂(λA + c₁ − λ₁)`.
#[derive(Args, Debug, Clone)]
pub struct CenterArgs {
    #[arg(long = "A", default_value = "t")]
    pub a: String,
    #[arg(long, default_value = "1")]
    pub c1: String,
    #[arg(long, default_value = "1")]
    pub lambda1: String,
    #[arg(long, default_value = "1")]
    pub lambda: String,
}

struct CenterParams {
    a: RatFunc,
    c1: BigRational,
    lambda1: BigRational,
    lambda: BigRational,
}

impl CenterArgs {
    fn parse(&self) -> Result<CenterParams, Failure> {
        Ok(CenterParams {
            a: parse_rat(&self.a)?,
            c1: parse_q(&self.c1)?,
            lambda1: parse_q(&self.lambda1)?,
            lambda: parse_q(&self.lambda)?,
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum MelCmd {
    /// W(f, g) = f g' - f' g.
    Wronskian {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Length-3 deformation from alpha1, alpha2, c0 and lambda.
    Build {
        #[arg(long)]
        alpha1: String,
        #[arg(long)]
        alpha2: String,
        #[arg(long, default_value = "0")]
        c0: String,
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// Class tag and integrability witnesses of a deformation.
    Classify {
        #[command(flatten)]
        deformation: DeformationArgs,
    },
    /// Leading term of M_{v_i, i}.
    Mv {
        #[arg(long)]
        i: u32,
        #[command(flatten)]
        deformation: DeformationArgs,
    },
    /// Center-family deformation and its Melnikov hierarchy.
    Center {
        #[command(flatten)]
        center: CenterArgs,
        #[arg(long = "i-max", default_value_t = 6)]
        i_max: u32,
    },
}

pub fn mel(g: &GlobalArgs, cmd: &MelCmd) -> CmdResult {
    let failed = |e: melnikov::MelnikovError| Failure::failed(e);
    match cmd {
        MelCmd::Wronskian { f, g } => {
            let w = melnikov::wronskian(&parse_rat(f)?, &parse_rat(g)?);
            emit(&json!({"f": f, "g": g, "wronskian": w.to_string()}))?;
        }
        MelCmd::Build {
            alpha1,
            alpha2,
            c0,
            lambda,
        } => {
            let d = melnikov::make_length3(
                &parse_rat(alpha1)?,
                &parse_rat(alpha2)?,
                &parse_q(c0)?,
                &parse_q(lambda)?,
            )
            .map_err(failed)?;
            let mv3 = melnikov::mv(3, &d).map_err(failed)?;
            emit(&json!({
                "deformation": d,
                "mv3": mv3.value.to_string(),
                "classification": melnikov::classify(&d),
            }))?;
        }
        MelCmd::Classify { deformation } => {
            let d = deformation.resolve(&resolve_config(g, None)?)?;
            emit(&json!({"deformation": d, "classification": melnikov::classify(&d)}))?;
        }
        MelCmd::Mv { i, deformation } => {
            let d = deformation.resolve(&resolve_config(g, None)?)?;
            let m = melnikov::mv(*i, &d).map_err(Failure::usage)?;
            emit(&json!({
                "i": i,
                "value": m.value.to_string(),
                "two_pi_i_power": m.two_pi_i_power,
                "vanishes": m.vanishes,
            }))?;
        }
        MelCmd::Center { center, i_max } => {
            let p = center.parse()?;
            let d = melnikov::center_family(&p.a, &p.c1, &p.lambda1, &p.lambda).map_err(failed)?;
            let hierarchy = melnikov::hierarchy_collapse_check(&d, *i_max).map_err(failed)?;
            let m3 = melnikov::m3_tilde_coefficient(&p.a, &p.lambda).map_err(failed)?;
            let m3c = melnikov::m3_tilde_coefficient_corrected(&p.a, &p.lambda1, &p.lambda)
                .map_err(failed)?;
            emit(&json!({
                "deformation": d,
                "hierarchy": hierarchy,
                "m3_prefactor_lambda_squared": m3.to_string(),
                "m3_prefactor_lambda_lambda1": m3c.to_string(),
            }))?;
            return Ok(status(hierarchy.pass));
        }
    }
    Ok(0)
}

#[derive(Subcommand, Debug)]
pub enum NumCmd {
    /// Periods of eta_j over the vanishing loops delta_i.
    Pairing {
        #[arg(long)]
        t: Option<f64>,
    },
    /// Iterated integral of a list of forms along the cycle of a word.
    Iterated {
        #[arg(long)]
        word: String,
        /// Comma-separated: eta1..eta4, dphi1..dphi4, phiI*dphiJ, xdy, cauchy-log.
        #[arg(long)]
        forms: String,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Integrals on the real oval that vanish by holomorphy.
    CauchySuite {
        #[arg(long)]
        t: Option<f64>,
    },
    /// Fit of P(t0) - t0 in powers of eps along the cycle of a word.
    Fit {
        #[arg(long, default_value = "g")]
        word: String,
        #[arg(long)]
        t: Option<f64>,
        #[command(flatten)]
        deformation: DeformationArgs,
        /// Also write the (eps, P - t0) samples as CSV.
        #[arg(long = "samples-csv")]
        samples_csv: Option<PathBuf>,
    },
    /// Holonomy image of t0 for one eps.
    Holonomy {
        #[arg(long, default_value = "g")]
        word: String,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        deformation: DeformationArgs,
    },
    /// Numeric third-order check for a center-family deformation.
    CenterCheck {
        #[command(flatten)]
        center: CenterArgs,
        #[arg(long)]
        t: Option<f64>,
    },
}

fn curve_err(e: curve::CurveError) -> Failure {
    Failure::failed(e)
}

fn write_samples_csv(path: &PathBuf, fit: &curve::MelnikovFit) -> Result<(), Failure> {
    let mut w = csv::Writer::from_path(path).map_err(Failure::failed)?;
    w.write_record(["eps", "re", "im"])
        .map_err(Failure::failed)?;
    for (e, v) in &fit.samples {
        w.write_record([e.to_string(), v.re.to_string(), v.im.to_string()])
            .map_err(Failure::failed)?;
    }
    w.flush().map_err(Failure::failed)
}

fn maybe_plot(
    g: &GlobalArgs,
    cfg: &Config,
    fit: &curve::MelnikovFit,
    name: &str,
) -> Result<(), Failure> {
    if !g.plots {
        return Ok(());
    }
    let dir = output_dir(cfg);
    std::fs::create_dir_all(&dir).map_err(Failure::failed)?;
    let path = dir.join(format!("{name}.svg"));
    plots::fit_svg(fit, &path).map_err(Failure::failed)?;
    eprintln!("plot written to {}", path.display());
    Ok(())
}

pub fn num(g: &GlobalArgs, cmd: &NumCmd) -> CmdResult {
    let cfg = resolve_config(g, None)?;
    let tol = &cfg.tolerances;
    match cmd {
        NumCmd::Pairing { t } => {
            let r = curve::pairing_table(t.unwrap_or(cfg.t0), tol.pairing).map_err(curve_err)?;
            emit(&r)?;
            Ok(status(r.pass))
        }
        NumCmd::Iterated { word, forms, t } => {
            let w = parse_word(word)?;
            let forms = curve::parse_forms(forms).map_err(Failure::usage)?;
            let t = t.unwrap_or(cfg.t0);
            let cyc = curve::cycle_of_word(&w, C64::new(t, 0.0)).map_err(Failure::usage)?;
            let v = curve::iterated_integral(&cyc, &forms).map_err(curve_err)?;
            let names: Vec<String> = forms.iter().map(ToString::to_string).collect();
            emit(&json!({"word": w.to_string(), "t": t, "forms": names, "value": [v.re, v.im]}))?;
            Ok(0)
        }
        NumCmd::CauchySuite { t } => {
            let checks = curve::cauchy_suite(t.unwrap_or(cfg.t0), tol.cauchy).map_err(curve_err)?;
            emit(&checks)?;
            Ok(status(curve::all_pass(&checks)))
        }
        NumCmd::Fit {
            word,
            t,
            deformation,
            samples_csv,
        } => {
            let w = parse_word(word)?;
            let d = deformation.resolve(&cfg)?;
            let t = t.unwrap_or(cfg.t0);
            let fit =
                curve::melnikov_fit(&w, C64::new(t, 0.0), &cfg.eps_grid, &d).map_err(curve_err)?;
            if let Some(path) = samples_csv {
                write_samples_csv(path, &fit)?;
            }
            maybe_plot(g, &cfg, &fit, "fit")?;
            emit(&json!({"word": w.to_string(), "deformation": d, "fit": fit}))?;
            Ok(0)
        }
        NumCmd::Holonomy {
            word,
            t,
            eps,
            deformation,
        } => {
            let w = parse_word(word)?;
            let d = deformation.resolve(&cfg)?;
            let t = t.unwrap_or(cfg.t0);
            let p = curve::holonomy(&w, C64::new(t, 0.0), C64::new(*eps, 0.0), &d)
                .map_err(curve_err)?;
            emit(&json!({
                "word": w.to_string(),
                "t0": t,
                "eps": eps,
                "image": [p.re, p.im],
                "displacement": [p.re - t, p.im],
            }))?;
            Ok(0)
        }
        NumCmd::CenterCheck { center, t } => {
            let p = center.parse()?;
            let t = t.unwrap_or(cfg.t0);
            if num_traits::Zero::is_zero(&p.lambda) {
                let d = melnikov::center_family(&p.a, &p.c1, &p.lambda1, &p.lambda)
                    .map_err(Failure::failed)?;
                let checks =
                    curve::center_preservation(&d, t, &[0.01, 0.02, 0.05], tol.hamiltonian)
                        .map_err(curve_err)?;
                emit(&checks)?;
                return Ok(status(curve::all_pass(&checks)));
            }
            let r = curve::m3_center_crosscheck(
                &p.a,
                &p.c1,
                &p.lambda1,
                &p.lambda,
                t,
                &cfg.eps_grid,
                tol.fit_relative,
            )
            .map_err(curve_err)?;
            maybe_plot(g, &cfg, &r.fit, "center-fit")?;
            emit(&r)?;
            Ok(status(r.corrected.pass))
        }
    }
}
