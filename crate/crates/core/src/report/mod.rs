//! Check records, run manifests and the suite runner shared by the CLI and the acceptance target.

mod suites;

pub use suites::{job_list, Job, JobOutcome};

use crate::curve::default_eps_grid;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("config: {0}")]
    Config(String),
    #[error("unknown suite {0:?} (expected orbit, repr, melnikov, numeric or all)")]
    UnknownSuite(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serialize(String),
}

/// Declared tolerances, one per kind of comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute, on `∫_{δᵢ} ηⱼ`.
    pub pairing: f64,
    /// Absolute, on integrals that vanish by holomorphy inside the oval.
    pub cauchy: f64,
    /// Relative, on `∫_{v₂} dφ₂dφ₃ = 4π²`.
    pub four_pi_squared: f64,
    /// Absolute, on the shuffle and determinant identities.
    pub iterated_identities: f64,
    /// Absolute, on the assembled second-order term.
    pub m2: f64,
    /// Relative, on fitted `ε³` coefficients against predictions.
    pub fit_relative: f64,
    /// Relative spread of `c₃` across half-grids.
    pub richardson: f64,
    /// Absolute, on `|P(t₀) − t₀|` for center-preserving deformations.
    pub hamiltonian: f64,
    /// Relative, on ratios of `ε³` coefficients.
    pub scaling: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pairing: 1e-9,
            cauchy: 1e-8,
            four_pi_squared: 1e-6,
            iterated_identities: 1e-6,
            m2: 1e-7,
            fit_relative: 5e-3,
            richardson: 5e-3,
            hamiltonian: 1e-10,
            scaling: 1e-2,
        }
    }
}

/// Run configuration, read from JSON; every field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tolerances: Tolerances,
    pub k_max: usize,
    pub magnus_degree: usize,
    pub t0: f64,
    pub eps_grid: Vec<f64>,
    pub seed: u64,
    /// Random samples per randomized identity.
    pub samples: usize,
    pub output_dir: Option<PathBuf>,
    /// `[a₁, a₂, a₃]` replacing the flagship deformation in Melnikov checks.
    pub deformation: Option<[String; 3]>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tolerances: Tolerances::default(),
            k_max: 5,
            magnus_degree: crate::magnus::DEFAULT_DEGREE,
            t0: 0.36,
            eps_grid: default_eps_grid(),
            seed: 20_240_611,
            samples: 100,
            output_dir: None,
            deformation: None,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config, ReportError> {
        let cfg: Config =
            serde_json::from_str(text).map_err(|e| ReportError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Config, ReportError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ReportError::Config(format!("{}: {e}", path.display())))?;
        Config::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        let bad = |m: String| Err(ReportError::Config(m));
        if !(1..=crate::laurent::DEFAULT_K_MAX).contains(&self.k_max) {
            return bad(format!(
                "k_max must be in 1..={}",
                crate::laurent::DEFAULT_K_MAX
            ));
        }
        if !(1..=crate::magnus::MAX_DEGREE).contains(&self.magnus_degree) {
            return bad(format!(
                "magnus_degree must be in 1..={}",
                crate::magnus::MAX_DEGREE
            ));
        }
        if !(self.t0 > 0.0 && self.t0 < 0.5) {
            return bad("t0 must lie in (0, 0.5) so saddle loops exist".into());
        }
        if self.eps_grid.len() < crate::curve::MIN_GRID
            || self
                .eps_grid
                .iter()
                .any(|&e| !(e > 0.0 && e <= crate::curve::MAX_EPS))
        {
            return bad(format!(
                "eps_grid needs at least {} values in (0, {}]",
                crate::curve::MIN_GRID,
                crate::curve::MAX_EPS
            ));
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        Ok(())
    }

    /// The deformation used where the flagship is expected.
    pub fn deformation(&self) -> Result<crate::melnikov::Deformation, ReportError> {
        match &self.deformation {
            None => Ok(crate::melnikov::Deformation::flagship()),
            Some([a1, a2, a3]) => crate::melnikov::Deformation::parse(a1, a2, a3)
                .map_err(|e| ReportError::Config(format!("deformation: {e}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Orbit,
    Repr,
    Melnikov,
    Numeric,
    All,
}

impl Suite {
    pub fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orbit => "orbit",
            Suite::Repr => "repr",
            Suite::Melnikov => "melnikov",
            Suite::Numeric => "numeric",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "orbit" => Suite::Orbit,
            "repr" => Suite::Repr,
            "melnikov" => Suite::Melnikov,
            "numeric" => Suite::Numeric,
            "all" => Suite::All,
            _ => return Err(ReportError::UnknownSuite(s.into())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    /// Number of mismatching items; tolerance 0.
    Exact,
    Absolute,
    Relative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub kind: MetricKind,
    pub error: f64,
    pub tolerance: f64,
}

impl Metric {
    pub fn exact(mismatches: usize) -> Self {
        Metric {
            kind: MetricKind::Exact,
            error: mismatches as f64,
            tolerance: 0.0,
        }
    }

    pub fn within(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// One reported check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The mathematical statement being checked.
    pub claim: String,
    pub params: serde_json::Value,
    pub expected: String,
    pub computed: String,
    pub metric: Metric,
    pub pass: bool,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub suite: String,
    pub seed: u64,
    pub config: Config,
    pub modules: Vec<String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(suite: &str, config: &Config) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            suite: suite.to_string(),
            seed: config.seed,
            config: config.clone(),
            modules: ["word", "magnus", "laurent", "melnikov", "curve", "report"]
                .map(String::from)
                .to_vec(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub manifest: RunManifest,
    pub records: Vec<CheckRecord>,
    /// Set when a check could not be computed at all and the run stopped there.
    pub aborted: Option<String>,
    pub pass: bool,
}

impl Report {
    fn new(manifest: RunManifest, records: Vec<CheckRecord>, aborted: Option<String>) -> Self {
        let pass = aborted.is_none() && records.iter().all(|r| r.pass);
        Report {
            manifest,
            records,
            aborted,
            pass,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        serde_json::to_string_pretty(self).map_err(|e| ReportError::Serialize(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| ReportError::Serialize(e.to_string());
        w.write_record([
            "id",
            "claim",
            "expected",
            "computed",
            "metric",
            "error",
            "tolerance",
            "pass",
            "runtime_ms",
        ])
        .map_err(ser)?;
        for r in &self.records {
            let kind = serde_json::to_value(r.metric.kind)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            w.write_record([
                r.id.as_str(),
                r.claim.as_str(),
                r.expected.as_str(),
                r.computed.as_str(),
                kind.as_str(),
                &format!("{:e}", r.metric.error),
                &format!("{:e}", r.metric.tolerance),
                if r.pass { "true" } else { "false" },
                &format!("{:.3}", r.runtime_ms),
            ])
            .map_err(ser)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ReportError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| ReportError::Serialize(e.to_string()))
    }

    /// Plain-text table: id, pass flag, error against tolerance, claim.
    pub fn summary_table(&self) -> String {
        let width = self
            .records
            .iter()
            .map(|r| r.id.len())
            .max()
            .unwrap_or(2)
            .max(2);
        let mut out = format!(
            "{:width$}  {:4}  {:>10}  {:>10}  claim\n",
            "id", "ok", "error", "tolerance"
        );
        for r in &self.records {
            out.push_str(&format!(
                "{:width$}  {:4}  {:>10.2e}  {:>10.2e}  {}\n",
                r.id,
                if r.pass { "PASS" } else { "FAIL" },
                r.metric.error,
                r.metric.tolerance,
                r.claim
            ));
        }
        if let Some(msg) = &self.aborted {
            out.push_str(&format!("aborted: {msg}\n"));
        }
        out
    }

    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<(), ReportError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let text = match format {
            ReportFormat::Json => self.to_json()?,
            ReportFormat::Csv => self.to_csv()?,
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn execute(job: &Job) -> Result<CheckRecord, String> {
    let start = Instant::now();
    let outcome = (job.run)()?;
    Ok(outcome.into_record(job, start.elapsed().as_secs_f64() * 1e3))
}

/// Runs every check of `suite` in parallel; records come back in job order.
///
/// A check that cannot be computed becomes a failed record carrying the error.
pub fn run_suite(suite: Suite, config: &Config) -> Result<Report, ReportError> {
    config.validate()?;
    let jobs = job_list(suite, config)?;
    let records: Vec<CheckRecord> = jobs
        .par_iter()
        .map(|job| {
            execute(job).unwrap_or_else(|msg| JobOutcome::errored(msg).into_record(job, 0.0))
        })
        .collect();
    Ok(Report::new(
        RunManifest::new(suite.name(), config),
        records,
        None,
    ))
}

/// Every check in a fixed order from the group-theoretic statements to the
/// numeric holonomy checks, stopping at the first check that cannot be computed.
pub fn full_pipeline(config: &Config) -> Result<Report, ReportError> {
    config.validate()?;
    let jobs = job_list(Suite::All, config)?;
    let mut records = Vec::with_capacity(jobs.len());
    let mut aborted = None;
    for job in &jobs {
        match execute(job) {
            Ok(r) => records.push(r),
            Err(msg) => {
                records.push(JobOutcome::errored(msg.clone()).into_record(job, 0.0));
                aborted = Some(format!("{}: {msg}", job.id));
                break;
            }
        }
    }
    Ok(Report::new(
        RunManifest::new("pipeline", config),
        records,
        aborted,
    ))
}

/// `OUTPUT_DIR` if set, else the config's `output_dir`, else `./output`.
pub fn output_dir(config: &Config) -> PathBuf {
    std::env::var_os("OUTPUT_DIR")
        .map(PathBuf::from)
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("output"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_errors() {
        let cfg = Config::from_json("{}").unwrap();
        assert_eq!(cfg, Config::default());
        let cfg = Config::from_json(r#"{"t0": 0.25, "tolerances": {"pairing": 1e-10}}"#).unwrap();
        assert_eq!(cfg.t0, 0.25);
        assert_eq!(cfg.tolerances.pairing, 1e-10);
        assert_eq!(cfg.tolerances.cauchy, 1e-8);
        assert!(Config::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(Config::from_json(r#"{"t0": 0.9}"#).is_err());
        assert!(Config::from_json("{not json").is_err());
        assert!(Config::from_json(r#"{"eps_grid": [0.001, 0.002]}"#).is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [
            Suite::Orbit,
            Suite::Repr,
            Suite::Melnikov,
            Suite::Numeric,
            Suite::All,
        ] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }
}
