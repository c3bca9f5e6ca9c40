//! Numerical geometry on the complex curves `{(x² − 1)(y² − 1) = t}`.
//!
//! Cycles are chains of graph segments over straight or circular base paths,
//! with the dependent coordinate tracked by nearest-root continuation. On top
//! of them sit line integrals, Chen iterated integrals, and holonomy of the
//! perturbed foliation with ε-expansion fitting.

mod checks;
mod cycle;
mod fit;
mod forms;
mod geometry;
mod holonomy;
mod iterated;
mod ode;
mod quad;
mod segment;

pub use checks::*;
pub use cycle::{
    cycle_of_word, real_oval, vanishing_loop, Atlas, BasePoint, Cycle, Orientation, Piece,
    JOIN_TOLERANCE, MAX_LOOP_LEVEL, SADDLES,
};
pub use fit::{
    coarse_eps_grid, default_eps_grid, fit_samples, geometric_eps_grid, holonomy_samples,
    melnikov_fit, melnikov_fit_on_cycle, MelnikovFit, Richardson, FIT_DEGREE, MIN_GRID,
    RICHARDSON_TOLERANCE, ZERO_RELATIVE,
};
pub use forms::{integrate_form, integrate_pieces, parse_forms, FormIntegral, OneForm};
pub use geometry::{
    c, gradient, hamiltonian, partner_roots, residual_bound, BasePath, Chart, CurvePoint, C64,
};
pub use holonomy::{holonomy, holonomy_on_cycle, HolonomyStats, MAX_EPS};
pub use iterated::{chen_matrix, iterated_integral, phi_dphi_by_chen, phi_dphi_direct};
pub use quad::{adaptive_gk21, QuadResult};
pub use segment::{SegPoint, Segment, SEPARATION_FACTOR};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("level t = {t} out of range ({allowed})")]
    LevelOutOfRange { t: C64, allowed: String },
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("branch tracking failed on segment {segment} at s = {s:.6} (root ratio {ratio:.3})")]
    BranchTracking { segment: String, s: f64, ratio: f64 },
    #[error("cycle {cycle}: segment {segment} starts {gap:.3e} away from the previous end")]
    Discontinuity {
        cycle: String,
        segment: String,
        gap: f64,
    },
    #[error("cycle {cycle} does not close (residual {residual:.3e})")]
    NotClosed { cycle: String, residual: f64 },
    #[error("form {form} has a pole within {distance:.3e} of segment {segment}")]
    PoleOnPath {
        segment: String,
        form: String,
        distance: f64,
    },
    #[error("quadrature of {form} on segment {segment} did not converge")]
    QuadratureFailed { segment: String, form: String },
    #[error("cannot parse form tag {0:?}")]
    FormSyntax(String),
    #[error("iterated integrals take 1 to 4 forms, got {0}")]
    IteratedLength(usize),
    #[error("form {0} is not a pointwise one-form")]
    NotPointwise(String),
    #[error("ODE failure on segment {segment} at s = {s}: {msg}")]
    Ode {
        segment: String,
        s: f64,
        msg: String,
    },
    #[error("|eps| = {0} exceeds the supported range")]
    EpsTooLarge(f64),
    #[error("fit needs at least {need} grid points, got {got}")]
    GridTooSmall { got: usize, need: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}
