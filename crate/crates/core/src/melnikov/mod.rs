//! Exact Wronskian calculus for leading Melnikov terms of the deformation
//! `dF + ε(a₁(F)η₁ + a₂(F)η₂ + a₃(F)η₃) = 0`.
//!
//! All values are rational functions of `t` with the `(2πi)^i` normalisation
//! stripped; [`MelnikovTerm::two_pi_i_power`] records what to restore.

mod integrate;
mod m2;
mod parse;
mod poly;
mod ratfunc;

pub use integrate::{antiderivative, Antiderivative};
pub use m2::{m2_francoise, m2_reduction_check, IntegralSymbol, M2Expression, M2Reduction};
pub use parse::{parse_poly, parse_ratfunc, ExprError};
pub use poly::Poly;
pub use ratfunc::RatFunc;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::serde_str::serialize(self, s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        crate::serde_str::deserialize(d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MelnikovError {
    #[error("leading term of order {order} is identically zero")]
    ZeroInput { order: u32 },
    #[error("mv is defined for i >= 2, got {0}")]
    OrderTooSmall(u32),
    #[error("alpha1 and alpha2 are linearly dependent (alpha2 = {ratio} * alpha1)")]
    Dependent { ratio: String },
    #[error("alpha1 must be non-constant, got {0}")]
    ConstantAlpha1(String),
    #[error("alpha2/alpha1^2 has no rational antiderivative; logarithmic part {0}")]
    LogarithmicPart(String),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("A must be non-constant, got {0}")]
    ConstantA(String),
    #[error("hierarchy check needs mv(2) = mv(3) = 0, got mv(2) = {mv2}, mv(3) = {mv3}")]
    Precondition { mv2: String, mv3: String },
    #[error("constructed deformation violates {0}")]
    Postcondition(String),
}

/// `W(f, g) = f g′ − f′ g`.
pub fn wronskian(f: &RatFunc, g: &RatFunc) -> RatFunc {
    &(f * &g.derivative()) - &(&f.derivative() * g)
}

/// A leading Melnikov term `M_{σ,μ}` with its normalisation metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MelnikovTerm {
    pub order: u32,
    pub value: RatFunc,
    /// The true term is `(2πi)^two_pi_i_power · value`.
    pub two_pi_i_power: u32,
    pub vanishes: bool,
}

impl MelnikovTerm {
    pub fn new(order: u32, value: RatFunc) -> Self {
        MelnikovTerm {
            order,
            vanishes: value.is_zero(),
            two_pi_i_power: order,
            value,
        }
    }
}

/// Leading term of a commutator loop from the leading terms of its factors.
pub fn compose_leading(
    mu1: u32,
    m1: &RatFunc,
    mu2: u32,
    m2: &RatFunc,
) -> Result<MelnikovTerm, MelnikovError> {
    if m1.is_zero() {
        return Err(MelnikovError::ZeroInput { order: mu1 });
    }
    if m2.is_zero() {
        return Err(MelnikovError::ZeroInput { order: mu2 });
    }
    Ok(MelnikovTerm::new(mu1 + mu2, wronskian(m1, m2)))
}

/// How a deformation was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Raw,
    Pert3 {
        alpha1: RatFunc,
        alpha2: RatFunc,
        #[serde(with = "crate::serde_str")]
        c0: BigRational,
        #[serde(with = "crate::serde_str")]
        lambda: BigRational,
    },
    Center {
        a: RatFunc,
        #[serde(with = "crate::serde_str")]
        c1: BigRational,
        #[serde(with = "crate::serde_str")]
        lambda1: BigRational,
        #[serde(with = "crate::serde_str")]
        lambda: BigRational,
    },
}

/// Coefficients of `ω = a₁(F) dx/(x+1) + a₂(F) dy/(y−1) + a₃(F) dx/(x−1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deformation {
    pub a1: RatFunc,
    pub a2: RatFunc,
    pub a3: RatFunc,
    pub provenance: Provenance,
}

impl Deformation {
    pub fn raw(a1: RatFunc, a2: RatFunc, a3: RatFunc) -> Self {
        Deformation {
            a1,
            a2,
            a3,
            provenance: Provenance::Raw,
        }
    }

    /// Parses three coefficient expressions.
    pub fn parse(a1: &str, a2: &str, a3: &str) -> Result<Self, ExprError> {
        Ok(Self::raw(
            parse_ratfunc(a1)?,
            parse_ratfunc(a2)?,
            parse_ratfunc(a3)?,
        ))
    }

    /// `(t²+2t, t, t²+t)`.
    pub fn flagship() -> Self {
        Self::parse("t^2+2t", "t", "t^2+t").expect("literal parses")
    }

    pub fn coefficients(&self) -> [&RatFunc; 3] {
        [&self.a1, &self.a2, &self.a3]
    }

    pub fn scaled(&self, q: &BigRational) -> Self {
        Deformation {
            a1: self.a1.scale(q),
            a2: self.a2.scale(q),
            a3: self.a3.scale(q),
            provenance: Provenance::Raw,
        }
    }
}

/// `(β₁, β₂, β₃) = (a₂, a₂ − a₃, a₁ − a₃)`: periods of `ω` over `δ₁+δ₂`, `δ₂`, `δ₂+δ₃` divided by `2πi`.
pub fn beta_periods(d: &Deformation) -> (RatFunc, RatFunc, RatFunc) {
    (d.a2.clone(), &d.a2 - &d.a3, &d.a1 - &d.a3)
}

/// `W(β₂, W(β₂, … W(β₂, β₃)))` with `depth` copies of `β₂`; depth 0 is `β₃`.
pub fn inner_chain(d: &Deformation, depth: u32) -> RatFunc {
    let (_, b2, b3) = beta_periods(d);
    (0..depth).fold(b3, |acc, _| wronskian(&b2, &acc))
}

/// Leading term of `M_{v_i, i}`: `W(β₁, W(β₂, … W(β₂, β₃)))` with `i − 2` copies of `β₂`.
pub fn mv(i: u32, d: &Deformation) -> Result<MelnikovTerm, MelnikovError> {
    if i < 2 {
        return Err(MelnikovError::OrderTooSmall(i));
    }
    let (b1, _, _) = beta_periods(d);
    Ok(MelnikovTerm::new(i, wronskian(&b1, &inner_chain(d, i - 2))))
}

/// `mv(3)` written directly in the `aᵢ`: `W(a₂, W(a₂ − a₃, a₁ − a₃))`.
pub fn mv3_from_coefficients(d: &Deformation) -> RatFunc {
    wronskian(&d.a2, &wronskian(&(&d.a2 - &d.a3), &(&d.a1 - &d.a3)))
}

/// `mv(3)` assembled from [`compose_leading`] on `β₁` and `[β₂, β₃]`; `None` when an input vanishes.
pub fn mv3_by_composition(d: &Deformation) -> Option<RatFunc> {
    let (b1, b2, b3) = beta_periods(d);
    let inner = compose_leading(1, &b2, 1, &b3).ok()?;
    if inner.vanishes {
        return Some(RatFunc::zero());
    }
    compose_leading(1, &b1, inner.order, &inner.value)
        .ok()
        .map(|m| m.value)
}

/// Builds `a₃ = α₁(∫₀ᵗ α₂/α₁² + c₀)`, `a₁ = a₃ + α₁`, `a₂ = λα₁`.
///
/// When the antiderivative of `α₂/α₁²` has a pole at `t = 0` the lower limit
/// is dropped and the antiderivative with zero constant term is used.
pub fn make_length3(
    alpha1: &RatFunc,
    alpha2: &RatFunc,
    c0: &BigRational,
    lambda: &BigRational,
) -> Result<Deformation, MelnikovError> {
    if lambda.is_zero() {
        return Err(MelnikovError::ZeroLambda);
    }
    if alpha1.as_constant().is_some() {
        return Err(MelnikovError::ConstantAlpha1(alpha1.to_string()));
    }
    if wronskian(alpha1, alpha2).is_zero() {
        let ratio = alpha2 / alpha1;
        return Err(MelnikovError::Dependent {
            ratio: ratio.to_string(),
        });
    }
    let integrand = alpha2 / &(alpha1 * alpha1);
    let ad = antiderivative(&integrand);
    let Some(prim) = ad.rational_only() else {
        return Err(MelnikovError::LogarithmicPart(ad.log_integrand.to_string()));
    };
    let zero = BigRational::zero();
    let prim = match prim.eval(&zero) {
        Some(v) => prim - &RatFunc::constant(v),
        None => prim.clone(),
    };
    let a3 = alpha1 * &(&prim + &RatFunc::constant(c0.clone()));
    let a1 = &a3 + alpha1;
    let a2 = alpha1.scale(lambda);
    let d = Deformation {
        a1,
        a2,
        a3,
        provenance: Provenance::Pert3 {
            alpha1: alpha1.clone(),
            alpha2: alpha2.clone(),
            c0: c0.clone(),
            lambda: lambda.clone(),
        },
    };
    let mv2 = mv(2, &d)?.value;
    if !mv2.is_zero() {
        return Err(MelnikovError::Postcondition(format!(
            "mv(2) = 0, got {mv2}"
        )));
    }
    let mv3 = mv(3, &d)?.value;
    let closed = wronskian(alpha1, alpha2).scale(lambda);
    if mv3.is_zero() || mv3 != closed {
        return Err(MelnikovError::Postcondition(format!(
            "mv(3) = lambda W(alpha1, alpha2) = {closed}, got {mv3}"
        )));
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassTag {
    Length3,
    SymmetricCenter,
    IntegrableCandidate,
    Order2Nonzero,
    Other,
}

/// Outcome of [`classify`]; witnesses are set only for integrable candidates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub tag: ClassTag,
    #[serde(with = "opt_rational")]
    pub lambda1: Option<BigRational>,
    #[serde(with = "opt_rational")]
    pub lambda2: Option<BigRational>,
}

mod opt_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|q| q.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Decision tree: symmetric, order-2 nonzero, length 3, or integrable candidate.
pub fn classify(d: &Deformation) -> Classification {
    let none = |tag| Classification {
        tag,
        lambda1: None,
        lambda2: None,
    };
    let diff = &d.a1 - &d.a3;
    if d.a2.is_zero() || diff.is_zero() {
        return none(ClassTag::SymmetricCenter);
    }
    if !wronskian(&d.a2, &diff).is_zero() {
        return none(ClassTag::Order2Nonzero);
    }
    if !mv3_from_coefficients(d).is_zero() {
        return none(ClassTag::Length3);
    }
    let l1 = (&diff / &d.a2).as_constant();
    let l2 = (&wronskian(&d.a1, &d.a3) / &d.a2).as_constant();
    match (l1, l2) {
        (Some(l1), Some(l2)) => Classification {
            tag: ClassTag::IntegrableCandidate,
            lambda1: Some(l1),
            lambda2: Some(l2),
        },
        _ => none(ClassTag::Other),
    }
}

pub fn classify_batch(ds: &[Deformation]) -> Vec<Classification> {
    ds.par_iter().map(classify).collect()
}

/// `a₂ = 1/A′`, `a₁ = a₂(λA + c₁)`, `a₃ = a₂(λA + c₁ − λ₁)`.
pub fn center_family(
    a: &RatFunc,
    c1: &BigRational,
    lambda1: &BigRational,
    lambda: &BigRational,
) -> Result<Deformation, MelnikovError> {
    let da = a.derivative();
    let Some(a2) = da.recip() else {
        return Err(MelnikovError::ConstantA(a.to_string()));
    };
    let u = &a.scale(lambda) + &RatFunc::constant(c1.clone());
    let a1 = &a2 * &u;
    let a3 = &a2 * &(&u - &RatFunc::constant(lambda1.clone()));
    Ok(Deformation {
        a1,
        a2,
        a3,
        provenance: Provenance::Center {
            a: a.clone(),
            c1: c1.clone(),
            lambda1: lambda1.clone(),
            lambda: lambda.clone(),
        },
    })
}

/// The prefactor `−λ² / (t A′(t))` of `∫_γ dφ₂dφ₃` in the rescaled third-order term.
pub fn m3_tilde_coefficient(a: &RatFunc, lambda: &BigRational) -> Result<RatFunc, MelnikovError> {
    let da = a.derivative();
    if da.is_zero() {
        return Err(MelnikovError::ConstantA(a.to_string()));
    }
    let l2 = lambda * lambda;
    Ok((&RatFunc::t() * &da).recip().expect("nonzero").scale(&-l2))
}

/// The prefactor `−λλ₁ / (t A′(t))` obtained when the last expansion step keeps the
/// `φ₃` coefficient `c₁ − λ₁` of `φ`; it reproduces the measured holonomy coefficients.
pub fn m3_tilde_coefficient_corrected(
    a: &RatFunc,
    lambda1: &BigRational,
    lambda: &BigRational,
) -> Result<RatFunc, MelnikovError> {
    let da = a.derivative();
    if da.is_zero() {
        return Err(MelnikovError::ConstantA(a.to_string()));
    }
    Ok((&RatFunc::t() * &da)
        .recip()
        .expect("nonzero")
        .scale(&-(lambda * lambda1)))
}

/// Result of [`hierarchy_collapse_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub i_max: u32,
    /// `mv(i)` for `4 ≤ i ≤ i_max`.
    pub higher: Vec<RatFunc>,
    pub higher_vanish: bool,
    pub classification: Classification,
    /// `λ₂/λ₁` with classify's witnesses; equals `W(β₂, β₃)/β₃`.
    #[serde(with = "opt_rational")]
    pub chain_ratio: Option<BigRational>,
    /// `inner_chain(m) = chain_ratio · inner_chain(m − 1)` for `1 ≤ m ≤ i_max − 2`.
    pub inner_chain_holds: Option<bool>,
    /// `mv(i+1) = λ₁λ₂ mv(i)` for `3 ≤ i < i_max`, literally with classify's witnesses.
    pub product_recursion_holds: Option<bool>,
    pub pass: bool,
}

/// Checks that `mv(2) = mv(3) = 0` forces `mv(i) = 0` for `4 ≤ i ≤ i_max`,
/// together with the geometric recursion along the inner Wronskian chain.
pub fn hierarchy_collapse_check(
    d: &Deformation,
    i_max: u32,
) -> Result<HierarchyReport, MelnikovError> {
    let mv2 = mv(2, d)?.value;
    let mv3 = mv(3, d)?.value;
    if !mv2.is_zero() || !mv3.is_zero() {
        return Err(MelnikovError::Precondition {
            mv2: mv2.to_string(),
            mv3: mv3.to_string(),
        });
    }
    let mut values = vec![mv2, mv3];
    for i in 4..=i_max {
        values.push(mv(i, d)?.value);
    }
    let higher = values[2..].to_vec();
    let higher_vanish = higher.iter().all(RatFunc::is_zero);
    let classification = classify(d);
    let witnesses = classification
        .lambda1
        .clone()
        .zip(classification.lambda2.clone());
    let chain_ratio = witnesses.as_ref().map(|(l1, l2)| l2 / l1);
    let inner_chain_holds = chain_ratio.as_ref().map(|k| {
        let chain: Vec<RatFunc> = (0..i_max.saturating_sub(1))
            .map(|m| inner_chain(d, m))
            .collect();
        chain.windows(2).all(|w| w[1] == w[0].scale(k))
    });
    let product_recursion_holds = witnesses.as_ref().map(|(l1, l2)| {
        let p = l1 * l2;
        values[1..].windows(2).all(|w| w[1] == w[0].scale(&p))
    });
    let pass = higher_vanish
        && inner_chain_holds.unwrap_or(true)
        && product_recursion_holds.unwrap_or(true);
    Ok(HierarchyReport {
        i_max,
        higher,
        higher_vanish,
        classification,
        chain_ratio,
        inner_chain_holds,
        product_recursion_holds,
        pass,
    })
}
