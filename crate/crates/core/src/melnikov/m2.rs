//! Second-order Melnikov term as a linear combination of abstract iterated integrals.

use super::{wronskian, Deformation, RatFunc};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `Iᵢⱼ = ∫_γ φᵢ dφⱼ`; `E23 = ∫_γ d(φ₂φ₃)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IntegralSymbol {
    I12,
    I13,
    I23,
    I32,
    E23,
}

/// `Σ coeff(s) · s` over [`IntegralSymbol`]s, zero coefficients omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct M2Expression {
    pub terms: BTreeMap<IntegralSymbol, RatFunc>,
}

impl M2Expression {
    pub fn add_term(&mut self, s: IntegralSymbol, c: &RatFunc) {
        let next = self.coeff(s) + c.clone();
        if next.is_zero() {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, next);
        }
    }

    pub fn coeff(&self, s: IntegralSymbol) -> RatFunc {
        self.terms.get(&s).cloned().unwrap_or_default()
    }

    /// Rewrites `I23` through `I23 = E23 − I32` (integration by parts).
    pub fn eliminate_i23(&self) -> Self {
        let mut out = self.clone();
        if let Some(c) = out.terms.remove(&IntegralSymbol::I23) {
            out.add_term(IntegralSymbol::E23, &c);
            out.add_term(IntegralSymbol::I32, &-&c);
        }
        out
    }

    /// Drops the symbols listed, which are known to vanish on the cycle.
    pub fn drop_vanishing(&self, vanishing: &[IntegralSymbol]) -> Self {
        let mut out = self.clone();
        for s in vanishing {
            out.terms.remove(s);
        }
        out
    }

    /// Numeric value at `t0` given numeric values of the symbols.
    pub fn evaluate(
        &self,
        t0: Complex64,
        value: impl Fn(IntegralSymbol) -> Complex64,
    ) -> Complex64 {
        self.terms
            .iter()
            .map(|(s, c)| c.eval_c64(t0) * value(*s))
            .sum()
    }
}

/// `Σ_{i<j} W(aᵢ, aⱼ) Iᵢⱼ`.
pub fn m2_francoise(d: &Deformation) -> M2Expression {
    let mut e = M2Expression::default();
    e.add_term(IntegralSymbol::I12, &wronskian(&d.a1, &d.a2));
    e.add_term(IntegralSymbol::I13, &wronskian(&d.a1, &d.a3));
    e.add_term(IntegralSymbol::I23, &wronskian(&d.a2, &d.a3));
    e
}

/// Term-level comparison of the general sum with its reduced form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct M2Reduction {
    pub francoise: M2Expression,
    /// After `I23 = E23 − I32`.
    pub rewritten: M2Expression,
    /// `W(a₁,a₂)(I12 + I32) + W(a₁,a₃) I13 − W(a₁,a₂) E23`.
    pub expected: M2Expression,
    /// `rewritten` with `I13 = 0` (holomorphic in `x`) and `E23 = 0` (exact) applied.
    pub on_closed_cycle: M2Expression,
    pub identity_holds: bool,
    pub side_relations: Vec<String>,
}

/// Verifies that `W(a₂, a₁ − a₃) = 0` turns the general sum into `W(a₁,a₂)(I12 + I32)` on a closed cycle.
pub fn m2_reduction_check(d: &Deformation) -> M2Reduction {
    use IntegralSymbol::*;
    let francoise = m2_francoise(d);
    let rewritten = francoise.eliminate_i23();
    let w12 = wronskian(&d.a1, &d.a2);
    let mut expected = M2Expression::default();
    expected.add_term(I12, &w12);
    expected.add_term(I32, &w12);
    expected.add_term(I13, &wronskian(&d.a1, &d.a3));
    expected.add_term(E23, &-&w12);
    let on_closed_cycle = rewritten.drop_vanishing(&[I13, E23]);
    M2Reduction {
        identity_holds: rewritten == expected,
        francoise,
        rewritten,
        expected,
        on_closed_cycle,
        side_relations: vec![
            "I23 + I32 = E23".into(),
            "E23 = 0 on closed cycles".into(),
            "I13 = 0 on the real oval (integrand holomorphic in x)".into(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::melnikov::mv;

    #[test]
    fn flagship_reduces() {
        let d = Deformation::flagship();
        let red = m2_reduction_check(&d);
        assert!(red.identity_holds);
        let w12 = wronskian(&d.a1, &d.a2);
        assert_eq!(red.on_closed_cycle.coeff(IntegralSymbol::I12), w12);
        assert_eq!(red.on_closed_cycle.coeff(IntegralSymbol::I32), w12);
        assert_eq!(red.on_closed_cycle.terms.len(), 2);
    }

    #[test]
    fn reduction_fails_when_order_two_survives() {
        let d = Deformation::parse("t^2+2t", "t^2", "t^2+t").unwrap();
        assert!(!mv(2, &d).unwrap().vanishes);
        assert!(!m2_reduction_check(&d).identity_holds);
    }

    #[test]
    fn symmetric_case_is_trivial() {
        let d = Deformation::parse("1", "0", "1").unwrap();
        assert!(m2_francoise(&d).terms.is_empty());
    }
}
