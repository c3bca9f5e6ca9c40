//! Exact Laurent polynomials in two variables `a`, `c` with rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `Σ q_{m,n} aᵐ cⁿ`, terms sorted by `(m, n)` with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct LaurentPoly2 {
    terms: Vec<((i32, i32), BigRational)>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        LaurentPoly2 { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(q: BigRational) -> Self {
        Self::monomial(0, 0, q)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn monomial(m: i32, n: i32, q: BigRational) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            LaurentPoly2 {
                terms: vec![((m, n), q)],
            }
        }
    }

    /// `aᵐcⁿ` with unit coefficient.
    pub fn unit(m: i32, n: i32) -> Self {
        Self::monomial(m, n, BigRational::one())
    }

    pub fn a() -> Self {
        Self::unit(1, 0)
    }

    pub fn c() -> Self {
        Self::unit(0, 1)
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), BigRational)>>(it: I) -> Self {
        let mut v: Vec<((i32, i32), BigRational)> = it.into_iter().collect();
        v.sort_by_key(|x| x.0);
        let mut out: Vec<((i32, i32), BigRational)> = Vec::with_capacity(v.len());
        for (k, q) in v {
            match out.last_mut() {
                Some((lk, lq)) if *lk == k => *lq += q,
                _ => out.push((k, q)),
            }
        }
        out.retain(|(_, q)| !q.is_zero());
        LaurentPoly2 { terms: out }
    }

    pub fn terms(&self) -> &[((i32, i32), BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == (0, 0) && self.terms[0].1.is_one()
    }

    pub fn coeff(&self, m: i32, n: i32) -> BigRational {
        self.terms
            .binary_search_by(|t| t.0.cmp(&(m, n)))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        LaurentPoly2 {
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    /// Single-term polynomials with a unit-free check for inverses.
    pub fn as_monomial(&self) -> Option<(i32, i32, &BigRational)> {
        match self.terms.as_slice() {
            [((m, n), q)] => Some((*m, *n, q)),
            _ => None,
        }
    }

    /// Inverse of a monomial; `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<Self> {
        self.as_monomial()
            .map(|(m, n, q)| Self::monomial(-m, -n, q.recip()))
    }

    /// Substitutes rational values; both must be nonzero when negative powers occur.
    pub fn eval(&self, a: &BigRational, c: &BigRational) -> BigRational {
        let pow = |x: &BigRational, e: i32| -> BigRational {
            if e >= 0 {
                num_traits::pow(x.clone(), e as usize)
            } else {
                num_traits::pow(x.recip(), (-e) as usize)
            }
        };
        self.terms
            .iter()
            .map(|((m, n), q)| q * pow(a, *m) * pow(c, *n))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    fn merge(&self, other: &Self, sign: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                let (k, q) = &other.terms[j];
                out.push((*k, if sign { -q.clone() } else { q.clone() }));
                j += 1;
            } else {
                let q = if sign {
                    &self.terms[i].1 - &other.terms[j].1
                } else {
                    &self.terms[i].1 + &other.terms[j].1
                };
                if !q.is_zero() {
                    out.push((self.terms[i].0, q));
                }
                i += 1;
                j += 1;
            }
        }
        LaurentPoly2 { terms: out }
    }

    /// `self += x · y` without building the intermediate product separately when possible.
    pub fn add_product(&mut self, x: &Self, y: &Self) {
        if x.is_zero() || y.is_zero() {
            return;
        }
        if x.is_one() {
            *self = &*self + y;
        } else if y.is_one() {
            *self = &*self + x;
        } else {
            *self = &*self + &(x * y);
        }
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        self.merge(rhs, false)
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        self.merge(rhs, true)
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(k, q)| (*k, -q.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly2::zero();
        }
        if let [(k, q)] = self.terms.as_slice() {
            return LaurentPoly2 {
                terms: rhs
                    .terms
                    .iter()
                    .map(|((m, n), r)| ((m + k.0, n + k.1), q * r))
                    .collect(),
            };
        }
        if let [(k, q)] = rhs.terms.as_slice() {
            return LaurentPoly2 {
                terms: self
                    .terms
                    .iter()
                    .map(|((m, n), r)| ((m + k.0, n + k.1), r * q))
                    .collect(),
            };
        }
        LaurentPoly2::from_terms(self.terms.iter().flat_map(|((m1, n1), q1)| {
            rhs.terms
                .iter()
                .map(move |((m2, n2), q2)| ((m1 + m2, n1 + n2), q1 * q2))
        }))
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly2 {
            type Output = LaurentPoly2;
            fn $f(self, rhs: LaurentPoly2) -> LaurentPoly2 {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        -&self
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, var: &str, e: i32) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => f.write_str(var),
        _ => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((m, n), q)) in self.terms.iter().enumerate() {
            let abs = q.abs();
            if i == 0 {
                if q.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if q.is_negative() { " - " } else { " + " })?;
            }
            let bare = *m == 0 && *n == 0;
            if !abs.is_one() || bare {
                write!(f, "{abs}")?;
                if !bare {
                    f.write_str("*")?;
                }
            }
            fmt_power(f, "a", *m)?;
            if *m != 0 && *n != 0 {
                f.write_str("*")?;
            }
            fmt_power(f, "c", *n)?;
        }
        Ok(())
    }
}

/// Shorthand for the rational `p/q`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_operations() {
        let a = LaurentPoly2::a();
        let c = LaurentPoly2::c();
        let one = LaurentPoly2::one();
        let p = &(&a - &one) * &(&c + &one);
        assert_eq!(p.to_string(), "-1 - c + a + a*c");
        assert!((&p - &p).is_zero());
        let ainv = a.monomial_inverse().unwrap();
        assert!((&a * &ainv).is_one());
        assert_eq!(ainv.to_string(), "a^-1");
        assert_eq!(p.eval(&rat(2, 1), &rat(3, 1)), rat(4, 1));
        assert_eq!(ainv.eval(&rat(2, 1), &rat(3, 1)), rat(1, 2));
    }

    #[test]
    fn from_terms_merges_and_drops_zeros() {
        let p = LaurentPoly2::from_terms([
            ((1, 0), rat(1, 2)),
            ((0, 0), rat(3, 1)),
            ((1, 0), rat(-1, 2)),
        ]);
        assert_eq!(p, LaurentPoly2::from_int(3));
        let mut acc = LaurentPoly2::zero();
        acc.add_product(&LaurentPoly2::a(), &LaurentPoly2::c());
        acc.add_product(&LaurentPoly2::one(), &LaurentPoly2::from_int(2));
        assert_eq!(acc.to_string(), "2 + a*c");
    }
}
