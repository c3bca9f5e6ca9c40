//! Rational antiderivatives by the Horowitz–Ostrogradsky decomposition.

use super::{Poly, RatFunc};
use num_rational::BigRational;
use num_traits::Zero;

/// `∫ f = rational + ∫ log_integrand` with `log_integrand = B/D*`, `D*` squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antiderivative {
    pub rational: RatFunc,
    pub log_integrand: RatFunc,
}

impl Antiderivative {
    /// The rational antiderivative when no logarithmic part remains.
    pub fn rational_only(&self) -> Option<&RatFunc> {
        self.log_integrand.is_zero().then_some(&self.rational)
    }
}

pub fn antiderivative(f: &RatFunc) -> Antiderivative {
    let (q, r) = f.numer().div_rem(f.denom());
    let poly_part = RatFunc::from_poly(q.integral());
    if r.is_zero() {
        return Antiderivative {
            rational: poly_part,
            log_integrand: RatFunc::zero(),
        };
    }
    let d = f.denom();
    let d_minus = d.gcd(&d.derivative());
    let d_star = d.div_rem(&d_minus).0;
    let m = d_minus.degree().unwrap_or(0);
    let n = d_star.degree().unwrap_or(0);
    // r = A'·D* − A·H + B·D⁻ with H = D*·(D⁻)'/D⁻.
    let h = (&d_star * &d_minus.derivative()).div_rem(&d_minus).0;
    let size = m + n;
    let mut cols: Vec<Poly> = Vec::with_capacity(size);
    for j in 0..m {
        let a = Poly::monomial(j, BigRational::from_integer(1.into()));
        cols.push(&(&a.derivative() * &d_star) - &(&a * &h));
    }
    for j in 0..n {
        let b = Poly::monomial(j, BigRational::from_integer(1.into()));
        cols.push(&b * &d_minus);
    }
    let matrix: Vec<Vec<BigRational>> = (0..size)
        .map(|row| cols.iter().map(|c| c.coeff(row)).collect())
        .collect();
    let rhs: Vec<BigRational> = (0..size).map(|row| r.coeff(row)).collect();
    let sol = solve(matrix, rhs).expect("Horowitz–Ostrogradsky system is nonsingular");
    let a = Poly::from_coeffs(sol[..m].to_vec());
    let b = Poly::from_coeffs(sol[m..].to_vec());
    Antiderivative {
        rational: &poly_part + &RatFunc::new(a, d_minus).expect("nonzero"),
        log_integrand: RatFunc::new(b, d_star).expect("nonzero"),
    }
}

/// Gaussian elimination for a square system; `None` when singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::melnikov::parse_ratfunc;

    fn check(src: &str) -> Antiderivative {
        let f = parse_ratfunc(src).unwrap();
        let ad = antiderivative(&f);
        let recovered = &ad.rational.derivative() + &ad.log_integrand;
        assert_eq!(recovered, f, "{src}");
        ad
    }

    #[test]
    fn polynomial_and_pure_rational_parts() {
        assert_eq!(check("t^2").rational, parse_ratfunc("(1/3)t^3").unwrap());
        let ad = check("1/t^2");
        assert_eq!(ad.rational, parse_ratfunc("-1/t").unwrap());
        assert!(ad.log_integrand.is_zero());
        let ad = check("(2t)/(t^2+1)^2");
        assert_eq!(
            ad.rational_only(),
            Some(&parse_ratfunc("-1/(t^2+1)").unwrap())
        );
    }

    #[test]
    fn logarithmic_parts_are_isolated() {
        let ad = check("1/t");
        assert_eq!(ad.log_integrand, parse_ratfunc("1/t").unwrap());
        assert!(ad.rational_only().is_none());
        let ad = check("(t^3 + 1)/(t^2 (t-1)^2)");
        assert!(!ad.log_integrand.is_zero());
    }
}
