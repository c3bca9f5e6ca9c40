//! Exact representations `ρ_k` of the fiber group by `2ᵏ × 2ᵏ` matrices over
//! Laurent polynomials in `a, c`, and the certificates built on them.
//!
//! In the basis `γ, δ, x, δ₂, z` the representation sends `γ, δ` to the
//! identity and `x, δ₂, z` to `A_k, B_k, C_k`, defined recursively from
//! `A₀ = a`, `B₀ = 1`, `C₀ = c`.

mod matrix;
mod poly;

pub use matrix::{
    alpha, beta, beta_power, corner, epsilon, gamma_tensor, Factor, RepMatrix, SparseMatrix,
    TensorSum, TensorWord,
};
pub use poly::{rat, LaurentPoly2};

use crate::word::{
    exponent_sums_rho, random_word, rewrite_to_rho_alphabet, seeded_rng, v_k, RhoGen, Word,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_K_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReprError {
    #[error("level {k} outside 1..={max}")]
    LevelOutOfRange { k: usize, max: usize },
    #[error("identity {identity} fails: left side {lhs}, right side {rhs}")]
    IdentityMismatch {
        identity: String,
        lhs: String,
        rhs: String,
    },
    #[error("term {index} has exponents (0, 0)")]
    ZeroExponents { index: usize },
    #[error("need i_max >= k + 2 = {needed}, got {got}")]
    RangeTooShort { needed: usize, got: usize },
}

fn check_level(k: usize, k_max: usize) -> Result<(), ReprError> {
    if k == 0 || k > k_max {
        Err(ReprError::LevelOutOfRange { k, max: k_max })
    } else {
        Ok(())
    }
}

fn block_matrix(k: usize, tl: &RepMatrix, tr: Option<&RepMatrix>, br: &RepMatrix) -> RepMatrix {
    let h = 1usize << (k - 1);
    RepMatrix::from_fn(k, |i, j| match (i < h, j < h) {
        (true, true) => tl.get(i, j).clone(),
        (true, false) => tr.map_or_else(LaurentPoly2::zero, |m| m.get(i, j - h).clone()),
        (false, true) => LaurentPoly2::zero(),
        (false, false) => br.get(i - h, j - h).clone(),
    })
}

/// `(A_k, B_k, C_k)` from the block recursion, `1 ≤ k ≤ k_max`.
pub fn base_matrices_with_limit(
    k: usize,
    k_max: usize,
) -> Result<(RepMatrix, RepMatrix, RepMatrix), ReprError> {
    check_level(k, k_max)?;
    let scalar = |p: LaurentPoly2| RepMatrix::from_fn(0, |_, _| p.clone());
    let mut a = scalar(LaurentPoly2::a());
    let mut b = scalar(LaurentPoly2::one());
    let mut c = scalar(LaurentPoly2::c());
    for level in 1..=k {
        let id = RepMatrix::identity(level - 1);
        a = block_matrix(level, &a, None, &id);
        b = block_matrix(level, &b, Some(&id), &b);
        c = block_matrix(level, &id, None, &c);
    }
    Ok((a, b, c))
}

pub fn base_matrices(k: usize) -> Result<(RepMatrix, RepMatrix, RepMatrix), ReprError> {
    base_matrices_with_limit(k, DEFAULT_K_MAX)
}

/// Images of `x, δ₂, z` and their inverses at a fixed level.
#[derive(Clone, Debug)]
pub struct Representation {
    k: usize,
    images: [SparseMatrix; 3],
    inverses: [SparseMatrix; 3],
}

impl Representation {
    pub fn new(k: usize) -> Result<Self, ReprError> {
        Self::with_limit(k, DEFAULT_K_MAX)
    }

    pub fn with_limit(k: usize, k_max: usize) -> Result<Self, ReprError> {
        let (a, b, c) = base_matrices_with_limit(k, k_max)?;
        let id = RepMatrix::identity(k);
        let a_inv = id.add(
            &alpha(k)
                .to_matrix(k)
                .scale(&(&LaurentPoly2::unit(-1, 0) - &LaurentPoly2::one())),
        );
        let c_inv = id.add(
            &gamma_tensor(k)
                .to_matrix(k)
                .scale(&(&LaurentPoly2::unit(0, -1) - &LaurentPoly2::one())),
        );
        // B = 𝕀 + β with β nilpotent of order k + 1.
        let minus_beta = b.sub(&id).scale(&LaurentPoly2::from_int(-1));
        let mut b_inv = id.clone();
        let mut power = id.clone();
        for _ in 0..k {
            power = power.mul(&minus_beta);
            b_inv = b_inv.add(&power);
        }
        Ok(Representation {
            k,
            images: [a.to_sparse(), b.to_sparse(), c.to_sparse()],
            inverses: [a_inv.to_sparse(), b_inv.to_sparse(), c_inv.to_sparse()],
        })
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn rho(&self, w: &Word) -> RepMatrix {
        let r = rewrite_to_rho_alphabet(w);
        let mut m = RepMatrix::identity(self.k);
        for l in r.letters() {
            let slot = match l.gen {
                RhoGen::Gamma | RhoGen::Delta => continue,
                RhoGen::X => 0,
                RhoGen::D2 => 1,
                RhoGen::Z => 2,
            };
            let factor = if l.inverse {
                &self.inverses[slot]
            } else {
                &self.images[slot]
            };
            m = m.mul_sparse(factor);
        }
        m
    }

    /// `[ρ(s), ρ(v_{k+2})]` with the convention `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(&self, s: &Word, v: &Word) -> RepMatrix {
        let (ps, pv) = (self.rho(s), self.rho(v));
        let (ps_inv, pv_inv) = (self.rho(&s.inverse()), self.rho(&v.inverse()));
        ps.mul(&pv).mul(&ps_inv).mul(&pv_inv)
    }
}

pub fn rho(k: usize, w: &Word) -> Result<RepMatrix, ReprError> {
    Ok(Representation::new(k)?.rho(w))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// `(1/c − 1)` and `(1/a − 1)`.
fn inv_minus_one(m: i32, n: i32) -> LaurentPoly2 {
    &LaurentPoly2::unit(m, n) - &LaurentPoly2::one()
}

/// Corner coefficient `θ_k` with `ρ_k(v_{k+2}) = 𝕀 + θ_k J₂^{⊗k}`:
/// `θ_k = −(a − 1)(1/c − 1) k!`.
///
/// The factor comes from `A(𝕀 − κ ε^[k])A⁻¹(𝕀 + κ ε^[k]) = 𝕀 − κ(a − 1) α ε^[k]`
/// with `κ = 1/c − 1`, since conjugation by `A` scales the first row by `a`.
pub fn corner_coefficient(k: usize) -> LaurentPoly2 {
    let a_minus_one = &LaurentPoly2::a() - &LaurentPoly2::one();
    let kf = LaurentPoly2::constant(BigRational::from_integer(-factorial(k)));
    &(&a_minus_one * &inv_minus_one(0, -1)) * &kf
}

/// The variant `(1/c − 1)(1/a − 1) k!`, which arises from conjugating by `A⁻¹`
/// instead of `A`; it differs from [`corner_coefficient`] by the unit `a`.
pub fn corner_coefficient_inverse_conjugation(k: usize) -> LaurentPoly2 {
    let kf = LaurentPoly2::constant(BigRational::from_integer(factorial(k)));
    &(&inv_minus_one(0, -1) * &inv_minus_one(-1, 0)) * &kf
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VImageCheck {
    pub i: usize,
    /// `"identity"` or `"corner"`.
    pub expected: String,
    /// Observed corner value when a corner is expected.
    pub corner: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VImageReport {
    pub k: usize,
    pub i_max: usize,
    pub checks: Vec<VImageCheck>,
    pub pass: bool,
}

/// Checks `ρ_k(v_i) = 𝕀` for `i ≠ k + 2` in `2..=i_max` and
/// `ρ_k(v_{k+2}) = 𝕀 + θ_k J₂^{⊗k}`.
pub fn verify_v_images(k: usize, i_max: usize) -> Result<VImageReport, ReprError> {
    verify_v_images_with(&Representation::new(k)?, i_max, v_k)
}

/// Same as [`verify_v_images`] but with `word_for(i)` standing in for `v_i`.
pub fn verify_v_images_with(
    rep: &Representation,
    i_max: usize,
    word_for: impl Fn(usize) -> Word,
) -> Result<VImageReport, ReprError> {
    let k = rep.level();
    if i_max < k + 2 {
        return Err(ReprError::RangeTooShort {
            needed: k + 2,
            got: i_max,
        });
    }
    let dim = 1usize << k;
    let theta = corner_coefficient(k);
    let mut checks = Vec::new();
    for i in 2..=i_max {
        let m = rep.rho(&word_for(i));
        let dev = m.deviation_from_identity();
        if i == k + 2 {
            let ok = dev.len() == 1 && dev[0].0 == 0 && dev[0].1 == dim - 1 && dev[0].2 == theta;
            if !ok {
                return Err(ReprError::IdentityMismatch {
                    identity: format!("rho_{k}(v_{i}) - I = theta_{k} * corner"),
                    lhs: format_support(&dev),
                    rhs: format!("(0,{}): {}", dim - 1, theta),
                });
            }
            checks.push(VImageCheck {
                i,
                expected: "corner".into(),
                corner: Some(dev[0].2.to_string()),
                pass: true,
            });
        } else {
            if !dev.is_empty() {
                return Err(ReprError::IdentityMismatch {
                    identity: format!("rho_{k}(v_{i}) = I"),
                    lhs: format_support(&dev),
                    rhs: "0".into(),
                });
            }
            checks.push(VImageCheck {
                i,
                expected: "identity".into(),
                corner: None,
                pass: true,
            });
        }
    }
    Ok(VImageReport {
        k,
        i_max,
        checks,
        pass: true,
    })
}

fn format_support(s: &[(usize, usize, LaurentPoly2)]) -> String {
    if s.is_empty() {
        return "0".into();
    }
    s.iter()
        .map(|(i, j, v)| format!("({i},{j}): {v}"))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommScalar {
    pub m: i64,
    pub n: i64,
    pub scalar: LaurentPoly2,
}

/// Expected corner of `[ρ(s), ρ(v_{k+2})]`: `(aᵐ c⁻ⁿ − 1) θ_k`.
pub fn commutator_closed_form(k: usize, m: i64, n: i64) -> LaurentPoly2 {
    &inv_minus_one(m as i32, -(n as i32)) * &corner_coefficient(k)
}

/// Computes `[ρ_k(s), ρ_k(v_{k+2})]` and checks it is `𝕀 + (aᵐc⁻ⁿ − 1) θ_k J₂^{⊗k}`.
pub fn commutator_scalar(k: usize, s: &Word) -> Result<CommScalar, ReprError> {
    commutator_scalar_with(&Representation::new(k)?, s)
}

pub fn commutator_scalar_with(rep: &Representation, s: &Word) -> Result<CommScalar, ReprError> {
    let k = rep.level();
    let dim = 1usize << k;
    let dev = rep.commutator(s, &v_k(k + 2)).deviation_from_identity();
    let (m, n) = exponent_sums_rho(s);
    let expected = commutator_closed_form(k, m, n);
    let scalar = match dev.as_slice() {
        [] => LaurentPoly2::zero(),
        [(0, j, v)] if *j == dim - 1 => v.clone(),
        _ => {
            return Err(ReprError::IdentityMismatch {
                identity: format!(
                    "[rho_{k}({s}), rho_{k}(v_{})] - I is a corner matrix",
                    k + 2
                ),
                lhs: format_support(&dev),
                rhs: format!("(0,{}): {}", dim - 1, expected),
            })
        }
    };
    if scalar != expected {
        return Err(ReprError::IdentityMismatch {
            identity: format!("corner of [rho_{k}({s}), rho_{k}(v_{})]", k + 2),
            lhs: scalar.to_string(),
            rhs: expected.to_string(),
        });
    }
    Ok(CommScalar { m, n, scalar })
}

/// Whether `Σ λᵢ a^{mᵢ} c^{−nᵢ} − Σ λᵢ − 1` is a nonzero Laurent polynomial.
pub fn impossibility_check(terms: &[(i64, i64, i64)]) -> Result<bool, ReprError> {
    let mut acc = LaurentPoly2::from_int(-1);
    for (index, &(lambda, m, n)) in terms.iter().enumerate() {
        if m == 0 && n == 0 {
            return Err(ReprError::ZeroExponents { index });
        }
        let l = LaurentPoly2::from_int(lambda);
        acc = &acc + &(&l * &inv_minus_one(m as i32, -(n as i32)));
    }
    Ok(!acc.is_zero())
}

/// `ρ_k(s) = D + U` with `U` strictly upper triangular and `D = diag(aᵐ, 1, …, 1, cⁿ)`.
pub fn has_diagonal_form(rep: &Representation, s: &Word) -> bool {
    let m = rep.rho(s);
    let (em, en) = exponent_sums_rho(s);
    let dim = m.dim();
    if !m.is_upper_triangular() {
        return false;
    }
    (0..dim).all(|i| {
        let expected = if dim == 1 {
            LaurentPoly2::unit(em as i32, en as i32)
        } else if i == 0 {
            LaurentPoly2::unit(em as i32, 0)
        } else if i == dim - 1 {
            LaurentPoly2::unit(0, en as i32)
        } else {
            LaurentPoly2::one()
        };
        *m.get(i, i) == expected
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

/// Machine-readable evidence that `ρ_k` separates `v_{k+2}` from the image of
/// the orbit commutator subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    pub seed: u64,
    pub samples: usize,
    pub corner_coefficient: String,
    pub checks: Vec<CertificateCheck>,
    pub harvested_exponents: Vec<(i64, i64)>,
    pub pass: bool,
}

pub fn depth_certificate(k: usize, samples: usize, seed: u64) -> Result<Certificate, ReprError> {
    let rep = Representation::new(k)?;
    depth_certificate_with(&rep, samples, seed, v_k)
}

/// Certificate with `word_for(i)` standing in for `v_i` (used for negative controls).
pub fn depth_certificate_with(
    rep: &Representation,
    samples: usize,
    seed: u64,
    word_for: impl Fn(usize) -> Word,
) -> Result<Certificate, ReprError> {
    let k = rep.level();
    let mut checks = Vec::new();
    let images = verify_v_images_with(rep, k + 4, word_for)?;
    checks.push(CertificateCheck {
        name: "v_images".into(),
        detail: format!(
            "rho_{k}(v_i) = I for i in 2..={} except {}, corner at i = {}",
            k + 4,
            k + 2,
            k + 2
        ),
        pass: images.pass,
    });

    let mut rng = seeded_rng(seed);
    let mut harvested = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = random_word(&mut rng, 40);
        let cs = commutator_scalar_with(rep, &s)?;
        harvested.push((cs.m, cs.n));
    }
    checks.push(CertificateCheck {
        name: "commutator_scalars".into(),
        detail: format!("{samples} random words, corner = (a^m c^-n - 1) * theta_{k}"),
        pass: true,
    });

    let terms: Vec<(i64, i64, i64)> = harvested
        .iter()
        .filter(|&&(m, n)| (m, n) != (0, 0))
        .map(|&(m, n)| {
            let mut lambda = 0;
            while lambda == 0 {
                lambda = rng.gen_range(-5..=5);
            }
            (lambda, m, n)
        })
        .collect();
    let nonvanishing = impossibility_check(&terms)?;
    if !nonvanishing {
        return Err(ReprError::IdentityMismatch {
            identity: "sum lambda_i (a^m_i c^-n_i - 1) != 1".into(),
            lhs: format!("{terms:?}"),
            rhs: "identically 1".into(),
        });
    }
    checks.push(CertificateCheck {
        name: "impossibility".into(),
        detail: format!(
            "{} harvested exponent pairs with random integer weights",
            terms.len()
        ),
        pass: true,
    });

    Ok(Certificate {
        k,
        seed,
        samples,
        corner_coefficient: corner_coefficient(k).to_string(),
        checks,
        harvested_exponents: harvested,
        pass: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{d_k, gamma, parse_word, z_word};

    fn p(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn level_one_matrices() {
        let (a, b, c) = base_matrices(1).unwrap();
        assert_eq!(a.to_strings(), vec![vec!["a", "0"], vec!["0", "1"]]);
        assert_eq!(b.to_strings(), vec![vec!["1", "1"], vec!["0", "1"]]);
        assert_eq!(c.to_strings(), vec![vec!["1", "0"], vec!["0", "c"]]);
        let (_, _, c2) = base_matrices(2).unwrap();
        let diag: Vec<String> = (0..4).map(|i| c2.get(i, i).to_string()).collect();
        assert_eq!(diag, ["1", "1", "1", "c"]);
        assert!(c2.deviation_from_identity().len() == 1);
        assert!(matches!(
            base_matrices(0),
            Err(ReprError::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            base_matrices(9),
            Err(ReprError::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn rho_examples() {
        let rep = Representation::new(2).unwrap();
        assert!(rep.rho(&gamma()).is_identity());
        assert!(rep.rho(&p("d2 d2'")).is_identity());
        let rep1 = Representation::new(1).unwrap();
        let m = rep1.rho(&d_k(2, &z_word()));
        let kappa = inv_minus_one(0, -1);
        assert_eq!(*m.get(0, 1), -&kappa);
        assert!(m.get(0, 0).is_one() && m.get(1, 1).is_one() && m.get(1, 0).is_zero());
    }

    #[test]
    fn corner_of_v_k_plus_2() {
        let rep = Representation::new(2).unwrap();
        let dev = rep.rho(&v_k(4)).deviation_from_identity();
        assert_eq!(dev.len(), 1);
        assert_eq!((dev[0].0, dev[0].1), (0, 3));
        assert_eq!(dev[0].2, corner_coefficient(2));
        assert!(rep.rho(&v_k(5)).is_identity());
        let rep3 = Representation::new(3).unwrap();
        let corner = rep3.rho(&v_k(5)).get(0, 7).eval(&rat(2, 1), &rat(3, 1));
        assert_eq!(corner, rat(4, 1));
        // The inverse-conjugation variant is off by exactly the unit a.
        assert_eq!(
            corner_coefficient(3),
            &corner_coefficient_inverse_conjugation(3) * &LaurentPoly2::a()
        );
    }

    #[test]
    fn commutator_scalar_examples() {
        let cs = commutator_scalar(1, &p("x")).unwrap();
        assert_eq!((cs.m, cs.n), (1, 0));
        assert_eq!(cs.scalar, &inv_minus_one(1, 0) * &corner_coefficient(1));
        let cs = commutator_scalar(1, &gamma()).unwrap();
        assert_eq!((cs.m, cs.n, cs.scalar.is_zero()), (0, 0, true));
        let cs = commutator_scalar(2, &p("z' x^2")).unwrap();
        assert_eq!((cs.m, cs.n), (2, -1));
        assert_eq!(
            cs.scalar,
            &(&LaurentPoly2::unit(2, 1) - &LaurentPoly2::one()) * &corner_coefficient(2)
        );
    }

    #[test]
    fn impossibility_examples() {
        assert_eq!(impossibility_check(&[(1, 1, 0)]), Ok(true));
        assert_eq!(impossibility_check(&[(3, 1, 1), (-3, 1, 1)]), Ok(true));
        assert_eq!(
            impossibility_check(&[(1, 0, 0)]),
            Err(ReprError::ZeroExponents { index: 0 })
        );
    }

    #[test]
    fn certificates_and_negative_control() {
        let cert = depth_certificate(1, 0, 1).unwrap();
        assert!(cert.pass);
        let cert = depth_certificate(2, 10, 7).unwrap();
        assert!(cert.pass && cert.harvested_exponents.len() == 10);
        let rep = Representation::new(2).unwrap();
        let swapped = |i: usize| if i == 4 { v_k(3) } else { v_k(i) };
        assert!(matches!(
            depth_certificate_with(&rep, 0, 1, swapped),
            Err(ReprError::IdentityMismatch { .. })
        ));
    }
}
