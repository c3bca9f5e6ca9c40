//! Square matrices of size `2ᵏ` over [`LaurentPoly2`] and the 2×2 tensor factors.

use super::poly::LaurentPoly2;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Dense `2ᵏ × 2ᵏ` matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepMatrix {
    k: usize,
    dim: usize,
    entries: Vec<LaurentPoly2>,
}

impl RepMatrix {
    pub fn zero(k: usize) -> Self {
        let dim = 1usize << k;
        RepMatrix {
            k,
            dim,
            entries: vec![LaurentPoly2::zero(); dim * dim],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zero(k);
        for i in 0..m.dim {
            m.entries[i * m.dim + i] = LaurentPoly2::one();
        }
        m
    }

    pub fn from_fn(k: usize, f: impl Fn(usize, usize) -> LaurentPoly2) -> Self {
        let dim = 1usize << k;
        RepMatrix {
            k,
            dim,
            entries: (0..dim * dim).map(|idx| f(idx / dim, idx % dim)).collect(),
        }
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly2 {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly2) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        RepMatrix {
            k: self.k,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        RepMatrix {
            k: self.k,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn scale(&self, s: &LaurentPoly2) -> Self {
        RepMatrix {
            k: self.k,
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    /// Nonzero entries as `(row, column, value)`.
    pub fn support(&self) -> Vec<(usize, usize, LaurentPoly2)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(idx, e)| (idx / self.dim, idx % self.dim, e.clone()))
            .collect()
    }

    /// The nonzero entries of `self − 𝕀`.
    pub fn deviation_from_identity(&self) -> Vec<(usize, usize, LaurentPoly2)> {
        self.sub(&Self::identity(self.k)).support()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix {
            dim: self.dim,
            rows: (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .filter(|&j| !self.get(i, j).is_zero())
                        .map(|j| (j, self.get(i, j).clone()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_sparse(&other.to_sparse())
    }

    /// `self · s`, rows computed in parallel.
    pub fn mul_sparse(&self, s: &SparseMatrix) -> Self {
        assert_eq!(self.dim, s.dim);
        let dim = self.dim;
        let mut entries = vec![LaurentPoly2::zero(); dim * dim];
        entries
            .par_chunks_mut(dim)
            .enumerate()
            .for_each(|(i, out_row)| {
                for l in 0..dim {
                    let x = &self.entries[i * dim + l];
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in &s.rows[l] {
                        out_row[*j].add_product(x, y);
                    }
                }
            });
        RepMatrix {
            k: self.k,
            dim,
            entries,
        }
    }

    /// Substitutes rational values for `a` and `c`.
    pub fn eval(&self, a: &BigRational, c: &BigRational) -> Vec<Vec<BigRational>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).eval(a, c)).collect())
            .collect()
    }

    /// Entries rendered as strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

/// Row-compressed matrix used as the right factor in products.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, LaurentPoly2)>>,
}

impl SparseMatrix {
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// 2×2 building blocks: `I₂`, `J₂ = e₁₂`, `E₂ = e₂₂`, `F₂ = e₁₁`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Factor {
    I2,
    J2,
    E2,
    F2,
}

impl Factor {
    fn entry(self, r: usize, c: usize) -> bool {
        match self {
            Factor::I2 => r == c,
            Factor::J2 => r == 0 && c == 1,
            Factor::E2 => r == 1 && c == 1,
            Factor::F2 => r == 0 && c == 0,
        }
    }
}

/// Kronecker product of 2×2 factors; the first factor is the outermost block.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TensorWord(pub Vec<Factor>);

impl TensorWord {
    pub fn uniform(k: usize, f: Factor) -> Self {
        TensorWord(vec![f; k])
    }

    /// `filler` everywhere except `J₂` at the 1-based `positions`.
    pub fn with_j_at(k: usize, filler: Factor, positions: &[usize]) -> Self {
        let mut v = vec![filler; k];
        for &p in positions {
            v[p - 1] = Factor::J2;
        }
        TensorWord(v)
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        let k = self.0.len();
        self.0.iter().enumerate().all(|(p, f)| {
            let shift = k - 1 - p;
            f.entry((i >> shift) & 1, (j >> shift) & 1)
        })
    }

    /// Factorwise product, `None` when some factor product vanishes.
    pub fn mul(&self, other: &Self) -> Option<Self> {
        use Factor::*;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(x, y)| match (x, y) {
                (I2, f) | (f, I2) => Some(*f),
                (J2, J2) | (J2, F2) | (E2, J2) | (E2, F2) | (F2, E2) => None,
                (J2, E2) | (F2, J2) => Some(J2),
                (E2, E2) => Some(E2),
                (F2, F2) => Some(F2),
            })
            .collect::<Option<Vec<_>>>()
            .map(TensorWord)
    }
}

/// Linear combination of tensor words.
#[derive(Clone, Debug, Default)]
pub struct TensorSum(pub Vec<(LaurentPoly2, TensorWord)>);

impl TensorSum {
    pub fn single(w: TensorWord) -> Self {
        TensorSum(vec![(LaurentPoly2::one(), w)])
    }

    pub fn scaled(mut self, s: &LaurentPoly2) -> Self {
        for (c, _) in &mut self.0 {
            *c = &*c * s;
        }
        self
    }

    pub fn to_matrix(&self, k: usize) -> RepMatrix {
        RepMatrix::from_fn(k, |i, j| {
            self.0
                .iter()
                .filter(|(_, w)| w.entry(i, j))
                .fold(LaurentPoly2::zero(), |acc, (c, _)| &acc + c)
        })
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// `α = F₂^{⊗k}`.
pub fn alpha(k: usize) -> TensorSum {
    TensorSum::single(TensorWord::uniform(k, Factor::F2))
}

/// `E₂^{⊗k}`; called the γ-tensor to keep it apart from the cycle `γ`.
pub fn gamma_tensor(k: usize) -> TensorSum {
    TensorSum::single(TensorWord::uniform(k, Factor::E2))
}

/// `J₂^{⊗k}`, the single corner entry `(1, 2ᵏ)`.
pub fn corner(k: usize) -> TensorSum {
    TensorSum::single(TensorWord::uniform(k, Factor::J2))
}

/// `Σ_j b_j` with `b_j` the word having `J₂` in position `j` and `I₂` elsewhere.
pub fn beta(k: usize) -> TensorSum {
    TensorSum(
        (1..=k)
            .map(|j| {
                (
                    LaurentPoly2::one(),
                    TensorWord::with_j_at(k, Factor::I2, &[j]),
                )
            })
            .collect(),
    )
}

/// `l! Σ_{|S| = l} (filler with J₂ on S)`; `filler = I₂` gives `β^l`, `E₂` gives `ε^[l]`.
fn symmetric_j_sum(k: usize, l: usize, filler: Factor) -> TensorSum {
    let coeff = LaurentPoly2::constant(BigRational::from_integer(factorial(l)));
    TensorSum(
        (1..=k)
            .combinations(l)
            .map(|s| (coeff.clone(), TensorWord::with_j_at(k, filler, &s)))
            .collect(),
    )
}

pub fn beta_power(k: usize, l: usize) -> TensorSum {
    symmetric_j_sum(k, l, Factor::I2)
}

/// `ε^[l] = β^l γ-tensor`.
pub fn epsilon(k: usize, l: usize) -> TensorSum {
    symmetric_j_sum(k, l, Factor::E2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_entries_follow_kronecker_layout() {
        let j = TensorWord::uniform(2, Factor::J2);
        assert!(j.entry(0, 3));
        assert_eq!(
            (0..4)
                .flat_map(|i| (0..4).map(move |c| (i, c)))
                .filter(|&(i, c)| j.entry(i, c))
                .count(),
            1
        );
        let f = TensorWord(vec![Factor::F2, Factor::I2]);
        assert!(f.entry(0, 0) && f.entry(1, 1) && !f.entry(2, 2));
    }

    #[test]
    fn factorwise_product_matches_matrix_product() {
        use Factor::*;
        let all = [I2, J2, E2, F2];
        for x in all {
            for y in all {
                let a = TensorSum::single(TensorWord(vec![x])).to_matrix(1);
                let b = TensorSum::single(TensorWord(vec![y])).to_matrix(1);
                let expected = a.mul(&b);
                let got = match TensorWord(vec![x]).mul(&TensorWord(vec![y])) {
                    Some(w) => TensorSum::single(w).to_matrix(1),
                    None => RepMatrix::zero(1),
                };
                assert_eq!(got, expected, "{x:?} * {y:?}");
            }
        }
    }

    #[test]
    fn sparse_product_agrees_with_definition() {
        let b = beta(3).to_matrix(3);
        let b2 = b.mul(&b);
        assert_eq!(b2, beta_power(3, 2).to_matrix(3));
        assert_eq!(b.to_sparse().nnz(), 12);
    }
}
