//! Reduced words in free groups, the monodromy automorphisms of the fiber
//! group and the variation elements built from them.
//!
//! The fiber group is free on `γ, δ₀, δ₁, δ₂, δ₃` ([`Generator`]). Words are
//! stored freely reduced at all times, so group identities are plain
//! equality tests.

mod endo;
mod parse;
mod rho;

pub use endo::{
    d_k, m_endo, m_endo_inverse, mon0, mon0_inverse, mon1, mon1_inverse, v_k, var, var_iter, Endo,
};
pub use parse::{format_word, parse_word, ParseError};
pub use rho::{
    back_substitute, exponent_sums_rho, orbit_normal_form, project_mod_gamma_subgroup,
    rewrite_to_rho_alphabet, RhoGen, RhoWord,
};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

/// A finite alphabet of free generators with a printable symbol per letter.
pub trait Alphabet: Copy + Eq + Ord + Hash + fmt::Debug {
    fn symbol(self) -> &'static str;
}

/// Free generators of the fiber group, in canonical order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Generator {
    G,
    D0,
    D1,
    D2,
    D3,
}

impl Generator {
    pub const ALL: [Generator; 5] = [
        Generator::G,
        Generator::D0,
        Generator::D1,
        Generator::D2,
        Generator::D3,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Generator> {
        Self::ALL.get(i).copied()
    }

    /// The loop `δᵢ` for `i` in `0..4`.
    pub fn delta(i: usize) -> Generator {
        assert!(i < 4, "there are four saddle loops");
        Self::ALL[i + 1]
    }
}

impl Alphabet for Generator {
    fn symbol(self) -> &'static str {
        match self {
            Generator::G => "g",
            Generator::D0 => "d0",
            Generator::D1 => "d1",
            Generator::D2 => "d2",
            Generator::D3 => "d3",
        }
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter<A> {
    pub gen: A,
    pub inverse: bool,
}

impl<A: Alphabet> Letter<A> {
    pub fn new(gen: A, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: A) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: A) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word over the alphabet `A`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FreeWord<A> {
    letters: Vec<Letter<A>>,
}

/// A word in the fiber group.
pub type Word = FreeWord<Generator>;

impl<A: Alphabet> Default for FreeWord<A> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<A: Alphabet> FreeWord<A> {
    pub fn identity() -> Self {
        FreeWord {
            letters: Vec::new(),
        }
    }

    pub fn gen(gen: A) -> Self {
        FreeWord {
            letters: vec![Letter::pos(gen)],
        }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter<A>>>(letters: I) -> Self {
        let mut out: Vec<Letter<A>> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        FreeWord { letters: out }
    }

    /// Product of generator powers, e.g. `[(d0, 1), (d1, -2)]`.
    pub fn from_powers(powers: &[(A, i64)]) -> Self {
        Self::reduce(powers.iter().flat_map(|&(g, e)| {
            std::iter::repeat_n(Letter::new(g, e < 0), e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter<A>] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut out, l);
            }
        }
        FreeWord { letters: out }
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Self, v: &Self) -> Self {
        Self::reduce(
            u.letters
                .iter()
                .copied()
                .chain(v.letters.iter().copied())
                .chain(u.letters.iter().rev().map(|l| l.inv()))
                .chain(v.letters.iter().rev().map(|l| l.inv())),
        )
    }

    /// `c⁻¹ w c`.
    pub fn conjugate_by(&self, c: &Self) -> Self {
        &(&c.inverse() * self) * c
    }

    pub fn contains(&self, gen: A) -> bool {
        self.letters.iter().any(|l| l.gen == gen)
    }

    /// Cyclically reduced core: strips matching inverse letters from both ends.
    pub fn cyclic_core(&self) -> Self {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo] == self.letters[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        FreeWord {
            letters: self.letters[lo..hi].to_vec(),
        }
    }

    /// Whether `self` and `other` are conjugate in the free group.
    pub fn is_conjugate_to(&self, other: &Self) -> bool {
        let a = self.cyclic_core();
        let b = other.cyclic_core();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|shift| (0..n).all(|i| a.letters[(i + shift) % n] == b.letters[i]))
    }

    /// Substitutes a word for every generator (inverse letters get the inverse image).
    pub fn substitute<B: Alphabet>(&self, image: impl Fn(A) -> FreeWord<B>) -> FreeWord<B> {
        let mut out = Vec::new();
        for l in &self.letters {
            let img = image(l.gen);
            if l.inverse {
                for m in img.letters.iter().rev() {
                    push_reduced(&mut out, m.inv());
                }
            } else {
                for &m in &img.letters {
                    push_reduced(&mut out, m);
                }
            }
        }
        FreeWord { letters: out }
    }

    /// Net exponent of `gen`.
    pub fn exponent_sum(&self, gen: A) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.exponent())
            .sum()
    }
}

fn push_reduced<A: Alphabet>(out: &mut Vec<Letter<A>>, l: Letter<A>) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl<A: Alphabet> Mul for &FreeWord<A> {
    type Output = FreeWord<A>;
    fn mul(self, rhs: &FreeWord<A>) -> FreeWord<A> {
        let mut out = self.letters.clone();
        for &l in &rhs.letters {
            push_reduced(&mut out, l);
        }
        FreeWord { letters: out }
    }
}

impl<A: Alphabet> Mul for FreeWord<A> {
    type Output = FreeWord<A>;
    fn mul(self, rhs: FreeWord<A>) -> FreeWord<A> {
        &self * &rhs
    }
}

impl<A: Alphabet> fmt::Display for FreeWord<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(l.gen.symbol())?;
            if l.inverse {
                f.write_str("'")?;
            }
        }
        Ok(())
    }
}

/// Signed letter counts per generator: the image in the abelianization.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct AbelianVector(pub [i64; 5]);

impl AbelianVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(self, k: i64) -> Self {
        AbelianVector(self.0.map(|c| c * k))
    }
}

impl Add for AbelianVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        AbelianVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for AbelianVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        AbelianVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for AbelianVector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

pub fn abelianize(w: &Word) -> AbelianVector {
    let mut v = [0i64; 5];
    for l in w.letters() {
        v[l.gen.index()] += l.exponent();
    }
    AbelianVector(v)
}

pub fn gamma() -> Word {
    Word::gen(Generator::G)
}

pub fn delta_gen(i: usize) -> Word {
    Word::gen(Generator::delta(i))
}

/// `δ = δ₀δ₁δ₂δ₃`.
pub fn delta() -> Word {
    Word::from_powers(&[
        (Generator::D0, 1),
        (Generator::D1, 1),
        (Generator::D2, 1),
        (Generator::D3, 1),
    ])
}

/// `x = δ₁δ₂`.
pub fn x_word() -> Word {
    Word::from_powers(&[(Generator::D1, 1), (Generator::D2, 1)])
}

/// `z = δ₂δ₃`.
pub fn z_word() -> Word {
    Word::from_powers(&[(Generator::D2, 1), (Generator::D3, 1)])
}

/// Seeded generator shared by every randomized check.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform letters over all ten signed generators, raw length uniform in `0..=max_len`, then reduced.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    random_word_over(rng, max_len, &Generator::ALL)
}

/// Like [`random_word`] but using only `δ₀..δ₃`.
pub fn random_delta_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    random_word_over(rng, max_len, &Generator::ALL[1..])
}

pub fn random_word_over<R: Rng + ?Sized>(rng: &mut R, max_len: usize, gens: &[Generator]) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::reduce((0..len).map(|_| {
        let g = gens[rng.gen_range(0..gens.len())];
        Letter::new(g, rng.gen_bool(0.5))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn w(p: &[(Generator, i64)]) -> Word {
        Word::from_powers(p)
    }

    #[test]
    fn reduce_cancels_adjacent_inverse_pairs() {
        let r = Word::reduce([Letter::pos(D0), Letter::neg(D0)]);
        assert!(r.is_identity());
        let r = Word::reduce([
            Letter::pos(D1),
            Letter::pos(D2),
            Letter::neg(D2),
            Letter::pos(D3),
        ]);
        assert_eq!(r, w(&[(D1, 1), (D3, 1)]));
        assert_eq!(Word::reduce(r.letters().iter().copied()), r);
    }

    #[test]
    fn group_operations() {
        assert!((&delta_gen(1) * &delta_gen(1).inverse()).is_identity());
        assert_eq!(
            Word::commutator(&delta_gen(2), &delta_gen(3)),
            w(&[(D2, 1), (D3, 1), (D2, -1), (D3, -1)])
        );
        assert_eq!(w(&[(D0, 1), (D1, 1)]).inverse(), w(&[(D1, -1), (D0, -1)]));
        assert!(Word::commutator(&x_word(), &x_word()).is_identity());
        assert_eq!(
            x_word().pow(-2),
            w(&[(D2, -1), (D1, -1), (D2, -1), (D1, -1)])
        );
    }

    #[test]
    fn abelianization_of_delta_and_commutators() {
        assert_eq!(abelianize(&delta()), AbelianVector([0, 1, 1, 1, 1]));
        assert!(abelianize(&v_k(2)).is_zero());
    }

    #[test]
    fn conjugacy_detection() {
        let u = w(&[(D1, 1), (D2, 1), (D3, -1)]);
        let c = w(&[(G, 1), (D0, -1)]);
        assert!(u.is_conjugate_to(&u.conjugate_by(&c)));
        assert!(!u.is_conjugate_to(&u.inverse()));
    }

    #[test]
    fn random_words_are_deterministic_per_seed() {
        let a: Vec<Word> = (0..5)
            .map(|_| random_word(&mut seeded_rng(7), 40))
            .collect();
        let b: Vec<Word> = (0..5)
            .map(|_| random_word(&mut seeded_rng(7), 40))
            .collect();
        assert_eq!(a, b);
        let mut rng = seeded_rng(1);
        for _ in 0..50 {
            assert!(!random_delta_word(&mut rng, 40).contains(G));
        }
    }
}
