//! Endomorphisms of the fiber group given by generator images.

use super::{delta, delta_gen, gamma, x_word, z_word, Generator, Word};
use serde::{Deserialize, Serialize};

/// An endomorphism, stored as the images of the five generators.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Endo {
    images: [Word; 5],
}

impl Endo {
    pub fn identity() -> Self {
        Endo {
            images: Generator::ALL.map(Word::gen),
        }
    }

    pub fn from_images(images: [Word; 5]) -> Self {
        Endo { images }
    }

    /// Identity except on the listed generators.
    pub fn with_images(overrides: &[(Generator, Word)]) -> Self {
        let mut e = Self::identity();
        for (g, img) in overrides {
            e.images[g.index()] = img.clone();
        }
        e
    }

    pub fn image(&self, g: Generator) -> &Word {
        &self.images[g.index()]
    }

    pub fn images(&self) -> &[Word; 5] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|g| self.images[g.index()].clone())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Endo) -> Endo {
        Endo {
            images: std::array::from_fn(|i| self.apply(&other.images[i])),
        }
    }

    /// The map `w ↦ c⁻¹ self(w) c`.
    pub fn conjugated_by(&self, c: &Word) -> Endo {
        Endo {
            images: std::array::from_fn(|i| self.images[i].conjugate_by(c)),
        }
    }
}

/// Monodromy around the critical value of the saddles: `γ ↦ γ`, `δᵢ ↦ γδᵢ`.
pub fn mon1() -> Endo {
    let g = gamma();
    Endo::from_images(Generator::ALL.map(|gen| match gen {
        Generator::G => g.clone(),
        d => &g * &Word::gen(d),
    }))
}

pub fn mon1_inverse() -> Endo {
    let gi = gamma().inverse();
    Endo::from_images(Generator::ALL.map(|gen| match gen {
        Generator::G => gamma(),
        d => &gi * &Word::gen(d),
    }))
}

/// Prefix products `δ₀δ₁⋯δⱼ₋₁` for `j = 0..=4`.
fn delta_prefix(j: usize) -> Word {
    (0..j).fold(Word::identity(), |acc, i| &acc * &delta_gen(i))
}

/// Monodromy around the center's critical value: `γ ↦ δγ` and
/// `δⱼ ↦ (δ₀⋯δⱼ₋₁) δⱼ (δ₀⋯δⱼ₋₁)⁻¹`.
pub fn mon0() -> Endo {
    let mut images = Generator::ALL.map(Word::gen);
    images[0] = &delta() * &gamma();
    for j in 0..4 {
        images[j + 1] = delta_gen(j).conjugate_by(&delta_prefix(j).inverse());
    }
    Endo::from_images(images)
}

/// Explicit inverse of [`mon0`]: `δⱼ ↦ Rⱼ₋₁⁻¹ δⱼ Rⱼ₋₁` with `Rⱼ = δⱼ⋯δ₁δ₀`,
/// and `γ ↦ R₃⁻¹ γ`.
pub fn mon0_inverse() -> Endo {
    let reversed_prefix = |j: usize| {
        (0..j)
            .rev()
            .fold(Word::identity(), |acc, i| &acc * &delta_gen(i))
    };
    let mut images = Generator::ALL.map(Word::gen);
    images[0] = &reversed_prefix(4).inverse() * &gamma();
    for j in 0..4 {
        images[j + 1] = delta_gen(j).conjugate_by(&reversed_prefix(j));
    }
    Endo::from_images(images)
}

fn d0d1() -> Word {
    &delta_gen(0) * &delta_gen(1)
}

/// `M(σ) = (δ₀δ₁)⁻¹ Mon₀(σ) (δ₀δ₁)`.
pub fn m_endo() -> Endo {
    mon0().conjugated_by(&d0d1())
}

/// `M⁻¹(u) = Mon₀⁻¹(δ₀δ₁ u (δ₀δ₁)⁻¹)`.
pub fn m_endo_inverse() -> Endo {
    let c = d0d1().inverse();
    mon0_inverse().compose(&Endo::identity().conjugated_by(&c))
}

/// `Var(σ) = M(σ)σ⁻¹`, with `Var(γ) = δ` by definition.
pub fn var(w: &Word) -> Word {
    if *w == gamma() {
        return delta();
    }
    &m_endo().apply(w) * &w.inverse()
}

/// `varⁱ(w)`; `var_iter(w, 0) = w`.
pub fn var_iter(w: &Word, i: usize) -> Word {
    let m = m_endo();
    let mut cur = w.clone();
    for _ in 0..i {
        cur = if cur == gamma() {
            delta()
        } else {
            &m.apply(&cur) * &cur.inverse()
        };
    }
    cur
}

/// `d₁(w) = w`, `d_{k+1}(w) = [δ₂, d_k(w)]`.
pub fn d_k(k: usize, w: &Word) -> Word {
    assert!(k >= 1, "d_k is defined for k >= 1");
    let d2 = delta_gen(2);
    (1..k).fold(w.clone(), |acc, _| Word::commutator(&d2, &acc))
}

/// `v₁ = δ`, `v_k = [x, d_{k−1}(z)]`.
pub fn v_k(k: usize) -> Word {
    assert!(k >= 1, "v_k is defined for k >= 1");
    if k == 1 {
        delta()
    } else {
        Word::commutator(&x_word(), &d_k(k - 1, &z_word()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_word, random_word, seeded_rng};
    use super::*;

    fn p(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn mon1_images() {
        let m = mon1();
        assert_eq!(m.apply(&gamma()), gamma());
        assert_eq!(m.apply(&p("d2")), p("g d2"));
        assert_eq!(m.apply(&delta()), p("g d0 g d1 g d2 g d3"));
    }

    #[test]
    fn mon0_images() {
        let m = mon0();
        assert_eq!(m.apply(&p("d0")), p("d0"));
        assert_eq!(m.apply(&p("d1")), p("d0 d1 d0'"));
        assert_eq!(m.apply(&p("d2")), p("d0 d1 d2 d1' d0'"));
        assert_eq!(m.apply(&p("d3")), p("d0 d1 d2 d3 d2' d1' d0'"));
        assert_eq!(m.apply(&gamma()), p("d0 d1 d2 d3 g"));
    }

    #[test]
    fn m_endo_images() {
        let m = m_endo();
        assert_eq!(m.apply(&p("d0")), p("d1' d0 d1"));
        assert_eq!(m.apply(&p("d1")), p("d1"));
        assert_eq!(m.apply(&p("d2")), p("d2"));
        assert_eq!(m.apply(&p("d3")), p("[d2,d3] d3"));
        assert_eq!(m.apply(&p("d3")), p("d2 d3 d2'"));
        assert_eq!(m.apply(&x_word()), x_word());
        assert_eq!(m.apply(&z_word()), z_word().conjugate_by(&p("d2'")));
    }

    #[test]
    fn inverses_undo_the_maps() {
        let pairs = [
            (mon0(), mon0_inverse()),
            (mon1(), mon1_inverse()),
            (m_endo(), m_endo_inverse()),
        ];
        let mut rng = seeded_rng(11);
        let words: Vec<Word> = (0..100).map(|_| random_word(&mut rng, 40)).collect();
        for (f, g) in &pairs {
            assert_eq!(g.compose(f), Endo::identity());
            assert_eq!(f.compose(g), Endo::identity());
            for w in &words {
                assert_eq!(&g.apply(&f.apply(w)), w);
            }
        }
    }

    #[test]
    fn var_basics() {
        assert_eq!(var(&gamma()), delta());
        assert!(var(&x_word()).is_identity());
        assert_eq!(var_iter(&gamma(), 1), delta());
        assert_eq!(var_iter(&gamma(), 2), var(&delta()));
    }

    #[test]
    fn d_k_and_v_k() {
        let z = z_word();
        assert_eq!(d_k(1, &z), z);
        assert_eq!(d_k(2, &z), p("[d2, d2 d3]"));
        assert_eq!(d_k(3, &z), p("[d2,[d2,z]]"));
        assert_eq!(v_k(1), p("d0 d1 d2 d3"));
        assert_eq!(v_k(2), p("[d1 d2, d2 d3]"));
        assert_eq!(v_k(3), p("[d1 d2, [d2, d2 d3]]"));
        for k in 1..8 {
            assert!(!v_k(k).contains(Generator::G));
        }
    }
}
