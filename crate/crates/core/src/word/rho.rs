//! Change of generators to `γ, δ, x, δ₂, z` and the projection that kills
//! the normal closure of `γ` and `δ`.

use super::{Alphabet, FreeWord, Generator, Letter, Word};
use serde::{Deserialize, Serialize};

/// Generators of the alternative basis `γ, δ, x = δ₁δ₂, δ₂, z = δ₂δ₃`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum RhoGen {
    Gamma,
    Delta,
    X,
    D2,
    Z,
}

impl Alphabet for RhoGen {
    fn symbol(self) -> &'static str {
        match self {
            RhoGen::Gamma => "g",
            RhoGen::Delta => "D",
            RhoGen::X => "x",
            RhoGen::D2 => "d2",
            RhoGen::Z => "z",
        }
    }
}

pub type RhoWord = FreeWord<RhoGen>;

fn rho(powers: &[(RhoGen, i64)]) -> RhoWord {
    RhoWord::from_powers(powers)
}

/// Rewrites using `δ₁ = xδ₂⁻¹`, `δ₃ = δ₂⁻¹z`, `δ₀ = δz⁻¹δ₂x⁻¹`.
pub fn rewrite_to_rho_alphabet(w: &Word) -> RhoWord {
    use RhoGen::*;
    w.substitute(|g| match g {
        Generator::G => rho(&[(Gamma, 1)]),
        Generator::D0 => rho(&[(Delta, 1), (Z, -1), (D2, 1), (X, -1)]),
        Generator::D1 => rho(&[(X, 1), (D2, -1)]),
        Generator::D2 => rho(&[(D2, 1)]),
        Generator::D3 => rho(&[(D2, -1), (Z, 1)]),
    })
}

/// Inverse of [`rewrite_to_rho_alphabet`]: expands `x`, `z`, `δ` in the `δ`-alphabet.
pub fn back_substitute(w: &RhoWord) -> Word {
    use Generator::*;
    w.substitute(|g| match g {
        RhoGen::Gamma => Word::gen(G),
        RhoGen::Delta => Word::from_powers(&[(D0, 1), (D1, 1), (D2, 1), (D3, 1)]),
        RhoGen::X => Word::from_powers(&[(D1, 1), (D2, 1)]),
        RhoGen::D2 => Word::gen(D2),
        RhoGen::Z => Word::from_powers(&[(D2, 1), (D3, 1)]),
    })
}

/// Total exponents `(m, n)` of `x` and `z` in the rewritten word.
pub fn exponent_sums_rho(w: &Word) -> (i64, i64) {
    let r = rewrite_to_rho_alphabet(w);
    (r.exponent_sum(RhoGen::X), r.exponent_sum(RhoGen::Z))
}

/// Image in the quotient by the normal closure of `γ` and `δ`, which is free on `δ₁, δ₂, δ₃`.
pub fn project_mod_gamma_subgroup(w: &Word) -> Word {
    w.substitute(|g| match g {
        Generator::G => Word::identity(),
        Generator::D0 => Word::reduce([
            Letter::neg(Generator::D3),
            Letter::neg(Generator::D2),
            Letter::neg(Generator::D1),
        ]),
        d => Word::gen(d),
    })
}

/// Representative modulo the commutators of the orbit subgroup with the whole group.
///
/// Works in the `γ, δ, x, δ₂, z` basis. Letters `γ` and `δ` are central
/// modulo those commutators, so when their exponent sums vanish they can be
/// deleted. An element of the orbit subgroup is congruent to each of its
/// conjugates, so the cyclically reduced core is taken and rotated to its
/// least cyclic shift. Returns `None` when a `γ` or `δ` exponent sum is
/// nonzero. Only meaningful for elements of the orbit subgroup, such as
/// iterated variations of `γ`.
pub fn orbit_normal_form(w: &Word) -> Option<RhoWord> {
    let r = rewrite_to_rho_alphabet(w);
    if r.exponent_sum(RhoGen::Gamma) != 0 || r.exponent_sum(RhoGen::Delta) != 0 {
        return None;
    }
    let stripped = RhoWord::reduce(
        r.letters()
            .iter()
            .copied()
            .filter(|l| !matches!(l.gen, RhoGen::Gamma | RhoGen::Delta)),
    );
    let core = stripped.cyclic_core();
    let n = core.len();
    let letters = core.letters();
    let best = (0..n.max(1))
        .map(|k| {
            letters[k.min(n)..]
                .iter()
                .chain(&letters[..k.min(n)])
                .copied()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default();
    Some(RhoWord::reduce(best))
}

#[cfg(test)]
mod tests {
    use super::super::{delta, delta_gen, mon1, parse_word, random_word, seeded_rng, v_k, z_word};
    use super::*;

    #[test]
    fn rewrite_examples() {
        assert_eq!(
            rewrite_to_rho_alphabet(&delta_gen(1)),
            rho(&[(RhoGen::X, 1), (RhoGen::D2, -1)])
        );
        let v2 = rewrite_to_rho_alphabet(&v_k(2));
        let xz = RhoWord::commutator(&rho(&[(RhoGen::X, 1)]), &rho(&[(RhoGen::Z, 1)]));
        assert_eq!(v2, xz);
        assert_eq!(
            rewrite_to_rho_alphabet(&delta()),
            rho(&[(RhoGen::Delta, 1)])
        );
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(exponent_sums_rho(&parse_word("x z'").unwrap()), (1, -1));
        assert_eq!(exponent_sums_rho(&v_k(2)), (0, 0));
        assert_eq!(exponent_sums_rho(&parse_word("d1").unwrap()), (1, 0));
    }

    #[test]
    fn projection_examples() {
        let m1 = mon1();
        assert_eq!(
            project_mod_gamma_subgroup(&m1.apply(&delta_gen(2))),
            delta_gen(2)
        );
        assert_eq!(
            project_mod_gamma_subgroup(&delta_gen(0)),
            parse_word("d3' d2' d1'").unwrap()
        );
        assert!(project_mod_gamma_subgroup(&Word::gen(Generator::G)).is_identity());
        assert!(project_mod_gamma_subgroup(&delta()).is_identity());
        assert_eq!(project_mod_gamma_subgroup(&z_word()), z_word());
    }

    #[test]
    fn orbit_normal_form_of_second_variation_is_the_basic_commutator() {
        use super::super::{gamma, var_iter};
        let xz = RhoWord::commutator(&rho(&[(RhoGen::X, 1)]), &rho(&[(RhoGen::Z, 1)]));
        assert_eq!(orbit_normal_form(&var_iter(&gamma(), 2)), Some(xz.clone()));
        assert_eq!(orbit_normal_form(&v_k(2)), Some(xz));
        assert_eq!(orbit_normal_form(&delta()), None);
        assert_eq!(
            orbit_normal_form(&Word::identity()),
            Some(RhoWord::identity())
        );
    }

    #[test]
    fn round_trip_on_random_words() {
        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            let w = random_word(&mut rng, 40);
            assert_eq!(back_substitute(&rewrite_to_rho_alphabet(&w)), w);
        }
    }
}
