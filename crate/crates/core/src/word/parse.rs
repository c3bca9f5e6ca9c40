//! Text syntax for words.
//!
//! ```text
//! word   := term { term }
//! term   := atom [ "^" integer ] | atom "'"
//! atom   := letter | "[" word "," word "]" | "(" word ")"
//! letter := "g" | "d0" | "d1" | "d2" | "d3" | "x" | "z" | "D" | "1"
//! ```
//!
//! `x`, `z` and `D` are shorthands for `d1 d2`, `d2 d3` and `d0 d1 d2 d3`;
//! `1` is the empty word. Brackets denote the commutator `u v u⁻¹ v⁻¹`.

use super::{delta, x_word, z_word, Generator, Word};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown letter {found:?} at byte {pos}")]
    UnknownLetter { pos: usize, found: String },
}

pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected {:?}", p.src[p.pos] as char)));
    }
    Ok(w)
}

/// Canonical text form; `parse_word(&format_word(w)) == w`.
pub fn format_word(w: &Word) -> String {
    w.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.syntax(format!("expected {:?}, found {:?}", c as char, b as char))),
            None => Err(self.syntax(format!("expected {:?}, found end of input", c as char))),
        }
    }

    fn starts_atom(c: u8) -> bool {
        c == b'[' || c == b'(' || c.is_ascii_alphanumeric()
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut acc = match self.peek() {
            Some(c) if Self::starts_atom(c) => self.term()?,
            Some(c) => return Err(self.syntax(format!("expected a word, found {:?}", c as char))),
            None => return Err(self.syntax("expected a word, found end of input")),
        };
        while let Some(c) = self.peek() {
            if !Self::starts_atom(c) {
                break;
            }
            acc = &acc * &self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word, ParseError> {
        let atom = self.atom()?;
        // Postfix operators bind without intervening whitespace being required.
        match self.src.get(self.pos).copied() {
            Some(b'\'') => {
                self.pos += 1;
                Ok(atom.inverse())
            }
            Some(b'^') => {
                self.pos += 1;
                let e = self.integer()?;
                Ok(atom.pow(e))
            }
            _ => Ok(atom),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<i64>().map_err(|_| ParseError::Syntax {
            pos: start,
            msg: "expected an integer exponent".into(),
        })
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                Ok(Word::commutator(&u, &v))
            }
            Some(b'(') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b')')?;
                Ok(u)
            }
            Some(_) => self.letter(),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn letter(&mut self) -> Result<Word, ParseError> {
        let start = self.pos;
        let c = self.src[self.pos];
        self.pos += 1;
        let w = match c {
            b'g' => Word::gen(Generator::G),
            b'x' => x_word(),
            b'z' => z_word(),
            b'D' => delta(),
            b'1' => Word::identity(),
            b'd' => match self.src.get(self.pos).copied() {
                Some(d @ b'0'..=b'3') => {
                    self.pos += 1;
                    Word::gen(Generator::delta((d - b'0') as usize))
                }
                _ => {
                    return Err(ParseError::UnknownLetter {
                        pos: start,
                        found: self.token_from(start),
                    })
                }
            },
            _ => {
                self.pos = start;
                return Err(ParseError::UnknownLetter {
                    pos: start,
                    found: self.token_from(start),
                });
            }
        };
        Ok(w)
    }

    fn token_from(&self, start: usize) -> String {
        let end = self.src[start..]
            .iter()
            .position(|b| !b.is_ascii_alphanumeric())
            .map_or(self.src.len(), |n| start + n.max(1));
        String::from_utf8_lossy(&self.src[start..end]).into_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{random_word, seeded_rng, v_k, Letter};
    use super::*;
    use Generator::*;

    #[test]
    fn aliases_and_powers() {
        assert_eq!(parse_word("[x,z]").unwrap(), v_k(2));
        assert_eq!(parse_word("d0 d1 d2 d3").unwrap(), delta());
        assert_eq!(parse_word("D").unwrap(), delta());
        assert_eq!(
            parse_word("d1^-2").unwrap(),
            Word::reduce([Letter::neg(D1), Letter::neg(D1)])
        );
        assert_eq!(parse_word("d1^-1").unwrap(), parse_word("d1'").unwrap());
        assert_eq!(
            parse_word("(d1 d2)'").unwrap(),
            parse_word("d2' d1'").unwrap()
        );
        assert_eq!(parse_word("d1d2").unwrap(), x_word());
        assert!(parse_word("1").unwrap().is_identity());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_word("d1 q"),
            Err(ParseError::UnknownLetter {
                pos: 3,
                found: "q".into()
            })
        );
        assert!(matches!(
            parse_word("d7"),
            Err(ParseError::UnknownLetter { pos: 0, .. })
        ));
        assert!(matches!(
            parse_word("[d1 d2"),
            Err(ParseError::Syntax { pos: 6, .. })
        ));
        assert!(matches!(parse_word(""), Err(ParseError::Syntax { .. })));
        assert!(matches!(
            parse_word("d1^"),
            Err(ParseError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse_word("d1 )"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn format_round_trip() {
        let mut rng = seeded_rng(5);
        for _ in 0..200 {
            let w = random_word(&mut rng, 40);
            assert_eq!(parse_word(&format_word(&w)).unwrap(), w);
        }
    }
}
