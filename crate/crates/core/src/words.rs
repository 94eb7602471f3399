//! Freely reduced words over named generator alphabets.
//!
//! Commutators follow `[x, y] = x⁻¹y⁻¹xy`, the convention that makes
//! `xy = yx[x, y]` hold.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// A generator name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// `σᵢ`, a standard loop generator of the punctured sphere (printed `s<i>`).
    Sigma(usize),
    /// A Reidemeister–Schreier generator of the cover's group (printed `h<i>`).
    H(usize),
    /// First member of a canonical commutator pair (printed `a<i>`).
    A(usize),
    /// Second member of a canonical commutator pair (printed `b<i>`).
    B(usize),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Sigma(i) => write!(f, "s{i}"),
            Symbol::H(i) => write!(f, "h{i}"),
            Symbol::A(i) => write!(f, "a{i}"),
            Symbol::B(i) => write!(f, "b{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ParseError: {0}")]
pub struct WordParseError(String);

impl FromStr for Symbol {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WordParseError(format!("bad symbol {s:?}"));
        let (head, idx) = s.split_at_checked(1).ok_or_else(bad)?;
        let idx: usize = idx.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        match head {
            "s" => Ok(Symbol::Sigma(idx)),
            "h" => Ok(Symbol::H(idx)),
            "a" => Ok(Symbol::A(idx)),
            "b" => Ok(Symbol::B(idx)),
            _ => Err(bad()),
        }
    }
}

/// A generator raised to `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub symbol: Symbol,
    pub inverted: bool,
}

impl Letter {
    pub fn pos(symbol: Symbol) -> Self {
        Letter {
            symbol,
            inverted: false,
        }
    }

    pub fn neg(symbol: Symbol) -> Self {
        Letter {
            symbol,
            inverted: true,
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            symbol: self.symbol,
            inverted: !self.inverted,
        }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverted {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.symbol == other.symbol && self.inverted != other.inverted
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "{}^-1", self.symbol)
        } else {
            write!(f, "{}", self.symbol)
        }
    }
}

/// A freely reduced word. Every constructor reduces, so two words are equal
/// in the free group iff they are equal as values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn gen(symbol: Symbol) -> Self {
        Word {
            letters: vec![Letter::pos(symbol)],
        }
    }

    pub fn from_letter(letter: Letter) -> Self {
        Word {
            letters: vec![letter],
        }
    }

    /// Free reduction of an arbitrary signed sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|&top| top.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation followed by reduction at the junction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        let mut skip = 0;
        for &l in &other.letters {
            if letters.last().is_some_and(|&top| top.cancels(l)) {
                letters.pop();
                skip += 1;
            } else {
                break;
            }
        }
        letters.extend_from_slice(&other.letters[skip..]);
        Word { letters }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::empty(), |acc, _| acc.concat(&base))
    }

    /// Homomorphic image: each symbol in `table` is replaced by its word
    /// (inverse occurrences by the inverse word); other symbols are kept.
    pub fn substitute(&self, table: &HashMap<Symbol, Word>) -> Word {
        self.substitute_with(|s| table.get(&s).cloned())
    }

    pub fn substitute_with<F>(&self, mut f: F) -> Word
    where
        F: FnMut(Symbol) -> Option<Word>,
    {
        let mut out = Vec::with_capacity(self.len());
        for &l in &self.letters {
            match f(l.symbol) {
                Some(w) if l.inverted => out.extend(w.inverse().letters),
                Some(w) => out.extend(w.letters),
                None => out.push(l),
            }
        }
        Word::reduce(out)
    }

    /// Net exponent of `symbol`.
    pub fn exponent_sum(&self, symbol: Symbol) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.symbol == symbol)
            .map(|l| l.sign())
            .sum()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.letters.iter().map(|l| l.symbol)
    }

    /// Subword `letters[range]`, reduced (a slice of a reduced word is reduced).
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word {
            letters: self.letters[range].to_vec(),
        }
    }
}

/// Reduce a raw signed sequence.
pub fn reduce(letters: &[Letter]) -> Word {
    Word::reduce(letters.iter().copied())
}

pub fn invert(w: &Word) -> Word {
    w.inverse()
}

pub fn substitute(w: &Word, table: &HashMap<Symbol, Word>) -> Word {
    w.substitute(table)
}

/// `[x, y] = x⁻¹ y⁻¹ x y`, reduced.
pub fn commutator(x: &Word, y: &Word) -> Word {
    Word::reduce(
        x.inverse()
            .letters
            .into_iter()
            .chain(y.inverse().letters)
            .chain(x.letters.iter().copied())
            .chain(y.letters.iter().copied()),
    )
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        self.concat(&rhs)
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word::from_letter(l)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::reduce(iter)
    }
}

impl fmt::Display for Word {
    /// Space-separated letters, `s1 s2^-1 h3`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, inverted) = match tok.strip_suffix("^-1") {
                Some(name) => (name, true),
                None => (tok, false),
            };
            letters.push(Letter {
                symbol: name.parse()?,
                inverted,
            });
        }
        Ok(Word::reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
