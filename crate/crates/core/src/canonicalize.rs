//! Reduction of a one-relator surface presentation to `∏ᵢ [aᵢ, bᵢ]`.
//!
//! Every generator occurs in the relator exactly twice, once with each sign.
//! Two generators are linked when their occurrences interleave as
//! `x₁ … x₂ … x₁⁻¹ … x₂⁻¹`. Each linked pair is traded for a commutator using
//! `x₁Rx₂Sx₁⁻¹Tx₂⁻¹U = [Za⁻¹, b⁻¹Z⁻¹]·TSRU` with `a = x₁R`, `b = x₂T⁻¹`,
//! `Z = TSR`, until nothing is left.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::presentation::{Presentation, TietzeMove};
use crate::words::{commutator, Letter, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("MalformedRelator: {symbol} occurs {positive} times positively and {negative} times negatively")]
    MalformedRelator {
        symbol: Symbol,
        positive: usize,
        negative: usize,
    },
    #[error("NonSurfaceRelator: {0}")]
    NonSurfaceRelator(String),
    #[error("NotSingleRelator: expected one relator, found {0}")]
    NotSingleRelator(usize),
    #[error("PatternMismatch: {0}")]
    PatternMismatch(String),
    #[error("GenusMismatch: collected {found} commutator pairs, expected {expected}")]
    GenusMismatch { expected: usize, found: usize },
    #[error("SubstituteBackFailed: collecting pair {0} changed the relator")]
    SubstituteBackFailed(usize),
}

/// Positions of `x₁, x₂, x₁⁻¹, x₂⁻¹` in a relator, in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkedPair {
    pub x1: usize,
    pub x2: usize,
    pub x1_inv: usize,
    pub x2_inv: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectStep {
    /// `aᵢ⁻¹ bᵢ⁻¹ aᵢ bᵢ` over the fresh symbols.
    pub block: Word,
    /// `P·TSR·U`, the part of the relator still to be collected.
    pub remainder: Word,
    pub mv: TietzeMove,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorPair {
    pub a: Symbol,
    pub b: Symbol,
    /// `aᵢ` in the generators of the simplified presentation.
    pub a_definition: Word,
    pub b_definition: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalSurfaceForm {
    pub genus: usize,
    pub pairs: Vec<CommutatorPair>,
    /// `a₁⁻¹b₁⁻¹a₁b₁ ⋯ a_g⁻¹b_g⁻¹a_g b_g`.
    pub relator: Word,
    /// The relator this form was collected from.
    pub source: Word,
    pub trail: Vec<TietzeMove>,
}

impl CanonicalSurfaceForm {
    /// Definitions of every `aᵢ`, `bᵢ` as recorded in the trail.
    pub fn trail_definitions(&self) -> HashMap<Symbol, Word> {
        let mut defs = HashMap::new();
        for mv in &self.trail {
            if let (TietzeMove::RenamePair { index, .. }, Some((a, b))) =
                (mv, mv.pair_definitions())
            {
                defs.insert(Symbol::A(*index), a);
                defs.insert(Symbol::B(*index), b);
            }
        }
        defs
    }
}

fn occurrence_check(w: &Word) -> Result<HashMap<Symbol, (usize, usize)>, CanonicalError> {
    let mut counts: HashMap<Symbol, (usize, usize)> = HashMap::new();
    for l in w.letters() {
        let e = counts.entry(l.symbol).or_default();
        if l.inverted {
            e.1 += 1;
        } else {
            e.0 += 1;
        }
    }
    if let Some((&symbol, &(positive, negative))) = counts
        .iter()
        .filter(|(_, &(p, n))| p != 1 || n != 1)
        .min_by_key(|(s, _)| **s)
    {
        return Err(CanonicalError::MalformedRelator {
            symbol,
            positive,
            negative,
        });
    }
    Ok(counts)
}

/// Finds the leftmost letter `x₁` whose symbol is linked with another, and
/// the partner `x₂` whose first occurrence is nearest to `x₁`.
///
/// Each symbol is oriented by its first occurrence, so `x₁` and `x₂` may be
/// inverse letters. Returns `None` iff no two symbols are linked, in which
/// case the relator is freely trivial.
pub fn find_linked_pair(w: &Word) -> Result<Option<LinkedPair>, CanonicalError> {
    occurrence_check(w)?;
    let letters = w.letters();
    let mut partner = vec![0usize; letters.len()];
    let mut open: HashMap<Symbol, usize> = HashMap::new();
    for (i, l) in letters.iter().enumerate() {
        if let Some(j) = open.remove(&l.symbol) {
            partner[i] = j;
            partner[j] = i;
        } else {
            open.insert(l.symbol, i);
        }
    }
    for p1 in 0..letters.len() {
        let p3 = partner[p1];
        if p3 < p1 {
            continue;
        }
        for p2 in p1 + 1..p3 {
            let p4 = partner[p2];
            if p4 > p3 {
                return Ok(Some(LinkedPair {
                    x1: p1,
                    x2: p2,
                    x1_inv: p3,
                    x2_inv: p4,
                }));
            }
        }
    }
    Ok(None)
}

/// Trades the linked pair at `pair` for the commutator `[aᵢ, bᵢ]`, `i = index`.
///
/// The returned block times the remainder, with `aᵢ, bᵢ` replaced by their
/// definitions, is checked to be freely equal to `w`.
pub fn collect_step(
    w: &Word,
    pair: LinkedPair,
    index: usize,
) -> Result<CollectStep, CanonicalError> {
    let LinkedPair {
        x1: p1,
        x2: p2,
        x1_inv: p3,
        x2_inv: p4,
    } = pair;
    let letters = w.letters();
    if !(p1 < p2 && p2 < p3 && p3 < p4 && p4 < letters.len()) {
        return Err(CanonicalError::PatternMismatch(format!(
            "positions {p1}, {p2}, {p3}, {p4} are not increasing within length {}",
            letters.len()
        )));
    }
    let (x1, x2) = (letters[p1], letters[p2]);
    if letters[p3] != x1.inverse() || letters[p4] != x2.inverse() || x1.symbol == x2.symbol {
        return Err(CanonicalError::PatternMismatch(format!(
            "{w} is not of the form P x1 R x2 S x1^-1 T x2^-1 U at the given positions"
        )));
    }
    let prefix = w.slice(0..p1);
    let r = w.slice(p1 + 1..p2);
    let s = w.slice(p2 + 1..p3);
    let t = w.slice(p3 + 1..p4);
    let u = w.slice(p4 + 1..letters.len());
    if [&prefix, &r, &s, &t, &u]
        .iter()
        .any(|part| part.symbols().any(|y| y == x1.symbol || y == x2.symbol))
    {
        return Err(CanonicalError::PatternMismatch(format!(
            "{} or {} occurs outside the pattern",
            x1.symbol, x2.symbol
        )));
    }

    let a_word = &Word::from(x1) * &r;
    let b_word = &Word::from(x2) * &t.inverse();
    let z = &(&t * &s) * &r;
    let mv = TietzeMove::RenamePair {
        index,
        x1,
        x2,
        prefix: prefix.clone(),
        a_word,
        b_word,
        z: z.clone(),
    };
    let (a_def, b_def) = mv.pair_definitions().expect("rename move");
    let (a, b) = (Symbol::A(index), Symbol::B(index));
    let block = commutator(&Word::gen(a), &Word::gen(b));
    let remainder = &(&prefix * &z) * &u;

    let defs = HashMap::from([(a, a_def), (b, b_def)]);
    if &block.substitute(&defs) * &remainder != *w {
        return Err(CanonicalError::SubstituteBackFailed(index));
    }
    Ok(CollectStep {
        block,
        remainder,
        mv,
    })
}

/// Collects the single relator of `pres` into `g_expected` commutators.
pub fn canonicalize(
    pres: &Presentation,
    g_expected: usize,
) -> Result<CanonicalSurfaceForm, CanonicalError> {
    let [rel] = pres.relators.as_slice() else {
        return Err(CanonicalError::NotSingleRelator(pres.relators.len()));
    };
    let source = rel.word.clone();
    let counts = occurrence_check(&source).map_err(|e| match e {
        CanonicalError::MalformedRelator {
            symbol,
            positive,
            negative,
        } if positive + negative == 2 => {
            CanonicalError::NonSurfaceRelator(format!("{symbol} occurs twice with the same sign"))
        }
        other => other,
    })?;
    if let Some(g) = pres
        .generators
        .iter()
        .find(|g| !counts.contains_key(&g.symbol))
    {
        return Err(CanonicalError::NonSurfaceRelator(format!(
            "generator {} does not occur in the relator",
            g.symbol
        )));
    }

    let mut remainder = source.clone();
    let mut blocks: Vec<Letter> = Vec::new();
    let mut pairs = Vec::new();
    let mut trail = Vec::new();
    while let Some(pair) = find_linked_pair(&remainder)? {
        let index = pairs.len() + 1;
        let step = collect_step(&remainder, pair, index)?;
        let (a_definition, b_definition) = step.mv.pair_definitions().expect("rename move");
        pairs.push(CommutatorPair {
            a: Symbol::A(index),
            b: Symbol::B(index),
            a_definition,
            b_definition,
        });
        blocks.extend_from_slice(step.block.letters());
        trail.push(step.mv);
        remainder = step.remainder;
    }
    if !remainder.is_empty() {
        return Err(CanonicalError::NonSurfaceRelator(format!(
            "unlinked remainder {remainder} is not freely trivial"
        )));
    }
    if pairs.len() != g_expected {
        return Err(CanonicalError::GenusMismatch {
            expected: g_expected,
            found: pairs.len(),
        });
    }
    Ok(CanonicalSurfaceForm {
        genus: pairs.len(),
        pairs,
        relator: Word::reduce(blocks),
        source,
        trail,
    })
}
