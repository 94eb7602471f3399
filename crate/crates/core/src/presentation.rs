//! Finite presentations of the compactified cover's group.
//!
//! Filling the disk over a preimage with cycle `e = (m₁ …)` of `σ̂_l` kills
//! the loop `γ σ_l^{len(e)} γ⁻¹`, where `γ` lifts from sheet 1 to `m₁`. Each
//! such loop is rewritten in the Reidemeister–Schreier basis to give one
//! relator. [`eliminate`] then removes one generator per relator of branches
//! `1..r−1`, leaving the relators of the last branch.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::monodromy::MonodromyData;
use crate::permutations::Cycle;
use crate::schreier::{RsBasis, SchreierError, SchreierTable};
use crate::words::{Letter, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Schreier(#[from] SchreierError),
    #[error("DuplicateGeneratorInRelator: relator {relator} uses {symbol} more than once")]
    DuplicateGeneratorInRelator { relator: usize, symbol: Symbol },
    #[error("EmptyRelator: relator {0} has no generator to eliminate")]
    EmptyRelator(usize),
    #[error("UnknownRelator: trail references relator {0}, which is not present")]
    UnknownRelator(usize),
    #[error("UnknownGenerator: trail eliminates {0}, which is not a live generator")]
    UnknownGenerator(Symbol),
    #[error("InvalidMove: {0}")]
    InvalidMove(String),
}

/// Where a relator comes from: the cycle `cycle` of branch `branch`, conjugated by `conjugator`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub branch: usize,
    pub cycle: Cycle,
    pub conjugator: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relator {
    /// Position in the initial relator list; stable across eliminations.
    pub id: usize,
    pub word: Word,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub symbol: Symbol,
    /// The generator as a word in `σ₁ … σ_{r−1}`.
    pub definition: Word,
}

/// A Tietze move, recorded so that simplification can be replayed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum TietzeMove {
    /// Replace `generator` by `expression` everywhere; relator `relator`
    /// becomes trivial and is removed.
    Eliminate {
        generator: Symbol,
        expression: Word,
        relator: usize,
    },
    /// Change of basis `{x₁, x₂} → {aᵢ, bᵢ}` collecting one commutator.
    ///
    /// The relator matched `P x₁ R x₂ S x₁⁻¹ T x₂⁻¹ U`. With `a = x₁R`,
    /// `b = x₂T⁻¹` and `Z = TSR`, the new generators are
    /// `aᵢ = P Z a⁻¹ P⁻¹` and `bᵢ = P b⁻¹ Z⁻¹ P⁻¹`, and the relator becomes
    /// `[aᵢ, bᵢ] · P Z U`.
    RenamePair {
        index: usize,
        x1: Letter,
        x2: Letter,
        prefix: Word,
        a_word: Word,
        b_word: Word,
        z: Word,
    },
}

impl TietzeMove {
    /// Definitions of the fresh pair `(aᵢ, bᵢ)` of a `RenamePair`, in the old generators.
    pub fn pair_definitions(&self) -> Option<(Word, Word)> {
        match self {
            TietzeMove::RenamePair {
                prefix,
                a_word,
                b_word,
                z,
                ..
            } => {
                let pinv = prefix.inverse();
                let a = prefix * &(&(z * &a_word.inverse()) * &pinv);
                let b = prefix * &(&(&b_word.inverse() * &z.inverse()) * &pinv);
                Some((a, b))
            }
            TietzeMove::Eliminate { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relators: Vec<Relator>,
    pub trail: Vec<TietzeMove>,
}

/// One relator per cycle of every branch, in branch order and, within a
/// branch, by ascending smallest point.
pub fn relators_for(
    data: &MonodromyData,
    table: &SchreierTable,
    basis: &RsBasis,
) -> Result<Vec<Relator>, PresentationError> {
    let mut out = Vec::new();
    for l in 1..=data.branch_count() {
        let loop_word = data.branch_word(l);
        for cycle in data.branch(l).cycles() {
            let gamma = table.rep(cycle.entry_point()).clone();
            let closed = &(&gamma * &loop_word.pow(cycle.len() as i64)) * &gamma.inverse();
            let word = table.rewrite(basis, &closed)?;
            out.push(Relator {
                id: out.len(),
                word,
                provenance: Provenance {
                    branch: l,
                    cycle,
                    conjugator: gamma,
                },
            });
        }
    }
    Ok(out)
}

impl Presentation {
    /// The unsimplified presentation: every RS generator and every relator.
    pub fn initial(
        data: &MonodromyData,
        table: &SchreierTable,
        basis: &RsBasis,
    ) -> Result<Self, PresentationError> {
        Ok(Presentation {
            generators: basis
                .generators()
                .iter()
                .map(|g| Generator {
                    symbol: g.symbol,
                    definition: g.definition.clone(),
                })
                .collect(),
            relators: relators_for(data, table, basis)?,
            trail: Vec::new(),
        })
    }

    pub fn generator_symbols(&self) -> Vec<Symbol> {
        self.generators.iter().map(|g| g.symbol).collect()
    }

    pub fn definitions(&self) -> HashMap<Symbol, Word> {
        self.generators
            .iter()
            .map(|g| (g.symbol, g.definition.clone()))
            .collect()
    }

    /// Apply one move in place. Only `Eliminate` acts on presentations.
    fn apply(&mut self, mv: &TietzeMove) -> Result<(), PresentationError> {
        let TietzeMove::Eliminate {
            generator,
            expression,
            relator,
        } = mv
        else {
            return Err(PresentationError::InvalidMove(
                "pair renames act on canonical forms, not presentations".into(),
            ));
        };
        if expression.symbols().any(|s| s == *generator) {
            return Err(PresentationError::InvalidMove(format!(
                "expression for {generator} mentions {generator}"
            )));
        }
        let gpos = self
            .generators
            .iter()
            .position(|g| g.symbol == *generator)
            .ok_or(PresentationError::UnknownGenerator(*generator))?;
        let rpos = self
            .relators
            .iter()
            .position(|r| r.id == *relator)
            .ok_or(PresentationError::UnknownRelator(*relator))?;
        let table = HashMap::from([(*generator, expression.clone())]);
        if !self.relators[rpos].word.substitute(&table).is_empty() {
            return Err(PresentationError::InvalidMove(format!(
                "relator {relator} does not justify {generator} = {expression}"
            )));
        }
        self.generators.remove(gpos);
        self.relators.remove(rpos);
        for r in &mut self.relators {
            if r.word.symbols().any(|s| s == *generator) {
                r.word = r.word.substitute(&table);
            }
        }
        self.trail.push(mv.clone());
        Ok(())
    }

    /// Replays `trail` from this presentation.
    pub fn replay(&self, trail: &[TietzeMove]) -> Result<Presentation, PresentationError> {
        let mut p = self.clone();
        for mv in trail {
            p.apply(mv)?;
        }
        Ok(p)
    }
}

/// Eliminates one generator per relator of branches `1..r−1`, in branch order.
///
/// Each such relator is a product of distinct generators `h₁ h₂ ⋯ h_k`; the
/// first, `h₁`, is solved for and substituted away. The relators of the last
/// branch are kept. When the last branch is a single cycle the result has
/// `2g` generators and one relator.
pub fn eliminate(pres: &Presentation) -> Result<Presentation, PresentationError> {
    let last = pres
        .relators
        .iter()
        .map(|r| r.provenance.branch)
        .max()
        .unwrap_or(0);
    let order: Vec<usize> = pres
        .relators
        .iter()
        .filter(|r| r.provenance.branch < last)
        .map(|r| r.id)
        .collect();
    let mut p = pres.clone();
    for id in order {
        let rel = p
            .relators
            .iter()
            .find(|r| r.id == id)
            .expect("ids are stable");
        let mut seen = BTreeSet::new();
        if let Some(dup) = rel.word.symbols().find(|&s| !seen.insert(s)) {
            return Err(PresentationError::DuplicateGeneratorInRelator {
                relator: id,
                symbol: dup,
            });
        }
        let (&head, rest) = rel
            .word
            .letters()
            .split_first()
            .ok_or(PresentationError::EmptyRelator(id))?;
        // head · rest = 1
        let rest = Word::reduce(rest.iter().copied());
        let expression = if head.inverted { rest } else { rest.inverse() };
        p.apply(&TietzeMove::Eliminate {
            generator: head.symbol,
            expression,
            relator: id,
        })?;
    }
    Ok(p)
}
