//! Coset transversal, Reidemeister–Schreier generators and rewriting.
//!
//! The subgroup `H = ρ⁻¹(Stab(1))` of `F_{r−1}` is the fundamental group of the
//! unbranched part of the cover. Its right cosets are the sheets: the coset of
//! `w` is the sheet `1·ρ(w)`. A transversal picks one word per sheet.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::monodromy::MonodromyData;
use crate::permutations::{Permutation, Sheet};
use crate::words::{Letter, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchreierError {
    #[error("NotInSubgroup: word {word} lifts to a path from sheet 1 to sheet {end}")]
    NotInSubgroup { word: Word, end: Sheet },
    #[error("SymbolOutOfRange: {symbol} is not one of s1..s{max}")]
    SymbolOutOfRange { symbol: Symbol, max: usize },
    #[error("UnreachableSheet: sheet {0} has no representative")]
    UnreachableSheet(Sheet),
}

/// How coset representatives are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Breadth-first from sheet 1; every representative has minimal length.
    Bfs,
    /// Representatives `δσ₁^k` laid out along the cycles of `σ̂₁`.
    #[default]
    #[serde(rename = "sigma1")]
    Sigma1Adapted,
}

/// A prefix-closed transversal: `reps[k]` lifts from sheet 1 to sheet `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierTable {
    strategy: Strategy,
    reps: Vec<Word>,
    generator_order: Vec<usize>,
    forward: Vec<Permutation>,
    backward: Vec<Permutation>,
}

/// `r σᵢ φ(r σᵢ)⁻¹` for the representative `r` of `sheet`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RsGenerator {
    pub symbol: Symbol,
    pub definition: Word,
    pub sheet: Sheet,
    pub sigma: usize,
}

/// The Reidemeister–Schreier basis of `H`, with a lookup from Schreier-graph
/// edges `(sheet, i)` to generator positions. Tree edges have no generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsBasis {
    generators: Vec<RsGenerator>,
    degree: usize,
    edges: Vec<Option<usize>>,
}

impl RsBasis {
    pub fn generators(&self) -> &[RsGenerator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator for the edge leaving `sheet` along `σᵢ`, if that edge is not in the tree.
    pub fn edge(&self, sheet: Sheet, i: usize) -> Option<&RsGenerator> {
        self.edges[(i - 1) * self.degree + sheet - 1].map(|j| &self.generators[j])
    }
}

impl SchreierTable {
    pub fn build(data: &MonodromyData, strategy: Strategy) -> Result<Self, SchreierError> {
        let n = data.degree();
        let rank = data.free_rank();
        let forward: Vec<Permutation> = data.branches()[..rank].to_vec();
        let backward: Vec<Permutation> = forward.iter().map(Permutation::inverse).collect();
        let generator_order: Vec<usize> = (1..=rank).collect();
        let mut table = SchreierTable {
            strategy,
            reps: Vec::new(),
            generator_order,
            forward,
            backward,
        };
        let mut reps: Vec<Option<Word>> = vec![None; n];
        reps[0] = Some(Word::empty());
        match strategy {
            Strategy::Bfs => table.fill_bfs(&mut reps),
            Strategy::Sigma1Adapted if rank > 0 => table.fill_sigma1(&mut reps),
            Strategy::Sigma1Adapted => {}
        }
        table.reps = reps
            .into_iter()
            .enumerate()
            .map(|(k, w)| w.ok_or(SchreierError::UnreachableSheet(k + 1)))
            .collect::<Result<_, _>>()?;
        Ok(table)
    }

    /// Letters in search order: `σᵢ` in generator order, then their inverses.
    fn letter_order(&self) -> Vec<Letter> {
        let pos = self
            .generator_order
            .iter()
            .map(|&i| Letter::pos(Symbol::Sigma(i)));
        let neg = self
            .generator_order
            .iter()
            .map(|&i| Letter::neg(Symbol::Sigma(i)));
        pos.chain(neg).collect()
    }

    fn fill_bfs(&self, reps: &mut [Option<Word>]) {
        let letters = self.letter_order();
        let mut queue = std::collections::VecDeque::from([1]);
        while let Some(k) = queue.pop_front() {
            for &l in &letters {
                let t = self.step(k, l);
                if reps[t - 1].is_none() {
                    let w = reps[k - 1].as_ref().unwrap() * &Word::from(l);
                    reps[t - 1] = Some(w);
                    queue.push_back(t);
                }
            }
        }
    }

    fn fill_sigma1(&self, reps: &mut [Option<Word>]) {
        let letters = self.letter_order();
        let rank_of = |l: &Letter| letters.iter().position(|x| x == l).unwrap();
        let s1 = Letter::pos(Symbol::Sigma(1));

        let lay_cycle = |reps: &mut [Option<Word>], start: Sheet, delta: Word| {
            let mut w = delta;
            let mut x = start;
            loop {
                reps[x - 1] = Some(w.clone());
                w = &w * &Word::from(s1);
                x = self.forward[0].apply(x);
                if x == start {
                    break;
                }
            }
        };
        lay_cycle(reps, 1, Word::empty());

        // Each remaining σ̂₁-cycle is entered by the shortest one-letter extension
        // of an existing representative, ties broken lexicographically.
        loop {
            let mut best: Option<(Word, Sheet)> = None;
            for k in 1..=reps.len() {
                let Some(rep) = reps[k - 1].as_ref() else {
                    continue;
                };
                for &l in &letters {
                    let t = self.step(k, l);
                    if reps[t - 1].is_some() {
                        continue;
                    }
                    let cand = rep * &Word::from(l);
                    let better = match &best {
                        None => true,
                        Some((w, _)) => {
                            let key =
                                |w: &Word| w.letters().iter().map(rank_of).collect::<Vec<_>>();
                            match cand.len().cmp(&w.len()) {
                                Ordering::Less => true,
                                Ordering::Equal => key(&cand) < key(w),
                                Ordering::Greater => false,
                            }
                        }
                    };
                    if better {
                        best = Some((cand, t));
                    }
                }
            }
            match best {
                Some((delta, t)) => lay_cycle(reps, t, delta),
                None => break,
            }
        }
    }

    #[inline]
    fn step(&self, k: Sheet, l: Letter) -> Sheet {
        let Symbol::Sigma(i) = l.symbol else {
            unreachable!("transversal letters are sigma letters")
        };
        if l.inverted {
            self.backward[i - 1].apply(k)
        } else {
            self.forward[i - 1].apply(k)
        }
    }

    fn checked_step(&self, k: Sheet, l: Letter) -> Result<Sheet, SchreierError> {
        match l.symbol {
            Symbol::Sigma(i) if (1..=self.forward.len()).contains(&i) => Ok(self.step(k, l)),
            symbol => Err(SchreierError::SymbolOutOfRange {
                symbol,
                max: self.forward.len(),
            }),
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn degree(&self) -> usize {
        self.reps.len()
    }

    pub fn generator_order(&self) -> &[usize] {
        &self.generator_order
    }

    /// Representative of sheet `k`.
    pub fn rep(&self, k: Sheet) -> &Word {
        &self.reps[k - 1]
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }

    /// Sheet reached from `start` along `w`.
    pub fn endpoint(&self, w: &Word, start: Sheet) -> Result<Sheet, SchreierError> {
        w.letters()
            .iter()
            .try_fold(start, |k, &l| self.checked_step(k, l))
    }

    /// `φ(w)`, the representative of the coset of `w`.
    pub fn phi(&self, w: &Word) -> Result<&Word, SchreierError> {
        Ok(self.rep(self.endpoint(w, 1)?))
    }

    /// One generator per non-tree edge `(sheet, σᵢ)`, ordered by `i` then sheet.
    pub fn rs_generators(&self) -> RsBasis {
        let n = self.degree();
        let mut generators = Vec::new();
        let mut edges = vec![None; n * self.forward.len()];
        for i in 1..=self.forward.len() {
            let s = Word::gen(Symbol::Sigma(i));
            for k in 1..=n {
                let t = self.forward[i - 1].apply(k);
                let path = self.rep(k) * &s;
                if &path == self.rep(t) {
                    continue;
                }
                edges[(i - 1) * n + k - 1] = Some(generators.len());
                generators.push(RsGenerator {
                    symbol: Symbol::H(generators.len() + 1),
                    definition: &path * &self.rep(t).inverse(),
                    sheet: k,
                    sigma: i,
                });
            }
        }
        RsBasis {
            generators,
            degree: n,
            edges,
        }
    }

    /// Reidemeister–Schreier rewriting of `w ∈ H` into the basis.
    ///
    /// `σᵢ` read at sheet `k` emits the generator of edge `(k, i)`; `σᵢ⁻¹`
    /// read at `k` emits the inverse of the generator of edge `(k·σᵢ⁻¹, i)`.
    pub fn rewrite(&self, basis: &RsBasis, w: &Word) -> Result<Word, SchreierError> {
        let mut k = 1;
        let mut out = Vec::new();
        for &l in w.letters() {
            let t = self.checked_step(k, l)?;
            let Symbol::Sigma(i) = l.symbol else {
                unreachable!()
            };
            if l.inverted {
                if let Some(g) = basis.edge(t, i) {
                    out.push(Letter::neg(g.symbol));
                }
            } else if let Some(g) = basis.edge(k, i) {
                out.push(Letter::pos(g.symbol));
            }
            k = t;
        }
        if k != 1 {
            return Err(SchreierError::NotInSubgroup {
                word: w.clone(),
                end: k,
            });
        }
        Ok(Word::reduce(out))
    }
}

pub fn build_table(
    data: &MonodromyData,
    strategy: Strategy,
) -> Result<SchreierTable, SchreierError> {
    SchreierTable::build(data, strategy)
}
