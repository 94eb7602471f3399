//! Independent checks on a pipeline run.
//!
//! `H₁` is read off the *initial* presentation so that it does not depend on
//! the elimination code. Substitute-back checks are exact free-group
//! equalities, never abelianized ones.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::canonicalize::CanonicalSurfaceForm;
use crate::monodromy::MonodromyData;
use crate::presentation::{Presentation, TietzeMove};
use crate::schreier::SchreierTable;
use crate::words::{commutator, Symbol, Word};

/// Exponent-sum matrix: rows are relators, columns generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntegerMatrix {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        }
    }

    /// Relation matrix of a presentation, columns in generator order.
    pub fn relation_matrix(pres: &Presentation) -> Self {
        let col: HashMap<Symbol, usize> = pres
            .generators
            .iter()
            .enumerate()
            .map(|(j, g)| (g.symbol, j))
            .collect();
        let mut m = IntegerMatrix::zeros(pres.relators.len(), col.len());
        for (i, r) in pres.relators.iter().enumerate() {
            for l in r.word.letters() {
                let j = col[&l.symbol];
                m.entries[i * m.cols + j] += l.sign();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }
}

/// Nonzero invariant factors `d₁ | d₂ | …` and the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

/// Exact Smith normal form over arbitrary-precision integers.
///
/// Unit pivots are eliminated first on a sparse representation; whatever is
/// left (usually nothing) goes through the dense algorithm.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .filter(|&j| m.get(i, j) != 0)
                .map(|j| (j, BigInt::from(m.get(i, j))))
                .collect()
        })
        .collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut alive = vec![true; m.rows];
    let mut units = 0usize;

    loop {
        let mut pivoted = false;
        for i in 0..m.rows {
            if !alive[i] {
                continue;
            }
            let Some(j) = rows[i]
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .map(|(&j, _)| j)
                .min_by_key(|&j| col_rows[j].len())
            else {
                continue;
            };
            let pivot_row = std::mem::take(&mut rows[i]);
            let pivot = pivot_row[&j].clone();
            let others: Vec<usize> = col_rows[j].iter().copied().filter(|&k| k != i).collect();
            for k in others {
                // pivot is ±1, so it is its own inverse
                let f = &rows[k][&j] * &pivot;
                for (&c, v) in &pivot_row {
                    let entry = rows[k].entry(c).or_insert_with(BigInt::zero);
                    *entry -= &f * v;
                    if entry.is_zero() {
                        rows[k].remove(&c);
                        col_rows[c].remove(&k);
                    } else {
                        col_rows[c].insert(k);
                    }
                }
            }
            for &c in pivot_row.keys() {
                col_rows[c].remove(&i);
            }
            alive[i] = false;
            units += 1;
            pivoted = true;
        }
        if !pivoted {
            break;
        }
    }

    let live_rows: Vec<usize> = (0..m.rows)
        .filter(|&i| alive[i] && !rows[i].is_empty())
        .collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&j| !col_rows[j].is_empty()).collect();
    let mut dense: Vec<Vec<BigInt>> = live_rows
        .iter()
        .map(|&i| {
            live_cols
                .iter()
                .map(|j| rows[i].get(j).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    let rest = dense_smith(&mut dense);

    let mut factors = vec![BigInt::one(); units];
    factors.extend(rest);
    SmithForm {
        rank: factors.len(),
        factors,
    }
}

fn dense_smith(a: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = min_in_cross(a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let p = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    out
}

fn min_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

// Smallest nonzero entry in row t or column t.
fn min_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut key: Option<BigInt> = None;
    let mut consider = |i: usize, j: usize| {
        let v = a[i][j].abs();
        if !v.is_zero() && key.as_ref().is_none_or(|k| v < *k) {
            key = Some(v);
            best = (i, j);
        }
    };
    for i in t..a.len() {
        consider(i, t);
    }
    for j in t..a[t].len() {
        consider(t, j);
    }
    best
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Riemann–Hurwitz genus.
    pub genus_rh: Option<usize>,
    /// `(generators − relators + 1) / 2` of the simplified presentation.
    pub genus_presentation: Option<usize>,
    /// Number of commutator pairs, when a canonical form was produced.
    pub genus_canonical: Option<usize>,
    pub rank_h1: usize,
    /// Invariant factors of `H₁` other than 1.
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
    pub substitute_back_ok: bool,
    pub euler_ok: bool,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Runs every check and collects the outcome; never fails.
pub fn verify_all(
    data: &MonodromyData,
    table: &SchreierTable,
    initial: &Presentation,
    simplified: &Presentation,
    canon: Option<&CanonicalSurfaceForm>,
) -> VerificationReport {
    let mut failures = Vec::new();
    let n = data.degree();
    let r = data.branch_count();

    let genus_rh = match data.genus() {
        Ok(g) => Some(g),
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };
    let twice = simplified.generators.len() as i64 + 1 - simplified.relators.len() as i64;
    let genus_presentation = (twice >= 0 && twice % 2 == 0).then_some(twice as usize / 2);
    let genus_canonical = canon.map(|c| c.pairs.len());

    let smith = smith_normal_form(&IntegerMatrix::relation_matrix(initial));
    let rank_h1 = initial.generators.len() - smith.rank;
    let torsion: Vec<BigInt> = smith
        .factors
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();

    let mut euler_ok = true;
    let expected_rs = n * (r - 1) + 1 - n;
    if initial.generators.len() != expected_rs {
        euler_ok = false;
        failures.push(format!(
            "{} Reidemeister-Schreier generators, expected n(r-2)+1 = {expected_rs}",
            initial.generators.len()
        ));
    }
    let total_m = data.total_preimages();
    if let Some(g) = genus_rh {
        let lhs = (n * (r - 1) + 2) as i64 - (n + total_m) as i64;
        if lhs != 2 * g as i64 {
            euler_ok = false;
            failures.push(format!("n(r-2)+2-sum(m) = {lhs}, but 2g = {}", 2 * g));
        }
        if twice != 2 * g as i64 {
            euler_ok = false;
            failures.push(format!(
                "simplified presentation has generators - relators + 1 = {twice}, but 2g = {}",
                2 * g
            ));
        }
    }

    let substitute_back_ok =
        substitute_back(data, table, initial, simplified, canon, &mut failures);

    if let Some(g) = genus_rh {
        if genus_presentation != Some(g) {
            failures.push(format!(
                "presentation genus {genus_presentation:?} differs from {g}"
            ));
        }
        if genus_canonical.is_some_and(|c| c != g) {
            failures.push(format!(
                "canonical genus {genus_canonical:?} differs from {g}"
            ));
        }
        if rank_h1 != 2 * g {
            failures.push(format!("H1 has rank {rank_h1}, expected {}", 2 * g));
        }
    }
    if !torsion.is_empty() {
        failures.push(format!("H1 has torsion {torsion:?}"));
    }
    let pass = failures.is_empty();
    VerificationReport {
        genus_rh,
        genus_presentation,
        genus_canonical,
        rank_h1,
        torsion,
        substitute_back_ok,
        euler_ok,
        failures,
        pass,
    }
}

/// The chain of exact free-group identities linking the canonical relator to
/// the loops around the branch points:
///
/// 1. each generator definition is a nonempty loop at sheet 1;
/// 2. each initial relator maps to its `γ σ_l^{len} γ⁻¹`;
/// 3. replaying the elimination trail on the initial presentation gives the
///    simplified one letter for letter;
/// 4. the canonical relator, with the pairs defined by its trail, is the
///    simplified relator.
fn substitute_back(
    data: &MonodromyData,
    table: &SchreierTable,
    initial: &Presentation,
    simplified: &Presentation,
    canon: Option<&CanonicalSurfaceForm>,
    failures: &mut Vec<String>,
) -> bool {
    let before = failures.len();
    let defs = initial.definitions();
    for g in &initial.generators {
        if g.definition.is_empty() || table.endpoint(&g.definition, 1).ok() != Some(1) {
            failures.push(format!(
                "generator {} = {} is not a loop at sheet 1",
                g.symbol, g.definition
            ));
        }
    }
    for rel in &initial.relators {
        let p = &rel.provenance;
        if p.branch == 0
            || p.branch > data.branch_count()
            || !data.branch(p.branch).cycles().contains(&p.cycle)
        {
            failures.push(format!(
                "relator {} names a cycle that branch {} does not have",
                rel.id, p.branch
            ));
            continue;
        }
        if table.endpoint(&p.conjugator, 1).ok() != Some(p.cycle.entry_point()) {
            failures.push(format!(
                "relator {} conjugator does not reach its cycle",
                rel.id
            ));
        }
        let expected = &(&p.conjugator * &data.branch_word(p.branch).pow(p.cycle.len() as i64))
            * &p.conjugator.inverse();
        if rel.word.substitute(&defs) != expected {
            failures.push(format!(
                "relator {} does not expand to its branch loop",
                rel.id
            ));
        }
    }
    match initial.replay(&simplified.trail) {
        Ok(replayed) if replayed == *simplified => {}
        Ok(_) => failures.push(
            "replaying the elimination trail does not reproduce the simplified presentation".into(),
        ),
        Err(e) => failures.push(format!("elimination trail does not replay: {e}")),
    }
    if let Some(c) = canon {
        match simplified.relators.as_slice() {
            [rel] if rel.word == c.source => {}
            _ => {
                failures.push("canonical form was not collected from the simplified relator".into())
            }
        }
        let expected_relator = Word::reduce((1..=c.pairs.len()).flat_map(|i| {
            commutator(&Word::gen(Symbol::A(i)), &Word::gen(Symbol::B(i)))
                .letters()
                .to_vec()
        }));
        if c.relator != expected_relator {
            failures.push("canonical relator is not a product of commutators".into());
        }
        for mv in &c.trail {
            if let TietzeMove::RenamePair {
                index,
                x1,
                x2,
                a_word,
                b_word,
                ..
            } = mv
            {
                if a_word.letters().first() != Some(x1) || b_word.letters().first() != Some(x2) {
                    failures.push(format!(
                        "pair {index} move does not start with its linked letters"
                    ));
                }
            }
        }
        let trail_defs = c.trail_definitions();
        for pair in &c.pairs {
            if trail_defs.get(&pair.a) != Some(&pair.a_definition)
                || trail_defs.get(&pair.b) != Some(&pair.b_definition)
            {
                failures.push(format!(
                    "pair ({}, {}) disagrees with its trail move",
                    pair.a, pair.b
                ));
            }
        }
        if c.relator.substitute(&trail_defs) != c.source {
            failures.push(
                "canonical relator does not substitute back to the simplified relator".into(),
            );
        }
    }
    failures.len() == before
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &IntegerMatrix) -> (Vec<i64>, usize) {
        let s = smith_normal_form(m);
        (
            s.factors.iter().map(|d| d.try_into().unwrap()).collect(),
            s.rank,
        )
    }

    #[test]
    fn smith_examples() {
        assert_eq!(factors(&IntegerMatrix::zeros(3, 4)), (vec![], 0));
        assert_eq!(
            factors(&IntegerMatrix::from_rows(&[vec![1, 0], vec![0, 1]])),
            (vec![1, 1], 2)
        );
        let torus = IntegerMatrix::from_rows(&[
            vec![1, 0, 0, 0, 0],
            vec![0, 1, 1, 0, 0],
            vec![0, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 0],
        ]);
        assert_eq!(factors(&torus), (vec![1, 1, 1], 3));
    }

    #[test]
    fn smith_finds_torsion() {
        assert_eq!(
            factors(&IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]])),
            (vec![1, 6], 2)
        );
        assert_eq!(
            factors(&IntegerMatrix::from_rows(&[
                vec![2, 4, 4],
                vec![-6, 6, 12],
                vec![10, -4, -16]
            ])),
            (vec![2, 6, 12], 3)
        );
        assert_eq!(
            factors(&IntegerMatrix::from_rows(&[vec![4, 6], vec![6, 9]])),
            (vec![1], 1)
        );
        assert_eq!(
            factors(&IntegerMatrix::from_rows(&[
                vec![1, 1, 0],
                vec![0, 2, 2],
                vec![3, 0, 3]
            ])),
            (vec![1, 1, 12], 3)
        );
    }

    #[test]
    fn smith_is_invariant_under_row_and_column_shuffles() {
        let base = vec![
            vec![2, 4, 0, 1],
            vec![0, 6, 3, 0],
            vec![4, 2, 0, 8],
            vec![0, 0, 5, 5],
            vec![1, 1, 1, 1],
        ];
        let expected = factors(&IntegerMatrix::from_rows(&base));
        assert_eq!(expected, (vec![1, 1, 1, 30], 4));
        let mut rows = base.clone();
        rows.rotate_left(2);
        rows.swap(0, 4);
        let shuffled: Vec<Vec<i64>> = rows.iter().map(|r| vec![r[3], r[1], r[0], r[2]]).collect();
        assert_eq!(factors(&IntegerMatrix::from_rows(&shuffled)), expected);
    }

    #[test]
    fn smith_handles_large_intermediates() {
        let big = 1i64 << 40;
        let m = IntegerMatrix::from_rows(&[vec![big, big + 1], vec![big - 1, big]]);
        // det = big² − (big² − 1) = 1
        assert_eq!(factors(&m), (vec![1, 1], 2));
    }
}
