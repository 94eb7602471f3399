//! Permutations of the sheets `1..=n` of a cover.
//!
//! Composition is left to right: `p.then(&q)` sends `x` to `q(p(x))`. This is
//! the order in which loops are concatenated, so the permutation of the path
//! `σᵢσⱼ` is `ρ(σᵢ).then(ρ(σⱼ))`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// A sheet index, 1-based.
pub type Sheet = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("DegreeMismatch: expected degree {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("NotABijection: {0}")]
    NotABijection(String),
    #[error("PointOutOfRange: point {point} is not in 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("ParseError: {0}")]
    Parse(String),
}

/// A bijection of `{1..n}` stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // images[k - 1] is the image of sheet k
    images: Vec<Sheet>,
}

/// One cycle `(m₁ m₂ …)` of a permutation. Fixed points are cycles of length 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    points: Vec<Sheet>,
}

impl Cycle {
    pub fn new(points: Vec<Sheet>) -> Result<Self, PermutationError> {
        if points.is_empty() {
            return Err(PermutationError::Parse("empty cycle".into()));
        }
        let distinct: BTreeSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(PermutationError::NotABijection(format!(
                "cycle {:?} repeats a point",
                points
            )));
        }
        Ok(Cycle { points })
    }

    pub fn points(&self) -> &[Sheet] {
        &self.points
    }

    /// Cycle length, the local ramification exponent of the matching preimage.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest point of the cycle.
    pub fn entry_point(&self) -> Sheet {
        *self.points.iter().min().expect("cycles are nonempty")
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Builds a permutation from its image table, `images[k-1] = p(k)`.
    pub fn from_images(images: Vec<Sheet>) -> Result<Self, PermutationError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n {
                return Err(PermutationError::PointOutOfRange {
                    point: x,
                    degree: n,
                });
            }
            if std::mem::replace(&mut seen[x - 1], true) {
                return Err(PermutationError::NotABijection(format!(
                    "image {x} appears twice"
                )));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a degree-`n` permutation from disjoint cycles; omitted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<Sheet>]) -> Result<Self, PermutationError> {
        let mut images: Vec<Sheet> = (1..=n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(PermutationError::PointOutOfRange {
                        point: p,
                        degree: n,
                    });
                }
                if std::mem::replace(&mut used[p - 1], true) {
                    return Err(PermutationError::NotABijection(format!(
                        "point {p} appears in more than one position"
                    )));
                }
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(1 2)(4 5 6)"`. `"()"` and `""` are the identity.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self, PermutationError> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermutationError::Parse(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| PermutationError::Parse(format!("unclosed cycle in {text:?}")))?;
            let points = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>().map_err(|_| {
                        PermutationError::Parse(format!("bad point {t:?} in {text:?}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Sheet] {
        &self.images
    }

    /// Image of sheet `k`.
    #[inline]
    pub fn apply(&self, k: Sheet) -> Sheet {
        self.images[k - 1]
    }

    /// `self` followed by `other`.
    ///
    /// Panics on a degree mismatch; see [`compose`] for the checked form.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&x| other.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (k, &x) in self.images.iter().enumerate() {
            images[x - 1] = k + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| x == k + 1)
    }

    /// Disjoint cycles covering every point, fixed points included. Each cycle
    /// starts at its minimal point and cycles are sorted by that point.
    pub fn cycles(&self) -> Vec<Cycle> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut points = Vec::new();
            let mut x = start;
            while !seen[x - 1] {
                seen[x - 1] = true;
                points.push(x);
                x = self.apply(x);
            }
            out.push(Cycle { points });
        }
        out
    }

    /// Whether this permutation is a single cycle through all `n` points.
    pub fn is_full_cycle(&self) -> bool {
        let n = self.degree();
        let mut x = 1;
        for step in 1..=n {
            x = self.apply(x);
            if x == 1 {
                return step == n;
            }
        }
        false
    }

    /// Power `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: usize) -> Permutation {
        (0..k).fold(Permutation::identity(self.degree()), |acc, _| {
            acc.then(self)
        })
    }
}

/// Checked left-to-right composition: the result sends `x` to `q(p(x))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermutationError> {
    if p.degree() != q.degree() {
        return Err(PermutationError::DegreeMismatch {
            expected: p.degree(),
            found: q.degree(),
        });
    }
    Ok(p.then(q))
}

pub fn cycle_decomposition(p: &Permutation) -> Vec<Cycle> {
    p.cycles()
}

/// The orbit of `start` under the group generated by `gens`.
pub fn orbit_of(gens: &[Permutation], start: Sheet) -> Result<BTreeSet<Sheet>, PermutationError> {
    let n = match gens.first() {
        Some(g) => g.degree(),
        None => return Ok(BTreeSet::from([start])),
    };
    if let Some(g) = gens.iter().find(|g| g.degree() != n) {
        return Err(PermutationError::DegreeMismatch {
            expected: n,
            found: g.degree(),
        });
    }
    if start == 0 || start > n {
        return Err(PermutationError::PointOutOfRange {
            point: start,
            degree: n,
        });
    }
    // the generated group is finite, so closing under gens alone closes under inverses
    let mut orbit = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if orbit.insert(y) {
                stack.push(y);
            }
        }
    }
    Ok(orbit)
}

impl fmt::Display for Permutation {
    /// Cycle notation with fixed points omitted; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            write!(f, "{c}")?;
            any = true;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl FromStr for Cycle {
    type Err = PermutationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| PermutationError::Parse(format!("not a cycle: {s:?}")))?;
        let points = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| PermutationError::Parse(format!("bad point {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Cycle::new(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn compose_examples() {
        let t = cyc(2, "(1 2)");
        assert_eq!(compose(&t, &Permutation::identity(2)).unwrap(), t);
        assert!(compose(&t, &t).unwrap().is_identity());
        // 1→2→1, 2→3→3, 3→1→2
        let p = compose(&cyc(3, "(1 2 3)"), &cyc(3, "(1 2)")).unwrap();
        assert_eq!(p, cyc(3, "(2 3)"));
        assert_eq!(p.images(), &[1, 3, 2]);
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = compose(&Permutation::identity(2), &Permutation::identity(3)).unwrap_err();
        assert!(matches!(err, PermutationError::DegreeMismatch { .. }));
    }

    #[test]
    fn cycle_decomposition_examples() {
        let c = cycle_decomposition(&Permutation::identity(3));
        assert_eq!(
            c.iter().map(|c| c.points().to_vec()).collect::<Vec<_>>(),
            vec![vec![1], vec![2], vec![3]]
        );

        let c = cycle_decomposition(&cyc(5, "(1 2 3)(4 5)"));
        assert_eq!(
            c.iter().map(|c| c.points().to_vec()).collect::<Vec<_>>(),
            vec![vec![1, 2, 3], vec![4, 5]]
        );

        let c = cycle_decomposition(&Permutation::from_images(vec![2, 1, 3]).unwrap());
        assert_eq!(
            c.iter().map(|c| c.points().to_vec()).collect::<Vec<_>>(),
            vec![vec![1, 2], vec![3]]
        );
    }

    #[test]
    fn cycles_start_at_minimum() {
        let c = cyc(4, "(3 1 4)").cycles();
        assert_eq!(c[0].points(), &[1, 4, 3]);
        assert_eq!(c[1].points(), &[2]);
    }

    #[test]
    fn orbit_examples() {
        let t = [cyc(2, "(1 2)")];
        assert_eq!(orbit_of(&t, 1).unwrap(), BTreeSet::from([1, 2]));
        assert_eq!(
            orbit_of(&[cyc(3, "(1 2)")], 3).unwrap(),
            BTreeSet::from([3])
        );
        let gens = [cyc(3, "(1 2)"), cyc(3, "(2 3)")];
        assert_eq!(orbit_of(&gens, 1).unwrap(), BTreeSet::from([1, 2, 3]));
        assert!(orbit_of(&[cyc(2, "(1 2)"), cyc(3, "(1 2)")], 1).is_err());
    }

    #[test]
    fn parse_and_print() {
        let p = cyc(6, " (1 2)( 4 5 6 ) ");
        assert_eq!(p.to_string(), "(1 2)(4 5 6)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2", 3).is_err());
        assert!(Permutation::parse_cycles("1 2", 3).is_err());
        assert!(Permutation::parse_cycles("", 3).unwrap().is_identity());
    }

    #[test]
    fn full_cycle_predicate() {
        assert!(cyc(3, "(1 3 2)").is_full_cycle());
        assert!(!cyc(4, "(1 2)(3 4)").is_full_cycle());
        assert!(Permutation::identity(1).is_full_cycle());
    }

    fn perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n).prop_flat_map(|n| {
            Just((1..=n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::from_images(v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn inverse_cancels(p in perm(12)) {
            prop_assert!(p.then(&p.inverse()).is_identity());
            prop_assert!(p.inverse().then(&p).is_identity());
        }

        #[test]
        fn cycles_recompose(p in perm(12)) {
            let cycles = p.cycles();
            prop_assert_eq!(cycles.iter().map(Cycle::len).sum::<usize>(), p.degree());
            let mut parts: Vec<Vec<usize>> = cycles.iter().map(|c| c.points().to_vec()).collect();
            // disjoint cycles commute, so order is irrelevant
            parts.reverse();
            prop_assert_eq!(Permutation::from_cycles(p.degree(), &parts).unwrap(), p.clone());
            prop_assert_eq!(Permutation::parse_cycles(&p.to_string(), p.degree()).unwrap(), p);
        }

        #[test]
        fn orbit_idempotent(a in perm(8), seed in any::<u64>()) {
            let n = a.degree();
            let b = Permutation::identity(n);
            let gens = [a, b];
            let start = (seed as usize % n) + 1;
            let orbit = orbit_of(&gens, start).unwrap();
            for &x in &orbit {
                prop_assert_eq!(&orbit_of(&gens, x).unwrap(), &orbit);
            }
        }
    }
}
