//! Branch-cycle data of a degree-`n` cover of the sphere.
//!
//! The tuple `(σ̂₁ … σ̂_r)` lists the images of the standard loops around the
//! branch points. Only `σ₁ … σ_{r−1}` are free generators; `σ_r` is always
//! expanded as `(σ₁ ⋯ σ_{r−1})⁻¹`.

use serde::Serialize;
use thiserror::Error;

use crate::permutations::{orbit_of, Cycle, Permutation, Sheet};
use crate::words::{Letter, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("EmptyBranchList: at least one branch is required")]
    EmptyBranchList,
    #[error("DegreeMismatch: branch {branch} has degree {found}, expected {expected}")]
    DegreeMismatch {
        branch: usize,
        expected: usize,
        found: usize,
    },
    #[error("ProductNotIdentity: the product of the branches is {product}, not the identity")]
    ProductNotIdentity { product: String },
    #[error("NotTransitive: the orbit of sheet 1 has {orbit} of {degree} sheets")]
    NotTransitive { orbit: usize, degree: usize },
    #[error("IdentityBranch: branch {0} is the identity permutation")]
    IdentityBranch(usize),
    #[error("OddRamification: total ramification {0} is odd")]
    OddRamification(usize),
    #[error("NegativeGenus: Riemann-Hurwitz gives 2g = {0}")]
    NegativeGenus(i64),
    #[error("BranchIndexOutOfRange: branch {index} is not in 1..={count}")]
    BranchIndexOutOfRange { index: usize, count: usize },
    #[error("SymbolOutOfRange: {symbol} is not one of s1..s{max}")]
    SymbolOutOfRange { symbol: Symbol, max: usize },
}

/// What to do with branches equal to the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrivialBranches {
    /// Reject with [`MonodromyError::IdentityBranch`].
    #[default]
    Reject,
    /// Remove them before validating the rest.
    Drop,
    /// Keep them.
    Allow,
}

/// A validated branch tuple: product is the identity and the group is transitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyData {
    degree: usize,
    branches: Vec<Permutation>,
}

/// Cycle structure of one branch. `cycles.len()` is the number of preimages
/// of the branch point; each cycle length is a local ramification exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchProfile {
    pub branch: usize,
    pub cycles: Vec<Cycle>,
}

impl BranchProfile {
    pub fn preimages(&self) -> usize {
        self.cycles.len()
    }

    /// `Σ (len(e) − 1)` over the cycles of this branch.
    pub fn ramification(&self) -> usize {
        self.cycles.iter().map(|c| c.len() - 1).sum()
    }
}

impl MonodromyData {
    pub fn validate(degree: usize, branches: Vec<Permutation>) -> Result<Self, MonodromyError> {
        Self::validate_with(degree, branches, TrivialBranches::Reject)
    }

    pub fn validate_with(
        degree: usize,
        branches: Vec<Permutation>,
        trivial: TrivialBranches,
    ) -> Result<Self, MonodromyError> {
        for (i, b) in branches.iter().enumerate() {
            if b.degree() != degree {
                return Err(MonodromyError::DegreeMismatch {
                    branch: i + 1,
                    expected: degree,
                    found: b.degree(),
                });
            }
        }
        let branches: Vec<Permutation> = match trivial {
            TrivialBranches::Drop => branches.into_iter().filter(|b| !b.is_identity()).collect(),
            TrivialBranches::Reject => {
                if let Some(i) = branches.iter().position(Permutation::is_identity) {
                    return Err(MonodromyError::IdentityBranch(i + 1));
                }
                branches
            }
            TrivialBranches::Allow => branches,
        };
        if degree == 0 || branches.is_empty() {
            return Err(MonodromyError::EmptyBranchList);
        }
        let product = branches
            .iter()
            .fold(Permutation::identity(degree), |acc, b| acc.then(b));
        if !product.is_identity() {
            return Err(MonodromyError::ProductNotIdentity {
                product: product.to_string(),
            });
        }
        let orbit = orbit_of(&branches, 1).expect("degrees checked above");
        if orbit.len() != degree {
            return Err(MonodromyError::NotTransitive {
                orbit: orbit.len(),
                degree,
            });
        }
        Ok(MonodromyData { degree, branches })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of branch points `r`.
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Permutation] {
        &self.branches
    }

    /// `σ̂_l`, 1-based.
    pub fn branch(&self, l: usize) -> &Permutation {
        &self.branches[l - 1]
    }

    /// Number of free generators `r − 1`.
    pub fn free_rank(&self) -> usize {
        self.branches.len() - 1
    }

    /// The loop `σ_l` as a word in `σ₁ … σ_{r−1}`; `σ_r` expands to `(σ₁ ⋯ σ_{r−1})⁻¹`.
    pub fn branch_word(&self, l: usize) -> Word {
        let r = self.branch_count();
        if l < r {
            Word::gen(Symbol::Sigma(l))
        } else {
            Word::reduce((1..r).rev().map(|i| Letter::neg(Symbol::Sigma(i))))
        }
    }

    /// The monodromy of a word in `σ₁ … σ_{r−1}`, composed left to right.
    pub fn rho(&self, w: &Word) -> Result<Permutation, MonodromyError> {
        let max = self.free_rank();
        let mut images: Vec<Sheet> = (1..=self.degree).collect();
        for l in w.letters() {
            let i = match l.symbol {
                Symbol::Sigma(i) if (1..=max).contains(&i) => i,
                symbol => return Err(MonodromyError::SymbolOutOfRange { symbol, max }),
            };
            let b = &self.branches[i - 1];
            let step = if l.inverted { b.inverse() } else { b.clone() };
            for x in images.iter_mut() {
                *x = step.apply(*x);
            }
        }
        Ok(Permutation::from_images(images).expect("composition of bijections"))
    }

    /// Image of sheet 1 under `ρ(w)`, without building the permutation.
    pub fn lift_endpoint(&self, w: &Word, start: Sheet) -> Result<Sheet, MonodromyError> {
        let max = self.free_rank();
        let inverses: Vec<Permutation> = self.branches.iter().map(Permutation::inverse).collect();
        let mut x = start;
        for l in w.letters() {
            match l.symbol {
                Symbol::Sigma(i) if (1..=max).contains(&i) => {
                    x = if l.inverted {
                        inverses[i - 1].apply(x)
                    } else {
                        self.branches[i - 1].apply(x)
                    };
                }
                symbol => return Err(MonodromyError::SymbolOutOfRange { symbol, max }),
            }
        }
        Ok(x)
    }

    pub fn profile(&self) -> Vec<BranchProfile> {
        self.branches
            .iter()
            .enumerate()
            .map(|(i, b)| BranchProfile {
                branch: i + 1,
                cycles: b.cycles(),
            })
            .collect()
    }

    /// Total cycle count `Σ m_l`.
    pub fn total_preimages(&self) -> usize {
        self.branches.iter().map(|b| b.cycles().len()).sum()
    }

    /// Genus by Riemann–Hurwitz: `g = 1 − n + ½ Σ (len(e) − 1)`.
    pub fn genus(&self) -> Result<usize, MonodromyError> {
        let ramification: usize = self.profile().iter().map(BranchProfile::ramification).sum();
        if ramification % 2 != 0 {
            return Err(MonodromyError::OddRamification(ramification));
        }
        let twice = 2 - 2 * self.degree as i64 + ramification as i64;
        if twice < 0 {
            return Err(MonodromyError::NegativeGenus(twice));
        }
        Ok(twice as usize / 2)
    }

    /// Index of a branch that is a single `n`-cycle, preferring the last such
    /// branch so that no reordering is needed when `σ̂_r` already qualifies.
    pub fn ns_candidate(&self) -> Option<usize> {
        self.branches
            .iter()
            .rposition(Permutation::is_full_cycle)
            .map(|i| i + 1)
    }

    /// Moves branch `l` to the last position by braid moves
    /// `(σᵢ, σᵢ₊₁) → (σᵢ₊₁, σᵢ₊₁⁻¹σᵢσᵢ₊₁)`, which keep the product and the
    /// generated group and conjugate the moved branch.
    pub fn reorder_last(&self, l: usize) -> Result<MonodromyData, MonodromyError> {
        let r = self.branch_count();
        if l == 0 || l > r {
            return Err(MonodromyError::BranchIndexOutOfRange { index: l, count: r });
        }
        let mut branches = self.branches.clone();
        for i in (l - 1)..(r - 1) {
            let (a, b) = (branches[i].clone(), branches[i + 1].clone());
            branches[i] = b.clone();
            branches[i + 1] = b.inverse().then(&a).then(&b);
        }
        Ok(MonodromyData {
            degree: self.degree,
            branches,
        })
    }
}

pub fn validate(
    degree: usize,
    branches: Vec<Permutation>,
) -> Result<MonodromyData, MonodromyError> {
    MonodromyData::validate(degree, branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn data(n: usize, branches: &[&str]) -> Result<MonodromyData, MonodromyError> {
        let perms = branches
            .iter()
            .map(|b| Permutation::parse_cycles(b, n).unwrap())
            .collect();
        MonodromyData::validate(n, perms)
    }

    fn torus() -> MonodromyData {
        data(2, &["(1 2)"; 4]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(data(2, &["(1 2)"; 4]).is_ok());
        assert!(matches!(
            data(3, &["(1 2)", "(1 2)"]),
            Err(MonodromyError::NotTransitive {
                orbit: 2,
                degree: 3
            })
        ));
        assert!(matches!(
            data(2, &["(1 2)"]),
            Err(MonodromyError::ProductNotIdentity { .. })
        ));
        assert_eq!(
            data(2, &["(1 2)", "()", "(1 2)"]),
            Err(MonodromyError::IdentityBranch(2))
        );
        let mixed = vec![Permutation::identity(2), Permutation::identity(3)];
        assert!(matches!(
            MonodromyData::validate(2, mixed),
            Err(MonodromyError::DegreeMismatch { branch: 2, .. })
        ));
    }

    #[test]
    fn trivial_branch_policies() {
        let perms = |n| {
            vec![
                Permutation::parse_cycles("(1 2)", n).unwrap(),
                Permutation::identity(n),
                Permutation::parse_cycles("(1 2)", n).unwrap(),
            ]
        };
        let dropped = MonodromyData::validate_with(2, perms(2), TrivialBranches::Drop).unwrap();
        assert_eq!(dropped.branch_count(), 2);
        let kept = MonodromyData::validate_with(2, perms(2), TrivialBranches::Allow).unwrap();
        assert_eq!(kept.branch_count(), 3);
        let one = vec![Permutation::identity(1); 3];
        assert_eq!(
            MonodromyData::validate_with(1, one.clone(), TrivialBranches::Drop),
            Err(MonodromyError::EmptyBranchList)
        );
        assert!(MonodromyData::validate_with(1, one, TrivialBranches::Allow).is_ok());
    }

    #[test]
    fn rho_examples() {
        let t = torus();
        assert!(t.rho(&Word::empty()).unwrap().is_identity());
        assert!(t.rho(&"s1 s2".parse().unwrap()).unwrap().is_identity());
        assert_eq!(
            t.rho(&"s1".parse().unwrap()).unwrap(),
            Permutation::parse_cycles("(1 2)", 2).unwrap()
        );
        assert!(matches!(
            t.rho(&"s4".parse().unwrap()),
            Err(MonodromyError::SymbolOutOfRange { .. })
        ));
        assert!(t.rho(&"h1".parse().unwrap()).is_err());
        // ρ(σ_r) through its expansion
        assert_eq!(&t.rho(&t.branch_word(4)).unwrap(), t.branch(4));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(torus().genus().unwrap(), 1);
        assert_eq!(data(2, &["(1 2)"; 2]).unwrap().genus().unwrap(), 0);
        let trigonal = data(3, &["(1 2 3)", "(1 2 3)", "(1 2 3)", "(1 2 3)", "(1 3 2)"]).unwrap();
        assert_eq!(trigonal.genus().unwrap(), 3);
    }

    #[test]
    fn ns_candidate_examples() {
        assert!(torus().ns_candidate().is_some());
        let d = data(3, &["(1 2)", "(1 2 3)", "(1 3)"]).unwrap();
        assert_eq!(d.ns_candidate(), Some(2));
        let d = data(4, &["(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"]).unwrap();
        assert_eq!(d.ns_candidate(), None);
    }

    #[test]
    fn reorder_examples() {
        let sphere = data(2, &["(1 2)", "(1 2)"]).unwrap();
        assert_eq!(sphere.reorder_last(2).unwrap(), sphere);
        assert_eq!(sphere.reorder_last(1).unwrap(), sphere);
        assert!(sphere.reorder_last(3).is_err());

        let d = data(3, &["(1 2)", "(1 2 3)", "(1 3)"]).unwrap();
        let moved = d.reorder_last(2).unwrap();
        assert!(moved.branch(3).is_full_cycle());
        assert!(MonodromyData::validate(3, moved.branches().to_vec()).is_ok());
    }

    fn random_data() -> impl Strategy<Value = MonodromyData> {
        any::<u64>().prop_map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            loop {
                // (n, r) = (2, odd) has no valid tuple, so redraw both each time.
                let (n, r) = (rng.gen_range(2..7), rng.gen_range(2..6));
                let mut perms: Vec<Permutation> = (0..r - 1)
                    .map(|_| {
                        let mut v: Vec<usize> = (1..=n).collect();
                        v.shuffle(&mut rng);
                        Permutation::from_images(v).unwrap()
                    })
                    .collect();
                let prod = perms
                    .iter()
                    .fold(Permutation::identity(n), |a, b| a.then(b));
                perms.push(prod.inverse());
                if let Ok(d) = MonodromyData::validate(n, perms) {
                    return d;
                }
            }
        })
    }

    proptest! {
        #[test]
        fn rho_is_homomorphism(d in random_data(), u in prop::collection::vec((1usize..6, any::<bool>()), 0..12),
                               v in prop::collection::vec((1usize..6, any::<bool>()), 0..12)) {
            let max = d.free_rank();
            let mk = |raw: &Vec<(usize, bool)>| Word::reduce(raw.iter().map(|&(i, inverted)| Letter {
                symbol: Symbol::Sigma((i - 1) % max + 1), inverted,
            }));
            let (u, v) = (mk(&u), mk(&v));
            prop_assert_eq!(d.rho(&(&u * &v)).unwrap(), d.rho(&u).unwrap().then(&d.rho(&v).unwrap()));
            prop_assert_eq!(d.lift_endpoint(&u, 1).unwrap(), d.rho(&u).unwrap().apply(1));
        }

        #[test]
        fn last_branch_is_inverse_of_the_rest(d in random_data()) {
            let rest = Word::reduce((1..d.branch_count()).map(|i| Letter::pos(Symbol::Sigma(i))));
            prop_assert_eq!(d.rho(&rest).unwrap(), d.branch(d.branch_count()).inverse());
        }

        #[test]
        fn riemann_hurwitz_and_reorder(d in random_data(), pick in any::<prop::sample::Index>()) {
            let g = d.genus().unwrap() as i64;
            let ram: usize = d.profile().iter().map(BranchProfile::ramification).sum();
            prop_assert_eq!(2 - 2 * g, 2 * d.degree() as i64 - ram as i64);
            for p in d.profile() {
                prop_assert_eq!(p.cycles.iter().map(Cycle::len).sum::<usize>(), d.degree());
            }

            let l = pick.index(d.branch_count()) + 1;
            let moved = d.reorder_last(l).unwrap();
            prop_assert!(MonodromyData::validate(d.degree(), moved.branches().to_vec()).is_ok());
            prop_assert_eq!(moved.genus().unwrap() as i64, g);
            let cycle_type = |p: &Permutation| {
                let mut t: Vec<usize> = p.cycles().iter().map(Cycle::len).collect();
                t.sort();
                t
            };
            let mut before: Vec<_> = d.branches().iter().map(cycle_type).collect();
            let mut after: Vec<_> = moved.branches().iter().map(cycle_type).collect();
            prop_assert_eq!(&after[d.branch_count() - 1], &cycle_type(d.branch(l)));
            before.sort();
            after.sort();
            prop_assert_eq!(before, after);
        }
    }
}
