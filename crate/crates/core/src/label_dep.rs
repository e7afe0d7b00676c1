//! Symmetry notions for games whose players all use the same strategy labels,
//! where player permutations act on profiles directly.
//!
//! Every check here walks all of `S_N` and all profiles. At `n <= 6` that is at
//! most 720 permutations against 729 profiles.

use crate::error::{Error, Result};
use crate::game::Game;
use crate::perm::{symmetric_group_elements, transpositions, Permutation, PermutationGroup};

/// Rejects games whose players do not share one ordered label sequence.
fn require_shared(game: &Game) -> Result<()> {
    let shape = game.shape();
    if shape.uniform_strategy_count().is_none() {
        return Err(Error::NotMStrategy(shape.strategy_counts()));
    }
    if !shape.shares_labels() {
        return Err(Error::LabelMismatch);
    }
    Ok(())
}

pub fn shares_labels(game: &Game) -> bool {
    game.shape().shares_labels()
}

/// `table[k]` is the index of `π(s)` where `s` has index `k`.
fn action_table(game: &Game, pi: &Permutation) -> Vec<usize> {
    let shape = game.shape();
    let mut choices = vec![0; shape.players()];
    (0..shape.profile_count())
        .map(|k| {
            shape.digits_into(k, &mut choices);
            shape.index_unchecked(&pi.act_on_slice(&choices))
        })
        .collect()
}

/// `u_i(s) == u_j(table[s])` for every profile `s`.
fn utilities_agree(game: &Game, i: usize, j: usize, table: &[usize]) -> bool {
    table
        .iter()
        .enumerate()
        .all(|(k, &image)| game.rank_at(k, i) == game.rank_at(image, j))
}

fn check_arity(game: &Game, pi: &Permutation) -> Result<()> {
    if pi.degree() != game.players() {
        return Err(Error::Arity {
            expected: game.players(),
            found: pi.degree(),
        });
    }
    Ok(())
}

/// `π` is an invariant when `u_i = u_{π(i)} ∘ π` for every player.
pub fn is_invariant(game: &Game, pi: &Permutation) -> Result<bool> {
    require_shared(game)?;
    check_arity(game, pi)?;
    Ok(invariant_unchecked(game, pi))
}

fn invariant_unchecked(game: &Game, pi: &Permutation) -> bool {
    let table = action_table(game, pi);
    (0..game.players()).all(|i| utilities_agree(game, i, pi.apply(i), &table))
}

/// All invariants. They always form a group.
pub fn invariant_group(game: &Game) -> Result<PermutationGroup> {
    require_shared(game)?;
    let n = game.players();
    Ok(PermutationGroup::from_elements(
        n,
        symmetric_group_elements(n).filter(|pi| invariant_unchecked(game, pi)),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnonymityReport {
    weakly_anonymous: bool,
    anonymous: bool,
    fully_anonymous: bool,
}

impl AnonymityReport {
    /// Returns `None` unless `fully ⇒ anonymous ⇒ weakly`.
    pub fn new(weakly_anonymous: bool, anonymous: bool, fully_anonymous: bool) -> Option<Self> {
        let consistent = (!fully_anonymous || anonymous) && (!anonymous || weakly_anonymous);
        consistent.then_some(AnonymityReport {
            weakly_anonymous,
            anonymous,
            fully_anonymous,
        })
    }

    pub fn weakly_anonymous(&self) -> bool {
        self.weakly_anonymous
    }

    pub fn anonymous(&self) -> bool {
        self.anonymous
    }

    pub fn fully_anonymous(&self) -> bool {
        self.fully_anonymous
    }
}

pub fn anonymity(game: &Game) -> Result<AnonymityReport> {
    require_shared(game)?;
    let n = game.players();
    let tables: Vec<(Permutation, Vec<usize>)> = symmetric_group_elements(n)
        .map(|pi| {
            let t = action_table(game, &pi);
            (pi, t)
        })
        .collect();

    let weakly = (0..n).all(|i| {
        tables
            .iter()
            .filter(|(pi, _)| pi.apply(i) == i)
            .all(|(_, t)| utilities_agree(game, i, i, t))
    });
    let anonymous = (0..n).all(|i| tables.iter().all(|(_, t)| utilities_agree(game, i, i, t)));
    let fully =
        (0..n).all(|i| (0..n).all(|j| tables.iter().all(|(_, t)| utilities_agree(game, i, j, t))));
    Ok(AnonymityReport::new(weakly, anonymous, fully)
        .expect("anonymity notions are nested by definition"))
}

/// Standard symmetric: some transitive group of invariants exists. Since any
/// group containing a transitive subgroup is transitive, it is enough to test
/// the full invariant group, which is returned as the witness.
pub fn label_dep_standard_symmetric(game: &Game) -> Result<(bool, PermutationGroup)> {
    let group = invariant_group(game)?;
    Ok((group.is_transitive(), group))
}

/// The five equivalent formulations of full symmetry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FullSymmetryCondition {
    /// Every permutation is an invariant.
    AllInvariant,
    /// Standard symmetric and weakly anonymous.
    StandardAndWeaklyAnonymous,
    /// `u_{π(i)} = u_i ∘ π⁻¹` for all `i`, `π`.
    InverseForm,
    /// `u_i = u_{τ(i)} ∘ τ` for every transposition `τ`.
    Transpositions,
    /// `u_i = u_{τ(i)} ∘ τ⁻¹` for every transposition `τ`.
    InverseTranspositions,
}

impl FullSymmetryCondition {
    pub const ALL: [FullSymmetryCondition; 5] = [
        FullSymmetryCondition::AllInvariant,
        FullSymmetryCondition::StandardAndWeaklyAnonymous,
        FullSymmetryCondition::InverseForm,
        FullSymmetryCondition::Transpositions,
        FullSymmetryCondition::InverseTranspositions,
    ];
}

pub fn label_dep_fully_symmetric(game: &Game, condition: FullSymmetryCondition) -> Result<bool> {
    require_shared(game)?;
    let n = game.players();
    Ok(match condition {
        FullSymmetryCondition::AllInvariant => {
            symmetric_group_elements(n).all(|pi| invariant_unchecked(game, &pi))
        }
        FullSymmetryCondition::StandardAndWeaklyAnonymous => {
            label_dep_standard_symmetric(game)?.0 && anonymity(game)?.weakly_anonymous()
        }
        FullSymmetryCondition::InverseForm => symmetric_group_elements(n).all(|pi| {
            let table = action_table(game, &pi.inverse());
            // u_{π(i)}(s) = u_i(π⁻¹(s))
            (0..n).all(|i| utilities_agree(game, pi.apply(i), i, &table))
        }),
        FullSymmetryCondition::Transpositions => transpositions(n)
            .iter()
            .all(|tau| invariant_unchecked(game, tau)),
        FullSymmetryCondition::InverseTranspositions => transpositions(n).iter().all(|tau| {
            let table = action_table(game, &tau.inverse());
            (0..n).all(|i| utilities_agree(game, i, tau.apply(i), &table))
        }),
    })
}

/// The commonly misstated condition `u_i = u_{π(i)} ∘ π⁻¹` over all of `S_N`.
/// It coincides with full symmetry for two players but demands identical
/// utilities once `n >= 3`.
pub fn maskin_condition(game: &Game) -> Result<bool> {
    require_shared(game)?;
    let n = game.players();
    Ok(symmetric_group_elements(n).all(|pi| {
        let table = action_table(game, &pi.inverse());
        (0..n).all(|i| utilities_agree(game, i, pi.apply(i), &table))
    }))
}

/// `u_i = u_j` for all players.
pub fn identical_utilities(game: &Game) -> bool {
    let n = game.players();
    (0..game.shape().profile_count())
        .all(|k| (1..n).all(|i| game.rank_at(k, i) == game.rank_at(k, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Shape;

    fn ex(rows: &[&[i64]]) -> Game {
        Game::from_integers(Shape::uniform(3, 2).unwrap(), rows).unwrap()
    }

    fn example_3_6() -> Game {
        ex(&[
            &[1, 1, 1],
            &[3, 7, 4],
            &[7, 4, 3],
            &[6, 5, 8],
            &[4, 3, 7],
            &[8, 6, 5],
            &[5, 8, 6],
            &[2, 2, 2],
        ])
    }

    #[test]
    fn invariance_of_the_circle_game() {
        let game = example_3_6();
        let rot = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let swap = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        assert!(is_invariant(&game, &rot).unwrap());
        assert!(!is_invariant(&game, &swap).unwrap());
        assert!(is_invariant(&game, &Permutation::identity(3)).unwrap());
        let group = invariant_group(&game).unwrap();
        assert_eq!(group.order(), 3);
        assert!(group.satisfies_group_axioms());
        let (standard, witness) = label_dep_standard_symmetric(&game).unwrap();
        assert!(standard);
        assert_eq!(witness, group);
        for c in FullSymmetryCondition::ALL {
            assert!(!label_dep_fully_symmetric(&game, c).unwrap());
        }
    }

    #[test]
    fn label_mismatch_is_rejected() {
        let shape = Shape::from_labels(&[&["a", "b"], &["c", "d"]]).unwrap();
        let game = Game::from_integers(shape, &[&[1, 2], &[3, 4], &[5, 6], &[7, 8]]).unwrap();
        assert!(!shares_labels(&game));
        assert_eq!(invariant_group(&game), Err(Error::LabelMismatch));
        assert_eq!(maskin_condition(&game), Err(Error::LabelMismatch));

        let uneven = Shape::from_labels(&[&["a", "b"], &["a"]]).unwrap();
        let game = Game::from_integers(uneven, &[&[1, 2], &[3, 4]]).unwrap();
        assert!(matches!(anonymity(&game), Err(Error::NotMStrategy(_))));
    }

    #[test]
    fn singleton_labels_are_shared() {
        let shape = Shape::uniform(2, 1).unwrap();
        let game = Game::from_integers(shape, &[&[0, 0]]).unwrap();
        assert!(shares_labels(&game));
        assert!(label_dep_fully_symmetric(&game, FullSymmetryCondition::AllInvariant).unwrap());
    }

    #[test]
    fn anonymity_report_rejects_broken_chains() {
        assert!(AnonymityReport::new(false, true, false).is_none());
        assert!(AnonymityReport::new(true, false, true).is_none());
        assert!(AnonymityReport::new(true, true, true).is_some());
    }
}
