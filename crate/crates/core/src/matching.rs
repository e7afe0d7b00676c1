//! Matchings of strategy sets: `m` profiles in which every strategy of every
//! player appears exactly once. A matching identifies the players' strategy
//! sets with one another, which is what lets a bijection group behave like
//! plain player permutations.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::game::{Game, Profile, Shape};
use crate::morphism::{BijectionGroup, GameBijection};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matching {
    shape: Arc<Shape>,
    // Sorted by player 1's strategy, so `rows[a][0] == a`.
    rows: Vec<Profile>,
}

/// Every player has each of its strategies in exactly one row.
pub fn is_matching(rows: &[Profile], shape: &Shape) -> bool {
    let n = shape.players();
    if rows.iter().any(|r| shape.check_profile(r).is_err()) {
        return false;
    }
    (0..n).all(|i| {
        let m = shape.strategy_count(i);
        let mut hits = vec![0usize; m];
        for row in rows {
            hits[row[i]] += 1;
        }
        hits.iter().all(|&h| h == 1)
    })
}

impl Matching {
    pub fn new(shape: Arc<Shape>, rows: Vec<Profile>) -> Result<Self> {
        if !is_matching(&rows, &shape) {
            return Err(Error::Parse(
                "rows are not total and unique for every player".into(),
            ));
        }
        let mut rows = rows;
        rows.sort_by_key(|r| r[0]);
        Ok(Matching { shape, rows })
    }

    /// The matching pairing strategy `k` of every player with strategy `k` of
    /// every other player.
    pub fn diagonal(shape: Arc<Shape>) -> Result<Self> {
        let m = shape
            .uniform_strategy_count()
            .ok_or_else(|| Error::NotMStrategy(shape.strategy_counts()))?;
        let rows = (0..m)
            .map(|k| Profile::new(vec![k; shape.players()]))
            .collect();
        Matching::new(shape, rows)
    }

    /// Parses `{(a,d,f),(b,c,e)}`.
    pub fn parse(text: &str, shape: Arc<Shape>) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("matching must be braced: `{text}`")))?;
        let mut rows = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed row in `{text}`")))?;
            rows.push(shape.parse_profile(&rest[..=close])?);
            rest = rest[close + 1..]
                .trim_start()
                .trim_start_matches(',')
                .trim_start();
        }
        Matching::new(shape, rows)
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn rows(&self) -> &[Profile] {
        &self.rows
    }

    /// `M_ij`: strategy `a` of player `i` goes to the strategy of player `j`
    /// sharing its row.
    pub fn induced_strategy_bijection(&self, i: usize, j: usize) -> Vec<usize> {
        let mut map = vec![0; self.shape.strategy_count(i)];
        for row in &self.rows {
            map[row[i]] = row[j];
        }
        map
    }

    /// `M_π = (π; (M_{iπ(i)}))`.
    pub fn induced_game_bijection(&self, pi: &Permutation) -> Result<GameBijection> {
        let n = self.shape.players();
        if pi.degree() != n {
            return Err(Error::Arity {
                expected: n,
                found: pi.degree(),
            });
        }
        let strategies = (0..n)
            .map(|i| self.induced_strategy_bijection(i, pi.apply(i)))
            .collect();
        GameBijection::new(
            self.shape.clone(),
            self.shape.clone(),
            pi.clone(),
            strategies,
        )
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self
            .rows
            .iter()
            .map(|r| self.shape.format_profile(r))
            .join(",");
        write!(f, "{{{rows}}}")
    }
}

/// Each element fixing a player fixes all of that player's strategies.
pub fn is_strategy_trivial(group: &BijectionGroup) -> bool {
    let n = group.shape().players();
    group.elements().iter().all(|g| {
        (0..n)
            .filter(|&i| g.player_map().apply(i) == i)
            .all(|i| g.strategy_map(i).iter().enumerate().all(|(a, &b)| a == b))
    })
}

/// The matching whose induced bijections reproduce a player-transitive,
/// strategy-trivial group. Player 1 is the base player.
pub fn matching_from_group(group: &BijectionGroup) -> Result<Matching> {
    if !group.is_player_transitive() {
        return Err(Error::NotPlayerTransitive);
    }
    if !is_strategy_trivial(group) {
        return Err(Error::NotStrategyTrivial);
    }
    let shape = group.shape().clone();
    let n = shape.players();
    // g_1j for each j, from any element sending player 1 to j
    let maps: Vec<&[usize]> = (0..n)
        .map(|j| {
            group
                .elements()
                .iter()
                .find(|g| g.player_map().apply(0) == j)
                .map(|g| g.strategy_map(0))
                .expect("player transitive")
        })
        .collect();
    let rows = (0..shape.strategy_count(0))
        .map(|a| Profile::new(maps.iter().map(|m| m[a]).collect()))
        .collect();
    Matching::new(shape, rows)
}

fn require_m_strategy(shape: &Shape) -> Result<usize> {
    shape
        .uniform_strategy_count()
        .ok_or_else(|| Error::NotMStrategy(shape.strategy_counts()))
}

/// Streams every matching of an m-strategy shape once. Player 1's strategies
/// stay in order and the bijections to players 2..n vary lexicographically.
pub fn enumerate_matchings(shape: Arc<Shape>) -> Result<impl Iterator<Item = Matching>> {
    let m = require_m_strategy(&shape)?;
    let n = shape.players();
    let per_player: Vec<Vec<Vec<usize>>> =
        (1..n).map(|_| (0..m).permutations(m).collect()).collect();
    Ok(per_player
        .into_iter()
        .multi_cartesian_product()
        .map(move |maps| {
            let rows = (0..m)
                .map(|a| {
                    let mut row = Vec::with_capacity(n);
                    row.push(a);
                    row.extend(maps.iter().map(|sigma| sigma[a]));
                    Profile::new(row)
                })
                .collect();
            Matching {
                shape: shape.clone(),
                rows,
            }
        }))
}

/// `(m!)^(n-1)`.
pub fn count_matchings(players: usize, strategies: usize) -> BigUint {
    let fact: BigUint = (1..=strategies).map(BigUint::from).product();
    num_traits::pow(fact, players.saturating_sub(1))
}

/// Matchings all of whose rows give every player the same payoff. Found by
/// exact-cover search over the equal-payoff profiles.
pub fn equal_payoff_matchings(game: &Game) -> Result<Vec<Matching>> {
    let shape = game.shape_arc().clone();
    let m = require_m_strategy(&shape)?;
    let n = shape.players();
    let candidates: Vec<Vec<Profile>> = {
        let mut by_first = vec![Vec::new(); m];
        for k in (0..shape.profile_count()).filter(|&k| game.is_equal_payoff_profile(k)) {
            let p = shape.profile_of_index(k)?;
            by_first[p[0]].push(p);
        }
        by_first
    };

    fn cover(
        a: usize,
        candidates: &[Vec<Profile>],
        used: &mut [Vec<bool>],
        chosen: &mut Vec<Profile>,
        out: &mut Vec<Vec<Profile>>,
    ) {
        if a == candidates.len() {
            out.push(chosen.clone());
            return;
        }
        for row in &candidates[a] {
            if (1..row.len()).any(|i| used[i][row[i]]) {
                continue;
            }
            for i in 1..row.len() {
                used[i][row[i]] = true;
            }
            chosen.push(row.clone());
            cover(a + 1, candidates, used, chosen, out);
            chosen.pop();
            for i in 1..row.len() {
                used[i][row[i]] = false;
            }
        }
    }

    let mut used = vec![vec![false; m]; n];
    let mut found = Vec::new();
    cover(0, &candidates, &mut used, &mut Vec::new(), &mut found);
    Ok(found
        .into_iter()
        .map(|rows| Matching {
            shape: shape.clone(),
            rows,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> Arc<Shape> {
        Arc::new(Shape::from_labels(&[&["a", "b"], &["c", "d"], &["e", "f"]]).unwrap())
    }

    #[test]
    fn recognises_matchings() {
        let s = three();
        let rows = vec![
            s.parse_profile("(a,d,f)").unwrap(),
            s.parse_profile("(b,c,e)").unwrap(),
        ];
        assert!(is_matching(&rows, &s));
        let bad = vec![
            s.parse_profile("(a,d,f)").unwrap(),
            s.parse_profile("(a,c,e)").unwrap(),
        ];
        assert!(!is_matching(&bad, &s));
        let single = Arc::new(Shape::uniform(3, 1).unwrap());
        assert!(is_matching(&[Profile::new(vec![0, 0, 0])], &single));
    }

    #[test]
    fn induced_maps_of_the_example() {
        let m = Matching::parse("{(a,d,f),(b,c,e)}", three()).unwrap();
        assert_eq!(m.to_string(), "{(a,d,f),(b,c,e)}");
        // M_31: e -> b, f -> a
        assert_eq!(m.induced_strategy_bijection(2, 0), vec![1, 0]);
        assert_eq!(m.induced_strategy_bijection(1, 1), vec![0, 1]);
        let pi = Permutation::from_cycles(3, &[&[1, 3]]).unwrap();
        assert_eq!(
            m.induced_game_bijection(&pi).unwrap().to_string(),
            "(1 3); 1:{a->f,b->e}; 2:{c->c,d->d}; 3:{e->b,f->a}"
        );
        assert!(m
            .induced_game_bijection(&Permutation::identity(3))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn enumerates_small_cases() {
        let s = Arc::new(Shape::from_labels(&[&["a", "b"], &["c", "d"]]).unwrap());
        let all: Vec<String> = enumerate_matchings(s)
            .unwrap()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(all, vec!["{(a,c),(b,d)}", "{(a,d),(b,c)}"]);
        assert_eq!(count_matchings(3, 2), BigUint::from(4u8));
        assert_eq!(count_matchings(4, 3), BigUint::from(216u16));
        let uneven = Arc::new(Shape::from_labels(&[&["a", "b"], &["c"]]).unwrap());
        assert!(enumerate_matchings(uneven).is_err());
    }

    #[test]
    fn trivial_group_is_strategy_trivial() {
        assert!(is_strategy_trivial(&BijectionGroup::trivial(three())));
        assert_eq!(
            matching_from_group(&BijectionGroup::trivial(three())),
            Err(Error::NotPlayerTransitive)
        );
    }

    #[test]
    fn single_strategy_equal_payoffs() {
        let shape = Shape::uniform(3, 1).unwrap();
        let game = Game::from_integers(shape, &[&[5, 5, 5]]).unwrap();
        let found = equal_payoff_matchings(&game).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].rows(), &[Profile::new(vec![0, 0, 0])]);
    }
}
