//! Brute-force oracles shared by the integration suites. Nothing here calls
//! the library's search code; games are read only through `Game::payoff`.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use rand::Rng;
use symgame_core::param::CellPartition;
use symgame_core::{Game, GameBijection, Payoff, Permutation, Profile, Shape};

pub fn shape(labels: &[&[&str]]) -> Arc<Shape> {
    Arc::new(Shape::from_labels(labels).unwrap())
}

pub fn profiles(shape: &Shape) -> Vec<Vec<usize>> {
    (0..shape.players())
        .map(|i| 0..shape.strategy_count(i))
        .multi_cartesian_product()
        .collect()
}

/// A bijection as plain data: `players[i]` and `strategies[i][a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBijection {
    pub players: Vec<usize>,
    pub strategies: Vec<Vec<usize>>,
}

impl RawBijection {
    /// `g(s)_{π(i)} = τ_i(s_i)`.
    pub fn apply(&self, s: &[usize]) -> Vec<usize> {
        let mut t = vec![0; s.len()];
        for (i, &a) in s.iter().enumerate() {
            t[self.players[i]] = self.strategies[i][a];
        }
        t
    }

    pub fn to_library(&self, shape: &Arc<Shape>) -> GameBijection {
        GameBijection::new(
            shape.clone(),
            shape.clone(),
            Permutation::from_images(self.players.clone()).unwrap(),
            self.strategies.clone(),
        )
        .unwrap()
    }

    pub fn from_library(g: &GameBijection) -> Self {
        let n = g.player_map().degree();
        RawBijection {
            players: g.player_map().images().to_vec(),
            strategies: (0..n).map(|i| g.strategy_map(i).to_vec()).collect(),
        }
    }
}

/// Every bijection of a shape onto itself.
pub fn raw_bijections(shape: &Shape) -> Vec<RawBijection> {
    let n = shape.players();
    let mut out = Vec::new();
    for players in (0..n).permutations(n) {
        if (0..n).any(|i| shape.strategy_count(i) != shape.strategy_count(players[i])) {
            continue;
        }
        let per_player: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|i| {
                let m = shape.strategy_count(i);
                (0..m).permutations(m).collect()
            })
            .collect();
        for strategies in per_player.into_iter().multi_cartesian_product() {
            out.push(RawBijection {
                players: players.clone(),
                strategies,
            });
        }
    }
    out
}

pub fn preserves(game: &Game, g: &RawBijection) -> bool {
    let n = game.players();
    profiles(game.shape()).iter().all(|s| {
        let t = g.apply(s);
        (0..n).all(|i| {
            game.payoff(i, &Profile::new(s.clone())).unwrap()
                == game.payoff(g.players[i], &Profile::new(t.clone())).unwrap()
        })
    })
}

/// Automorphisms by exhaustive enumeration.
pub fn brute_force_aut(game: &Game) -> Vec<RawBijection> {
    raw_bijections(game.shape())
        .into_iter()
        .filter(|g| preserves(game, g))
        .collect()
}

/// Pure equilibria by checking every unilateral deviation.
pub fn brute_force_nash(game: &Game) -> Vec<Vec<usize>> {
    let shape = game.shape();
    profiles(shape)
        .into_iter()
        .filter(|s| {
            (0..shape.players()).all(|i| {
                let here = game.payoff(i, &Profile::new(s.clone())).unwrap().clone();
                (0..shape.strategy_count(i)).all(|a| {
                    let mut t = s.clone();
                    t[i] = a;
                    *game.payoff(i, &Profile::new(t)).unwrap() <= here
                })
            })
        })
        .collect()
}

/// Partition from per-profile rows of parameter names, rows in profile order.
pub fn table_partition(shape: &Arc<Shape>, rows: &[&str]) -> CellPartition {
    let names: Vec<String> = rows
        .iter()
        .flat_map(|row| row.chars().map(|c| c.to_string()))
        .collect();
    CellPartition::from_labels(shape.clone(), &names).unwrap()
}

pub fn random_game<R: Rng>(rng: &mut R, shape: &Arc<Shape>, range: i64) -> Game {
    Game::from_fn(shape.clone(), |_, _| Payoff::from(rng.gen_range(0..range)))
}

/// Random game whose payoffs are constant on the orbits of cells under the
/// given raw bijections, computed by naive fixpoint.
pub fn random_invariant_game<R: Rng>(
    rng: &mut R,
    shape: &Arc<Shape>,
    gens: &[RawBijection],
    range: i64,
) -> Game {
    let n = shape.players();
    let all = profiles(shape);
    let index: BTreeMap<Vec<usize>, usize> = all
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, s)| (s, k))
        .collect();
    let mut class: Vec<usize> = (0..all.len() * n).collect();
    loop {
        let mut changed = false;
        for g in gens {
            for (k, s) in all.iter().enumerate() {
                for i in 0..n {
                    let a = k * n + i;
                    let b = index[&g.apply(s)] * n + g.players[i];
                    let m = class[a].min(class[b]);
                    if class[a] != m || class[b] != m {
                        class[a] = m;
                        class[b] = m;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let values: Vec<i64> = (0..class.len()).map(|_| rng.gen_range(0..range)).collect();
    Game::from_fn(shape.clone(), |k, i| Payoff::from(values[class[k * n + i]]))
}

/// Player permutation `π` as a raw bijection on a shared-label shape.
pub fn permutation_bijection(pi: &[usize], m: usize) -> RawBijection {
    RawBijection {
        players: pi.to_vec(),
        strategies: vec![(0..m).collect(); pi.len()],
    }
}
