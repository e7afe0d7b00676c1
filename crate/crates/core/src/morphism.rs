//! Game bijections, isomorphisms and automorphism groups.
//!
//! A bijection `(π; (τ_i))` sends player `i` to `π(i)` and player `i`'s
//! strategy `a` to `τ_i(a)`, a strategy of player `π(i)` in the target shape.
//! On profiles, `(g(s))_{π(i)} = τ_i(s_i)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Game, Profile, Shape};
use crate::perm::{
    greedy_generators, saturate, symmetric_group_elements, Permutation, PermutationGroup,
};

#[derive(Clone, Debug)]
pub struct GameBijection {
    source: Arc<Shape>,
    target: Arc<Shape>,
    players: Permutation,
    strategies: Vec<Vec<usize>>,
}

impl PartialEq for GameBijection {
    fn eq(&self, other: &Self) -> bool {
        self.players == other.players
            && self.strategies == other.strategies
            && self.source == other.source
            && self.target == other.target
    }
}

impl Eq for GameBijection {}

impl Hash for GameBijection {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.players.hash(state);
        self.strategies.hash(state);
    }
}

impl Ord for GameBijection {
    /// Player map first, then strategy tables player by player.
    fn cmp(&self, other: &Self) -> Ordering {
        self.players
            .cmp(&other.players)
            .then_with(|| self.strategies.cmp(&other.strategies))
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.target.cmp(&other.target))
    }
}

impl PartialOrd for GameBijection {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn is_index_bijection(map: &[usize], size: usize) -> bool {
    if map.len() != size {
        return false;
    }
    let mut seen = vec![false; size];
    map.iter()
        .all(|&x| x < size && !std::mem::replace(&mut seen[x], true))
}

fn invert_index_map(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (a, &b) in map.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

impl GameBijection {
    pub fn new(
        source: Arc<Shape>,
        target: Arc<Shape>,
        players: Permutation,
        strategies: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = source.players();
        if target.players() != n || players.degree() != n || strategies.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "bijection needs {n} players on both sides and {n} strategy maps"
            )));
        }
        for (i, map) in strategies.iter().enumerate() {
            let size = source.strategy_count(i);
            let image_size = target.strategy_count(players.apply(i));
            if size != image_size || !is_index_bijection(map, size) {
                return Err(Error::ShapeMismatch(format!(
                    "strategy map of player {} is not a bijection onto player {}",
                    i + 1,
                    players.apply(i) + 1
                )));
            }
        }
        Ok(GameBijection {
            source,
            target,
            players,
            strategies,
        })
    }

    pub fn identity(shape: Arc<Shape>) -> Self {
        let strategies = (0..shape.players())
            .map(|i| (0..shape.strategy_count(i)).collect())
            .collect();
        GameBijection {
            players: Permutation::identity(shape.players()),
            source: shape.clone(),
            target: shape,
            strategies,
        }
    }

    pub fn source(&self) -> &Arc<Shape> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Shape> {
        &self.target
    }

    pub fn player_map(&self) -> &Permutation {
        &self.players
    }

    /// `τ_i` as an index table into the strategies of player `π(i)`.
    pub fn strategy_map(&self, player: usize) -> &[usize] {
        &self.strategies[player]
    }

    pub fn is_identity(&self) -> bool {
        self.players.is_identity()
            && self
                .strategies
                .iter()
                .all(|m| m.iter().enumerate().all(|(a, &b)| a == b))
    }

    pub fn apply(&self, profile: &Profile) -> Result<Profile> {
        self.source.check_profile(profile).map_err(|_| {
            Error::ShapeMismatch("profile does not belong to the bijection's source".into())
        })?;
        Ok(Profile::new(self.apply_slice(profile.choices())))
    }

    pub(crate) fn apply_slice(&self, choices: &[usize]) -> Vec<usize> {
        let mut out = vec![0; choices.len()];
        for (i, &c) in choices.iter().enumerate() {
            out[self.players.apply(i)] = self.strategies[i][c];
        }
        out
    }

    /// Image of every source profile index, as target profile indices.
    pub(crate) fn profile_table(&self) -> Vec<usize> {
        let mut choices = vec![0; self.source.players()];
        (0..self.source.profile_count())
            .map(|k| {
                self.source.digits_into(k, &mut choices);
                self.target.index_unchecked(&self.apply_slice(&choices))
            })
            .collect()
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &GameBijection) -> Result<GameBijection> {
        if first.target != self.source {
            return Err(Error::Composition(
                "target of the first bijection is not the source of the second".into(),
            ));
        }
        Ok(self.after(first))
    }

    pub(crate) fn after(&self, first: &GameBijection) -> GameBijection {
        let strategies = first
            .strategies
            .iter()
            .enumerate()
            .map(|(i, tau)| {
                let phi = &self.strategies[first.players.apply(i)];
                tau.iter().map(|&a| phi[a]).collect()
            })
            .collect();
        GameBijection {
            source: first.source.clone(),
            target: self.target.clone(),
            players: self.players.after(&first.players),
            strategies,
        }
    }

    pub fn inverse(&self) -> GameBijection {
        let inv = self.players.inverse();
        let strategies = (0..self.target.players())
            .map(|j| invert_index_map(&self.strategies[inv.apply(j)]))
            .collect();
        GameBijection {
            source: self.target.clone(),
            target: self.source.clone(),
            players: inv,
            strategies,
        }
    }

    /// Parses `"(1 2); 1:{a->c,b->d}; 2:{c->a,d->b}"`. Every player's map must
    /// be listed; labels are resolved against `source` and `target`.
    pub fn parse(text: &str, source: Arc<Shape>, target: Arc<Shape>) -> Result<Self> {
        let n = source.players();
        let mut parts = text.split(';').map(str::trim);
        let head = parts
            .next()
            .filter(|h| !h.is_empty())
            .ok_or_else(|| Error::Parse(format!("missing player permutation in `{text}`")))?;
        let players = if head == "e" || head == "id" {
            Permutation::identity(n)
        } else {
            Permutation::parse(head, n)?
        };
        let mut maps: Vec<Option<Vec<usize>>> = vec![None; n];
        for part in parts.filter(|p| !p.is_empty()) {
            let (who, body) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `player:{{..}}`, got `{part}`")))?;
            let i: usize = who
                .trim()
                .parse()
                .ok()
                .filter(|&i| (1..=n).contains(&i))
                .ok_or_else(|| Error::Parse(format!("bad player `{who}` in `{text}`")))?;
            let i = i - 1;
            let body = body
                .trim()
                .strip_prefix('{')
                .and_then(|b| b.strip_suffix('}'))
                .ok_or_else(|| Error::Parse(format!("strategy map must be braced: `{part}`")))?;
            let mut map = vec![usize::MAX; source.strategy_count(i)];
            for pair in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (from, to) = pair
                    .split_once("->")
                    .or_else(|| pair.split_once('→'))
                    .ok_or_else(|| Error::Parse(format!("expected `x->y`, got `{pair}`")))?;
                let a = source.strategy_index(i, from.trim()).ok_or_else(|| {
                    Error::Parse(format!(
                        "player {} has no strategy `{}`",
                        i + 1,
                        from.trim()
                    ))
                })?;
                let j = players.apply(i);
                let b = target.strategy_index(j, to.trim()).ok_or_else(|| {
                    Error::Parse(format!(
                        "target player {} has no strategy `{}`",
                        j + 1,
                        to.trim()
                    ))
                })?;
                map[a] = b;
            }
            if maps[i].replace(map).is_some() {
                return Err(Error::Parse(format!("player {} listed twice", i + 1)));
            }
        }
        let strategies = maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::Parse(format!("no map for player {}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        GameBijection::new(source, target, players, strategies)
    }
}

impl fmt::Display for GameBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.players)?;
        for (i, map) in self.strategies.iter().enumerate() {
            let j = self.players.apply(i);
            let pairs = map
                .iter()
                .enumerate()
                .map(|(a, &b)| format!("{}->{}", self.source.label(i, a), self.target.label(j, b)))
                .join(",");
            write!(f, "; {}:{{{pairs}}}", i + 1)?;
        }
        Ok(())
    }
}

fn check_shapes(g: &GameBijection, src: &Game, dst: &Game) -> Result<()> {
    if **g.source() != *src.shape() || **g.target() != *dst.shape() {
        return Err(Error::ShapeMismatch(
            "bijection shapes do not match the games".into(),
        ));
    }
    Ok(())
}

/// `u_i = v_{g(i)} ∘ g` for every player.
pub fn is_isomorphism(g: &GameBijection, src: &Game, dst: &Game) -> Result<bool> {
    check_shapes(g, src, dst)?;
    let table = g.profile_table();
    let n = src.players();
    Ok(table.iter().enumerate().all(|(k, &image)| {
        (0..n).all(|i| src.payoff_at(k, i) == dst.payoff_at(image, g.players.apply(i)))
    }))
}

/// Every game bijection between two shapes, in the canonical order. There are
/// `n! · ∏ m_i!` of them when the shapes are compatible.
pub fn all_bijections(source: &Arc<Shape>, target: &Arc<Shape>) -> Vec<GameBijection> {
    let n = source.players();
    if target.players() != n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for players in symmetric_group_elements(n) {
        if (0..n).any(|i| source.strategy_count(i) != target.strategy_count(players.apply(i))) {
            continue;
        }
        let choices: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|i| {
                let m = source.strategy_count(i);
                (0..m).permutations(m).collect()
            })
            .collect();
        for strategies in choices.into_iter().multi_cartesian_product() {
            out.push(GameBijection {
                source: source.clone(),
                target: target.clone(),
                players: players.clone(),
                strategies,
            });
        }
    }
    out
}

/// Payoffs of both games replaced by ranks in their joint value order, so the
/// search compares small integers.
struct JointKeys {
    src: Vec<u32>,
    dst: Vec<u32>,
}

impl JointKeys {
    fn new(src: &Game, dst: &Game) -> Self {
        let values: BTreeMap<_, u32> = src
            .payoffs()
            .iter()
            .chain(dst.payoffs())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(r, v)| (v, r as u32))
            .collect();
        JointKeys {
            src: src.payoffs().iter().map(|v| values[v]).collect(),
            dst: dst.payoffs().iter().map(|v| values[v]).collect(),
        }
    }
}

/// Sorted payoff multiset of each player, and of each (player, strategy).
struct Signatures {
    player: Vec<Vec<u32>>,
    strategy: Vec<Vec<Vec<u32>>>,
}

impl Signatures {
    fn new(shape: &Shape, keys: &[u32]) -> Self {
        let n = shape.players();
        let mut player = vec![Vec::new(); n];
        let mut strategy: Vec<Vec<Vec<u32>>> = (0..n)
            .map(|i| vec![Vec::new(); shape.strategy_count(i)])
            .collect();
        let mut choices = vec![0; n];
        for k in 0..shape.profile_count() {
            shape.digits_into(k, &mut choices);
            for i in 0..n {
                let key = keys[k * n + i];
                player[i].push(key);
                strategy[i][choices[i]].push(key);
            }
        }
        player.iter_mut().for_each(|v| v.sort_unstable());
        strategy
            .iter_mut()
            .flatten()
            .for_each(|v| v.sort_unstable());
        Signatures { player, strategy }
    }
}

struct Search<'a> {
    src: &'a Game,
    dst: &'a Game,
    keys: JointKeys,
    src_sig: Signatures,
    dst_sig: Signatures,
}

impl Search<'_> {
    fn run_for(&self, players: &Permutation) -> Vec<GameBijection> {
        let src = self.src.shape();
        let dst = self.dst.shape();
        let n = src.players();
        let compatible = (0..n).all(|i| {
            let j = players.apply(i);
            src.strategy_count(i) == dst.strategy_count(j)
                && self.src_sig.player[i] == self.dst_sig.player[j]
        });
        if !compatible {
            return Vec::new();
        }
        // Candidate strategy maps per player, filtered by the per-strategy
        // payoff multisets (a necessary condition for any isomorphism).
        let candidates: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|i| {
                let j = players.apply(i);
                let m = src.strategy_count(i);
                (0..m)
                    .permutations(m)
                    .filter(|tau| {
                        tau.iter().enumerate().all(|(a, &b)| {
                            self.src_sig.strategy[i][a] == self.dst_sig.strategy[j][b]
                        })
                    })
                    .collect()
            })
            .collect();
        if candidates.iter().any(Vec::is_empty) {
            return Vec::new();
        }

        let mut found = Vec::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        self.descend(players, &candidates, &mut chosen, &mut found);
        found
    }

    fn descend(
        &self,
        players: &Permutation,
        candidates: &[Vec<Vec<usize>>],
        chosen: &mut Vec<usize>,
        found: &mut Vec<GameBijection>,
    ) {
        let depth = chosen.len();
        if depth == candidates.len() {
            let strategies: Vec<Vec<usize>> = chosen
                .iter()
                .enumerate()
                .map(|(i, &c)| candidates[i][c].clone())
                .collect();
            if self.preserves_payoffs(players, &strategies) {
                found.push(GameBijection {
                    source: self.src.shape_arc().clone(),
                    target: self.dst.shape_arc().clone(),
                    players: players.clone(),
                    strategies,
                });
            }
            return;
        }
        for c in 0..candidates[depth].len() {
            chosen.push(c);
            self.descend(players, candidates, chosen, found);
            chosen.pop();
        }
    }

    fn preserves_payoffs(&self, players: &Permutation, strategies: &[Vec<usize>]) -> bool {
        let src = self.src.shape();
        let dst = self.dst.shape();
        let n = src.players();
        // contribution of (player i, strategy a) to the image's index
        let dst_strides: Vec<usize> = (0..n)
            .map(|j| {
                let mut unit = vec![0; n];
                unit[j] = 1;
                dst.index_unchecked(&unit)
            })
            .collect();
        let contrib: Vec<Vec<usize>> = strategies
            .iter()
            .enumerate()
            .map(|(i, tau)| {
                tau.iter()
                    .map(|&b| b * dst_strides[players.apply(i)])
                    .collect()
            })
            .collect();
        let mut choices = vec![0; n];
        (0..src.profile_count()).all(|k| {
            src.digits_into(k, &mut choices);
            let image: usize = choices
                .iter()
                .enumerate()
                .map(|(i, &a)| contrib[i][a])
                .sum();
            (0..n).all(|i| self.keys.src[k * n + i] == self.keys.dst[image * n + players.apply(i)])
        })
    }
}

/// All isomorphisms from `src` to `dst` in canonical order: player map
/// first, then strategy tables. Player-map branches are searched in parallel.
pub fn isomorphisms_between(src: &Game, dst: &Game) -> Vec<GameBijection> {
    let n = src.players();
    if dst.players() != n {
        return Vec::new();
    }
    let keys = JointKeys::new(src, dst);
    let search = Search {
        src,
        dst,
        src_sig: Signatures::new(src.shape(), &keys.src),
        dst_sig: Signatures::new(dst.shape(), &keys.dst),
        keys,
    };
    let roots: Vec<Permutation> = symmetric_group_elements(n).collect();
    roots
        .par_iter()
        .map(|players| search.run_for(players))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn are_isomorphic(src: &Game, dst: &Game) -> bool {
    !isomorphisms_between(src, dst).is_empty()
}

/// A group of bijections from one shape to itself.
/// Equality compares elements; generator lists may differ.
#[derive(Clone, Debug)]
pub struct BijectionGroup {
    shape: Arc<Shape>,
    elements: Vec<GameBijection>,
    generators: Vec<GameBijection>,
}

impl PartialEq for BijectionGroup {
    fn eq(&self, other: &Self) -> bool {
        *self.shape == *other.shape && self.elements == other.elements
    }
}

impl Eq for BijectionGroup {}

impl BijectionGroup {
    pub fn trivial(shape: Arc<Shape>) -> Self {
        BijectionGroup {
            elements: vec![GameBijection::identity(shape.clone())],
            generators: Vec::new(),
            shape,
        }
    }

    /// The group generated by `generators`, each of which must map `shape` to itself.
    pub fn closure(shape: Arc<Shape>, generators: &[GameBijection]) -> Result<Self> {
        for g in generators {
            if *g.source != *shape || *g.target != *shape {
                return Err(Error::ShapeMismatch(
                    "generator does not map the shape to itself".into(),
                ));
            }
        }
        let elements = saturate(
            GameBijection::identity(shape.clone()),
            generators,
            |a, b| a.after(b),
        );
        Ok(BijectionGroup {
            shape,
            elements: elements.into_iter().collect(),
            generators: generators.to_vec(),
        })
    }

    /// Wraps a set already known to be closed, choosing generators greedily.
    pub(crate) fn from_elements(shape: Arc<Shape>, elements: Vec<GameBijection>) -> Self {
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        let generators =
            greedy_generators(GameBijection::identity(shape.clone()), &elements, |a, b| {
                a.after(b)
            });
        BijectionGroup {
            shape,
            elements,
            generators,
        }
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GameBijection] {
        &self.elements
    }

    pub fn generators(&self) -> &[GameBijection] {
        &self.generators
    }

    pub fn contains(&self, g: &GameBijection) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// The player permutations used by the group.
    pub fn player_image(&self) -> PermutationGroup {
        PermutationGroup::from_elements(
            self.shape.players(),
            self.elements.iter().map(|g| g.players.clone()),
        )
    }

    /// Elements fixing player `i`.
    pub fn stabiliser(&self, player: usize) -> BijectionGroup {
        self.subgroup_where(|g| g.players.apply(player) == player)
    }

    /// Elements fixing every player.
    pub fn stabiliser_n(&self) -> BijectionGroup {
        self.subgroup_where(|g| g.players.is_identity())
    }

    fn subgroup_where(&self, keep: impl Fn(&GameBijection) -> bool) -> BijectionGroup {
        let elements: Vec<GameBijection> =
            self.elements.iter().filter(|g| keep(g)).cloned().collect();
        BijectionGroup::from_elements(self.shape.clone(), elements)
    }

    pub fn is_player_transitive(&self) -> bool {
        let n = self.shape.players();
        let orbit: BTreeSet<usize> = self.elements.iter().map(|g| g.players.apply(0)).collect();
        orbit.len() == n
    }

    pub fn satisfies_group_axioms(&self) -> bool {
        self.contains(&GameBijection::identity(self.shape.clone()))
            && self.elements.iter().all(|g| self.contains(&g.inverse()))
            && self
                .elements
                .iter()
                .cartesian_product(&self.elements)
                .all(|(g, h)| self.contains(&g.after(h)))
    }

    pub fn is_subgroup_of(&self, other: &BijectionGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }
}

/// `Aut(Γ)`: every isomorphism from the game to itself.
pub fn automorphism_group(game: &Game) -> BijectionGroup {
    let elements = isomorphisms_between(game, game);
    BijectionGroup::from_elements(game.shape_arc().clone(), elements)
}
