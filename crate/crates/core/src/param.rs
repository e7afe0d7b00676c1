//! Parameterised games: payoff cells grouped into classes, each class carrying
//! one named parameter. The classes of a bijection group are the orbits of
//! its action on cells `(player, profile)`, and every game the group acts on
//! by automorphisms is an instantiation of that partition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::game::{Game, Payoff, Shape};
use crate::morphism::{all_bijections, GameBijection};

const GREEK: [&str; 24] = [
    "α", "β", "γ", "δ", "ε", "ζ", "η", "θ", "ι", "κ", "λ", "μ", "ν", "ξ", "ο", "π", "ρ", "σ", "τ",
    "υ", "φ", "χ", "ψ", "ω",
];

const ASCII: [&str; 24] = [
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
    "lambda", "mu", "nu", "xi", "omicron", "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi",
    "psi", "omega",
];

/// Name of the `k`-th parameter: `α` .. `ω`, then `α1` .. `ω1`, and so on.
pub fn param_name(k: usize) -> String {
    let (round, letter) = (k / GREEK.len(), k % GREEK.len());
    if round == 0 {
        GREEK[letter].to_string()
    } else {
        format!("{}{round}", GREEK[letter])
    }
}

/// Maps an ASCII spelling such as `beta` or `beta2` to its Greek form.
pub fn normalize_param_name(name: &str) -> String {
    let name = name.trim();
    let split = name
        .find(|c: char| c.is_ascii_digit())
        .unwrap_or(name.len());
    let (stem, suffix) = name.split_at(split);
    match ASCII.iter().position(|a| a.eq_ignore_ascii_case(stem)) {
        Some(k) => format!("{}{suffix}", GREEK[k]),
        None => name.to_string(),
    }
}

/// A bijection group given by generators, all acting on one shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    shape: Arc<Shape>,
    generators: Vec<GameBijection>,
}

impl GeneratorSet {
    pub fn new(shape: Arc<Shape>, generators: Vec<GameBijection>) -> Result<Self> {
        for g in &generators {
            if **g.source() != *shape || **g.target() != *shape {
                return Err(Error::ShapeMismatch(format!(
                    "generator `{g}` does not map the shape to itself"
                )));
            }
        }
        Ok(GeneratorSet { shape, generators })
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn generators(&self) -> &[GameBijection] {
        &self.generators
    }

    pub fn partition(&self) -> CellPartition {
        orbit_partition(&self.shape, &self.generators).expect("validated on construction")
    }
}

/// Classes of payoff cells. Cell `k * n + i` is player `i`'s payoff at the
/// profile with index `k`. Class ids are numbered in order of first
/// appearance, so two partitions are equal exactly when their ids agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellPartition {
    shape: Arc<Shape>,
    classes: Vec<usize>,
    count: usize,
}

impl CellPartition {
    /// Builds a partition from arbitrary class labels, one per cell.
    pub fn from_labels<T: Ord>(shape: Arc<Shape>, labels: &[T]) -> Result<Self> {
        if labels.len() != shape.cell_count() {
            return Err(Error::Arity {
                expected: shape.cell_count(),
                found: labels.len(),
            });
        }
        let mut ids = BTreeMap::new();
        let classes = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        Ok(CellPartition {
            count: ids.len(),
            shape,
            classes,
        })
    }

    /// The partition with every cell in one class.
    pub fn coarsest(shape: Arc<Shape>) -> Self {
        CellPartition {
            classes: vec![0; shape.cell_count()],
            count: 1,
            shape,
        }
    }

    /// The partition into singletons.
    pub fn finest(shape: Arc<Shape>) -> Self {
        CellPartition {
            count: shape.cell_count(),
            classes: (0..shape.cell_count()).collect(),
            shape,
        }
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn class_count(&self) -> usize {
        self.count
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn class_of(&self, profile_index: usize, player: usize) -> usize {
        self.classes[profile_index * self.shape.players() + player]
    }

    pub fn name_of(&self, profile_index: usize, player: usize) -> String {
        param_name(self.class_of(profile_index, player))
    }

    pub fn parameter_names(&self) -> Vec<String> {
        (0..self.count).map(param_name).collect()
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &CellPartition) -> bool {
        if *self.shape != *other.shape {
            return false;
        }
        let mut target = vec![None; self.count];
        self.classes
            .iter()
            .zip(&other.classes)
            .all(|(&a, &b)| *target[a].get_or_insert(b) == b)
    }

    /// The game obtained by giving each class its parameter's value.
    pub fn instantiate(&self, assignment: &ParamAssignment) -> Result<Game> {
        let values: Vec<Payoff> = self
            .parameter_names()
            .iter()
            .map(|name| {
                assignment
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::MissingParameter(name.clone()))
            })
            .collect::<Result<_>>()?;
        let n = self.shape.players();
        Ok(Game::from_fn(self.shape.clone(), |k, i| {
            values[self.classes[k * n + i]].clone()
        }))
    }

    /// Instantiation with parameter `k` set to `k + 1`, which makes every
    /// parameter distinct.
    pub fn generic_game(&self) -> Game {
        let n = self.shape.players();
        Game::from_fn(self.shape.clone(), |k, i| {
            Payoff::from_integer(self.classes[k * n + i] as i64 + 1)
        })
    }

    /// Payoff table with one block per choice of the leading players, rows
    /// for the second-to-last player and columns for the last.
    pub fn to_table(&self) -> String {
        let shape = &self.shape;
        let n = shape.players();
        let cols = shape.strategy_count(n - 1);
        let rows = shape.strategy_count(n - 2);
        let block = rows * cols;
        let mut out = String::new();
        for b in 0..shape.profile_count() / block {
            if n > 2 {
                let lead = shape.profile_of_index(b * block).expect("in range");
                let labels = (0..n - 2).map(|i| shape.label(i, lead[i])).join(",");
                writeln!(out, "({labels}):").unwrap();
            }
            let header = (0..cols).map(|c| shape.label(n - 1, c)).join(" | ");
            writeln!(out, "  {header}").unwrap();
            for r in 0..rows {
                let cells = (0..cols)
                    .map(|c| {
                        let k = b * block + r * cols + c;
                        (0..n).map(|i| self.name_of(k, i)).join(",")
                    })
                    .join(" | ");
                writeln!(out, "{} {cells}", shape.label(n - 2, r)).unwrap();
            }
        }
        out
    }
}

/// Orbits of the group generated by `generators` on payoff cells, where
/// `g` sends cell `(i, s)` to `(g(i), g(s))`.
pub fn orbit_partition(shape: &Arc<Shape>, generators: &[GameBijection]) -> Result<CellPartition> {
    let n = shape.players();
    let tables: Vec<(&GameBijection, Vec<usize>)> = generators
        .iter()
        .map(|g| {
            if **g.source() != **shape || **g.target() != **shape {
                return Err(Error::ShapeMismatch(format!(
                    "generator `{g}` does not map the shape to itself"
                )));
            }
            Ok((g, g.profile_table()))
        })
        .collect::<Result<_>>()?;
    let mut parent: Vec<usize> = (0..shape.cell_count()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (g, table) in &tables {
        for (k, &image) in table.iter().enumerate() {
            for i in 0..n {
                let a = root(&mut parent, k * n + i);
                let b = root(&mut parent, image * n + g.player_map().apply(i));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..parent.len()).map(|c| root(&mut parent, c)).collect();
    CellPartition::from_labels(shape.clone(), &roots)
}

/// Values for named parameters. Names may be Greek letters or their ASCII
/// spellings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamAssignment(BTreeMap<String, Payoff>);

impl ParamAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, value: Payoff) {
        self.0.insert(normalize_param_name(name), value);
    }

    pub fn get(&self, name: &str) -> Option<&Payoff> {
        self.0.get(&normalize_param_name(name))
    }

    /// Parses `α=1,beta=2/3,γ=-0.5`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ParamAssignment::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected name=value, got `{item}`")))?;
            out.insert(name, value.trim().parse()?);
        }
        Ok(out)
    }

    /// Parameter `k` set to `values[k]`.
    pub fn sequential<I: IntoIterator<Item = Payoff>>(values: I) -> Self {
        let mut out = ParamAssignment::new();
        for (k, v) in values.into_iter().enumerate() {
            out.insert(&param_name(k), v);
        }
        out
    }
}

fn strategy_multiset(shape: &Shape) -> Vec<usize> {
    let mut counts = shape.strategy_counts();
    counts.sort_unstable();
    counts
}

/// `p ≤ q`: some game bijection carries every class of `p` into a single
/// class of `q`, i.e. every instantiation of `q` is, up to relabelling, an
/// instantiation of `p`. Coarser partitions sit higher.
pub fn param_leq(p: &CellPartition, q: &CellPartition) -> Result<bool> {
    let (sp, sq) = (p.shape(), q.shape());
    if sp.players() != sq.players() || strategy_multiset(sp) != strategy_multiset(sq) {
        return Err(Error::ShapeMismatch(format!(
            "cannot compare games with strategy counts {:?} and {:?}",
            sp.strategy_counts(),
            sq.strategy_counts()
        )));
    }
    if p.class_count() < q.class_count() {
        return Ok(false);
    }
    let n = sp.players();
    Ok(all_bijections(sp, sq).iter().any(|h| {
        let table = h.profile_table();
        let mut target = vec![None; p.class_count()];
        table.iter().enumerate().all(|(k, &image)| {
            (0..n).all(|i| {
                let b = q.class_of(image, h.player_map().apply(i));
                *target[p.class_of(k, i)].get_or_insert(b) == b
            })
        })
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseNode {
    /// Input names merged into this node because they are mutually `≤`.
    pub names: Vec<String>,
    pub partition: CellPartition,
    /// Length of the longest chain below the node.
    pub height: usize,
}

impl HasseNode {
    pub fn label(&self) -> String {
        self.names.join("=")
    }
}

/// Cover relation of `param_leq` over a collection of parameterised games.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseDiagram {
    pub nodes: Vec<HasseNode>,
    /// `(lower, upper)` node indices.
    pub edges: Vec<(usize, usize)>,
}

pub fn hasse(entries: &[(String, CellPartition)]) -> Result<HasseDiagram> {
    let k = entries.len();
    let mut leq = vec![vec![false; k]; k];
    for a in 0..k {
        for b in 0..k {
            leq[a][b] = a == b || param_leq(&entries[a].1, &entries[b].1)?;
        }
    }
    // merge mutually comparable entries into the first one seen
    let mut rep: Vec<usize> = (0..k).collect();
    for a in 0..k {
        if let Some(first) = (0..a).find(|&b| leq[a][b] && leq[b][a]) {
            rep[a] = rep[first];
        }
    }
    let reps: Vec<usize> = (0..k).filter(|&a| rep[a] == a).collect();
    let lt = |a: usize, b: usize| leq[a][b] && !leq[b][a];
    let mut edges = Vec::new();
    for (x, &a) in reps.iter().enumerate() {
        for (y, &b) in reps.iter().enumerate() {
            if lt(a, b) && !reps.iter().any(|&c| lt(a, c) && lt(c, b)) {
                edges.push((x, y));
            }
        }
    }
    let mut heights = vec![0usize; reps.len()];
    // heights grow along strict chains, so repeated relaxation settles within |reps| rounds
    for _ in 0..reps.len() {
        for &(lo, hi) in &edges {
            heights[hi] = heights[hi].max(heights[lo] + 1);
        }
    }
    let nodes = reps
        .iter()
        .enumerate()
        .map(|(x, &a)| HasseNode {
            names: (0..k)
                .filter(|&b| rep[b] == a)
                .map(|b| entries[b].0.clone())
                .collect(),
            partition: entries[a].1.clone(),
            height: heights[x],
        })
        .collect();
    Ok(HasseDiagram { nodes, edges })
}

impl HasseDiagram {
    /// Undirected cover edges as pairs of node labels, each pair sorted.
    pub fn edge_labels(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.nodes[a].label(), self.nodes[b].label());
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect()
    }

    /// Graphviz source with the greatest element at the top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
        let mut by_height: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for node in &self.nodes {
            by_height.entry(node.height).or_default().push(node.label());
        }
        for labels in by_height.values_mut() {
            labels.sort();
            for l in labels.iter() {
                writeln!(out, "  \"{l}\" [label=\"{l}\"];").unwrap();
            }
        }
        for labels in by_height.values() {
            let members = labels.iter().map(|l| format!("\"{l}\";")).join(" ");
            writeln!(out, "  {{ rank=same; {members} }}").unwrap();
        }
        let mut edges: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(lo, hi)| (self.nodes[lo].label(), self.nodes[hi].label()))
            .collect();
        edges.sort();
        for (lo, hi) in edges {
            writeln!(out, "  \"{lo}\" -- \"{hi}\";").unwrap();
        }
        out.push_str("}\n");
        out
    }
}
