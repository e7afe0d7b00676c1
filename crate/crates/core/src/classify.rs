//! Label-independent classification through the automorphism group.
//!
//! The classes nest as follows: fully symmetric games are standard and
//! n-transitive, and both of those are symmetric. Symmetric games that are
//! not n-transitive are called only-transitive.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::game::{Game, Profile, Shape};
use crate::matching::{equal_payoff_matchings, Matching};
use crate::morphism::{automorphism_group, is_isomorphism, BijectionGroup, GameBijection};
use crate::perm::{factorial, symmetric_group_elements, Permutation, PermutationGroup};

pub fn is_symmetric(game: &Game) -> bool {
    automorphism_group(game).player_image().is_transitive()
}

pub fn is_n_transitively_symmetric(game: &Game) -> bool {
    automorphism_group(game).player_image().is_n_transitive()
}

fn require_m_strategy(game: &Game) -> Result<usize> {
    game.shape()
        .uniform_strategy_count()
        .ok_or_else(|| Error::NotMStrategy(game.shape().strategy_counts()))
}

fn induces_automorphism(game: &Game, matching: &Matching, pi: &Permutation) -> bool {
    let g = matching
        .induced_game_bijection(pi)
        .expect("permutation has the game's degree");
    is_isomorphism(&g, game, game).expect("induced bijection lives on the game's shape")
}

/// `T_M = {π : M_π ∈ Aut(Γ)}`, a subgroup of `S_N` because `π ↦ M_π` is a
/// homomorphism. From five players on only permutations realised by
/// `Aut(Γ)` are tried, since `M_π ∈ Aut(Γ)` forces that.
pub fn matching_invariants(
    game: &Game,
    aut: &BijectionGroup,
    matching: &Matching,
) -> PermutationGroup {
    let n = game.players();
    let candidates: Vec<Permutation> = if n <= 4 {
        symmetric_group_elements(n).collect()
    } else {
        aut.player_image().elements().to_vec()
    };
    PermutationGroup::from_elements(
        n,
        candidates
            .into_iter()
            .filter(|pi| induces_automorphism(game, matching, pi)),
    )
}

/// Some equal-payoff matching `M` has a transitive `T_M`. The witness is the
/// first such matching in search order.
pub fn is_standard_symmetric(game: &Game) -> Result<(bool, Option<Matching>)> {
    let aut = automorphism_group(game);
    Ok(match standard_witness(game, &aut)? {
        Some((m, _)) => (true, Some(m)),
        None => (false, None),
    })
}

fn standard_witness(
    game: &Game,
    aut: &BijectionGroup,
) -> Result<Option<(Matching, PermutationGroup)>> {
    require_m_strategy(game)?;
    for m in equal_payoff_matchings(game)? {
        let t = matching_invariants(game, aut, &m);
        if t.is_transitive() {
            return Ok(Some((m, t)));
        }
    }
    Ok(None)
}

/// Some equal-payoff matching induces automorphisms for the adjacent
/// transpositions, which generate `S_N`.
pub fn is_fully_symmetric(game: &Game) -> Result<(bool, Option<Matching>)> {
    Ok(match fully_witness(game)? {
        Some(m) => (true, Some(m)),
        None => (false, None),
    })
}

fn adjacent_transpositions(n: usize) -> Vec<Permutation> {
    (0..n.saturating_sub(1))
        .map(|i| {
            let mut images: Vec<usize> = (0..n).collect();
            images.swap(i, i + 1);
            Permutation::from_images(images).expect("swap is a permutation")
        })
        .collect()
}

fn fully_witness(game: &Game) -> Result<Option<Matching>> {
    require_m_strategy(game)?;
    let gens = adjacent_transpositions(game.players());
    Ok(equal_payoff_matchings(game)?
        .into_iter()
        .find(|m| gens.iter().all(|tau| induces_automorphism(game, m, tau))))
}

/// A profile `s` and permutation `π` such that no profile pays the players
/// `u(s)` rearranged by `π`. Then no automorphism has player map `π`, so the
/// game is not n-transitive.
pub fn payoff_witness(game: &Game) -> Option<(Profile, Permutation)> {
    let shape = game.shape();
    let n = shape.players();
    let rows: HashSet<&[u32]> = (0..shape.profile_count())
        .map(|k| game.rank_row(k))
        .collect();
    let perms: Vec<Permutation> = symmetric_group_elements(n)
        .filter(|p| !p.is_identity())
        .collect();
    for k in 0..shape.profile_count() {
        let row = game.rank_row(k);
        for pi in &perms {
            let mut moved = vec![0u32; n];
            for (i, &r) in row.iter().enumerate() {
                moved[pi.apply(i)] = r;
            }
            if !rows.contains(moved.as_slice()) {
                return Some((shape.profile_of_index(k).expect("in range"), pi.clone()));
            }
        }
    }
    None
}

/// How an only-transitive verdict was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OnlyTransitiveCertificate {
    /// A profile whose rearranged payoffs occur nowhere in the game.
    PayoffWitness {
        profile: Profile,
        permutation: Permutation,
    },
    /// Read off the full automorphism group.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    shape: Arc<Shape>,
    m_strategy: bool,
    symmetric: bool,
    n_transitive: bool,
    standard: bool,
    fully: bool,
    witness_matching: Option<Matching>,
    witness_subgroup: Option<Vec<Permutation>>,
    aut_order: usize,
    player_image_order: usize,
    stabiliser_order: usize,
    certificate: Option<OnlyTransitiveCertificate>,
}

impl ClassificationReport {
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn n_transitive(&self) -> bool {
        self.n_transitive
    }

    pub fn standard(&self) -> bool {
        self.standard
    }

    pub fn fully(&self) -> bool {
        self.fully
    }

    pub fn only_transitive(&self) -> bool {
        self.symmetric && !self.n_transitive
    }

    /// False when players have different strategy counts; standard and full
    /// symmetry are then reported as false.
    pub fn m_strategy(&self) -> bool {
        self.m_strategy
    }

    pub fn witness_matching(&self) -> Option<&Matching> {
        self.witness_matching.as_ref()
    }

    pub fn witness_subgroup(&self) -> Option<&[Permutation]> {
        self.witness_subgroup.as_deref()
    }

    pub fn aut_order(&self) -> usize {
        self.aut_order
    }

    pub fn player_image_order(&self) -> usize {
        self.player_image_order
    }

    pub fn stabiliser_order(&self) -> usize {
        self.stabiliser_order
    }

    pub fn certificate(&self) -> Option<&OnlyTransitiveCertificate> {
        self.certificate.as_ref()
    }

    /// Containments of the class diagram.
    pub fn is_consistent(&self) -> bool {
        (!self.fully || (self.standard && self.n_transitive))
            && (!self.standard || self.symmetric)
            && (!self.n_transitive || self.symmetric)
            && self.aut_order == self.player_image_order * self.stabiliser_order
    }

    /// Name of the finest class the game falls in.
    pub fn class_name(&self) -> String {
        if !self.symmetric {
            return "non-symmetric".to_string();
        }
        if self.fully {
            return "fully symmetric".to_string();
        }
        let reach = if self.n_transitive {
            "n-transitive"
        } else {
            "only-transitive"
        };
        if self.standard {
            if self.n_transitive {
                format!("{reach} non-fully standard symmetric")
            } else {
                format!("{reach} standard symmetric")
            }
        } else {
            format!("{reach} non-standard symmetric")
        }
    }

    pub fn to_text(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut out = String::new();
        writeln!(
            out,
            "symmetric: {}, n-transitive: {}, standard: {}, fully: {}",
            yn(self.symmetric),
            yn(self.n_transitive),
            yn(self.standard),
            yn(self.fully)
        )
        .unwrap();
        writeln!(out, "class: {}", self.class_name()).unwrap();
        writeln!(
            out,
            "automorphisms: {} (player image {}, player stabiliser {})",
            self.aut_order, self.player_image_order, self.stabiliser_order
        )
        .unwrap();
        if !self.m_strategy {
            writeln!(out, "note: players have different strategy counts").unwrap();
        }
        if let Some(m) = &self.witness_matching {
            writeln!(out, "witness matching: {m}").unwrap();
        }
        if let Some(gens) = &self.witness_subgroup {
            let gens: Vec<String> = gens.iter().map(ToString::to_string).collect();
            writeln!(out, "witness permutations: <{}>", gens.join(", ")).unwrap();
        }
        if let Some(cert) = &self.certificate {
            match cert {
                OnlyTransitiveCertificate::PayoffWitness {
                    profile,
                    permutation,
                } => writeln!(
                    out,
                    "only-transitive by payoff witness: profile {} under {permutation}",
                    self.shape.format_profile(profile)
                )
                .unwrap(),
                OnlyTransitiveCertificate::Exhaustive => {
                    writeln!(out, "only-transitive by exhaustive search").unwrap()
                }
            }
        }
        out
    }

    /// Stable JSON document; keys are emitted in sorted order.
    pub fn to_json(&self) -> Value {
        let certificate = self.certificate.as_ref().map(|c| match c {
            OnlyTransitiveCertificate::PayoffWitness {
                profile,
                permutation,
            } => json!({
                "method": "payoff-witness",
                "profile": self.shape.format_profile(profile),
                "permutation": permutation.to_string(),
            }),
            OnlyTransitiveCertificate::Exhaustive => json!({ "method": "exhaustive" }),
        });
        json!({
            "class": self.class_name(),
            "symmetric": self.symmetric,
            "n_transitive": self.n_transitive,
            "only_transitive": self.only_transitive(),
            "standard": self.standard,
            "fully": self.fully,
            "m_strategy": self.m_strategy,
            "aut_order": self.aut_order,
            "player_image_order": self.player_image_order,
            "stabiliser_order": self.stabiliser_order,
            "witness_matching": self.witness_matching.as_ref().map(ToString::to_string),
            "witness_subgroup": self.witness_subgroup.as_ref().map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>()),
            "only_transitive_certificate": certificate,
        })
    }
}

pub fn classify(game: &Game) -> ClassificationReport {
    let aut = automorphism_group(game);
    classify_with(game, &aut)
}

/// Classification against an already computed automorphism group.
pub fn classify_with(game: &Game, aut: &BijectionGroup) -> ClassificationReport {
    let n = game.players();
    let image = aut.player_image();
    let symmetric = image.is_transitive();
    let n_transitive = image.is_n_transitive();
    let m_strategy = game.shape().uniform_strategy_count().is_some();

    let (mut standard, mut fully) = (false, false);
    let (mut witness_matching, mut witness_subgroup) = (None, None);
    if m_strategy && symmetric {
        if n_transitive {
            if let Some(m) = fully_witness(game).expect("m-strategy") {
                fully = true;
                standard = true;
                witness_subgroup = Some(adjacent_transpositions(n));
                witness_matching = Some(m);
            }
        }
        if !fully {
            if let Some((m, t)) = standard_witness(game, aut).expect("m-strategy") {
                standard = true;
                witness_subgroup = Some(t.generators().to_vec());
                witness_matching = Some(m);
            }
        }
    }

    let certificate = (symmetric && !n_transitive).then(|| match payoff_witness(game) {
        Some((profile, permutation)) => OnlyTransitiveCertificate::PayoffWitness {
            profile,
            permutation,
        },
        None => OnlyTransitiveCertificate::Exhaustive,
    });

    ClassificationReport {
        shape: game.shape_arc().clone(),
        m_strategy,
        symmetric,
        n_transitive,
        standard,
        fully,
        witness_matching,
        witness_subgroup,
        aut_order: aut.order(),
        player_image_order: image.order(),
        stabiliser_order: aut.stabiliser_n().order(),
        certificate,
    }
}

/// Outcome of testing "a subgroup of `Aut(Γ)` isomorphic to `S_N` with
/// trivial player stabiliser forces n-transitive standard symmetry".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropositionCheck {
    pub hypothesis: bool,
    pub conclusion: bool,
    pub section: Option<BijectionGroup>,
}

impl PropositionCheck {
    pub fn holds(&self) -> bool {
        !self.hypothesis || self.conclusion
    }
}

/// Whether the implication held on `game`.
pub fn check_subgroup_proposition(game: &Game) -> bool {
    subgroup_proposition(game).holds()
}

pub fn subgroup_proposition(game: &Game) -> PropositionCheck {
    let aut = automorphism_group(game);
    let section = symmetric_section(&aut);
    let report = classify_with(game, &aut);
    PropositionCheck {
        hypothesis: section.is_some(),
        conclusion: report.n_transitive() && report.standard(),
        section,
    }
}

/// Looks for a subgroup `G ≤ Aut(Γ)` whose player image is `S_N` and whose
/// player stabiliser is trivial, i.e. `|G| = n!`. Such a group is generated
/// by its unique elements over `(1 2)` and `(1 2 .. n)`, so trying every
/// pair of lifts of those two permutations is exhaustive.
pub fn symmetric_section(aut: &BijectionGroup) -> Option<BijectionGroup> {
    let n = aut.shape().players();
    if !aut.player_image().is_n_transitive() {
        return None;
    }
    let swap = Permutation::from_cycles(n, &[&[1, 2]]).expect("n >= 2");
    let cycle_points: Vec<usize> = (1..=n).collect();
    let cycle = Permutation::from_cycles(n, &[&cycle_points]).expect("n >= 2");
    let lifts = |p: &Permutation| -> Vec<&GameBijection> {
        aut.elements()
            .iter()
            .filter(|g| g.player_map() == p)
            .collect()
    };
    let target = factorial(n);
    let swaps = lifts(&swap);
    let cycles = if n == 2 { vec![] } else { lifts(&cycle) };
    for a in &swaps {
        let options: Vec<Vec<GameBijection>> = if cycles.is_empty() {
            vec![vec![(*a).clone()]]
        } else {
            cycles
                .iter()
                .map(|b| vec![(*a).clone(), (*b).clone()])
                .collect()
        };
        for gens in options {
            if let Some(group) = bounded_closure(aut, &gens, target) {
                if group.order() == target {
                    return Some(group);
                }
            }
        }
    }
    None
}

/// Closure of `gens`, abandoned once it exceeds `limit` elements.
fn bounded_closure(
    aut: &BijectionGroup,
    gens: &[GameBijection],
    limit: usize,
) -> Option<BijectionGroup> {
    let identity = GameBijection::identity(aut.shape().clone());
    let mut elements = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.after(&x);
            if elements.insert(y.clone()) {
                if elements.len() > limit {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    BijectionGroup::closure(aut.shape().clone(), gens).ok()
}
