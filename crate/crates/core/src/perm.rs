//! Permutations of players, their left action on profiles, and explicit
//! permutation groups.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::game::Profile;

/// A permutation of `{0, .., n-1}` stored by image: `self.0[i]` is `π(i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation from 1-based cycles, e.g. `&[&[1, 2, 3]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &point) in cycle.iter().enumerate() {
                if point == 0 || point > degree {
                    return Err(Error::Parse(format!("point {point} outside 1..={degree}")));
                }
                if used[point - 1] {
                    return Err(Error::Parse(format!("point {point} repeated in cycles")));
                }
                used[point - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[point - 1] = next - 1;
            }
        }
        Permutation::from_images(images)
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)`, `(1,2)`, `(12)` or `()`.
    /// Single-digit points may be run together when the degree is below 10.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let text = text.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            let inner_start = rest_trim
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected `(` in `{text}`")))?;
            let close = inner_start
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in `{text}`")))?;
            let body = inner_start[..close].trim();
            rest = inner_start[close + 1..].trim_start();
            // allow `∘` or `*` between cycles
            rest = rest.trim_start_matches(['∘', '*']).trim_start();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .collect();
            let points: Vec<usize> = if tokens.len() == 1 && degree < 10 && tokens[0].len() > 1 {
                tokens[0]
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad point `{c}` in `{text}`")))
                    })
                    .collect::<Result<_>>()?
            } else {
                tokens
                    .iter()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad point `{t}` in `{text}`")))
                    })
                    .collect::<Result<_>>()?
            };
            cycles.push(points);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::Arity {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.after(other))
    }

    pub(crate) fn after(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// Left action on profiles: the result `r` has `r[π(i)] = s[i]`.
    pub fn act_on_profile(&self, profile: &Profile) -> Result<Profile> {
        if profile.len() != self.degree() {
            return Err(Error::Arity {
                expected: self.degree(),
                found: profile.len(),
            });
        }
        Ok(Profile::new(self.act_on_slice(profile.choices())))
    }

    pub(crate) fn act_on_slice(&self, choices: &[usize]) -> Vec<usize> {
        let mut out = vec![0; choices.len()];
        for (i, &c) in choices.iter().enumerate() {
            out[self.0[i]] = c;
        }
        out
    }

    /// Disjoint cycles of length at least 2, each starting at its smallest
    /// point, ordered by that point. Points are 0-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut cycles = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.0[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.0[next];
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    pub fn is_transposition(&self) -> bool {
        let cycles = self.cycles();
        cycles.len() == 1 && cycles[0].len() == 2
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based points, e.g. `(1 2 3)(4 5)`; the identity is `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "({})", cycle.iter().map(|p| p + 1).join(" "))?;
        }
        Ok(())
    }
}

/// Every permutation of `0..n` in lexicographic order of image sequences.
pub fn symmetric_group_elements(n: usize) -> impl Iterator<Item = Permutation> {
    (0..n).permutations(n).map(Permutation)
}

/// All transpositions of `0..n`.
pub fn transpositions(n: usize) -> Vec<Permutation> {
    (0..n)
        .tuple_combinations()
        .map(|(i, j)| {
            let mut images: Vec<usize> = (0..n).collect();
            images.swap(i, j);
            Permutation(images)
        })
        .collect()
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Breadth-first saturation: every product of generators reachable from
/// `identity`. In a finite group this is the generated subgroup.
pub(crate) fn saturate<T, F>(identity: T, generators: &[T], mul: F) -> BTreeSet<T>
where
    T: Ord + Clone,
    F: Fn(&T, &T) -> T,
{
    let mut elements = BTreeSet::new();
    elements.insert(identity.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = mul(g, &x);
            if elements.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    elements
}

/// An explicit group of player permutations.
/// Equality compares elements; generator lists may differ.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
}

impl PartialEq for PermutationGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermutationGroup {}

impl PermutationGroup {
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            elements: vec![Permutation::identity(degree)],
            generators: Vec::new(),
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        let generators = if degree < 2 {
            Vec::new()
        } else {
            transpositions(degree)
        };
        PermutationGroup {
            degree,
            elements: symmetric_group_elements(degree).collect(),
            generators,
        }
    }

    /// The subgroup generated by `generators`, all of which must act on `degree` points.
    pub fn closure(degree: usize, generators: &[Permutation]) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Arity {
                expected: degree,
                found: bad.degree(),
            });
        }
        let elements = saturate(Permutation::identity(degree), generators, |g, x| g.after(x));
        Ok(PermutationGroup {
            degree,
            elements: elements.into_iter().collect(),
            generators: generators.to_vec(),
        })
    }

    /// Wraps a set already known to be a group (e.g. the invariants of a game).
    /// Elements are sorted and deduplicated; no closure is taken.
    pub(crate) fn from_elements(
        degree: usize,
        elements: impl IntoIterator<Item = Permutation>,
    ) -> Self {
        let elements: Vec<Permutation> = elements
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let generators = minimal_generators(degree, &elements);
        PermutationGroup {
            degree,
            elements,
            generators,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn orbit(&self, point: usize) -> BTreeSet<usize> {
        self.elements.iter().map(|g| g.apply(point)).collect()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut orbits = Vec::new();
        for i in 0..self.degree {
            if seen[i] {
                continue;
            }
            let orbit: Vec<usize> = self.orbit(i).into_iter().collect();
            for &j in &orbit {
                seen[j] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Realises every permutation of the players.
    pub fn is_n_transitive(&self) -> bool {
        self.order() == factorial(self.degree)
    }

    pub fn stabiliser(&self, point: usize) -> PermutationGroup {
        PermutationGroup::from_elements(
            self.degree,
            self.elements
                .iter()
                .filter(|g| g.apply(point) == point)
                .cloned(),
        )
    }

    /// Identity present, closed under composition and inversion.
    pub fn satisfies_group_axioms(&self) -> bool {
        self.contains(&Permutation::identity(self.degree))
            && self.elements.iter().all(|g| self.contains(&g.inverse()))
            && self
                .elements
                .iter()
                .cartesian_product(&self.elements)
                .all(|(g, h)| self.contains(&g.after(h)))
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }
}

/// A small generating set picked greedily in element order.
pub(crate) fn minimal_generators(degree: usize, elements: &[Permutation]) -> Vec<Permutation> {
    greedy_generators(Permutation::identity(degree), elements, |a, b| a.after(b))
}

pub(crate) fn greedy_generators<T, F>(identity: T, elements: &[T], mul: F) -> Vec<T>
where
    T: Ord + Clone,
    F: Fn(&T, &T) -> T,
{
    let mut generators: Vec<T> = Vec::new();
    let mut span = BTreeSet::from([identity.clone()]);
    for g in elements {
        if span.len() >= elements.len() {
            break;
        }
        if span.contains(g) {
            continue;
        }
        generators.push(g.clone());
        span = saturate(identity.clone(), &generators, &mul);
    }
    generators
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn compose_and_invert() {
        let t = cyc(3, &[&[1, 2]]);
        let p = cyc(3, &[&[1, 2, 3]]);
        assert_eq!(t.compose(&p).unwrap().to_string(), "(2 3)");
        assert_eq!(p.inverse().to_string(), "(1 3 2)");
        assert_eq!(p.compose(&Permutation::identity(3)).unwrap(), p);
        assert!(matches!(
            p.compose(&Permutation::identity(4)),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn action_on_profiles() {
        let p = cyc(3, &[&[1, 2, 3]]);
        // (a,a,b) -> (b,a,a)
        let s = Profile::new(vec![0, 0, 1]);
        assert_eq!(p.act_on_profile(&s).unwrap(), Profile::new(vec![1, 0, 0]));
        // (s1,s2,s3) -> (s3,s1,s2)
        let s = Profile::new(vec![10, 20, 30]);
        assert_eq!(
            p.act_on_profile(&s).unwrap(),
            Profile::new(vec![30, 10, 20])
        );
        assert_eq!(Permutation::identity(3).act_on_profile(&s).unwrap(), s);
        assert!(p.act_on_profile(&Profile::new(vec![0, 0])).is_err());
    }

    #[test]
    fn parse_and_display() {
        for text in ["(1 2 3)(4 5)", "(1,2,3)(4,5)", "(123)(45)", "(123)∘(45)"] {
            assert_eq!(
                Permutation::parse(text, 5).unwrap().to_string(),
                "(1 2 3)(4 5)"
            );
        }
        assert_eq!(
            Permutation::parse("()", 4).unwrap(),
            Permutation::identity(4)
        );
        assert_eq!(Permutation::parse("(3 1)", 3).unwrap().to_string(), "(1 3)");
        assert!(Permutation::parse("(1 4)", 3).is_err());
        assert!(Permutation::parse("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse("1 2", 3).is_err());
    }

    #[test]
    fn closures_from_the_examples() {
        let s3 =
            PermutationGroup::closure(3, &[cyc(3, &[&[1, 2]]), cyc(3, &[&[1, 2, 3]])]).unwrap();
        assert_eq!(s3.order(), 6);

        let c3 = PermutationGroup::closure(3, &[cyc(3, &[&[1, 2, 3]])]).unwrap();
        let shown: Vec<String> = c3.elements().iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["()", "(1 2 3)", "(1 3 2)"]);
        assert!(c3.is_transitive());

        let trivial = PermutationGroup::closure(3, &[]).unwrap();
        assert_eq!(trivial.order(), 1);
        assert_eq!(trivial.orbits(), vec![vec![0], vec![1], vec![2]]);

        let klein = PermutationGroup::closure(
            4,
            &[cyc(4, &[&[1, 2], &[3, 4]]), cyc(4, &[&[1, 3], &[2, 4]])],
        )
        .unwrap();
        assert_eq!(klein.order(), 4);
        assert!(klein.contains(&cyc(4, &[&[1, 4], &[2, 3]])));
        assert!(klein.is_transitive());
        assert!(!klein.is_n_transitive());
        assert_eq!(klein.orbits(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn minimally_transitive_degree_six_group() {
        let g = PermutationGroup::closure(
            6,
            &[
                cyc(6, &[&[1, 4], &[2, 5]]),
                cyc(6, &[&[1, 3, 5], &[2, 4, 6]]),
            ],
        )
        .unwrap();
        assert_eq!(g.order(), 12);
        assert!(g.is_transitive());
        // no regular subgroup: every transitive subgroup of an order-12 group
        // on 6 points with a regular subgroup would have an order-6 transitive
        // subgroup; check all subgroups generated by at most two elements
        let elements = g.elements();
        let mut found_regular = false;
        for a in elements {
            for b in elements {
                let h = PermutationGroup::closure(6, &[a.clone(), b.clone()]).unwrap();
                if h.order() == 6 && h.is_transitive() {
                    found_regular = true;
                }
            }
        }
        assert!(!found_regular);
    }

    #[test]
    fn trivial_group_is_not_transitive() {
        assert!(!PermutationGroup::trivial(2).is_transitive());
    }

    #[test]
    fn stabiliser_of_s3() {
        let s3 = PermutationGroup::symmetric(3);
        let stab = s3.stabiliser(0);
        assert_eq!(stab.order(), 2);
        assert!(stab.contains(&cyc(3, &[&[2, 3]])));
    }

    #[test]
    fn transpositions_generate_symmetric_groups() {
        for n in 1..=5 {
            let g = PermutationGroup::closure(n, &transpositions(n)).unwrap();
            assert_eq!(g.order(), factorial(n));
            assert!(g.is_n_transitive());
            assert!(g.satisfies_group_axioms());
        }
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(Permutation)
    }

    fn perms_and_profile() -> impl Strategy<Value = (Permutation, Permutation, Vec<usize>)> {
        (2usize..=6).prop_flat_map(|n| {
            (
                perm_strategy(n),
                perm_strategy(n),
                proptest::collection::vec(0usize..4, n),
            )
        })
    }

    proptest! {
        #[test]
        fn left_action_law((tau, pi, s) in perms_and_profile()) {
            let s = Profile::new(s);
            let lhs = tau.compose(&pi).unwrap().act_on_profile(&s).unwrap();
            let rhs = tau.act_on_profile(&pi.act_on_profile(&s).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_action_reads_through_pi((_tau, pi, s) in perms_and_profile()) {
            let acted = pi.inverse().act_on_profile(&Profile::new(s.clone())).unwrap();
            let expected: Vec<usize> = (0..s.len()).map(|i| s[pi.apply(i)]).collect();
            prop_assert_eq!(acted.choices(), expected.as_slice());
        }

        #[test]
        fn closure_is_a_group(gens in proptest::collection::vec(perm_strategy(4), 0..3)) {
            let g = PermutationGroup::closure(4, &gens).unwrap();
            prop_assert!(g.satisfies_group_axioms());
            for gen in &gens {
                prop_assert!(g.contains(gen));
            }
        }

        #[test]
        fn display_parse_round_trip(p in perm_strategy(6)) {
            prop_assert_eq!(Permutation::parse(&p.to_string(), 6).unwrap(), p);
        }
    }
}
