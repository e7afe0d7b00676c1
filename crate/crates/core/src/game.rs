//! Finite normal-form games with exact rational payoffs.
//!
//! Profiles are indexed in mixed radix with player 1 as the most significant
//! digit, so iterating indices in order walks the payoff tables the usual way:
//! one matrix per choice of the leading players, rows for player `n - 1`,
//! columns for player `n`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An exact payoff. Always stored in lowest terms, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Payoff(BigRational);

impl Payoff {
    pub fn new(value: BigRational) -> Self {
        Payoff(value)
    }

    pub fn from_integer(value: i64) -> Self {
        Payoff(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Payoff(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Self {
        Payoff(BigRational::zero())
    }

    pub fn one() -> Self {
        Payoff(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl From<i64> for Payoff {
    fn from(value: i64) -> Self {
        Payoff::from_integer(value)
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Payoff {
    type Err = Error;

    /// Accepts integers, fractions `p/q`, and decimals with an optional
    /// exponent (`-1.25`, `3e2`).
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Parse(format!("not a number: `{text}`"));
        if text.is_empty() {
            return Err(bad());
        }
        if let Some((numer, denom)) = text.split_once('/') {
            let numer: BigInt = numer.trim().parse().map_err(|_| bad())?;
            let denom: BigInt = denom.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{text}`")));
            }
            return Ok(Payoff(BigRational::new(numer, denom)));
        }

        let (mantissa, exponent) = match text.find(['e', 'E']) {
            Some(pos) => {
                let exp: i64 = text[pos + 1..].parse().map_err(|_| bad())?;
                (&text[..pos], exp)
            }
            None => (text, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let all_digits = format!("{int_part}{frac_part}");
        let mut numer: BigInt = all_digits.parse().map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let scale = exponent - frac_part.len() as i64;
        let ten = BigInt::from(10u8);
        let value = if scale >= 0 {
            BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Payoff(value))
    }
}

/// A strategy profile: one strategy index per player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    pub fn new(choices: Vec<usize>) -> Self {
        Profile(choices)
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for Profile {
    type Output = usize;

    fn index(&self, player: usize) -> &usize {
        &self.0[player]
    }
}

/// Players and their strategy labels. Players are indexed from 0 in the API
/// and shown from 1 in every textual form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    labels: Vec<Vec<String>>,
    strides: Vec<usize>,
}

impl Shape {
    pub fn new(labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::invalid(
                "players",
                format!("a game needs at least 2 players, got {}", labels.len()),
            ));
        }
        for (i, player) in labels.iter().enumerate() {
            if player.is_empty() {
                return Err(Error::invalid(
                    format!("strategies[{i}]"),
                    "player has no strategies",
                ));
            }
            let distinct: BTreeSet<&String> = player.iter().collect();
            if distinct.len() != player.len() {
                return Err(Error::invalid(
                    format!("strategies[{i}]"),
                    "strategy labels must be distinct within a player",
                ));
            }
        }
        let mut strides = vec![1; labels.len()];
        for i in (0..labels.len() - 1).rev() {
            strides[i] = strides[i + 1] * labels[i + 1].len();
        }
        Ok(Shape { labels, strides })
    }

    /// Convenience constructor from string slices.
    pub fn from_labels<S: AsRef<str>>(labels: &[&[S]]) -> Result<Self> {
        Shape::new(
            labels
                .iter()
                .map(|player| player.iter().map(|l| l.as_ref().to_string()).collect())
                .collect(),
        )
    }

    /// `n` players sharing the labels `a, b, c, ...`.
    pub fn uniform(players: usize, strategies: usize) -> Result<Self> {
        let labels: Vec<String> = (0..strategies).map(default_label).collect();
        Shape::new(vec![labels; players])
    }

    /// `n` players with consecutive disjoint labels: player 1 gets `a, b`,
    /// player 2 gets `c, d`, and so on.
    pub fn disjoint(players: usize, strategies: usize) -> Result<Self> {
        Shape::new(
            (0..players)
                .map(|i| {
                    (0..strategies)
                        .map(|k| default_label(i * strategies + k))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn players(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn strategy_count(&self, player: usize) -> usize {
        self.labels[player].len()
    }

    pub fn strategy_counts(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    /// `Some(m)` when every player has exactly `m` strategies.
    pub fn uniform_strategy_count(&self) -> Option<usize> {
        let m = self.labels[0].len();
        self.labels.iter().all(|l| l.len() == m).then_some(m)
    }

    pub fn shares_labels(&self) -> bool {
        self.labels.iter().all(|l| *l == self.labels[0])
    }

    pub fn profile_count(&self) -> usize {
        self.strides[0] * self.labels[0].len()
    }

    pub fn cell_count(&self) -> usize {
        self.profile_count() * self.players()
    }

    pub fn label(&self, player: usize, strategy: usize) -> &str {
        &self.labels[player][strategy]
    }

    pub fn strategy_index(&self, player: usize, label: &str) -> Option<usize> {
        self.labels[player].iter().position(|l| l == label)
    }

    pub fn check_profile(&self, profile: &Profile) -> Result<()> {
        if profile.len() != self.players() {
            return Err(Error::InvalidProfile(format!(
                "expected {} choices, got {}",
                self.players(),
                profile.len()
            )));
        }
        for (i, &choice) in profile.choices().iter().enumerate() {
            if choice >= self.labels[i].len() {
                return Err(Error::InvalidProfile(format!(
                    "player {} has no strategy {choice}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn profile_index(&self, profile: &Profile) -> Result<usize> {
        self.check_profile(profile)?;
        Ok(self.index_unchecked(profile.choices()))
    }

    pub(crate) fn index_unchecked(&self, choices: &[usize]) -> usize {
        choices.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn profile_of_index(&self, index: usize) -> Result<Profile> {
        if index >= self.profile_count() {
            return Err(Error::InvalidProfile(format!(
                "index {index} out of range 0..{}",
                self.profile_count()
            )));
        }
        let mut choices = vec![0; self.players()];
        self.digits_into(index, &mut choices);
        Ok(Profile(choices))
    }

    pub(crate) fn digits_into(&self, index: usize, out: &mut [usize]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (index / self.strides[i]) % self.labels[i].len();
        }
    }

    /// Index of the profile that differs from `index` only in `player`'s choice.
    pub(crate) fn with_choice(&self, index: usize, player: usize, choice: usize) -> usize {
        let current = (index / self.strides[player]) % self.labels[player].len();
        index - current * self.strides[player] + choice * self.strides[player]
    }

    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.profile_count()).map(move |k| {
            let mut choices = vec![0; self.players()];
            self.digits_into(k, &mut choices);
            Profile(choices)
        })
    }

    pub fn format_profile(&self, profile: &Profile) -> String {
        let parts: Vec<&str> = profile
            .choices()
            .iter()
            .enumerate()
            .map(|(i, &c)| self.label(i, c))
            .collect();
        format!("({})", parts.join(","))
    }

    /// Parses `(a,b,c)` against this shape's labels.
    pub fn parse_profile(&self, text: &str) -> Result<Profile> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("profile must be parenthesised: `{text}`")))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != self.players() {
            return Err(Error::InvalidProfile(format!(
                "`{text}` has {} entries, expected {}",
                parts.len(),
                self.players()
            )));
        }
        let choices = parts
            .iter()
            .enumerate()
            .map(|(i, label)| {
                self.strategy_index(i, label).ok_or_else(|| {
                    Error::InvalidProfile(format!("player {} has no strategy `{label}`", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Profile(choices))
    }
}

/// Labels `a`..`z`, then `s26`, `s27`, ...
pub(crate) fn default_label(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("s{k}")
    }
}

/// A finite normal-form game. Payoffs are held densely, profile-major.
#[derive(Clone, Debug)]
pub struct Game {
    shape: Arc<Shape>,
    payoffs: Vec<Payoff>,
    // Dense rank of each payoff among the game's distinct values; equal
    // ranks iff equal payoffs, and rank order matches payoff order.
    ranks: Vec<u32>,
}

impl PartialEq for Game {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.payoffs == other.payoffs
    }
}

impl Eq for Game {}

impl Game {
    /// Builds a game from one payoff vector per profile, in profile-index order.
    pub fn new(shape: impl Into<Arc<Shape>>, payoffs: Vec<Vec<Payoff>>) -> Result<Self> {
        let shape = shape.into();
        if payoffs.len() != shape.profile_count() {
            return Err(Error::invalid(
                "payoffs",
                format!(
                    "expected {} payoff rows, got {}",
                    shape.profile_count(),
                    payoffs.len()
                ),
            ));
        }
        let n = shape.players();
        let mut flat = Vec::with_capacity(shape.cell_count());
        for (k, row) in payoffs.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(
                    format!("payoffs[{k}]"),
                    format!("expected {n} payoffs, got {}", row.len()),
                ));
            }
            flat.extend(row);
        }
        Ok(Game::from_flat(shape, flat))
    }

    /// Builds a game by evaluating `f(profile_index, player)` on every cell.
    pub fn from_fn(
        shape: impl Into<Arc<Shape>>,
        mut f: impl FnMut(usize, usize) -> Payoff,
    ) -> Self {
        let shape = shape.into();
        let n = shape.players();
        let flat = (0..shape.cell_count()).map(|c| f(c / n, c % n)).collect();
        Game::from_flat(shape, flat)
    }

    /// Convenience constructor from integer payoff rows.
    pub fn from_integers(shape: impl Into<Arc<Shape>>, payoffs: &[&[i64]]) -> Result<Self> {
        Game::new(
            shape,
            payoffs
                .iter()
                .map(|row| row.iter().map(|&v| Payoff::from(v)).collect())
                .collect(),
        )
    }

    fn from_flat(shape: Arc<Shape>, payoffs: Vec<Payoff>) -> Self {
        let distinct: Vec<&Payoff> = payoffs
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ranks = payoffs
            .iter()
            .map(|p| distinct.binary_search(&p).expect("value present") as u32)
            .collect();
        Game {
            shape,
            payoffs,
            ranks,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn shape_arc(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn players(&self) -> usize {
        self.shape.players()
    }

    pub fn profile_index(&self, profile: &Profile) -> Result<usize> {
        self.shape.profile_index(profile)
    }

    pub fn profile_of_index(&self, index: usize) -> Result<Profile> {
        self.shape.profile_of_index(index)
    }

    /// `u_player(profile)`, with `player` counted from 0.
    pub fn payoff(&self, player: usize, profile: &Profile) -> Result<&Payoff> {
        if player >= self.players() {
            return Err(Error::InvalidPlayer {
                player,
                players: self.players(),
            });
        }
        let k = self.shape.profile_index(profile)?;
        Ok(self.payoff_at(k, player))
    }

    pub fn payoff_at(&self, index: usize, player: usize) -> &Payoff {
        &self.payoffs[index * self.players() + player]
    }

    pub fn payoff_row(&self, index: usize) -> &[Payoff] {
        let n = self.players();
        &self.payoffs[index * n..(index + 1) * n]
    }

    pub(crate) fn rank_at(&self, index: usize, player: usize) -> u32 {
        self.ranks[index * self.players() + player]
    }

    pub(crate) fn rank_row(&self, index: usize) -> &[u32] {
        let n = self.players();
        &self.ranks[index * n..(index + 1) * n]
    }

    pub fn payoffs(&self) -> &[Payoff] {
        &self.payoffs
    }

    /// Every profile where no player gains from a unilateral deviation,
    /// in profile-index order.
    pub fn pure_nash_equilibria(&self) -> Vec<Profile> {
        let shape = &self.shape;
        (0..shape.profile_count())
            .filter(|&k| {
                let mut choices = vec![0; shape.players()];
                shape.digits_into(k, &mut choices);
                (0..shape.players()).all(|i| {
                    let own = self.rank_at(k, i);
                    (0..shape.strategy_count(i))
                        .filter(|&alt| alt != choices[i])
                        .all(|alt| self.rank_at(shape.with_choice(k, i, alt), i) <= own)
                })
            })
            .map(|k| shape.profile_of_index(k).expect("index in range"))
            .collect()
    }

    /// A copy with one payoff replaced.
    pub fn with_payoff(&self, index: usize, player: usize, value: Payoff) -> Game {
        let mut flat = self.payoffs.clone();
        flat[index * self.players() + player] = value;
        Game::from_flat(self.shape.clone(), flat)
    }

    /// All players' payoffs are equal at this profile.
    pub fn is_equal_payoff_profile(&self, index: usize) -> bool {
        let row = self.rank_row(index);
        row.iter().all(|r| *r == row[0])
    }
}

/// The game paying `value` to everyone everywhere.
pub fn constant_game(shape: impl Into<Arc<Shape>>, value: i64) -> Game {
    Game::from_fn(shape, |_, _| Payoff::from(value))
}
