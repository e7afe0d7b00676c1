//! Worked examples bundled with the library: numeric games and generator sets
//! for the small parameterised families.

use crate::document::{game_from_json, generators_from_json};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::param::GeneratorSet;

macro_rules! bundled {
    ($dir:literal, $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $dir, "/", $name, ".json")))),*]
    };
}

const GAMES: &[(&str, &str)] = bundled!(
    "games",
    "example_2_1",
    "example_3_1",
    "example_3_2",
    "example_3_3",
    "example_3_6",
    "example_3_6_relabelled",
    "example_4_2_gamma1",
    "example_4_2_gamma2",
    "example_5_11",
    "matching_pennies",
);

const TWO_PLAYER: &[(&str, &str)] =
    bundled!("generators/two_player", "G_11", "G_21", "G_22", "G_31");

const THREE_PLAYER: &[(&str, &str)] = bundled!(
    "generators/three_player",
    "G_11",
    "G_21",
    "G_22",
    "G_23",
    "G_31",
    "G_32",
    "G_41",
);

const THREE_PLAYER_VARIANTS: &[(&str, &str)] = bundled!(
    "generators/three_player_variants",
    "G_32_21_23",
    "G_32_22_23"
);

const EXAMPLES: &[(&str, &str)] = bundled!(
    "generators/examples",
    "example_5_5",
    "example_5_6",
    "example_5_9a",
    "example_5_9b",
    "example_5_10",
    "example_5_11",
    "one_orbit",
);

pub fn game_names() -> impl Iterator<Item = &'static str> {
    GAMES.iter().map(|(name, _)| *name)
}

pub fn game(name: &str) -> Result<Game> {
    let (_, text) = GAMES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
    game_from_json(text)
}

pub fn family_names() -> [&'static str; 3] {
    ["two_player", "three_player", "three_player_variants"]
}

/// A named family of generator sets, in listing order. `two_player_2s` and
/// `three_player_2s` are accepted as aliases, and a single example name
/// yields a one-element family.
pub fn family(name: &str) -> Result<Vec<(String, GeneratorSet)>> {
    let table = match name {
        "two_player" | "two_player_2s" => TWO_PLAYER,
        "three_player" | "three_player_2s" => THREE_PLAYER,
        "three_player_variants" => THREE_PLAYER_VARIANTS,
        _ if EXAMPLES.iter().any(|(n, _)| *n == name) => {
            return Ok(vec![(name.to_string(), generator_set(name)?)]);
        }
        _ => return Err(Error::UnknownFamily(name.to_string())),
    };
    table
        .iter()
        .map(|(n, text)| Ok((n.to_string(), generators_from_json(text)?)))
        .collect()
}

pub fn example_names() -> impl Iterator<Item = &'static str> {
    EXAMPLES.iter().map(|(name, _)| *name)
}

/// One generator set, looked up as `example_5_5` or as `family/G_xy`.
pub fn generator_set(name: &str) -> Result<GeneratorSet> {
    if let Some((fam, member)) = name.split_once('/') {
        return family(fam)?
            .into_iter()
            .find(|(n, _)| n == member)
            .map(|(_, set)| set)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()));
    }
    let (_, text) = EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
    generators_from_json(text)
}
