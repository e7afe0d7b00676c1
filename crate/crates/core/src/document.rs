//! JSON documents for games and generator sets.
//!
//! A game document looks like
//! `{"payoffs":[[1,1,1],[2,2,3],...],"players":3,"strategies":[["a","b"],...]}`
//! with one payoff row per profile in index order. Payoffs may be JSON
//! numbers, decimal strings or fraction strings such as `"-3/4"`. The
//! canonical form written back has sorted keys, no whitespace, integers as
//! numbers and other rationals as fraction strings.

use std::str::FromStr;
use std::sync::Arc;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::game::{Game, Payoff, Shape};
use crate::morphism::GameBijection;
use crate::param::GeneratorSet;

fn parse_value(text: &str) -> Result<Map<String, Value>> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Error::malformed("document", "expected a JSON object")),
        Err(e) => Err(Error::malformed("document", e.to_string())),
    }
}

fn parse_strategies(doc: &Map<String, Value>) -> Result<Shape> {
    let raw = doc
        .get("strategies")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::malformed("strategies", "expected an array of label arrays"))?;
    let labels = raw
        .iter()
        .enumerate()
        .map(|(i, player)| {
            let field = format!("strategies[{i}]");
            player
                .as_array()
                .ok_or_else(|| Error::malformed(&field, "expected an array of labels"))?
                .iter()
                .map(|l| {
                    l.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::malformed(&field, "labels must be strings"))
                })
                .collect::<Result<Vec<String>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(players) = doc.get("players") {
        let n = players
            .as_u64()
            .ok_or_else(|| Error::malformed("players", "expected a non-negative integer"))?;
        if n as usize != labels.len() {
            return Err(Error::invalid(
                "players",
                format!("{n} players but {} strategy lists", labels.len()),
            ));
        }
    }
    Shape::new(labels)
}

fn parse_payoff(value: &Value, field: &str) -> Result<Payoff> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(Error::malformed(field, "payoff must be a number or string")),
    };
    Payoff::from_str(&text).map_err(|e| Error::malformed(field, e.to_string()))
}

pub fn game_from_json(text: &str) -> Result<Game> {
    let doc = parse_value(text)?;
    let shape = parse_strategies(&doc)?;
    let rows = doc
        .get("payoffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::malformed("payoffs", "expected an array of payoff rows"))?;
    let payoffs = rows
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let field = format!("payoffs[{k}]");
            row.as_array()
                .ok_or_else(|| Error::malformed(&field, "expected an array"))?
                .iter()
                .map(|v| parse_payoff(v, &field))
                .collect::<Result<Vec<Payoff>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Game::new(shape, payoffs)
}

fn payoff_value(p: &Payoff) -> Value {
    if p.is_integer() {
        Value::Number(Number::from_str(&p.to_string()).expect("integers are JSON numbers"))
    } else {
        Value::String(p.to_string())
    }
}

fn strategies_value(shape: &Shape) -> Value {
    Value::Array(
        shape
            .labels()
            .iter()
            .map(|player| Value::Array(player.iter().cloned().map(Value::String).collect()))
            .collect(),
    )
}

pub fn game_to_value(game: &Game) -> Value {
    let shape = game.shape();
    let payoffs = (0..shape.profile_count())
        .map(|k| Value::Array(game.payoff_row(k).iter().map(payoff_value).collect()))
        .collect();
    let mut doc = Map::new();
    doc.insert("payoffs".into(), Value::Array(payoffs));
    doc.insert("players".into(), Value::from(shape.players()));
    doc.insert("strategies".into(), strategies_value(shape));
    Value::Object(doc)
}

/// The canonical single-line form.
pub fn game_to_json(game: &Game) -> String {
    game_to_value(game).to_string()
}

/// Reads `{"strategies":[...],"generators":["(1 2); 1:{a->c,b->d}; ...", ...]}`.
pub fn generators_from_json(text: &str) -> Result<GeneratorSet> {
    let doc = parse_value(text)?;
    let shape = Arc::new(parse_strategies(&doc)?);
    let gens = doc
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::malformed("generators", "expected an array of strings"))?
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let field = format!("generators[{k}]");
            let text = g
                .as_str()
                .ok_or_else(|| Error::malformed(&field, "expected a string"))?;
            GameBijection::parse(text, shape.clone(), shape.clone())
                .map_err(|e| Error::malformed(&field, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(shape, gens)
}

pub fn generators_to_json(set: &GeneratorSet) -> String {
    let mut doc = Map::new();
    doc.insert(
        "generators".into(),
        Value::Array(
            set.generators()
                .iter()
                .map(|g| Value::String(g.to_string()))
                .collect(),
        ),
    );
    doc.insert("strategies".into(), strategies_value(set.shape()));
    Value::Object(doc).to_string()
}
